// Command-line front end: state construction and factorization checks,
// inseparability scans, detection emulation with dB fitting, mode rendering
// and Schmidt analysis.
//
// Exit codes: 0 success / claim verified, 1 claim failed, 2 argument or
// input parse failure, 3 output write failure, 4 unreachable fit target.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvbeam/detection.hpp"
#include "cvbeam/entanglement.hpp"
#include "cvbeam/json_io.hpp"
#include "cvbeam/states.hpp"
#include "cvbeam/vector_modes.hpp"

namespace {

using cvbeam::Complex;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitWrite = 3;
constexpr int kExitUnreachable = 4;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Complex parse_complex_arg(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char sep = 0;
  if (!(in >> re)) {
    throw std::invalid_argument("expected a number or re,im pair, got \"" +
                                text + "\"");
  }
  if (in >> sep) {
    if (sep != ',' || !(in >> im)) {
      throw std::invalid_argument("expected re,im with a comma, got \"" +
                                  text + "\"");
    }
  }
  std::string rest;
  if (in >> rest) {
    throw std::invalid_argument("trailing characters in complex value \"" +
                                text + "\"");
  }
  return {re, im};
}

Complex complex_from_config(const json& j, const std::string& key) {
  if (j.is_string()) return parse_complex_arg(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_number()) return {j.get<double>(), 0.0};
  throw std::invalid_argument(key + ": expected \"re,im\", [re, im] or a number");
}

// Values from --config override the corresponding flags.
struct ConfigOverlay {
  json data = json::object();

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::invalid_argument("cannot open config file \"" + path + "\"");
    }
    data = json::parse(in);
    if (!data.is_object()) {
      throw std::invalid_argument("config file must hold a JSON object");
    }
  }

  void apply(const std::string& key, std::string& value) const {
    if (data.contains(key)) value = data.at(key).get<std::string>();
  }
  void apply(const std::string& key, double& value) const {
    if (data.contains(key)) value = data.at(key).get<double>();
  }
  void apply(const std::string& key, int& value) const {
    if (data.contains(key)) value = data.at(key).get<int>();
  }
  void apply(const std::string& key, bool& value) const {
    if (data.contains(key)) value = data.at(key).get<bool>();
  }
  void apply(const std::string& key, Complex& value) const {
    if (data.contains(key)) value = complex_from_config(data.at(key), key);
  }
};

int emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open \"" << out_path << "\" for writing\n";
    return kExitWrite;
  }
  out << text;
  if (!out) {
    std::cerr << "failed while writing \"" << out_path << "\"\n";
    return kExitWrite;
  }
  return kExitOk;
}

struct GlobalOptions {
  std::string out;
  std::string format = "json";
  double tol = 1e-10;
  bool verbose = false;
  std::string config_path;
};

struct FactorizeParams {
  std::string kind = "azimuthal";
  std::string alpha = "0,0";
  std::string zeta = "0,0";
};

int run_factorize(const FactorizeParams& p, GlobalOptions& g,
                  const ConfigOverlay& cfg) {
  std::string kind = p.kind;
  Complex alpha = parse_complex_arg(p.alpha);
  Complex zeta = parse_complex_arg(p.zeta);
  cfg.apply("kind", kind);
  cfg.apply("alpha", alpha);
  cfg.apply("zeta", zeta);
  cfg.apply("tol", g.tol);
  const double dev =
      cvbeam::verify_factorization(cvbeam::parse_mode_kind(kind), alpha, zeta);
  if (g.verbose) {
    std::cerr << "kind=" << kind << " alpha=" << fmt_g(alpha.real()) << ","
              << fmt_g(alpha.imag()) << " zeta=" << fmt_g(zeta.real()) << ","
              << fmt_g(zeta.imag()) << " tol=" << fmt_g(g.tol) << "\n";
  }
  const int rc = emit_text(fmt_g(dev) + "\n", g.out);
  if (rc != kExitOk) return rc;
  return dev < g.tol ? kExitOk : kExitClaimFailed;
}

struct DuanParams {
  std::string kind = "azimuthal";
  double s_min = 0.0;
  double s_max = 2.0;
  int steps = 21;
  std::string pairs = "all";
  int mu = 2;
  int nu = 3;
  double lo = 1e4;
};

std::vector<cvbeam::MeasurementCombination> select_pairs(
    const std::string& pairs, int mu, int nu) {
  using cvbeam::Dof;
  std::vector<cvbeam::MeasurementCombination> combs;
  const bool all = pairs == "all";
  if (all || pairs == "pol") {
    combs.push_back(cvbeam::make_combination(mu, nu, Dof::Pol, Dof::Pol));
  }
  if (all || pairs == "spa") {
    combs.push_back(cvbeam::make_combination(mu, nu, Dof::Spa, Dof::Spa));
  }
  if (all || pairs == "hybrid") {
    combs.push_back(cvbeam::make_combination(mu, nu, Dof::Spa, Dof::Pol));
  }
  if (combs.empty()) {
    throw std::invalid_argument("pairs must be pol, spa, hybrid or all");
  }
  return combs;
}

int run_duan(const DuanParams& p, GlobalOptions& g, const ConfigOverlay& cfg) {
  std::string kind_text = p.kind, pairs = p.pairs;
  double s_min = p.s_min, s_max = p.s_max, lo = p.lo;
  int steps = p.steps, mu = p.mu, nu = p.nu;
  cfg.apply("kind", kind_text);
  cfg.apply("pairs", pairs);
  cfg.apply("s_min", s_min);
  cfg.apply("s_max", s_max);
  cfg.apply("steps", steps);
  cfg.apply("mu", mu);
  cfg.apply("nu", nu);
  cfg.apply("lo", lo);
  if (s_min < 0.0 || steps < 1 || s_max < s_min) {
    throw std::invalid_argument("need 0 <= s_min <= s_max and steps >= 1");
  }
  const cvbeam::ModeKind kind = cvbeam::parse_mode_kind(kind_text);
  const auto combs = select_pairs(pairs, mu, nu);

  std::vector<double> s_values;
  for (int i = 0; i < steps; ++i) {
    s_values.push_back(steps == 1 ? s_min
                                  : s_min + (s_max - s_min) * i / (steps - 1));
  }
  const auto reports =
      cvbeam::scan(kind, s_values, combs, cvbeam::LoModel::linearized(lo));

  double max_gap = 0.0;
  for (const auto& r : reports) {
    const double eq = cvbeam::closed_form_lhs(r.s);
    max_gap = std::max(max_gap, std::abs(r.lhs - eq) / eq);
  }

  std::string text;
  if (g.format == "csv") {
    std::ostringstream os;
    os << "s,mu,nu,dof_a,dof_b,lhs,bound,entangled,warn_asymmetric,"
          "closed_form,rel_gap\n";
    for (const auto& r : reports) {
      const double eq = cvbeam::closed_form_lhs(r.s);
      os << fmt_g(r.s) << ',' << r.combination.mu << ',' << r.combination.nu
         << ',' << cvbeam::to_string(r.combination.dof_a) << ','
         << cvbeam::to_string(r.combination.dof_b) << ',' << fmt_g(r.lhs)
         << ',' << fmt_g(r.bound) << ',' << (r.entangled ? "true" : "false")
         << ',' << (r.warn_asymmetric ? "true" : "false") << ',' << fmt_g(eq)
         << ',' << fmt_g(std::abs(r.lhs - eq) / eq) << '\n';
    }
    text = os.str();
  } else {
    json rows = json::array();
    for (const auto& r : reports) {
      json row = r;
      row["closed_form"] = cvbeam::closed_form_lhs(r.s);
      rows.push_back(std::move(row));
    }
    json doc{{"rows", std::move(rows)}, {"max_rel_gap", max_gap}};
    text = doc.dump(2) + "\n";
  }
  const int rc = emit_text(text, g.out);
  if (rc != kExitOk) return rc;
  std::cerr << "max relative gap to closed form: " << fmt_g(max_gap) << "\n";
  return max_gap < 1e-5 ? kExitOk : kExitClaimFailed;
}

struct DetectParams {
  std::string kind = "azimuthal";
  std::string alpha = "20,0";
  double s = 0.0;
  double eta = 1.0;
  std::string scheme = "direct";
  double fit_db_target = 0.0;
  bool fit_requested = false;
  std::string fit_param;
};

int run_detect(const DetectParams& p, GlobalOptions& g,
               const ConfigOverlay& cfg) {
  std::string kind = p.kind, scheme = p.scheme;
  std::string fit_param = p.fit_param;
  Complex alpha = parse_complex_arg(p.alpha);
  double s = p.s, eta = p.eta, target = p.fit_db_target;
  bool fit_requested = p.fit_requested;
  cfg.apply("kind", kind);
  cfg.apply("alpha", alpha);
  cfg.apply("s", s);
  cfg.apply("eta", eta);
  cfg.apply("scheme", scheme);
  cfg.apply("fit_db", target);
  if (cfg.data.contains("fit_db")) fit_requested = true;
  cfg.apply("fit_param", fit_param);
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }

  cvbeam::DetectionModel model;
  model.kind = cvbeam::parse_mode_kind(kind);
  model.alpha = alpha;
  model.s = s;
  model.eta = eta;
  model.scheme = cvbeam::parse_detection_scheme(scheme);

  if (!fit_requested) {
    const cvbeam::DetectionResult result = cvbeam::run_detection(model);
    const json doc = result;
    return emit_text(doc.dump(2) + "\n", g.out);
  }

  if (fit_param.empty()) {
    fit_param = model.scheme == cvbeam::DetectionScheme::Direct ? "s" : "eta";
  }
  const cvbeam::FitParameter parameter = cvbeam::parse_fit_parameter(fit_param);
  const cvbeam::FitResult fit = cvbeam::fit_db(model, parameter, target);
  json doc{{"fit_parameter", cvbeam::to_string(parameter)},
           {"target_db", target},
           {"reachable", fit.reachable},
           {"fitted_value", fit.value},
           {"achieved_db", fit.achieved_db},
           {"result", fit.result}};
  const int rc = emit_text(doc.dump(2) + "\n", g.out);
  if (rc != kExitOk) return rc;
  if (!fit.reachable) {
    std::cerr << "target " << fmt_g(target)
              << " dB unreachable; closest achievable: " << fmt_g(fit.achieved_db)
              << " dB at " << cvbeam::to_string(parameter) << " = "
              << fmt_g(fit.value) << "\n";
    return kExitUnreachable;
  }
  return kExitOk;
}

struct ModeParams {
  std::string kind = "radial";
  double waist = 1.0;
  int grid = 256;
  double extent = 3.0;
  std::string image_out = "mode.pgm";
};

int run_mode(const ModeParams& p, GlobalOptions& g, const ConfigOverlay& cfg) {
  std::string kind_text = p.kind, image_out = p.image_out;
  double waist = p.waist, extent = p.extent;
  int grid = p.grid;
  cfg.apply("kind", kind_text);
  cfg.apply("waist", waist);
  cfg.apply("grid", grid);
  cfg.apply("extent", extent);
  cfg.apply("image_out", image_out);
  const cvbeam::VectorModeCoefficients coeffs =
      cvbeam::standard_mode(cvbeam::parse_mode_kind(kind_text));
  const cvbeam::IntensityImage image =
      cvbeam::render_intensity(coeffs, grid, extent, waist);
  try {
    cvbeam::write_pgm(image, image_out);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitWrite;
  }
  const cvbeam::SchmidtDecomposition schmidt = cvbeam::schmidt_decompose(coeffs);
  json doc = schmidt;
  doc["kind"] = kind_text;
  doc["image"] = image_out;
  doc["separable"] = cvbeam::is_structurally_separable(coeffs, g.tol);
  return emit_text(doc.dump(2) + "\n", g.out);
}

struct SchmidtParams {
  std::string file;
};

int run_schmidt(const SchmidtParams& p, GlobalOptions& g,
                const ConfigOverlay& cfg) {
  std::string file = p.file;
  cfg.apply("file", file);
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot open coefficients file \"" << file << "\"\n";
    return kExitParse;
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    std::cerr << "malformed coefficients JSON: " << e.what() << "\n";
    return kExitParse;
  }
  cvbeam::SchmidtDecomposition schmidt{Eigen::Vector2d::Zero(), 0.0};
  bool separable = false;
  try {
    const cvbeam::VectorModeCoefficients coeffs = cvbeam::vector_mode_from_json(j);
    schmidt = cvbeam::schmidt_decompose(coeffs);
    separable = cvbeam::is_structurally_separable(coeffs, g.tol);
  } catch (const std::invalid_argument& e) {
    std::cerr << "malformed coefficients: " << e.what() << "\n";
    return kExitParse;
  }
  json doc = schmidt;
  doc["separable"] = separable;
  return emit_text(doc.dump(2) + "\n", g.out);
}

struct StokesParams {
  std::string kind = "azimuthal";
  std::string alpha = "2,0";
  std::string zeta = "0.5,0";
};

int run_stokes(const StokesParams& p, GlobalOptions& g,
               const ConfigOverlay& cfg) {
  std::string kind_text = p.kind;
  Complex alpha = parse_complex_arg(p.alpha);
  Complex zeta = parse_complex_arg(p.zeta);
  cfg.apply("kind", kind_text);
  cfg.apply("alpha", alpha);
  cfg.apply("zeta", zeta);
  const cvbeam::CylindricalStateSpec spec{
      cvbeam::parse_mode_kind(kind_text), alpha, zeta,
      cvbeam::Construction::Composite};
  const cvbeam::GaussianState state = cvbeam::build(spec);

  if (g.format == "csv") {
    std::ostringstream os;
    os << "mu,mean,variance\n";
    for (int mu = 0; mu <= 3; ++mu) {
      const auto obs = cvbeam::stokes_observable(cvbeam::Dof::Pol, mu, {0, 1}, 2);
      const auto stats = cvbeam::quadratic_stats(state, obs);
      os << mu << ',' << fmt_g(stats.mean) << ',' << fmt_g(stats.variance)
         << '\n';
    }
    return emit_text(os.str(), g.out);
  }
  json rows = json::array();
  for (int mu = 0; mu <= 3; ++mu) {
    const auto obs = cvbeam::stokes_observable(cvbeam::Dof::Pol, mu, {0, 1}, 2);
    const auto stats = cvbeam::quadratic_stats(state, obs);
    rows.push_back(json{{"mu", mu},
                        {"mean", stats.mean},
                        {"variance", stats.variance}});
  }
  json doc{{"spec", spec}, {"stokes", std::move(rows)}};
  return emit_text(doc.dump(2) + "\n", g.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Squeezed cylindrically polarized light: construction, inseparability "
      "scans, detection emulation and mode structure.\n"
      "Conventions: vacuum quadrature variance 1; complex flags take re,im; "
      "amplitude-squeezed bright beams use real alpha with real positive "
      "zeta. Values in --config override flags."};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", g.tol,
                 "Tolerance for factorize verdicts and separability checks");
  app.add_flag("--verbose", g.verbose, "Run metadata on stderr");
  app.add_option("--config", g.config_path,
                 "JSON config file; its values override flags");

  FactorizeParams fac;
  auto* fac_cmd = app.add_subcommand(
      "factorize", "Compare the composite and factored constructions");
  fac_cmd->fallthrough();
  fac_cmd->add_option("--kind", fac.kind, "radial or azimuthal");
  fac_cmd->add_option("--alpha", fac.alpha, "Coherent amplitude re,im");
  fac_cmd->add_option("--zeta", fac.zeta, "Squeezing parameter re,im");

  DuanParams duan;
  auto* duan_cmd = app.add_subcommand(
      "duan", "Scan the two-arm inseparability criterion over squeezing");
  duan_cmd->fallthrough();
  duan_cmd->add_option("--kind", duan.kind, "radial or azimuthal");
  duan_cmd->add_option("--s-min", duan.s_min, "Smallest squeezing value");
  duan_cmd->add_option("--s-max", duan.s_max, "Largest squeezing value");
  duan_cmd->add_option("--steps", duan.steps, "Number of scan points");
  duan_cmd->add_option("--pairs", duan.pairs,
                       "Arm DOF pairs: pol, spa, hybrid or all")
      ->check(CLI::IsMember({"pol", "spa", "hybrid", "all"}));
  duan_cmd->add_option("--mu", duan.mu, "First Stokes index");
  duan_cmd->add_option("--nu", duan.nu, "Second Stokes index");
  duan_cmd->add_option("--lo", duan.lo, "Local oscillator amplitude");

  DetectParams det;
  auto* det_cmd = app.add_subcommand(
      "detect", "Photocurrent statistics of the bright squeezed beam");
  det_cmd->fallthrough();
  det_cmd->add_option("--kind", det.kind, "radial or azimuthal");
  det_cmd->add_option("--alpha", det.alpha, "Bright carrier amplitude re,im");
  det_cmd->add_option("--s", det.s, "Real squeezing parameter");
  det_cmd->add_option("--eta", det.eta, "Transmission in [0, 1] on both arms");
  det_cmd->add_option("--scheme", det.scheme, "direct, sum or difference")
      ->check(CLI::IsMember({"direct", "sum", "difference"}));
  det_cmd
      ->add_option("--fit-db", det.fit_db_target,
                   "Fit one parameter to reach this dB level vs the QNL")
      ->trigger_on_parse()
      ->each([&det](const std::string&) { det.fit_requested = true; });
  det_cmd->add_option("--fit-param", det.fit_param,
                      "Parameter to fit: s or eta (default: s for direct, "
                      "eta otherwise)")
      ->check(CLI::IsMember({"s", "eta"}));

  ModeParams mode;
  auto* mode_cmd = app.add_subcommand(
      "mode", "Render the mode intensity image and report its Schmidt data");
  mode_cmd->fallthrough();
  mode_cmd->add_option("--kind", mode.kind, "radial or azimuthal");
  mode_cmd->add_option("--waist", mode.waist, "Beam waist (arbitrary units)");
  mode_cmd->add_option("--grid", mode.grid, "Image size in pixels (>= 16)");
  mode_cmd->add_option("--extent", mode.extent, "Half-width in waists");
  mode_cmd->add_option("--image-out", mode.image_out, "PGM output path");

  SchmidtParams sch;
  auto* sch_cmd = app.add_subcommand(
      "schmidt", "Schmidt decomposition of a coefficients JSON file");
  sch_cmd->fallthrough();
  sch_cmd->add_option("file", sch.file, "Coefficients JSON file")->required();

  StokesParams stokes;
  auto* stokes_cmd = app.add_subcommand(
      "stokes", "Exact Stokes statistics on the two signal modes");
  stokes_cmd->fallthrough();
  stokes_cmd->add_option("--kind", stokes.kind, "radial or azimuthal");
  stokes_cmd->add_option("--alpha", stokes.alpha, "Coherent amplitude re,im");
  stokes_cmd->add_option("--zeta", stokes.zeta, "Squeezing parameter re,im");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitParse;
  }

  try {
    ConfigOverlay cfg;
    if (!g.config_path.empty()) cfg.load(g.config_path);
    cfg.apply("out", g.out);
    cfg.apply("format", g.format);
    cfg.apply("verbose", g.verbose);

    if (fac_cmd->parsed()) return run_factorize(fac, g, cfg);
    if (duan_cmd->parsed()) return run_duan(duan, g, cfg);
    if (det_cmd->parsed()) return run_detect(det, g, cfg);
    if (mode_cmd->parsed()) return run_mode(mode, g, cfg);
    if (sch_cmd->parsed()) return run_schmidt(sch, g, cfg);
    if (stokes_cmd->parsed()) return run_stokes(stokes, g, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  std::cerr << "no command selected\n";
  return kExitParse;
}
