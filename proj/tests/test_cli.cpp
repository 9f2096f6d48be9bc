#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

// CVBEAM_CLI_PATH is injected by the build and points at the cvbeam binary.

namespace {

using nlohmann::json;

struct CmdResult {
  int rc = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(CVBEAM_CLI_PATH) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path tmp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("factorize agrees across constructions and honors the tolerance") {
  const CmdResult basic = run_cli("factorize --alpha 1,2 --zeta 0.5,0.3");
  CHECK(basic.rc == 0);
  CHECK(std::stod(basic.out) < 1e-10);

  const CmdResult radial =
      run_cli("factorize --kind radial --alpha 3,0 --zeta 0.8,0");
  CHECK(radial.rc == 0);

  const CmdResult trivial = run_cli("factorize --alpha 0,0 --zeta 0,0");
  CHECK(trivial.rc == 0);
  CHECK(std::stod(trivial.out) < 1e-15);

  const CmdResult strict =
      run_cli("factorize --alpha 1,0 --zeta 0.5,0 --tol 1e-30");
  CHECK(strict.rc == 1);
}

TEST_CASE("argument errors exit with the parse code") {
  CHECK(run_cli("factorize --alpha nope").rc == 2);
  CHECK(run_cli("factorize --bogus 1").rc == 2);
  CHECK(run_cli("duan --pairs wat").rc == 2);
  CHECK(run_cli("mode --grid 8").rc == 2);
  CHECK(run_cli("").rc == 2);
}

TEST_CASE("unwritable output paths exit with the write code") {
  CHECK(run_cli("factorize --out /nonexistent_dir_zz/x.txt").rc == 3);
}

TEST_CASE("duan scan rows track the closed form") {
  const CmdResult r = run_cli("duan --steps 5 --pairs hybrid");
  REQUIRE(r.rc == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("max_rel_gap").get<double>() < 1e-6);
  const auto& rows = doc.at("rows");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].at("s").get<double>() == doctest::Approx(0.0));
  CHECK(rows[0].at("lhs").get<double>() == doctest::Approx(1.0));
  CHECK_FALSE(rows[0].at("entangled").get<bool>());
  CHECK(rows[4].at("s").get<double>() == doctest::Approx(2.0));
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].at("entangled").get<bool>());
    CHECK(rows[i].at("dof_a") == "spa");
    CHECK(rows[i].at("dof_b") == "pol");
    const double lhs = rows[i].at("lhs").get<double>();
    const double closed = rows[i].at("closed_form").get<double>();
    CHECK(std::abs(lhs - closed) / closed < 1e-6);
  }

  const CmdResult csv =
      run_cli("duan --steps 3 --pairs hybrid --format csv");
  REQUIRE(csv.rc == 0);
  const auto lines = split_lines(csv.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] ==
        "s,mu,nu,dof_a,dof_b,lhs,bound,entangled,warn_asymmetric,"
        "closed_form,rel_gap");
}

TEST_CASE("detect reports shot-noise statistics and fits dB targets") {
  const CmdResult qnl = run_cli("detect --s 0 --alpha 4,0");
  REQUIRE(qnl.rc == 0);
  const json qnl_doc = json::parse(qnl.out);
  CHECK(std::abs(qnl_doc.at("db_vs_qnl").get<double>()) < 1e-9);

  const CmdResult fit_s = run_cli("detect --fit-db -0.6");
  REQUIRE(fit_s.rc == 0);
  const json fs = json::parse(fit_s.out);
  CHECK(fs.at("fit_parameter") == "s");
  CHECK(fs.at("reachable").get<bool>());
  CHECK(fs.at("fitted_value").get<double>() == doctest::Approx(0.069091).epsilon(1e-3));
  CHECK(fs.at("achieved_db").get<double>() == doctest::Approx(-0.6).epsilon(1e-6));
  CHECK(fs.at("result").at("db_vs_qnl").get<double>() ==
        doctest::Approx(-0.6).epsilon(1e-6));

  const CmdResult fit_eta =
      run_cli("detect --scheme sum --s 0.069091 --fit-db -0.5");
  REQUIRE(fit_eta.rc == 0);
  const json fe = json::parse(fit_eta.out);
  CHECK(fe.at("fit_parameter") == "eta");
  CHECK(fe.at("fitted_value").get<double>() ==
        doctest::Approx(0.842793).epsilon(1e-3));

  const CmdResult unreachable = run_cli("detect --fit-db -30");
  CHECK(unreachable.rc == 4);
  const json un = json::parse(unreachable.out);
  CHECK_FALSE(un.at("reachable").get<bool>());
  CHECK(un.at("achieved_db").get<double>() > -30.0);
}

TEST_CASE("mode renders a PGM image next to its Schmidt report") {
  const auto img = tmp_path("cvbeam_cli_mode.pgm");
  std::filesystem::remove(img);
  const CmdResult r =
      run_cli("mode --grid 64 --image-out " + img.string());
  REQUIRE(r.rc == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("schmidt_rank").get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(doc.at("kind") == "radial");
  CHECK_FALSE(doc.at("separable").get<bool>());

  REQUIRE(std::filesystem::exists(img));
  const std::string bytes = read_file(img);
  const std::string header = "P5\n64 64\n255\n";
  REQUIRE(bytes.size() == header.size() + 64 * 64);
  CHECK(bytes.compare(0, header.size(), header) == 0);
}

TEST_CASE("schmidt analyzes a coefficients file") {
  const auto good = tmp_path("cvbeam_cli_coeffs.json");
  {
    json j;
    j["coeffs"] = {{std::sqrt(0.8), 0.0}, {0.0, 0.0}, {0.0, 0.0},
                   {std::sqrt(0.2), 0.0}};
    write_file(good, j.dump());
  }
  const CmdResult r = run_cli("schmidt " + good.string());
  REQUIRE(r.rc == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("schmidt_rank").get<double>() ==
        doctest::Approx(1.4705882352941178).epsilon(1e-9));
  CHECK(doc.at("lambdas")[0].get<double>() == doctest::Approx(0.8));
  CHECK(doc.at("lambdas")[1].get<double>() == doctest::Approx(0.2));
  CHECK_FALSE(doc.at("separable").get<bool>());

  const auto bad = tmp_path("cvbeam_cli_coeffs_bad.json");
  write_file(bad,
             R"({"coeffs": [[1.0, 0.0], [0.0, 0.0], "x", [0.0, 0.0]]})");
  const CmdResult rb = run_cli("schmidt " + bad.string(), true);
  CHECK(rb.rc == 2);
  CHECK(rb.out.find("coeffs[2]") != std::string::npos);

  const auto garbage = tmp_path("cvbeam_cli_coeffs_garbage.json");
  write_file(garbage, "{{{");
  const CmdResult rg = run_cli("schmidt " + garbage.string(), true);
  CHECK(rg.rc == 2);
  CHECK(rg.out.find("malformed") != std::string::npos);

  CHECK(run_cli("schmidt /no/such/file.json").rc == 2);
}

TEST_CASE("stokes emits the coherent-state table") {
  const CmdResult r =
      run_cli("stokes --alpha 2,0 --zeta 0,0 --format csv");
  REQUIRE(r.rc == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "mu,mean,variance");
  const double expected_mean[4] = {4.0, 0.0, -4.0, 0.0};
  for (int mu = 0; mu <= 3; ++mu) {
    int parsed_mu = -1;
    double mean = 0.0, var = 0.0;
    REQUIRE(std::sscanf(lines[mu + 1].c_str(), "%d,%lf,%lf", &parsed_mu,
                        &mean, &var) == 3);
    CHECK(parsed_mu == mu);
    CHECK(std::abs(mean - expected_mean[mu]) < 1e-9);
    CHECK(std::abs(var - 4.0) < 1e-9);
  }
}

TEST_CASE("config values override flags") {
  const auto cfg = tmp_path("cvbeam_cli_cfg.json");
  write_file(cfg, R"({"kind": "radial", "zeta": 0.0, "alpha": "1,1"})");

  // 9,9 squeezing exceeds the library bound, so success proves the override.
  const CmdResult r = run_cli("stokes --kind azimuthal --alpha 2,0 --zeta 9,9"
                              " --config " + cfg.string() + " --format csv");
  REQUIRE(r.rc == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 5);
  int mu = -1;
  double s0_mean = 0.0, s2_mean = 0.0, var = 0.0;
  REQUIRE(std::sscanf(lines[1].c_str(), "%d,%lf,%lf", &mu, &s0_mean, &var) == 3);
  REQUIRE(std::sscanf(lines[3].c_str(), "%d,%lf,%lf", &mu, &s2_mean, &var) == 3);
  CHECK(s0_mean == doctest::Approx(2.0));   // |1+i|^2, not the flag's 4
  CHECK(s2_mean == doctest::Approx(2.0));   // radial sign, not azimuthal

  const auto cfg2 = tmp_path("cvbeam_cli_cfg2.json");
  write_file(cfg2, R"({"kind": "radial", "zeta": [0.3, 0.0]})");
  const CmdResult rv = run_cli("factorize --kind azimuthal --zeta 0.8,0"
                               " --config " + cfg2.string() + " --verbose",
                               true);
  CHECK(rv.rc == 0);
  CHECK(rv.out.find("kind=radial") != std::string::npos);
  CHECK(rv.out.find("zeta=0.3,0") != std::string::npos);
}

TEST_CASE("identical invocations are byte-identical") {
  const std::string args = "duan --steps 5 --pairs hybrid --format csv";
  const CmdResult a = run_cli(args);
  const CmdResult b = run_cli(args);
  CHECK(a.rc == 0);
  CHECK(a.out == b.out);

  const auto img1 = tmp_path("cvbeam_cli_det1.pgm");
  const auto img2 = tmp_path("cvbeam_cli_det2.pgm");
  REQUIRE(run_cli("mode --kind azimuthal --grid 33 --image-out " +
                  img1.string()).rc == 0);
  REQUIRE(run_cli("mode --kind azimuthal --grid 33 --image-out " +
                  img2.string()).rc == 0);
  CHECK(read_file(img1) == read_file(img2));
}
