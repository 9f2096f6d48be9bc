#include "cvbeam/json_io.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvbeam {

namespace {

nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(std::string(field) +
                                ": expected a [re, im] number pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void to_json(nlohmann::json& j, const GaussianState& state) {
  const int n2 = 2 * state.num_modes();
  nlohmann::json mean = nlohmann::json::array();
  for (int i = 0; i < n2; ++i) mean.push_back(state.mean()(i));
  nlohmann::json cov = nlohmann::json::array();
  for (int r = 0; r < n2; ++r) {
    for (int c = 0; c < n2; ++c) cov.push_back(state.cov()(r, c));
  }
  j = nlohmann::json{{"num_modes", state.num_modes()},
                     {"mean", std::move(mean)},
                     {"cov", std::move(cov)}};
}

void from_json(const nlohmann::json& j, GaussianState& state) {
  const int num_modes = j.at("num_modes").get<int>();
  const int n2 = 2 * num_modes;
  const auto& mean_j = j.at("mean");
  const auto& cov_j = j.at("cov");
  if (static_cast<int>(mean_j.size()) != n2) {
    throw std::invalid_argument("mean: expected " + std::to_string(n2) +
                                " entries");
  }
  if (static_cast<int>(cov_j.size()) != n2 * n2) {
    throw std::invalid_argument("cov: expected " + std::to_string(n2 * n2) +
                                " row-major entries");
  }
  Eigen::VectorXd mean(n2);
  for (int i = 0; i < n2; ++i) mean(i) = mean_j[i].get<double>();
  Eigen::MatrixXd cov(n2, n2);
  for (int r = 0; r < n2; ++r) {
    for (int c = 0; c < n2; ++c) cov(r, c) = cov_j[r * n2 + c].get<double>();
  }
  state = GaussianState(mean, cov);
}

void to_json(nlohmann::json& j, const VectorModeCoefficients& c) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) {
      coeffs.push_back(complex_to_json(c.coeffs(r, col)));
    }
  }
  j = nlohmann::json{{"pol_basis", to_string(c.pol_basis)},
                     {"spa_basis", to_string(c.spa_basis)},
                     {"coeffs", std::move(coeffs)}};
}

VectorModeCoefficients vector_mode_from_json(const nlohmann::json& j) {
  if (!j.contains("coeffs")) {
    throw std::invalid_argument("coeffs: missing field");
  }
  const auto& coeffs_j = j.at("coeffs");
  if (!coeffs_j.is_array() || coeffs_j.size() != 4) {
    throw std::invalid_argument(
        "coeffs: expected 4 row-major [re, im] pairs");
  }
  Eigen::Matrix2cd m;
  for (int k = 0; k < 4; ++k) {
    const std::string field = "coeffs[" + std::to_string(k) + "]";
    m(k / 2, k % 2) = complex_from_json(coeffs_j[k], field.c_str());
  }
  PolBasis pol = PolBasis::LinearXY;
  SpaBasis spa = SpaBasis::HG1001;
  try {
    if (j.contains("pol_basis")) {
      pol = parse_pol_basis(j.at("pol_basis").get<std::string>());
    }
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("pol_basis: expected a basis name string");
  }
  try {
    if (j.contains("spa_basis")) {
      spa = parse_spa_basis(j.at("spa_basis").get<std::string>());
    }
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("spa_basis: expected a basis name string");
  }
  return VectorModeCoefficients(m, pol, spa);
}

void to_json(nlohmann::json& j, const SchmidtDecomposition& d) {
  j = nlohmann::json{{"lambdas", {d.lambdas(0), d.lambdas(1)}},
                     {"schmidt_rank", d.schmidt_rank}};
}

void to_json(nlohmann::json& j, const CylindricalStateSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)},
                     {"alpha", complex_to_json(spec.alpha)},
                     {"zeta", complex_to_json(spec.zeta)},
                     {"construction", to_string(spec.construction)}};
}

void from_json(const nlohmann::json& j, CylindricalStateSpec& spec) {
  spec.kind = parse_mode_kind(j.at("kind").get<std::string>());
  spec.alpha = complex_from_json(j.at("alpha"), "alpha");
  spec.zeta = complex_from_json(j.at("zeta"), "zeta");
  spec.construction =
      parse_construction(j.at("construction").get<std::string>());
}

void to_json(nlohmann::json& j, const DetectionResult& result) {
  j = nlohmann::json{{"mean", result.mean},
                     {"variance", result.variance},
                     {"qnl_variance", result.qnl_variance}};
  if (result.db_vs_qnl.has_value()) {
    j["db_vs_qnl"] = *result.db_vs_qnl;
  } else {
    j["db_vs_qnl"] = nullptr;
  }
}

void from_json(const nlohmann::json& j, DetectionResult& result) {
  result.mean = j.at("mean").get<double>();
  result.variance = j.at("variance").get<double>();
  result.qnl_variance = j.at("qnl_variance").get<double>();
  const auto& db = j.at("db_vs_qnl");
  result.db_vs_qnl =
      db.is_null() ? std::nullopt : std::optional<double>(db.get<double>());
}

void to_json(nlohmann::json& j, const EntanglementReport& report) {
  j = nlohmann::json{{"lhs", report.lhs},
                     {"bound", report.bound},
                     {"entangled", report.entangled},
                     {"mu", report.combination.mu},
                     {"nu", report.combination.nu},
                     {"dof_a", to_string(report.combination.dof_a)},
                     {"dof_b", to_string(report.combination.dof_b)},
                     {"warn_asymmetric", report.warn_asymmetric},
                     {"degenerate", report.degenerate}};
  if (std::isnan(report.s)) {
    j["s"] = nullptr;
  } else {
    j["s"] = report.s;
  }
}

void from_json(const nlohmann::json& j, EntanglementReport& report) {
  report.lhs = j.at("lhs").get<double>();
  report.bound = j.at("bound").get<double>();
  report.entangled = j.at("entangled").get<bool>();
  report.combination =
      make_combination(j.at("mu").get<int>(), j.at("nu").get<int>(),
                       parse_dof(j.at("dof_a").get<std::string>()),
                       parse_dof(j.at("dof_b").get<std::string>()));
  report.warn_asymmetric = j.at("warn_asymmetric").get<bool>();
  report.degenerate = j.at("degenerate").get<bool>();
  const auto& s = j.at("s");
  report.s = s.is_null() ? std::numeric_limits<double>::quiet_NaN()
                         : s.get<double>();
}

}  // namespace cvbeam
