#include "cvbeam/states.hpp"

#include <cmath>
#include <stdexcept>

namespace cvbeam {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

std::string to_string(Construction construction) {
  switch (construction) {
    case Construction::Composite: return "composite";
    case Construction::Factored: return "factored";
  }
  throw std::logic_error("unknown construction");
}

Construction parse_construction(const std::string& name) {
  if (name == "composite") return Construction::Composite;
  if (name == "factored") return Construction::Factored;
  throw std::invalid_argument("unknown construction \"" + name + "\"");
}

Eigen::Matrix2cd composite_basis_unitary(ModeKind kind) {
  Eigen::Matrix2cd u;
  if (kind == ModeKind::Azimuthal) {
    u << -kInvSqrt2, kInvSqrt2, kInvSqrt2, kInvSqrt2;
  } else {
    u << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  }
  return u;
}

GaussianState build(const CylindricalStateSpec& spec, double max_abs_zeta) {
  if (std::abs(spec.zeta) > max_abs_zeta) {
    throw std::invalid_argument("|zeta| = " + std::to_string(std::abs(spec.zeta)) +
                                " exceeds the guard " + std::to_string(max_abs_zeta));
  }
  const double sign = spec.kind == ModeKind::Azimuthal ? -1.0 : 1.0;
  GaussianState state(2);
  if (spec.construction == Construction::Composite) {
    const Eigen::Matrix2cd u = composite_basis_unitary(spec.kind);
    state = apply_mode_unitary(state, u);
    state = squeeze(state, 0, spec.zeta);
    state = displace(state, 0, spec.alpha);
    state = apply_mode_unitary(state, u.adjoint());
  } else {
    state = two_mode_squeeze(state, 0, 1, sign * spec.zeta / 2.0);
    state = squeeze(state, 0, spec.zeta / 2.0);
    state = displace(state, 0, sign * spec.alpha * kInvSqrt2);
    state = squeeze(state, 1, spec.zeta / 2.0);
    state = displace(state, 1, spec.alpha * kInvSqrt2);
  }
  return state;
}

double verify_factorization(ModeKind kind, Complex alpha, Complex zeta) {
  CylindricalStateSpec spec{kind, alpha, zeta, Construction::Composite};
  const GaussianState composite = build(spec);
  spec.construction = Construction::Factored;
  const GaussianState factored = build(spec);
  const double mean_dev =
      (composite.mean() - factored.mean()).cwiseAbs().maxCoeff();
  const double cov_dev =
      (composite.cov() - factored.cov()).cwiseAbs().maxCoeff();
  return std::max(mean_dev, cov_dev);
}

}  // namespace cvbeam
