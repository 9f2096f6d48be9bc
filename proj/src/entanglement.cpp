#include "cvbeam/entanglement.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvbeam {

MeasurementCombination make_combination(int mu, int nu, Dof dof_a, Dof dof_b) {
  const bool valid = (mu == 1 && nu == 2) || (mu == 1 && nu == 3) ||
                     (mu == 2 && nu == 3);
  if (!valid) {
    throw std::invalid_argument(
        "Stokes index pair must be (1,2), (1,3) or (2,3)");
  }
  return {mu, nu, dof_a, dof_b};
}

LoModel LoModel::linearized(double amplitude, double phase_a, double phase_b) {
  if (!(amplitude > 0.0)) {
    throw std::invalid_argument("local oscillator amplitude must be positive");
  }
  return {Type::Linearized, amplitude, phase_a, phase_b};
}

LoModel LoModel::exact(double aux_amplitude, double phase_a, double phase_b) {
  if (!(aux_amplitude >= 0.0)) {
    throw std::invalid_argument("auxiliary amplitude must be non-negative");
  }
  return {Type::Exact, aux_amplitude, phase_a, phase_b};
}

std::pair<double, double> arm_phases(ModeKind kind) {
  if (kind == ModeKind::Azimuthal) return {M_PI, 0.0};
  return {0.0, 0.0};
}

GaussianState extend_with_aux(const GaussianState& signal, double amplitude,
                              double phase_a, double phase_b) {
  if (signal.num_modes() != 2) {
    throw std::invalid_argument("signal state must have exactly two modes");
  }
  GaussianState aux(2);
  aux = displace(aux, 0, amplitude * std::exp(Complex(0.0, phase_a)));
  aux = displace(aux, 1, amplitude * std::exp(Complex(0.0, phase_b)));
  return tensor(signal, aux);
}

namespace {

struct ArmObservables {
  QuadraticObservable mu_a;
  QuadraticObservable nu_a;
  QuadraticObservable mu_b;
  QuadraticObservable nu_b;
};

ArmObservables arm_observables(const GaussianState& state,
                               const MeasurementCombination& comb,
                               const LoModel& lo) {
  if (lo.type == LoModel::Type::Linearized) {
    if (state.num_modes() != 2) {
      throw std::invalid_argument(
          "linearized criterion expects the two signal modes only");
    }
    return {linearized_stokes(comb.dof_a, comb.mu, lo.amplitude, 0, 2, lo.phase_a),
            linearized_stokes(comb.dof_a, comb.nu, lo.amplitude, 0, 2, lo.phase_a),
            linearized_stokes(comb.dof_b, comb.mu, lo.amplitude, 1, 2, lo.phase_b),
            linearized_stokes(comb.dof_b, comb.nu, lo.amplitude, 1, 2, lo.phase_b)};
  }
  return {stokes_observable(comb.dof_a, comb.mu, {0, 2}, 4),
          stokes_observable(comb.dof_a, comb.nu, {0, 2}, 4),
          stokes_observable(comb.dof_b, comb.mu, {1, 3}, 4),
          stokes_observable(comb.dof_b, comb.nu, {1, 3}, 4)};
}

}  // namespace

EntanglementReport duan_criterion(const GaussianState& state,
                                  const MeasurementCombination& comb,
                                  const LoModel& lo) {
  make_combination(comb.mu, comb.nu, comb.dof_a, comb.dof_b);

  GaussianState measured = state;
  if (lo.type == LoModel::Type::Exact) {
    if (state.num_modes() == 2) {
      measured = extend_with_aux(state, lo.amplitude, lo.phase_a, lo.phase_b);
    } else if (state.num_modes() != 4) {
      throw std::invalid_argument(
          "exact criterion expects 2 signal modes or a prepared 4-mode state");
    }
  }

  const ArmObservables obs = arm_observables(measured, comb, lo);
  const QuadraticObservable sum_mu = obs.mu_a + obs.mu_b;
  const QuadraticObservable diff_nu = obs.nu_a - obs.nu_b;
  const double lhs_raw = quadratic_stats(measured, sum_mu).variance +
                         quadratic_stats(measured, diff_nu).variance;

  const Complex cov_a = quadratic_covariance_full(measured, obs.mu_a, obs.nu_a);
  const Complex cov_b = quadratic_covariance_full(measured, obs.mu_b, obs.nu_b);
  const double bound_raw = 4.0 * std::abs(cov_a);

  EntanglementReport report;
  report.combination = comb;
  report.s = std::numeric_limits<double>::quiet_NaN();
  report.warn_asymmetric =
      std::abs(std::abs(cov_a) - std::abs(cov_b)) >
      1e-6 * std::max(1.0, std::abs(cov_a));

  if (bound_raw <= 1e-12 * std::max(1.0, lhs_raw)) {
    report.lhs = lhs_raw;
    report.bound = 0.0;
    report.entangled = false;
    report.degenerate = true;
    return report;
  }
  report.lhs = lhs_raw / bound_raw;
  report.bound = 1.0;
  report.entangled = report.lhs < report.bound;
  return report;
}

double closed_form_lhs(double s) {
  if (s < 0.0) {
    throw std::invalid_argument("squeezing parameter must be non-negative");
  }
  return std::exp(-s) * std::cosh(s);
}

std::vector<EntanglementReport> scan(ModeKind kind,
                                     const std::vector<double>& s_values,
                                     const std::vector<MeasurementCombination>& combs,
                                     const LoModel& lo) {
  if (s_values.empty()) {
    throw std::invalid_argument("scan needs at least one squeezing value");
  }
  const auto [phase_a, phase_b] = arm_phases(kind);
  LoModel armed = lo;
  armed.phase_a = phase_a;
  armed.phase_b = phase_b;

  std::vector<EntanglementReport> reports;
  reports.reserve(s_values.size() * combs.size());
  for (double s : s_values) {
    const CylindricalStateSpec spec{kind, Complex(0.0, 0.0), Complex(s, 0.0),
                                    Construction::Composite};
    const GaussianState state = build(spec);
    for (const MeasurementCombination& comb : combs) {
      EntanglementReport report = duan_criterion(state, comb, armed);
      report.s = s;
      reports.push_back(report);
    }
  }
  return reports;
}

EntanglementReport equal_amplitude_probe(ModeKind kind, double s,
                                         double alpha_signal, double alpha_aux,
                                         const MeasurementCombination& comb) {
  if (!(alpha_aux > 0.0)) {
    throw std::invalid_argument("auxiliary amplitude must be positive");
  }
  // alpha_signal is the per-arm amplitude; the composite mode carries
  // sqrt(2) times that, so each split arm matches its auxiliary beam.
  const CylindricalStateSpec spec{kind, Complex(alpha_signal * M_SQRT2, 0.0),
                                  Complex(s, 0.0), Construction::Composite};
  const GaussianState signal = build(spec);
  const auto [phase_a, phase_b] = arm_phases(kind);
  const GaussianState full =
      extend_with_aux(signal, alpha_aux, phase_a, phase_b);
  EntanglementReport report =
      duan_criterion(full, comb, LoModel::exact(alpha_aux, phase_a, phase_b));
  report.s = s;
  return report;
}

}  // namespace cvbeam
