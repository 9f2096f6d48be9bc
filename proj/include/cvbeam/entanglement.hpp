// Two-arm inseparability criterion on Stokes measurements: compares the sum
// of two combined-Stokes variances against the covariance bound, normalized
// so that separable symmetric states sit at 1. Supports a strong-local-
// oscillator linearized model and exact quadratic Stokes statistics with
// auxiliary coherent modes.
#pragma once

#include <utility>
#include <vector>

#include "cvbeam/observables.hpp"
#include "cvbeam/states.hpp"

namespace cvbeam {

// mu < nu, drawn from {(1,2), (1,3), (2,3)}; the combination is hybrid when
// the two arms use different degrees of freedom.
struct MeasurementCombination {
  int mu = 2;
  int nu = 3;
  Dof dof_a = Dof::Pol;
  Dof dof_b = Dof::Pol;

  bool hybrid() const { return dof_a != dof_b; }
};

MeasurementCombination make_combination(int mu, int nu, Dof dof_a, Dof dof_b);

struct LoModel {
  enum class Type { Linearized, Exact };

  Type type = Type::Linearized;
  double amplitude = 1e4;
  double phase_a = 0.0;
  double phase_b = 0.0;

  static LoModel linearized(double amplitude, double phase_a = 0.0,
                            double phase_b = 0.0);
  static LoModel exact(double aux_amplitude, double phase_a = 0.0,
                       double phase_b = 0.0);
};

// lhs is normalized so the separability bound is 1; entangled = lhs < bound.
// When the covariance bound vanishes, `degenerate` is set, no verdict is
// claimed and lhs holds the unnormalized variance sum. `warn_asymmetric`
// flags arms whose covariance bounds differ beyond 1e-6 relative; the
// normalization is only meaningful for symmetric arms. `s` is filled by the
// scan helpers and is NaN when unknown.
struct EntanglementReport {
  double lhs = 0.0;
  double bound = 1.0;
  bool entangled = false;
  double s = 0.0;
  MeasurementCombination combination;
  bool warn_asymmetric = false;
  bool degenerate = false;
};

// Arm local-oscillator phases that align the measured quadratures with the
// correlated combinations of each mode kind: (pi, 0) azimuthal, (0, 0) radial.
std::pair<double, double> arm_phases(ModeKind kind);

// Tensors two auxiliary coherent modes onto a two-mode signal state; modes
// (0, 1) keep the signal, modes (2, 3) carry amplitude * e^{i phase} each.
GaussianState extend_with_aux(const GaussianState& signal, double amplitude,
                              double phase_a, double phase_b);

// Evaluates V(S_mu^a + S_mu^b) + V(S_nu^a - S_nu^b) against 4|cov(S_mu^a,
// S_nu^a)| where cov includes the commutator part. Linearized model: state
// must have exactly the two signal modes (arm a = mode 0) and mu, nu must be
// 2 or 3. Exact model: a 2-mode state is extended with auxiliary modes from
// the model; a 4-mode state is taken as (signal 0, 1; auxiliary 2, 3).
EntanglementReport duan_criterion(const GaussianState& state,
                                  const MeasurementCombination& comb,
                                  const LoModel& lo);

// e^{-s} cosh(s) = (1 + e^{-2s})/2, the criterion value of the squeezed
// cylindrically polarized states; decreasing from 1 to 1/2.
double closed_form_lhs(double s);

// Builds the squeezed (dark, alpha = 0) state for every s and evaluates every
// combination, arm phases set by kind; row order is s outer, combination
// inner.
std::vector<EntanglementReport> scan(ModeKind kind,
                                     const std::vector<double>& s_values,
                                     const std::vector<MeasurementCombination>& combs,
                                     const LoModel& lo);

// Bright signal plus auxiliary beams of the given amplitude, exact Stokes
// statistics; meant for combinations involving S_1 where linearization does
// not apply. alpha_signal is the amplitude of each split arm (the composite
// mode carries sqrt(2) times it); when arm and auxiliary amplitudes match,
// the criterion value approaches (3 + e^{-2s})/4 for bright beams.
EntanglementReport equal_amplitude_probe(ModeKind kind, double s,
                                         double alpha_signal, double alpha_aux,
                                         const MeasurementCombination& comb);

}  // namespace cvbeam
