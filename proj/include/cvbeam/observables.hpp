#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvbeam/gaussian_state.hpp"

namespace cvbeam {

// O = 1/2 r^T G r + g^T r + c with G symmetric and products in symmetric
// (Weyl) order. Since G is symmetric the literal operator product already
// coincides with the symmetrized one.
struct QuadraticObservable {
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  double c = 0.0;

  explicit QuadraticObservable(int num_modes);
  QuadraticObservable(Eigen::MatrixXd G_in, Eigen::VectorXd g_in, double c_in);

  int num_modes() const { return static_cast<int>(g.size()) / 2; }
  bool is_linear(double tol = 0.0) const;

  QuadraticObservable& operator+=(const QuadraticObservable& other);
  QuadraticObservable& operator-=(const QuadraticObservable& other);
  QuadraticObservable& operator*=(double scale);
  friend QuadraticObservable operator+(QuadraticObservable a,
                                       const QuadraticObservable& b) {
    return a += b;
  }
  friend QuadraticObservable operator-(QuadraticObservable a,
                                       const QuadraticObservable& b) {
    return a -= b;
  }

  // cos(angle) x + sin(angle) p on one mode.
  static QuadraticObservable quadrature(int num_modes, int mode,
                                        double angle = 0.0);
  // Sum of n_k = (x_k^2 + p_k^2 - 2)/4 over the listed modes.
  static QuadraticObservable photon_number(int num_modes,
                                           const std::vector<int>& modes);
};

struct ObservableStats {
  double mean = 0.0;
  double variance = 0.0;
};

ObservableStats quadratic_stats(const GaussianState& state,
                                const QuadraticObservable& obs);

// Symmetrized covariance 1/2 <{ΔA, ΔB}>.
double quadratic_covariance(const GaussianState& state,
                            const QuadraticObservable& a,
                            const QuadraticObservable& b);

// 1/2 <[A, B]>; purely imaginary for Hermitian A, B.
Complex quadratic_commutator_half(const GaussianState& state,
                                  const QuadraticObservable& a,
                                  const QuadraticObservable& b);

// cov_sym + 1/2 <[A,B]>. Its modulus is the per-arm Robertson-Schrodinger
// bound used to normalize the inseparability criterion.
Complex quadratic_covariance_full(const GaussianState& state,
                                  const QuadraticObservable& a,
                                  const QuadraticObservable& b);

enum class Dof { Pol, Spa };

std::string to_string(Dof dof);
Dof parse_dof(const std::string& name);

// Stokes operators on an ordered mode pair (first plays the x role):
//   S0 = n_1 + n_2          S1 = n_1 - n_2
//   S2 = (x1 x2 + p1 p2)/2  S3 = (x1 p2 - p1 x2)/2
// S3 > 0 for (x̂ + iŷ)/√2-type light. The dof tag only labels which degree of
// freedom the pair represents; the quadratic form is the same for both.
QuadraticObservable stokes_observable(Dof dof, int mu,
                                      std::pair<int, int> mode_pair,
                                      int num_modes);

// Strong-auxiliary-beam limit of S2/S3: the linear observable
// 2·lo_amplitude·(signal quadrature), x-type for mu = 2 and p-type for
// mu = 3 at lo_phase = 0. Matches the exact form when the auxiliary mode
// carries coherent amplitude 2·lo_amplitude·e^{i·lo_phase}.
QuadraticObservable linearized_stokes(Dof dof, int mu, double lo_amplitude,
                                      int signal_mode, int num_modes,
                                      double lo_phase = 0.0);

struct DetectionResult {
  double mean = 0.0;
  double variance = 0.0;
  double qnl_variance = 0.0;               // coherent state, same amplitudes
  std::optional<double> db_vs_qnl;         // empty when the reference is dark
};

// Photocurrent statistics of summed photon number over a mode subset.
DetectionResult direct_detection(const GaussianState& state,
                                 const std::vector<int>& modes);

// N_a + sign·N_b for disjoint subsets; sign is +1 or -1.
DetectionResult sum_difference(const GaussianState& state,
                               const std::vector<int>& modes_a,
                               const std::vector<int>& modes_b, int sign);

// 10 log10(variance / reference); both arguments must be positive.
double to_decibel(double variance, double reference);

}  // namespace cvbeam
