#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Conventions used throughout:
//   quadratures  x = a + a*,  p = -i(a - a*)   so  [x, p] = 2i
//   ordering     r = (x1, p1, x2, p2, ...)     (interleaved)
//   vacuum       mean = 0, cov = identity (shot-noise units)
//   coherent α   mean = (2 Re α, 2 Im α)
// A state is physical iff cov + i·Omega >= 0 with Omega = ⊕ [[0,1],[-1,0]].

namespace cvbeam {

using Complex = std::complex<double>;

Eigen::MatrixXd symplectic_form(int num_modes);

class GaussianState {
 public:
  // Vacuum on num_modes modes.
  explicit GaussianState(int num_modes);
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int num_modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  // (mean_x + i mean_p) / 2 for one mode.
  Complex mode_amplitude(int mode) const;

  // Marginal state on a subset of modes, in the order given.
  GaussianState reduced(const std::vector<int>& modes) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;  // kept symmetric
};

// Affine symplectic map r -> M r + d. apply() symmetrizes the result cov.
struct SymplecticTransform {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd displacement;

  GaussianState apply(const GaussianState& state) const;
  bool is_symplectic(double tol = 1e-10) const;
  double symplectic_defect() const;  // max |M^T Omega M - Omega|
};

SymplecticTransform identity_transform(int num_modes);
SymplecticTransform displace_transform(int num_modes, int mode, Complex alpha);
// zeta = r e^{iθ}: a -> a cosh r - a* e^{iθ} sinh r. Real zeta>0 squeezes x;
// the squeezed axis sits at angle θ/2 in the (x,p) plane.
SymplecticTransform squeeze_transform(int num_modes, int mode, Complex zeta);
// xi = r e^{iθ}: exp[xi* a_i a_j - xi a_i* a_j*] (no 1/2 in the exponent).
// Real xi = r > 0 squeezes the (x_i + x_j, p_i - p_j) pair to 4 e^{-2r};
// xi < 0 squeezes the mirror pair (x_i - x_j, p_i + p_j).
SymplecticTransform two_mode_squeeze_transform(int num_modes, int i, int j,
                                               Complex xi);
// Passive N x N unitary on mode operators: amplitudes map as α' = u α.
SymplecticTransform mode_unitary_transform(const Eigen::MatrixXcd& u);

GaussianState displace(const GaussianState& s, int mode, Complex alpha);
GaussianState squeeze(const GaussianState& s, int mode, Complex zeta);
GaussianState two_mode_squeeze(const GaussianState& s, int i, int j,
                               Complex xi);
GaussianState apply_mode_unitary(const GaussianState& s,
                                 const Eigen::MatrixXcd& u);
// Pure-loss channel with transmittance eta in [0, 1] on one mode.
GaussianState attenuate(const GaussianState& s, int mode, double eta);

bool is_physical(const GaussianState& s, double tol = 1e-9);

// Joint state of two independent subsystems, modes of `b` appended after `a`.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

}  // namespace cvbeam
