#include "cvbeam/gaussian_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvbeam {

namespace {

void check_mode(const GaussianState& s, int mode, const char* what) {
  if (mode < 0 || mode >= s.num_modes()) {
    std::ostringstream os;
    os << what << ": mode " << mode << " out of range for "
       << s.num_modes() << "-mode state";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Eigen::MatrixXd symplectic_form(int num_modes) {
  if (num_modes < 1) throw std::invalid_argument("symplectic_form: num_modes < 1");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
  for (int m = 0; m < num_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(int num_modes) {
  if (num_modes < 1) throw std::invalid_argument("GaussianState: num_modes < 1");
  mean_ = Eigen::VectorXd::Zero(2 * num_modes);
  cov_ = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes);
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto n = mean_.size();
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("GaussianState: mean length must be even and >= 2");
  }
  if (cov_.rows() != n || cov_.cols() != n) {
    throw std::invalid_argument("GaussianState: cov shape does not match mean");
  }
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-6) {
    std::ostringstream os;
    os << "GaussianState: cov asymmetric by " << asym;
    throw std::invalid_argument(os.str());
  }
  cov_ = 0.5 * (cov_ + cov_.transpose().eval());
}

Complex GaussianState::mode_amplitude(int mode) const {
  check_mode(*this, mode, "mode_amplitude");
  return {0.5 * mean_(2 * mode), 0.5 * mean_(2 * mode + 1)};
}

GaussianState GaussianState::reduced(const std::vector<int>& modes) const {
  if (modes.empty()) throw std::invalid_argument("reduced: empty mode list");
  const int k = static_cast<int>(modes.size());
  Eigen::VectorXd mu(2 * k);
  Eigen::MatrixXd sigma(2 * k, 2 * k);
  for (int a = 0; a < k; ++a) {
    check_mode(*this, modes[a], "reduced");
    for (int ra = 0; ra < 2; ++ra) {
      mu(2 * a + ra) = mean_(2 * modes[a] + ra);
      for (int b = 0; b < k; ++b) {
        for (int rb = 0; rb < 2; ++rb) {
          sigma(2 * a + ra, 2 * b + rb) = cov_(2 * modes[a] + ra, 2 * modes[b] + rb);
        }
      }
    }
  }
  return {mu, sigma};
}

GaussianState SymplecticTransform::apply(const GaussianState& state) const {
  const auto n = state.mean().size();
  if (matrix.rows() != n || matrix.cols() != n || displacement.size() != n) {
    throw std::invalid_argument("SymplecticTransform: dimension mismatch");
  }
  Eigen::VectorXd mu = matrix * state.mean() + displacement;
  Eigen::MatrixXd sigma = matrix * state.cov() * matrix.transpose();
  return {std::move(mu), std::move(sigma)};
}

double SymplecticTransform::symplectic_defect() const {
  const int n = static_cast<int>(matrix.rows()) / 2;
  const Eigen::MatrixXd omega = symplectic_form(n);
  return (matrix.transpose() * omega * matrix - omega).cwiseAbs().maxCoeff();
}

bool SymplecticTransform::is_symplectic(double tol) const {
  return symplectic_defect() <= tol;
}

SymplecticTransform identity_transform(int num_modes) {
  if (num_modes < 1) throw std::invalid_argument("identity_transform: num_modes < 1");
  return {Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes),
          Eigen::VectorXd::Zero(2 * num_modes)};
}

SymplecticTransform displace_transform(int num_modes, int mode, Complex alpha) {
  SymplecticTransform t = identity_transform(num_modes);
  if (mode < 0 || mode >= num_modes) throw std::invalid_argument("displace: bad mode");
  t.displacement(2 * mode) = 2.0 * alpha.real();
  t.displacement(2 * mode + 1) = 2.0 * alpha.imag();
  return t;
}

SymplecticTransform squeeze_transform(int num_modes, int mode, Complex zeta) {
  SymplecticTransform t = identity_transform(num_modes);
  if (mode < 0 || mode >= num_modes) throw std::invalid_argument("squeeze: bad mode");
  const double r = std::abs(zeta);
  const double th = std::arg(zeta);
  const double ch = std::cosh(r), sh = std::sinh(r);
  Eigen::Matrix2d block;
  block << ch - sh * std::cos(th), -sh * std::sin(th),
           -sh * std::sin(th),     ch + sh * std::cos(th);
  t.matrix.block<2, 2>(2 * mode, 2 * mode) = block;
  return t;
}

SymplecticTransform two_mode_squeeze_transform(int num_modes, int i, int j,
                                               Complex xi) {
  if (i == j) throw std::invalid_argument("two_mode_squeeze: modes must differ");
  if (i < 0 || j < 0 || i >= num_modes || j >= num_modes) {
    throw std::invalid_argument("two_mode_squeeze: bad mode index");
  }
  const double r = std::abs(xi);
  const double th = std::arg(xi);
  const double ch = std::cosh(r), sh = std::sinh(r);
  // a_i -> a_i cosh r - a_j* e^{iθ} sinh r  and i <-> j symmetric.
  Eigen::Matrix2d cross;
  cross << -sh * std::cos(th), -sh * std::sin(th),
           -sh * std::sin(th),  sh * std::cos(th);
  SymplecticTransform t = identity_transform(num_modes);
  t.matrix.block<2, 2>(2 * i, 2 * i) = ch * Eigen::Matrix2d::Identity();
  t.matrix.block<2, 2>(2 * j, 2 * j) = ch * Eigen::Matrix2d::Identity();
  t.matrix.block<2, 2>(2 * i, 2 * j) = cross;
  t.matrix.block<2, 2>(2 * j, 2 * i) = cross;
  return t;
}

SymplecticTransform mode_unitary_transform(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  if (n < 1 || u.cols() != n) {
    throw std::invalid_argument("mode_unitary: matrix must be square");
  }
  const double defect =
      (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "mode_unitary: matrix is not unitary, max |u u* - 1| = " << defect;
    throw std::invalid_argument(os.str());
  }
  SymplecticTransform t = identity_transform(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double re = u(j, k).real(), im = u(j, k).imag();
      t.matrix(2 * j, 2 * k) = re;
      t.matrix(2 * j, 2 * k + 1) = -im;
      t.matrix(2 * j + 1, 2 * k) = im;
      t.matrix(2 * j + 1, 2 * k + 1) = re;
    }
  }
  return t;
}

GaussianState displace(const GaussianState& s, int mode, Complex alpha) {
  check_mode(s, mode, "displace");
  return displace_transform(s.num_modes(), mode, alpha).apply(s);
}

GaussianState squeeze(const GaussianState& s, int mode, Complex zeta) {
  check_mode(s, mode, "squeeze");
  return squeeze_transform(s.num_modes(), mode, zeta).apply(s);
}

GaussianState two_mode_squeeze(const GaussianState& s, int i, int j, Complex xi) {
  check_mode(s, i, "two_mode_squeeze");
  check_mode(s, j, "two_mode_squeeze");
  return two_mode_squeeze_transform(s.num_modes(), i, j, xi).apply(s);
}

GaussianState apply_mode_unitary(const GaussianState& s, const Eigen::MatrixXcd& u) {
  if (u.rows() != s.num_modes()) {
    throw std::invalid_argument("apply_mode_unitary: size does not match state");
  }
  return mode_unitary_transform(u).apply(s);
}

GaussianState attenuate(const GaussianState& s, int mode, double eta) {
  check_mode(s, mode, "attenuate");
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("attenuate: eta must be in [0, 1]");
  }
  const int n2 = static_cast<int>(s.mean().size());
  const double root = std::sqrt(eta);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n2);
  scale(2 * mode) = root;
  scale(2 * mode + 1) = root;
  Eigen::VectorXd mu = scale.asDiagonal() * s.mean();
  Eigen::MatrixXd sigma = scale.asDiagonal() * s.cov() * scale.asDiagonal();
  sigma(2 * mode, 2 * mode) += 1.0 - eta;
  sigma(2 * mode + 1, 2 * mode + 1) += 1.0 - eta;
  return {std::move(mu), std::move(sigma)};
}

bool is_physical(const GaussianState& s, double tol) {
  Eigen::MatrixXcd m = s.cov().cast<Complex>();
  m += Complex(0.0, 1.0) * symplectic_form(s.num_modes()).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("is_physical: eigensolver failed");
  }
  return solver.eigenvalues().minCoeff() >= -tol;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int na = static_cast<int>(a.mean().size());
  const int nb = static_cast<int>(b.mean().size());
  Eigen::VectorXd mu(na + nb);
  mu << a.mean(), b.mean();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(na + nb, na + nb);
  sigma.topLeftCorner(na, na) = a.cov();
  sigma.bottomRightCorner(nb, nb) = b.cov();
  return {std::move(mu), std::move(sigma)};
}

}  // namespace cvbeam
