#include "cvbeam/observables.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cvbeam {

namespace {

void check_compatible(const GaussianState& state, const QuadraticObservable& obs,
                      const char* what) {
  if (obs.g.size() != state.mean().size()) {
    std::ostringstream os;
    os << what << ": observable covers " << obs.num_modes()
       << " modes, state has " << state.num_modes();
    throw std::invalid_argument(os.str());
  }
}

void check_modes(const std::vector<int>& modes, int num_modes, const char* what) {
  if (modes.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty mode subset");
  }
  std::set<int> seen;
  for (int m : modes) {
    if (m < 0 || m >= num_modes) {
      throw std::invalid_argument(std::string(what) + ": mode index out of range");
    }
    if (!seen.insert(m).second) {
      throw std::invalid_argument(std::string(what) + ": repeated mode index");
    }
  }
}

}  // namespace

QuadraticObservable::QuadraticObservable(int num_modes) {
  if (num_modes < 1) {
    throw std::invalid_argument("QuadraticObservable: num_modes < 1");
  }
  G = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
  g = Eigen::VectorXd::Zero(2 * num_modes);
}

QuadraticObservable::QuadraticObservable(Eigen::MatrixXd G_in,
                                         Eigen::VectorXd g_in, double c_in)
    : G(std::move(G_in)), g(std::move(g_in)), c(c_in) {
  if (G.rows() != g.size() || G.cols() != g.size() || g.size() % 2 != 0) {
    throw std::invalid_argument("QuadraticObservable: inconsistent shapes");
  }
  const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw std::invalid_argument("QuadraticObservable: G must be symmetric");
  }
  G = 0.5 * (G + G.transpose().eval());
}

bool QuadraticObservable::is_linear(double tol) const {
  return G.cwiseAbs().maxCoeff() <= tol;
}

QuadraticObservable& QuadraticObservable::operator+=(const QuadraticObservable& o) {
  if (o.g.size() != g.size()) {
    throw std::invalid_argument("QuadraticObservable: size mismatch in +");
  }
  G += o.G;
  g += o.g;
  c += o.c;
  return *this;
}

QuadraticObservable& QuadraticObservable::operator-=(const QuadraticObservable& o) {
  if (o.g.size() != g.size()) {
    throw std::invalid_argument("QuadraticObservable: size mismatch in -");
  }
  G -= o.G;
  g -= o.g;
  c -= o.c;
  return *this;
}

QuadraticObservable& QuadraticObservable::operator*=(double scale) {
  G *= scale;
  g *= scale;
  c *= scale;
  return *this;
}

QuadraticObservable QuadraticObservable::quadrature(int num_modes, int mode,
                                                    double angle) {
  QuadraticObservable obs(num_modes);
  if (mode < 0 || mode >= num_modes) {
    throw std::invalid_argument("quadrature: mode index out of range");
  }
  obs.g(2 * mode) = std::cos(angle);
  obs.g(2 * mode + 1) = std::sin(angle);
  return obs;
}

QuadraticObservable QuadraticObservable::photon_number(
    int num_modes, const std::vector<int>& modes) {
  QuadraticObservable obs(num_modes);
  check_modes(modes, num_modes, "photon_number");
  for (int m : modes) {
    obs.G(2 * m, 2 * m) = 0.5;
    obs.G(2 * m + 1, 2 * m + 1) = 0.5;
    obs.c -= 0.5;
  }
  return obs;
}

ObservableStats quadratic_stats(const GaussianState& state,
                                const QuadraticObservable& obs) {
  check_compatible(state, obs, "quadratic_stats");
  const Eigen::MatrixXd& sigma = state.cov();
  const Eigen::VectorXd& mu = state.mean();
  const Eigen::MatrixXd omega = symplectic_form(state.num_modes());

  ObservableStats out;
  out.mean = 0.5 * ((obs.G * sigma).trace() + mu.dot(obs.G * mu)) +
             obs.g.dot(mu) + obs.c;
  const Eigen::VectorXd v = obs.G * mu + obs.g;
  const Eigen::MatrixXd gs = obs.G * sigma;
  const Eigen::MatrixXd go = obs.G * omega;
  // The Tr(GΩGΩ) term is the ordering correction; it cancels e.g. the
  // photon-number variance of the vacuum exactly.
  out.variance = 0.5 * ((gs * gs).trace() + (go * go).trace()) +
                 v.dot(sigma * v);
  return out;
}

double quadratic_covariance(const GaussianState& state,
                            const QuadraticObservable& a,
                            const QuadraticObservable& b) {
  check_compatible(state, a, "quadratic_covariance");
  check_compatible(state, b, "quadratic_covariance");
  const Eigen::MatrixXd& sigma = state.cov();
  const Eigen::VectorXd& mu = state.mean();
  const Eigen::MatrixXd omega = symplectic_form(state.num_modes());
  const Eigen::VectorXd va = a.G * mu + a.g;
  const Eigen::VectorXd vb = b.G * mu + b.g;
  return 0.5 * ((a.G * sigma * b.G * sigma).trace() +
                (a.G * omega * b.G * omega).trace()) +
         va.dot(sigma * vb);
}

Complex quadratic_commutator_half(const GaussianState& state,
                                  const QuadraticObservable& a,
                                  const QuadraticObservable& b) {
  check_compatible(state, a, "quadratic_commutator_half");
  check_compatible(state, b, "quadratic_commutator_half");
  const Eigen::MatrixXd& sigma = state.cov();
  const Eigen::VectorXd& mu = state.mean();
  const Eigen::MatrixXd omega = symplectic_form(state.num_modes());
  // [A, B] = i r^T K r + 2i vec^T r + 2i g_a^T Ω g_b with the pieces below;
  // follows from [r_i, r_j] = 2i Ω_ij.
  const Eigen::MatrixXd k = a.G * omega * b.G - b.G * omega * a.G;
  const Eigen::VectorXd vec = a.G * omega * b.g - b.G * omega * a.g;
  const double val = 0.5 * ((k * sigma).trace() + mu.dot(k * mu)) +
                     vec.dot(mu) + a.g.dot(omega * b.g);
  return {0.0, val};
}

Complex quadratic_covariance_full(const GaussianState& state,
                                  const QuadraticObservable& a,
                                  const QuadraticObservable& b) {
  return Complex(quadratic_covariance(state, a, b), 0.0) +
         quadratic_commutator_half(state, a, b);
}

std::string to_string(Dof dof) {
  switch (dof) {
    case Dof::Pol: return "pol";
    case Dof::Spa: return "spa";
  }
  throw std::logic_error("unknown degree of freedom");
}

Dof parse_dof(const std::string& name) {
  if (name == "pol") return Dof::Pol;
  if (name == "spa") return Dof::Spa;
  throw std::invalid_argument("unknown degree of freedom \"" + name + "\"");
}

QuadraticObservable stokes_observable(Dof dof, int mu,
                                      std::pair<int, int> mode_pair,
                                      int num_modes) {
  (void)dof;  // labeling only
  const int i = mode_pair.first, j = mode_pair.second;
  if (mu < 0 || mu > 3) throw std::invalid_argument("stokes_observable: mu must be 0..3");
  if (i == j) throw std::invalid_argument("stokes_observable: modes must differ");
  if (i < 0 || j < 0 || i >= num_modes || j >= num_modes) {
    throw std::invalid_argument("stokes_observable: mode index out of range");
  }
  QuadraticObservable obs(num_modes);
  const int xi = 2 * i, pi = 2 * i + 1, xj = 2 * j, pj = 2 * j + 1;
  switch (mu) {
    case 0:
      obs.G(xi, xi) = obs.G(pi, pi) = obs.G(xj, xj) = obs.G(pj, pj) = 0.5;
      obs.c = -1.0;
      break;
    case 1:
      obs.G(xi, xi) = obs.G(pi, pi) = 0.5;
      obs.G(xj, xj) = obs.G(pj, pj) = -0.5;
      break;
    case 2:
      obs.G(xi, xj) = obs.G(xj, xi) = 0.5;
      obs.G(pi, pj) = obs.G(pj, pi) = 0.5;
      break;
    case 3:
      obs.G(xi, pj) = obs.G(pj, xi) = 0.5;
      obs.G(pi, xj) = obs.G(xj, pi) = -0.5;
      break;
  }
  return obs;
}

QuadraticObservable linearized_stokes(Dof dof, int mu, double lo_amplitude,
                                      int signal_mode, int num_modes,
                                      double lo_phase) {
  (void)dof;
  if (mu == 0 || mu == 1) {
    throw std::invalid_argument(
        "linearized_stokes: S0/S1 have no strong-auxiliary linear form; "
        "use the exact quadratic observable");
  }
  if (mu != 2 && mu != 3) {
    throw std::invalid_argument("linearized_stokes: mu must be 0..3");
  }
  if (!(lo_amplitude > 0.0)) {
    throw std::invalid_argument("linearized_stokes: lo_amplitude must be > 0");
  }
  const double angle = (mu == 2) ? lo_phase : lo_phase + M_PI / 2.0;
  QuadraticObservable obs =
      QuadraticObservable::quadrature(num_modes, signal_mode, angle);
  obs *= 2.0 * lo_amplitude;
  return obs;
}

namespace {

DetectionResult photocurrent_stats(const GaussianState& state,
                                   const QuadraticObservable& obs,
                                   const std::vector<int>& all_modes) {
  DetectionResult out;
  const ObservableStats stats = quadratic_stats(state, obs);
  out.mean = stats.mean;
  out.variance = stats.variance;
  double qnl = 0.0;
  for (int m : all_modes) qnl += std::norm(state.mode_amplitude(m));
  out.qnl_variance = qnl;
  if (qnl > 0.0) out.db_vs_qnl = to_decibel(out.variance, qnl);
  return out;
}

}  // namespace

DetectionResult direct_detection(const GaussianState& state,
                                 const std::vector<int>& modes) {
  check_modes(modes, state.num_modes(), "direct_detection");
  return photocurrent_stats(
      state, QuadraticObservable::photon_number(state.num_modes(), modes), modes);
}

DetectionResult sum_difference(const GaussianState& state,
                               const std::vector<int>& modes_a,
                               const std::vector<int>& modes_b, int sign) {
  check_modes(modes_a, state.num_modes(), "sum_difference");
  check_modes(modes_b, state.num_modes(), "sum_difference");
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("sum_difference: sign must be +1 or -1");
  }
  for (int m : modes_a) {
    if (std::find(modes_b.begin(), modes_b.end(), m) != modes_b.end()) {
      throw std::invalid_argument("sum_difference: subsets must be disjoint");
    }
  }
  QuadraticObservable obs =
      QuadraticObservable::photon_number(state.num_modes(), modes_a);
  QuadraticObservable nb =
      QuadraticObservable::photon_number(state.num_modes(), modes_b);
  nb *= static_cast<double>(sign);
  obs += nb;
  std::vector<int> all = modes_a;
  all.insert(all.end(), modes_b.begin(), modes_b.end());
  return photocurrent_stats(state, obs, all);
}

double to_decibel(double variance, double reference) {
  if (!(variance > 0.0) || !(reference > 0.0)) {
    throw std::invalid_argument("to_decibel: arguments must be positive");
  }
  return 10.0 * std::log10(variance / reference);
}

}  // namespace cvbeam
