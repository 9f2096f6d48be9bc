#include "cvbeam/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <cmath>
#include <sstream>

namespace cvbeam {

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;
using VectorC = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<Complex>;

SparseC annihilation(int dim) {
  std::vector<Triplet> trip;
  trip.reserve(dim);
  for (int n = 1; n < dim; ++n) {
    trip.emplace_back(n - 1, n, Complex(std::sqrt(static_cast<double>(n)), 0.0));
  }
  SparseC a(dim, dim);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SparseC sparse_identity(int dim) {
  SparseC id(dim, dim);
  id.setIdentity();
  return id;
}

SparseC kron(const SparseC& a, const SparseC& b) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseC::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseC::InnerIterator ib(b, kb); ib; ++ib) {
          trip.emplace_back(
              static_cast<int>(ia.row() * b.rows() + ib.row()),
              static_cast<int>(ia.col() * b.cols() + ib.col()),
              ia.value() * ib.value());
        }
      }
    }
  }
  SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

double one_norm(const SparseC& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseC::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

// exp(K) psi by scaling and squaring with a Taylor inner loop. K is
// anti-Hermitian for every recipe operator, so the result stays normalized.
void apply_exp(const SparseC& k, VectorC& psi) {
  const double norm1 = one_norm(k);
  int squarings = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const SparseC ks = k * Complex(scale, 0.0);
  const int reps = 1 << squarings;
  for (int rep = 0; rep < reps; ++rep) {
    VectorC term = psi;
    VectorC acc = psi;
    for (int order = 1; order <= 60; ++order) {
      term = (ks * term) / static_cast<double>(order);
      acc += term;
      if (term.norm() <= 1e-18 * acc.norm()) break;
    }
    psi = acc;
  }
}

// Anti-Hermitian log of a unitary via its spectral decomposition.
Eigen::MatrixXcd unitary_log(const Eigen::MatrixXcd& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("fock oracle: eigensolver failed on mode unitary");
  }
  Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(u.rows(), u.cols());
  for (int i = 0; i < u.rows(); ++i) {
    lam(i, i) = Complex(0.0, std::arg(solver.eigenvalues()(i)));
  }
  const Eigen::MatrixXcd v = solver.eigenvectors();
  Eigen::MatrixXcd h = v * lam * v.inverse();
  return 0.5 * (h - h.adjoint().eval());
}

struct FockSpace {
  int num_modes;
  int dim;
  std::vector<SparseC> a;       // annihilation per mode
  std::vector<SparseC> quads;   // interleaved x, p per mode

  FockSpace(int modes, int fock_dim) : num_modes(modes), dim(0) {
    const SparseC a1 = annihilation(fock_dim);
    const SparseC id = sparse_identity(fock_dim);
    if (modes == 1) {
      a.push_back(a1);
    } else {
      a.push_back(kron(a1, id));
      a.push_back(kron(id, a1));
    }
    dim = static_cast<int>(a[0].rows());
    const Complex mi(0.0, -1.0);
    for (int m = 0; m < modes; ++m) {
      SparseC adj = SparseC(a[m].adjoint());
      quads.push_back(SparseC(a[m] + adj));
      quads.push_back(SparseC(mi * (a[m] - adj)));
    }
  }
};

void validate_recipe(const Recipe& recipe) {
  if (recipe.num_modes < 1 || recipe.num_modes > 2) {
    throw UnsupportedRecipe("fock oracle: only 1- or 2-mode recipes supported");
  }
  auto check = [&](int mode) {
    if (mode < 0 || mode >= recipe.num_modes) {
      std::ostringstream os;
      os << "fock oracle: recipe references mode " << mode << " but has "
         << recipe.num_modes << " mode(s)";
      throw UnsupportedRecipe(os.str());
    }
  };
  for (const RecipeOp& op : recipe.ops) {
    if (const auto* d = std::get_if<DisplaceOp>(&op)) {
      check(d->mode);
    } else if (const auto* s = std::get_if<SqueezeOp>(&op)) {
      check(s->mode);
    } else if (const auto* t = std::get_if<TwoModeSqueezeOp>(&op)) {
      check(t->mode_i);
      check(t->mode_j);
      if (t->mode_i == t->mode_j) {
        throw UnsupportedRecipe("fock oracle: two-mode squeeze needs distinct modes");
      }
    } else if (const auto* m = std::get_if<ModeUnitaryOp>(&op)) {
      if (m->u.rows() != recipe.num_modes || m->u.cols() != recipe.num_modes) {
        throw UnsupportedRecipe("fock oracle: mode unitary size mismatch");
      }
    }
  }
}

VectorC prepare(const Recipe& recipe, const FockSpace& space) {
  VectorC psi = VectorC::Zero(space.dim);
  psi(0) = 1.0;
  for (const RecipeOp& op : recipe.ops) {
    SparseC k(space.dim, space.dim);
    if (const auto* d = std::get_if<DisplaceOp>(&op)) {
      const SparseC& a = space.a[d->mode];
      k = SparseC(d->alpha * SparseC(a.adjoint()) - std::conj(d->alpha) * a);
    } else if (const auto* s = std::get_if<SqueezeOp>(&op)) {
      const SparseC& a = space.a[s->mode];
      const SparseC a2 = SparseC(a * a);
      k = SparseC(0.5 * (std::conj(s->zeta) * a2 - s->zeta * SparseC(a2.adjoint())));
    } else if (const auto* t = std::get_if<TwoModeSqueezeOp>(&op)) {
      const SparseC aa = SparseC(space.a[t->mode_i] * space.a[t->mode_j]);
      k = SparseC(std::conj(t->xi) * aa - t->xi * SparseC(aa.adjoint()));
    } else if (const auto* m = std::get_if<ModeUnitaryOp>(&op)) {
      const Eigen::MatrixXcd h = unitary_log(m->u);
      for (int j = 0; j < recipe.num_modes; ++j) {
        for (int l = 0; l < recipe.num_modes; ++l) {
          if (std::abs(h(j, l)) == 0.0) continue;
          k += SparseC(h(j, l) * SparseC(SparseC(space.a[j].adjoint()) * space.a[l]));
        }
      }
    }
    apply_exp(k, psi);
  }
  psi /= psi.norm();
  return psi;
}

SparseC observable_matrix(const QuadraticObservable& obs, const FockSpace& space) {
  SparseC o(space.dim, space.dim);
  const int n2 = static_cast<int>(obs.g.size());
  for (int j = 0; j < n2; ++j) {
    for (int l = 0; l < n2; ++l) {
      if (obs.G(j, l) != 0.0) {
        o += SparseC(Complex(0.5 * obs.G(j, l), 0.0) *
                     SparseC(space.quads[j] * space.quads[l]));
      }
    }
    if (obs.g(j) != 0.0) {
      o += SparseC(Complex(obs.g(j), 0.0) * space.quads[j]);
    }
  }
  if (obs.c != 0.0) {
    o += SparseC(Complex(obs.c, 0.0) * sparse_identity(space.dim));
  }
  return o;
}

struct PreparedTruncations {
  FockSpace coarse;
  FockSpace fine;
  VectorC psi_coarse;
  VectorC psi_fine;
};

PreparedTruncations prepare_both(const Recipe& recipe, int n_max) {
  validate_recipe(recipe);
  if (n_max < 30) {
    throw std::invalid_argument("fock oracle: n_max must be >= 30");
  }
  PreparedTruncations out{FockSpace(recipe.num_modes, n_max + 1),
                          FockSpace(recipe.num_modes, n_max + 11),
                          VectorC(), VectorC()};
  out.psi_coarse = prepare(recipe, out.coarse);
  out.psi_fine = prepare(recipe, out.fine);
  return out;
}

double rel_change(double coarse, double fine) {
  return std::abs(fine - coarse) / std::max(1.0, std::abs(fine));
}

void require_converged(double coarse, double fine, const char* what) {
  if (rel_change(coarse, fine) > 1e-8) {
    std::ostringstream os;
    os << "fock oracle: " << what << " not converged in truncation ("
       << coarse << " vs " << fine << ")";
    throw TruncationError(os.str());
  }
}

struct MeanVar {
  double mean;
  double var;
};

MeanVar eval_stats(const VectorC& psi, const SparseC& o) {
  const VectorC opsi = o * psi;
  const double mean = psi.dot(opsi).real();
  const double second = opsi.squaredNorm();
  return {mean, second - mean * mean};
}

}  // namespace

GaussianState apply_recipe(const Recipe& recipe) {
  if (recipe.num_modes < 1) {
    throw std::invalid_argument("apply_recipe: num_modes < 1");
  }
  GaussianState state(recipe.num_modes);
  for (const RecipeOp& op : recipe.ops) {
    if (const auto* d = std::get_if<DisplaceOp>(&op)) {
      state = displace(state, d->mode, d->alpha);
    } else if (const auto* s = std::get_if<SqueezeOp>(&op)) {
      state = squeeze(state, s->mode, s->zeta);
    } else if (const auto* t = std::get_if<TwoModeSqueezeOp>(&op)) {
      state = two_mode_squeeze(state, t->mode_i, t->mode_j, t->xi);
    } else if (const auto* m = std::get_if<ModeUnitaryOp>(&op)) {
      state = apply_mode_unitary(state, m->u);
    }
  }
  return state;
}

OracleStats fock_oracle_stats(const Recipe& recipe,
                              const QuadraticObservable& obs, int n_max) {
  if (obs.num_modes() != recipe.num_modes) {
    throw std::invalid_argument("fock_oracle_stats: observable/recipe mode mismatch");
  }
  const PreparedTruncations both = prepare_both(recipe, n_max);
  const MeanVar coarse = eval_stats(both.psi_coarse,
                                    observable_matrix(obs, both.coarse));
  const MeanVar fine = eval_stats(both.psi_fine,
                                  observable_matrix(obs, both.fine));
  require_converged(coarse.mean, fine.mean, "mean");
  require_converged(coarse.var, fine.var, "variance");
  return {fine.mean, fine.var, n_max + 10};
}

double fock_oracle_covariance(const Recipe& recipe,
                              const QuadraticObservable& a,
                              const QuadraticObservable& b, int n_max) {
  if (a.num_modes() != recipe.num_modes || b.num_modes() != recipe.num_modes) {
    throw std::invalid_argument("fock_oracle_covariance: observable/recipe mode mismatch");
  }
  const PreparedTruncations both = prepare_both(recipe, n_max);
  auto cov_on = [&](const FockSpace& space, const VectorC& psi) {
    const SparseC oa = observable_matrix(a, space);
    const SparseC ob = observable_matrix(b, space);
    const VectorC pa = oa * psi;
    const VectorC pb = ob * psi;
    const double ma = psi.dot(pa).real();
    const double mb = psi.dot(pb).real();
    return pa.dot(pb).real() - ma * mb;
  };
  const double coarse = cov_on(both.coarse, both.psi_coarse);
  const double fine = cov_on(both.fine, both.psi_fine);
  require_converged(coarse, fine, "covariance");
  return fine;
}

}  // namespace cvbeam
