#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "cvbeam/gaussian_state.hpp"
#include "cvbeam/observables.hpp"

// Brute-force reference pipeline: the same preparation recipe is evaluated by
// applying operators in a truncated number basis to an explicit state vector.
// It shares only the Recipe data type with the covariance-matrix pipeline and
// serves as the ground truth in equivalence tests.

namespace cvbeam {

struct DisplaceOp {
  int mode;
  Complex alpha;
};
struct SqueezeOp {
  int mode;
  Complex zeta;
};
struct TwoModeSqueezeOp {
  int mode_i;
  int mode_j;
  Complex xi;
};
struct ModeUnitaryOp {
  Eigen::MatrixXcd u;
};

using RecipeOp =
    std::variant<DisplaceOp, SqueezeOp, TwoModeSqueezeOp, ModeUnitaryOp>;

struct Recipe {
  int num_modes = 1;
  std::vector<RecipeOp> ops;
};

// Covariance-matrix evaluation of a recipe, starting from vacuum.
GaussianState apply_recipe(const Recipe& recipe);

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedRecipe : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OracleStats {
  double mean = 0.0;
  double variance = 0.0;
  int n_max_used = 0;
};

// Number-basis evaluation. Supports at most 2 modes (UnsupportedRecipe
// otherwise) and requires n_max >= 30. Results are recomputed at n_max + 10;
// if mean or variance moves by more than 1e-8 (relative to max(|value|, 1))
// the truncation has not converged and TruncationError is thrown. Callers
// should keep |alpha| <= 2 and squeeze parameters <= 0.6 for n_max ~ 30-40.
OracleStats fock_oracle_stats(const Recipe& recipe,
                              const QuadraticObservable& obs, int n_max = 40);

// Symmetrized covariance 1/2<{ΔA, ΔB}> by the same brute-force route.
double fock_oracle_covariance(const Recipe& recipe,
                              const QuadraticObservable& a,
                              const QuadraticObservable& b, int n_max = 40);

}  // namespace cvbeam
