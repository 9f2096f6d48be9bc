// Classical vector-beam structure: 2x2 complex coefficient matrices over a
// polarization basis (rows) and a first-order spatial-mode basis (columns),
// with Schmidt analysis, basis changes, field evaluation and rendering.
//
// Default bases: rows (x, y) linear polarization, columns (psi_10, psi_01)
// Hermite-Gauss. All fields are evaluated in the z = 0 transverse plane.
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "cvbeam/gaussian_state.hpp"

namespace cvbeam {

enum class PolBasis { LinearXY, Circular, Custom };
enum class SpaBasis { HG1001, OAMPM, Custom };
enum class ModeKind { Radial, Azimuthal };

std::string to_string(PolBasis basis);
std::string to_string(SpaBasis basis);
std::string to_string(ModeKind kind);
PolBasis parse_pol_basis(const std::string& name);
SpaBasis parse_spa_basis(const std::string& name);
ModeKind parse_mode_kind(const std::string& name);

// Normalized beam: Frobenius norm of coeffs must be 1 to 1e-12.
struct VectorModeCoefficients {
  Eigen::Matrix2cd coeffs;
  PolBasis pol_basis;
  SpaBasis spa_basis;

  VectorModeCoefficients(const Eigen::Matrix2cd& c,
                         PolBasis pol = PolBasis::LinearXY,
                         SpaBasis spa = SpaBasis::HG1001);
};

// lambdas are the squared singular values of the coefficient matrix, sorted
// non-increasing and summing to 1; schmidt_rank = 1 / sum(lambda^2).
struct SchmidtDecomposition {
  Eigen::Vector2d lambdas;
  double schmidt_rank;
};

// Radial: (x psi_10 + y psi_01)/sqrt(2). Azimuthal: (-x psi_01 + y psi_10)/sqrt(2).
VectorModeCoefficients standard_mode(ModeKind kind);

SchmidtDecomposition schmidt_decompose(const Eigen::Matrix2cd& coeffs);
SchmidtDecomposition schmidt_decompose(const VectorModeCoefficients& c);

// Rows of the returned matrix expand the new basis vectors in the old basis:
// e_+/- = (x -/+ i y)/sqrt(2) and phi_+/- = (psi_10 +/- i psi_01)/sqrt(2)
// share the same numeric matrix.
Eigen::Matrix2cd circular_basis_change();
Eigen::Matrix2cd oam_basis_change();

// Re-expands the same physical field after changing both bases; singular
// values are preserved. u_pol and w_spa must be unitary to 1e-10. The label
// arguments name the new bases for bookkeeping only.
VectorModeCoefficients transform_bases(const VectorModeCoefficients& c,
                                       const Eigen::Matrix2cd& u_pol,
                                       const Eigen::Matrix2cd& w_spa,
                                       PolBasis pol_label = PolBasis::Custom,
                                       SpaBasis spa_label = SpaBasis::Custom);

// True iff the Schmidt number is <= 1 + tol, i.e. the field factors into a
// single polarization times a single spatial profile.
bool is_structurally_separable(const VectorModeCoefficients& c, double tol);

// First-order Hermite-Gauss transverse profile at z = 0, L2-normalized.
struct HermiteGaussMode {
  int n;
  int m;
  double waist;

  HermiteGaussMode(int n, int m, double waist);
  double amplitude(double x, double y) const;
};

// (E_x, E_y) at a transverse point; requires linear/HG basis labels.
Eigen::Vector2cd evaluate_field(const VectorModeCoefficients& c, double x,
                                double y, double waist);

// Square intensity map |E_x|^2 + |E_y|^2, max-normalized to [0, 1].
// pixels(row, col): row 0 is the top of the image (largest y), columns run
// left to right; sample points are pixel centers on a +/- extent square.
struct IntensityImage {
  double extent;
  Eigen::MatrixXd pixels;
};

IntensityImage render_intensity(const VectorModeCoefficients& c,
                                int grid_size = 256, double extent = 3.0,
                                double waist = 1.0);

void write_pgm(const IntensityImage& image, std::ostream& out);
void write_pgm(const IntensityImage& image, const std::string& path);

}  // namespace cvbeam
