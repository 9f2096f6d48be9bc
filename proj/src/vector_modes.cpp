#include "cvbeam/vector_modes.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace cvbeam {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_unitary2(const Eigen::Matrix2cd& u, const char* what) {
  const double dev = (u * u.adjoint() - Eigen::Matrix2cd::Identity())
                         .cwiseAbs()
                         .maxCoeff();
  if (dev > 1e-10) {
    throw std::invalid_argument(std::string(what) +
                                " is not unitary, max |u u* - 1| = " +
                                std::to_string(dev));
  }
}

}  // namespace

std::string to_string(PolBasis basis) {
  switch (basis) {
    case PolBasis::LinearXY: return "linear_xy";
    case PolBasis::Circular: return "circular";
    case PolBasis::Custom: return "custom";
  }
  throw std::logic_error("unknown polarization basis");
}

std::string to_string(SpaBasis basis) {
  switch (basis) {
    case SpaBasis::HG1001: return "HG_10_01";
    case SpaBasis::OAMPM: return "OAM_pm";
    case SpaBasis::Custom: return "custom";
  }
  throw std::logic_error("unknown spatial basis");
}

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::Radial: return "radial";
    case ModeKind::Azimuthal: return "azimuthal";
  }
  throw std::logic_error("unknown mode kind");
}

PolBasis parse_pol_basis(const std::string& name) {
  if (name == "linear_xy") return PolBasis::LinearXY;
  if (name == "circular") return PolBasis::Circular;
  if (name == "custom") return PolBasis::Custom;
  throw std::invalid_argument("unknown polarization basis \"" + name + "\"");
}

SpaBasis parse_spa_basis(const std::string& name) {
  if (name == "HG_10_01") return SpaBasis::HG1001;
  if (name == "OAM_pm") return SpaBasis::OAMPM;
  if (name == "custom") return SpaBasis::Custom;
  throw std::invalid_argument("unknown spatial basis \"" + name + "\"");
}

ModeKind parse_mode_kind(const std::string& name) {
  if (name == "radial") return ModeKind::Radial;
  if (name == "azimuthal") return ModeKind::Azimuthal;
  throw std::invalid_argument("unknown mode kind \"" + name + "\"");
}

VectorModeCoefficients::VectorModeCoefficients(const Eigen::Matrix2cd& c,
                                               PolBasis pol, SpaBasis spa)
    : coeffs(c), pol_basis(pol), spa_basis(spa) {
  const double norm = coeffs.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "vector mode coefficients must have Frobenius norm 1, got " +
        std::to_string(norm));
  }
}

VectorModeCoefficients standard_mode(ModeKind kind) {
  Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
  if (kind == ModeKind::Radial) {
    c(0, 0) = kInvSqrt2;   // x psi_10
    c(1, 1) = kInvSqrt2;   // y psi_01
  } else {
    c(0, 1) = -kInvSqrt2;  // -x psi_01
    c(1, 0) = kInvSqrt2;   // y psi_10
  }
  return VectorModeCoefficients(c, PolBasis::LinearXY, SpaBasis::HG1001);
}

SchmidtDecomposition schmidt_decompose(const Eigen::Matrix2cd& coeffs) {
  if (coeffs.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("cannot Schmidt-decompose a zero matrix");
  }
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(coeffs);
  Eigen::Vector2d lambdas = svd.singularValues().array().square();
  lambdas /= lambdas.sum();
  const double rank = 1.0 / lambdas.squaredNorm();
  return {lambdas, rank};
}

SchmidtDecomposition schmidt_decompose(const VectorModeCoefficients& c) {
  return schmidt_decompose(c.coeffs);
}

Eigen::Matrix2cd circular_basis_change() {
  Eigen::Matrix2cd u;
  u << Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2),
       Complex(kInvSqrt2, 0.0), Complex(0.0, -kInvSqrt2);
  return u;
}

Eigen::Matrix2cd oam_basis_change() { return circular_basis_change(); }

VectorModeCoefficients transform_bases(const VectorModeCoefficients& c,
                                       const Eigen::Matrix2cd& u_pol,
                                       const Eigen::Matrix2cd& w_spa,
                                       PolBasis pol_label,
                                       SpaBasis spa_label) {
  check_unitary2(u_pol, "polarization basis change");
  check_unitary2(w_spa, "spatial basis change");
  const Eigen::Matrix2cd out = u_pol.conjugate() * c.coeffs * w_spa.adjoint();
  return VectorModeCoefficients(out, pol_label, spa_label);
}

bool is_structurally_separable(const VectorModeCoefficients& c, double tol) {
  return schmidt_decompose(c).schmidt_rank <= 1.0 + tol;
}

HermiteGaussMode::HermiteGaussMode(int n_in, int m_in, double waist_in)
    : n(n_in), m(m_in), waist(waist_in) {
  if (n < 0 || n > 1 || m < 0 || m > 1) {
    throw std::invalid_argument("only first-order Hermite-Gauss modes (indices 0, 1)");
  }
  if (!(waist > 0.0)) {
    throw std::invalid_argument("waist must be positive");
  }
}

namespace {

// L2-normalized 1D Hermite-Gauss factor, orders 0 and 1 only.
double hg1d(int order, double x, double w) {
  const double pref = std::pow(2.0 / M_PI, 0.25);
  const double gauss = std::exp(-x * x / (w * w));
  if (order == 0) return pref / std::sqrt(w) * gauss;
  return pref / std::sqrt(2.0 * w) * (2.0 * std::sqrt(2.0) * x / w) * gauss;
}

}  // namespace

double HermiteGaussMode::amplitude(double x, double y) const {
  return hg1d(n, x, waist) * hg1d(m, y, waist);
}

Eigen::Vector2cd evaluate_field(const VectorModeCoefficients& c, double x,
                                double y, double waist) {
  if (c.pol_basis != PolBasis::LinearXY || c.spa_basis != SpaBasis::HG1001) {
    throw std::invalid_argument(
        "field evaluation needs linear_xy / HG_10_01 coefficients; "
        "transform the bases first");
  }
  const double psi10 = HermiteGaussMode(1, 0, waist).amplitude(x, y);
  const double psi01 = HermiteGaussMode(0, 1, waist).amplitude(x, y);
  Eigen::Vector2cd field;
  field(0) = c.coeffs(0, 0) * psi10 + c.coeffs(0, 1) * psi01;
  field(1) = c.coeffs(1, 0) * psi10 + c.coeffs(1, 1) * psi01;
  return field;
}

IntensityImage render_intensity(const VectorModeCoefficients& c, int grid_size,
                                double extent, double waist) {
  if (grid_size < 16) {
    throw std::invalid_argument("grid size must be at least 16");
  }
  if (!(extent > 0.0)) {
    throw std::invalid_argument("extent must be positive");
  }
  IntensityImage image{extent, Eigen::MatrixXd::Zero(grid_size, grid_size)};
  const double step = 2.0 * extent / grid_size;
  for (int row = 0; row < grid_size; ++row) {
    const double y = extent - (row + 0.5) * step;
    for (int col = 0; col < grid_size; ++col) {
      const double x = -extent + (col + 0.5) * step;
      image.pixels(row, col) = evaluate_field(c, x, y, waist).squaredNorm();
    }
  }
  const double peak = image.pixels.maxCoeff();
  if (peak > 0.0) image.pixels /= peak;
  return image;
}

void write_pgm(const IntensityImage& image, std::ostream& out) {
  const int rows = static_cast<int>(image.pixels.rows());
  const int cols = static_cast<int>(image.pixels.cols());
  out << "P5\n" << cols << " " << rows << "\n255\n";
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const double v = std::min(1.0, std::max(0.0, image.pixels(row, col)));
      const unsigned char byte =
          static_cast<unsigned char>(std::lround(v * 255.0));
      out.put(static_cast<char>(byte));
    }
  }
  if (!out) {
    throw std::runtime_error("failed to write PGM stream");
  }
}

void write_pgm(const IntensityImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open \"" + path + "\" for writing");
  }
  write_pgm(image, out);
}

}  // namespace cvbeam
