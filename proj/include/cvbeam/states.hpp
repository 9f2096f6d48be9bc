// Bright squeezed cylindrically polarized two-mode Gaussian states, built
// either by squeezing and displacing the composite mode directly or through
// the equivalent factored sequence of two-mode and single-mode operations.
//
// Mode order is (x01, y10): mode 0 is the x-polarized psi_01 component and
// mode 1 the y-polarized psi_10 component. The azimuthal composite mode is
// a_A = (-a_0 + a_1)/sqrt(2); the radial one is a_R = (a_0 + a_1)/sqrt(2).
#pragma once

#include <string>

#include "cvbeam/gaussian_state.hpp"
#include "cvbeam/vector_modes.hpp"

namespace cvbeam {

enum class Construction { Composite, Factored };

std::string to_string(Construction construction);
Construction parse_construction(const std::string& name);

struct CylindricalStateSpec {
  ModeKind kind = ModeKind::Azimuthal;
  Complex alpha{0.0, 0.0};
  Complex zeta{0.0, 0.0};
  Construction construction = Construction::Composite;
};

// Unitary mixing the (x01, y10) modes so that row 0 becomes the composite
// mode of the given kind. Real, symmetric and involutory.
Eigen::Matrix2cd composite_basis_unitary(ModeKind kind);

// Composite: rotate into the composite basis, squeeze mode 0 by zeta and
// displace it by alpha, rotate back. Factored: two-mode squeeze by
// -zeta/2 (azimuthal) or +zeta/2 (radial), then per mode squeeze by zeta/2
// and displace by -alpha/sqrt(2) on mode 0, +alpha/sqrt(2) on mode 1
// (radial: +alpha/sqrt(2) on both). |zeta| above the guard throws.
GaussianState build(const CylindricalStateSpec& spec, double max_abs_zeta = 5.0);

// Largest element-wise deviation between the two constructions, over both
// the mean vector and the covariance matrix. The identity is exact, so any
// nonzero return is numerical error.
double verify_factorization(ModeKind kind, Complex alpha, Complex zeta);

}  // namespace cvbeam
