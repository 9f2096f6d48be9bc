// Photodetection emulation for the bright squeezed cylindrically polarized
// states: direct detection of the full beam, or sum/difference photocurrents
// of the two polarization-split arms, with symmetric transmission loss and a
// one-parameter fit that drives the noise level to a requested dB target.
#pragma once

#include <string>

#include "cvbeam/observables.hpp"
#include "cvbeam/states.hpp"

namespace cvbeam {

enum class DetectionScheme { Direct, Sum, Difference };

std::string to_string(DetectionScheme scheme);
DetectionScheme parse_detection_scheme(const std::string& name);

// Bright state of the given kind with real squeezing s, attenuated by the
// same transmission eta on both arms before detection.
struct DetectionModel {
  ModeKind kind = ModeKind::Azimuthal;
  Complex alpha{3.0, 0.0};
  double s = 0.0;
  double eta = 1.0;
  DetectionScheme scheme = DetectionScheme::Direct;
};

GaussianState build_detection_state(const DetectionModel& model);
DetectionResult run_detection(const DetectionModel& model);

enum class FitParameter { Squeezing, Transmission };

std::string to_string(FitParameter parameter);
FitParameter parse_fit_parameter(const std::string& name);

// When the target is unreachable, `reachable` is false, `value` holds the
// parameter at the closest achievable level and `achieved_db` that level.
struct FitResult {
  bool reachable;
  double value;
  double achieved_db;
  DetectionResult result;
};

// Scans the parameter range ([0, max_s] or [~0, 1]) for a bracket around the
// target and bisects to within tol_db. All other model fields stay fixed.
FitResult fit_db(const DetectionModel& model, FitParameter parameter,
                 double target_db, double tol_db = 1e-6, double max_s = 5.0);

}  // namespace cvbeam
