#include "cvbeam/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvbeam {

std::string to_string(DetectionScheme scheme) {
  switch (scheme) {
    case DetectionScheme::Direct: return "direct";
    case DetectionScheme::Sum: return "sum";
    case DetectionScheme::Difference: return "difference";
  }
  throw std::logic_error("unknown detection scheme");
}

DetectionScheme parse_detection_scheme(const std::string& name) {
  if (name == "direct") return DetectionScheme::Direct;
  if (name == "sum") return DetectionScheme::Sum;
  if (name == "difference") return DetectionScheme::Difference;
  throw std::invalid_argument("unknown detection scheme \"" + name + "\"");
}

std::string to_string(FitParameter parameter) {
  switch (parameter) {
    case FitParameter::Squeezing: return "s";
    case FitParameter::Transmission: return "eta";
  }
  throw std::logic_error("unknown fit parameter");
}

FitParameter parse_fit_parameter(const std::string& name) {
  if (name == "s") return FitParameter::Squeezing;
  if (name == "eta") return FitParameter::Transmission;
  throw std::invalid_argument("unknown fit parameter \"" + name + "\"");
}

GaussianState build_detection_state(const DetectionModel& model) {
  const CylindricalStateSpec spec{model.kind, model.alpha,
                                  Complex(model.s, 0.0),
                                  Construction::Composite};
  GaussianState state = build(spec);
  state = attenuate(state, 0, model.eta);
  state = attenuate(state, 1, model.eta);
  return state;
}

DetectionResult run_detection(const DetectionModel& model) {
  const GaussianState state = build_detection_state(model);
  switch (model.scheme) {
    case DetectionScheme::Direct:
      return direct_detection(state, {0, 1});
    case DetectionScheme::Sum:
      return sum_difference(state, {0}, {1}, +1);
    case DetectionScheme::Difference:
      return sum_difference(state, {0}, {1}, -1);
  }
  throw std::logic_error("unknown detection scheme");
}

namespace {

double db_at(DetectionModel model, FitParameter parameter, double value) {
  if (parameter == FitParameter::Squeezing) {
    model.s = value;
  } else {
    model.eta = value;
  }
  const DetectionResult result = run_detection(model);
  if (!result.db_vs_qnl.has_value()) {
    throw std::invalid_argument(
        "dB fit needs a bright beam (nonzero mean amplitude)");
  }
  return *result.db_vs_qnl;
}

}  // namespace

FitResult fit_db(const DetectionModel& model, FitParameter parameter,
                 double target_db, double tol_db, double max_s) {
  const double lo = parameter == FitParameter::Squeezing ? 0.0 : 1e-9;
  const double hi = parameter == FitParameter::Squeezing ? max_s : 1.0;
  const int scan_points = 2000;

  // Bracket the target on a fine grid; track the closest level seen in case
  // the target is unreachable.
  double best_value = lo;
  double best_db = db_at(model, parameter, lo);
  double prev_value = lo;
  double prev_db = best_db;
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i <= scan_points; ++i) {
    const double value = lo + (hi - lo) * i / scan_points;
    const double db = db_at(model, parameter, value);
    if (std::abs(db - target_db) < std::abs(best_db - target_db)) {
      best_db = db;
      best_value = value;
    }
    if ((prev_db - target_db) * (db - target_db) <= 0.0) {
      bracket_lo = prev_value;
      bracket_hi = value;
      break;
    }
    prev_value = value;
    prev_db = db;
  }

  DetectionModel fitted = model;
  if (std::isnan(bracket_lo)) {
    if (parameter == FitParameter::Squeezing) {
      fitted.s = best_value;
    } else {
      fitted.eta = best_value;
    }
    return {false, best_value, best_db, run_detection(fitted)};
  }

  double a = bracket_lo;
  double b = bracket_hi;
  double fa = db_at(model, parameter, a) - target_db;
  double value = a;
  for (int iter = 0; iter < 200; ++iter) {
    value = 0.5 * (a + b);
    const double f = db_at(model, parameter, value) - target_db;
    if (std::abs(f) <= tol_db) break;
    if (fa * f <= 0.0) {
      b = value;
    } else {
      a = value;
      fa = f;
    }
  }
  if (parameter == FitParameter::Squeezing) {
    fitted.s = value;
  } else {
    fitted.eta = value;
  }
  return {true, value, db_at(model, parameter, value), run_detection(fitted)};
}

}  // namespace cvbeam
