// JSON bindings for the library's value types. Complex numbers appear as
// [re, im] pairs, matrices in row-major order; fields without a defined
// value (dark-beam dB, unknown squeezing) serialize as null.
#pragma once

#include <json.hpp>

#include "cvbeam/detection.hpp"
#include "cvbeam/entanglement.hpp"
#include "cvbeam/gaussian_state.hpp"
#include "cvbeam/observables.hpp"
#include "cvbeam/states.hpp"
#include "cvbeam/vector_modes.hpp"

namespace cvbeam {

void to_json(nlohmann::json& j, const GaussianState& state);
void from_json(const nlohmann::json& j, GaussianState& state);

void to_json(nlohmann::json& j, const VectorModeCoefficients& c);
VectorModeCoefficients vector_mode_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const SchmidtDecomposition& d);

void to_json(nlohmann::json& j, const CylindricalStateSpec& spec);
void from_json(const nlohmann::json& j, CylindricalStateSpec& spec);

void to_json(nlohmann::json& j, const DetectionResult& result);
void from_json(const nlohmann::json& j, DetectionResult& result);

void to_json(nlohmann::json& j, const EntanglementReport& report);
void from_json(const nlohmann::json& j, EntanglementReport& report);

}  // namespace cvbeam
