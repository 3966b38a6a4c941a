#pragma once

#include <json.hpp>

#include "pointspec/measure.hpp"
#include "pointspec/spectral.hpp"

namespace pointspec {

nlohmann::json to_json(const PointMeasure& mu);
PointMeasure point_measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpectrumResult& result, bool include_basis = true);

}  // namespace pointspec
