#ifndef AGOF_JSON_IO_HPP
#define AGOF_JSON_IO_HPP

#include <string_view>

#include <json.hpp>

#include "agof/agof_test.hpp"
#include "agof/distributions.hpp"

namespace agof {

/// {"family":"normal","mu":..,"sigma":..}, {"family":"exponential","theta":..},
/// {"family":"weibull","shape":..,"scale":..}, {"family":"dirac","mu":..},
/// {"family":"gaussian_mixture","k":2,"weights":[..],"means":[..],"sds":[..]}
nlohmann::json model_to_json(const FittedModel& model);
/// Inverse of model_to_json; throws INPUT_ERROR on a malformed object.
FittedModel model_from_json(const nlohmann::json& j);

/// Compact text form "family:v1,v2,..." with values in Params layout
/// (e.g. "weibull:2,1", "gaussian_mixture:0.8,0.2,0,2,1,2"); a string
/// starting with '{' is parsed as the JSON encoding instead.
FittedModel parse_model_spec(std::string_view spec);

nlohmann::json report_to_json(const TestReport& report);

}  // namespace agof

#endif  // AGOF_JSON_IO_HPP
