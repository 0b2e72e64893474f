#pragma once

#include <string>
#include <string_view>

#include "medcrit/model.hpp"

namespace medcrit {

/// Parses a model document. SCM documents carry `variables`, `edges`,
/// `noise`, `tables` and `exposure_levels`; a document with
/// `"kind": "ffrcistg"` carries an explicit counterfactual joint instead.
/// Probabilities may be numbers or decimal strings. Throws ParseError on
/// malformed input; semantic checks are left to `validate`.
[[nodiscard]] CausalModel parse_model_json(std::string_view text);

[[nodiscard]] std::string model_to_json(const CausalModel& model, int indent = 2);

/// Reads and parses a model file; IoError if the file cannot be read.
[[nodiscard]] CausalModel load_model_file(const std::string& path);

}  // namespace medcrit
