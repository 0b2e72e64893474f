#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "medcrit/criteria.hpp"
#include "medcrit/model.hpp"

namespace medcrit {

/// t1, t2, t3, pe, additive, separable, random-no-l, random-l,
/// always-affects, iv.
[[nodiscard]] const std::vector<std::string>& builtin_names();
[[nodiscard]] bool is_builtin(std::string_view name);

/// Factory model with defaults for missing parameters; DomainError for an
/// unknown name or parameter. Flags (covariate, l, ...) are 0 or 1.
[[nodiscard]] CausalModel builtin_model(std::string_view name, const ParamMap& params = {});

/// "k=v;k=v" (commas also accepted). ParseError on malformed pairs.
[[nodiscard]] ParamMap parse_params(std::string_view text);

}  // namespace medcrit
