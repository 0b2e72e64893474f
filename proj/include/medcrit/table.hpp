#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "medcrit/criteria.hpp"
#include "medcrit/effects.hpp"
#include "medcrit/identify.hpp"
#include "medcrit/sample.hpp"

namespace medcrit {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Doubles as %.12g, booleans as TRUE/FALSE.
[[nodiscard]] std::string format_cell(const Cell& c);

/// Rectangular result table. Report tables have the columns (key, value).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::string key, Cell value) { rows.push_back({Cell(std::move(key)), std::move(value)}); }

    /// Columns left-aligned and separated by two spaces, with a header line
    /// unless the table is a plain key/value report.
    [[nodiscard]] std::string to_text() const;
    /// Header row then data rows; cells with commas or quotes are quoted.
    [[nodiscard]] std::string to_csv() const;
};

[[nodiscard]] Table key_value_table();

[[nodiscard]] Table effects_table(const EffectReport& r);

/// Identification functionals on the observed law next to the enumerated
/// effects they target, plus the assumption checks.
[[nodiscard]] Table identify_table(const CounterfactualTable& t);

[[nodiscard]] Table criteria_table(const NullStatus& s, const std::vector<CriterionVerdict>& verdicts);

[[nodiscard]] Table reproduction_table(const ReproductionRecord& r);

/// One row per sweep point: parameters, effect value, statuses, refutations.
[[nodiscard]] Table sweep_table(const std::vector<SweepRow>& rows);

[[nodiscard]] Table estimate_table(const Estimate& e, std::size_t n_rows);

}  // namespace medcrit
