#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "medcrit/effects.hpp"
#include "medcrit/errors.hpp"

namespace medcrit {

/// Direction in which every unit's indirect contrast Y{a', M(a)} - Y{a', M(a*)}
/// points: (a) nonincreasing, (b) nondecreasing.
enum class Direction { Nonincreasing, Nondecreasing, Both, Neither };

[[nodiscard]] std::string_view direction_name(Direction d) noexcept;

struct Witness {
    std::string property;  // which statement the unit violates
    std::size_t unit = 0;  // index into CounterfactualTable::units
    double weight = 0.0;
    std::string detail;
};

struct NullStatus {
    bool sharp_null = true;
    bool sharper_null = true;
    /// Common direction over both a'; per-a' directions are kept alongside
    /// (index 0 for a*, 1 for a).
    Direction monotonicity = Direction::Both;
    std::array<Direction, 2> monotonicity_by_exposure{Direction::Both, Direction::Both};
    /// Overlap hypothesis: some unit with M(a) != M(a*) and some unit with
    /// Y(a, m) != Y(a, m') imply some unit with Y{a, M(a*)} != Y{a, M(a)}.
    bool overlap_condition = true;
    std::vector<Witness> witnesses;
};

[[nodiscard]] NullStatus null_status(const CounterfactualTable& t);

enum class Criterion { SharpNull, SharperNull, Monotonicity };

[[nodiscard]] std::string_view criterion_name(Criterion c) noexcept;

struct CriterionVerdict {
    std::string effect_name;
    double effect_value = 0.0;
    Criterion criterion = Criterion::SharpNull;
    bool premise_holds = false;      // the null or monotonicity premise holds in this model
    bool satisfied_here = true;      // the value is consistent with the criterion
    bool refutes_criterion = false;  // premise holds and the value violates it
};

inline constexpr double kNullTolerance = 1e-9;

/// The indirect-effect measures of a report, by display name:
/// NIE, NIE^R, PE(m) for each m, and NIE^R_L, NIE^R_La, H when present.
[[nodiscard]] std::vector<std::pair<std::string, double>> indirect_measures(const EffectReport& r);

[[nodiscard]] std::vector<CriterionVerdict> criterion_verdicts(const NullStatus& status, const EffectReport& r,
                                                               double tolerance = kNullTolerance);

/// E{Y(a,m') - Y(a,m'') - Y(a*,m') + Y(a*,m'') | M(a*), C} = 0 on every
/// positive-probability stratum, for all m', m''.
[[nodiscard]] bool no_interaction_check(const CounterfactualTable& t, double tolerance = kNullTolerance);

/// Every unit has Y(a*, m) != Y(a*, m') or Y(a, m) != Y(a, m') for all m != m'.
[[nodiscard]] bool m_always_affects_y_check(const CounterfactualTable& t);

// Reproduction of the closed forms behind the counterexamples.

enum class ClosedForm { T1, T2, T3, S1, PE };

[[nodiscard]] std::string_view closed_form_name(ClosedForm t) noexcept;
[[nodiscard]] ClosedForm parse_closed_form(std::string_view text);

using ParamMap = std::map<std::string, double>;

struct ReproductionRecord {
    std::string check;
    ParamMap params;  // effective parameters, defaults filled in
    std::string quantity;
    double closed_form = 0.0;
    double enumerated = 0.0;
    double abs_difference = 0.0;
    double tolerance = 0.0;
    std::vector<std::pair<std::string, double>> values;  // supporting quantities
    /// (name, observed, expected); expected empty when only reported.
    struct Status {
        std::string name, observed, expected;
    };
    std::vector<Status> statuses;
    bool ok = true;
};

/// Carries the full record so callers can still print it.
class ReproductionFailure : public Error {
public:
    explicit ReproductionFailure(ReproductionRecord record);
    [[nodiscard]] const ReproductionRecord& record() const noexcept { return record_; }

private:
    ReproductionRecord record_;
};

/// Builds the model for `check` from `params` (unknown keys: DomainError),
/// compares closed form and enumeration, and checks the statuses the
/// construction is meant to exhibit. Throws ReproductionFailure on mismatch.
[[nodiscard]] ReproductionRecord reproduce(ClosedForm check, const ParamMap& params = {});

// Parameter sweeps.

struct Family {
    std::string name;
    std::vector<std::string> params;  // grid axes; empty for seeded families
    bool seeded = false;
    /// nullopt-like: returns false when the grid point lies outside the domain.
    std::function<bool(const std::vector<double>& point, CausalModel& out)> make;
};

[[nodiscard]] const std::vector<Family>& families();
[[nodiscard]] const Family& find_family(std::string_view name);

struct Selector {
    enum class Kind { Nie, NieR, Pe, NieRL, NieRLa, H };
    Kind kind = Kind::Nie;
    Level m = 0;
};

/// Accepts NIE, NIE^R, PE(m), NIE^R_L, NIE^R_La, H (case-insensitive, and
/// nie_r style spellings).
[[nodiscard]] Selector parse_selector(std::string_view text);
[[nodiscard]] std::string selector_name(const Selector& s);

struct SearchOptions {
    int grid = 21;  // points per axis, endpoints included
    double lo = 0.05;
    double hi = 0.95;
    int draws = 50;  // seeded families
    std::uint64_t seed = 0;
    double tolerance = kNullTolerance;
};

struct SweepRow {
    ParamMap params;
    std::string effect;
    bool has_value = false;  // false when the effect is undefined at this point
    double value = 0.0;
    NullStatus status;
    std::vector<Criterion> refuted;
};

[[nodiscard]] std::vector<SweepRow> sweep(const Family& family, const SearchOptions& options, const Selector& selector);

/// Rows of `sweep` that refute some criterion, by decreasing |value|.
[[nodiscard]] std::vector<SweepRow> search_violations(const Family& family, const SearchOptions& options,
                                                      const Selector& selector);

}  // namespace medcrit
