#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace medcrit {

/// Integer-coded level of a discrete variable or noise term.
using Level = int;

/// Role a variable plays in the mediation graph.
enum class Role {
    Covariate,          // C (pre-exposure)
    Exposure,           // A
    InducedConfounder,  // L, affected by A, confounds M -> Y
    Mediator,           // M
    Outcome,            // Y
    SeparableN,         // N, the component of A acting on M
    SeparableO,         // O, the component of A acting directly on Y
};

[[nodiscard]] std::string_view role_code(Role role) noexcept;
[[nodiscard]] std::optional<Role> parse_role(std::string_view code) noexcept;

struct VariableSpec {
    std::string name;
    std::vector<Level> support;  // ordered, duplicate-free
    Role role = Role::Covariate;
};

struct NoiseSpec {
    std::string name;
    std::map<Level, double> pmf;
};

struct TableRow {
    std::vector<Level> parents;  // values in the order of StructuralTable::parents
    Level noise = 0;
    Level value = 0;
};

/// Deterministic structural function of one variable, given as a total table over
/// (parent values, noise level).
struct StructuralTable {
    std::string variable;
    std::vector<std::string> parents;
    std::string noise;
    std::vector<TableRow> rows;
};

struct ExposureLevels {
    Level a_star = 0;
    Level a = 1;
};

/// Discrete structural causal model with one independent exogenous noise term
/// per variable.
struct Scm {
    std::string name;
    std::vector<VariableSpec> variables;
    std::map<std::string, std::vector<std::string>> edges;  // variable -> parents
    std::vector<NoiseSpec> noise;
    std::vector<StructuralTable> tables;
    ExposureLevels exposure_levels;

    [[nodiscard]] const VariableSpec* find_variable(std::string_view name) const noexcept;
    [[nodiscard]] const VariableSpec* find_role(Role role) const noexcept;
    [[nodiscard]] const NoiseSpec* find_noise(std::string_view name) const noexcept;
    [[nodiscard]] const StructuralTable* find_table(std::string_view variable) const noexcept;
};

/// The supported graph shapes: no L, exposure-induced confounder L, or the
/// separable N/O extension.
enum class Shape { NoConfounder, InducedConfounder, Separable };

[[nodiscard]] std::string_view shape_name(Shape shape) noexcept;

/// One atom of an explicitly specified counterfactual joint distribution.
/// Index 0 of each array refers to a*, index 1 to a.
struct CounterfactualAtom {
    double probability = 0.0;
    std::vector<Level> covariates;
    Level exposure = 0;
    std::array<Level, 2> mediator{};               // M(a*), M(a)
    std::array<std::vector<Level>, 2> outcome{};   // Y(a', m) by position of m in the mediator support
};

/// Counterfactual joint given directly rather than through structural
/// equations, for models with cross-world dependence (no-L shape only).
struct FfrcistgSpec {
    std::string name;
    std::vector<std::string> covariate_names;
    std::vector<Level> exposure_support{0, 1};
    std::vector<Level> mediator_support{0, 1};
    std::vector<Level> outcome_support{0, 1};
    ExposureLevels exposure_levels;
    std::vector<CounterfactualAtom> atoms;
};

using CausalModel = std::variant<Scm, FfrcistgSpec>;

[[nodiscard]] const std::string& model_name(const CausalModel& model) noexcept;

struct Violation {
    std::string element;
    std::string message;

    [[nodiscard]] std::string to_string() const { return element + ": " + message; }
};

inline constexpr double kPmfTolerance = 1e-12;

/// Every violated invariant of `scm`; empty iff the model is valid.
[[nodiscard]] std::vector<Violation> validate(const Scm& scm);

/// Every violated invariant of `spec`, including the one-world factorization
/// check at `factorization_tolerance`.
[[nodiscard]] std::vector<Violation> validate(const FfrcistgSpec& spec,
                                              double factorization_tolerance = kPmfTolerance);

[[nodiscard]] std::vector<Violation> validate(const CausalModel& model);

/// Throws InvalidModelError if `validate` reports anything.
void require_valid(const Scm& scm);
void require_valid(const FfrcistgSpec& spec);

/// Shape of a structurally valid SCM.
[[nodiscard]] Shape shape_of(const Scm& scm);

}  // namespace medcrit
