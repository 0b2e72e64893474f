#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "medcrit/identify.hpp"
#include "medcrit/model.hpp"
#include "medcrit/observed_law.hpp"

namespace medcrit {

struct DataRow {
    std::vector<Level> c;
    Level a = 0, l = 0, m = 0, y = 0;
    bool operator==(const DataRow&) const = default;
};

struct Dataset {
    std::vector<std::string> covariate_names;
    bool has_l = false;
    ExposureLevels levels;
    std::vector<DataRow> rows;
    // provenance
    std::string source;
    std::uint64_t seed = 0;
};

/// n i.i.d. rows of the factual law. Row k depends only on (seed, k).
[[nodiscard]] Dataset draw_samples(const CausalModel& model, std::size_t n, std::uint64_t seed);

/// Relative frequencies; DomainError on an empty dataset.
[[nodiscard]] ObservedLaw empirical_law(const Dataset& ds);

/// Header `C...,A[,L],M,Y`, integer cells. Covariate names may not be A, L, M or Y.
void write_csv(const Dataset& ds, std::ostream& out);
void write_csv_file(const Dataset& ds, const std::string& path);

/// Columns named A, M, Y (and optionally L) take those roles; every other
/// column is a covariate, in header order. ParseError on malformed input.
[[nodiscard]] Dataset read_csv(std::istream& in, ExposureLevels levels = {});
[[nodiscard]] Dataset read_csv_file(const std::string& path, ExposureLevels levels = {});

struct Estimate {
    Estimand estimand;
    double value = 0.0;
    bool has_ci = false;
    double ci_low = 0.0, ci_high = 0.0;  // 2.5% and 97.5% percentiles
    std::size_t n_boot = 0;              // replicates requested
    std::size_t failed = 0;              // replicates with an empty required cell
};

inline constexpr std::size_t kDefaultBootstrap = 1000;

/// Plug-in value with a percentile bootstrap interval. Replicates that hit an
/// empty required cell are dropped and counted; DegenerateStratumError if more
/// than half fail.
[[nodiscard]] Estimate estimate(const Dataset& ds, const Estimand& estimand, std::size_t n_boot = kDefaultBootstrap,
                                std::uint64_t seed = 0);

}  // namespace medcrit
