#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "medcrit/model.hpp"

namespace medcrit {

/// One cell (c, a, l, m, y) of the factual joint. `l` is 0 when the law has
/// no induced confounder.
struct ObservedKey {
    std::vector<Level> c;
    Level a = 0;
    Level l = 0;
    Level m = 0;
    Level y = 0;

    auto operator<=>(const ObservedKey&) const = default;
};

/// Exact or empirical pmf of the factual variables. Only cells of positive
/// mass are stored; supports are the levels that carry mass.
class ObservedLaw {
public:
    ObservedLaw(std::vector<std::string> covariate_names, bool has_l, ExposureLevels levels,
                const std::map<ObservedKey, double>& pmf, std::size_t sample_size = 0);

    [[nodiscard]] const std::map<ObservedKey, double>& pmf() const noexcept { return pmf_; }
    [[nodiscard]] const std::vector<std::string>& covariate_names() const noexcept { return covariate_names_; }
    [[nodiscard]] bool has_l() const noexcept { return has_l_; }
    [[nodiscard]] const ExposureLevels& levels() const noexcept { return levels_; }
    [[nodiscard]] const std::vector<Level>& a_support() const noexcept { return a_support_; }
    [[nodiscard]] const std::vector<Level>& l_support() const noexcept { return l_support_; }
    [[nodiscard]] const std::vector<Level>& m_support() const noexcept { return m_support_; }
    [[nodiscard]] const std::vector<Level>& y_support() const noexcept { return y_support_; }
    /// Number of rows behind an empirical law; 0 for an exact law.
    [[nodiscard]] std::size_t sample_size() const noexcept { return sample_size_; }
    [[nodiscard]] double total() const noexcept;

    /// Copy with the roles of a* and a exchanged.
    [[nodiscard]] ObservedLaw with_levels(ExposureLevels levels) const;

    /// "C=(0,1)" style label of a covariate stratum.
    [[nodiscard]] std::string describe(const std::vector<Level>& c) const;

private:
    std::vector<std::string> covariate_names_;
    bool has_l_;
    ExposureLevels levels_;
    std::map<ObservedKey, double> pmf_;
    std::size_t sample_size_;
    std::vector<Level> a_support_, l_support_, m_support_, y_support_;
};

}  // namespace medcrit
