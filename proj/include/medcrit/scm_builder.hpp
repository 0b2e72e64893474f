#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "medcrit/model.hpp"

namespace medcrit {

/// Assembles an Scm from structural functions instead of hand-written tables.
/// Variables must be added parents-first.
class ScmBuilder {
public:
    using Function = std::function<Level(const std::vector<Level>& parents, Level noise)>;

    explicit ScmBuilder(std::string name) { scm_.name = std::move(name); }

    /// Adds a variable whose noise term is named "eps_<name>". An empty
    /// `support` is replaced by the sorted set of values the table produces.
    ScmBuilder& add(const std::string& name, Role role, std::vector<Level> support,
                    std::vector<std::string> parents, std::map<Level, double> noise_pmf, const Function& f);

    [[nodiscard]] Scm build(ExposureLevels levels = {}) const;

private:
    Scm scm_;
};

}  // namespace medcrit
