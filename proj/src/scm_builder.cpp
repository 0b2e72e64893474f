#include "medcrit/scm_builder.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace medcrit {

ScmBuilder& ScmBuilder::add(const std::string& name, Role role, std::vector<Level> support,
                            std::vector<std::string> parents, std::map<Level, double> noise_pmf, const Function& f) {
    std::vector<const std::vector<Level>*> parent_supports;
    for (const auto& p : parents) {
        const auto* var = scm_.find_variable(p);
        if (!var) throw std::logic_error("ScmBuilder: parent " + p + " added after child " + name);
        parent_supports.push_back(&var->support);
    }

    StructuralTable table{name, parents, "eps_" + name, {}};
    std::vector<std::size_t> idx(parents.size(), 0);
    std::set<Level> produced;
    while (true) {
        std::vector<Level> values(parents.size());
        for (std::size_t i = 0; i < parents.size(); ++i) values[i] = (*parent_supports[i])[idx[i]];
        for (const auto& [e, p] : noise_pmf) {
            (void)p;
            const Level v = f(values, e);
            produced.insert(v);
            table.rows.push_back({values, e, v});
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == parent_supports[k]->size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    if (support.empty()) support.assign(produced.begin(), produced.end());

    scm_.variables.push_back({name, std::move(support), role});
    if (!parents.empty()) scm_.edges[name] = std::move(parents);
    scm_.noise.push_back({table.noise, std::move(noise_pmf)});
    scm_.tables.push_back(std::move(table));
    return *this;
}

Scm ScmBuilder::build(ExposureLevels levels) const {
    Scm out = scm_;
    out.exposure_levels = levels;
    return out;
}

}  // namespace medcrit
