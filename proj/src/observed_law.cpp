#include "medcrit/observed_law.hpp"

#include <set>

namespace medcrit {

ObservedLaw::ObservedLaw(std::vector<std::string> covariate_names, bool has_l, ExposureLevels levels,
                         const std::map<ObservedKey, double>& pmf, std::size_t sample_size)
    : covariate_names_(std::move(covariate_names)), has_l_(has_l), levels_(levels), sample_size_(sample_size) {
    std::set<Level> a, l, m, y;
    for (const auto& [key, p] : pmf) {
        if (!(p > 0.0)) continue;
        pmf_.emplace(key, p);
        a.insert(key.a);
        l.insert(key.l);
        m.insert(key.m);
        y.insert(key.y);
    }
    a_support_.assign(a.begin(), a.end());
    l_support_.assign(l.begin(), l.end());
    m_support_.assign(m.begin(), m.end());
    y_support_.assign(y.begin(), y.end());
}

double ObservedLaw::total() const noexcept {
    double t = 0.0;
    for (const auto& [key, p] : pmf_) t += p;
    return t;
}

ObservedLaw ObservedLaw::with_levels(ExposureLevels levels) const {
    ObservedLaw out = *this;
    out.levels_ = levels;
    return out;
}

std::string ObservedLaw::describe(const std::vector<Level>& c) const {
    if (c.empty()) return "C=()";
    std::string s = "C=(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + ")";
}

}  // namespace medcrit
