#include "medcrit/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <variant>

#include "medcrit/engine.hpp"
#include "medcrit/errors.hpp"
#include "medcrit/rng.hpp"

namespace medcrit {

namespace {

// Inverse CDF over a pmf given as cumulative sums; the last entry absorbs
// rounding so every draw lands somewhere.
std::size_t pick(const std::vector<double>& cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(const std::vector<double>& p) {
    std::vector<double> c(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = (s += p[i]);
    for (double& x : c) x /= s;
    return c;
}

DataRow row_of(const ObservedKey& k) { return {k.c, k.a, k.l, k.m, k.y}; }

Dataset sample_scm(const Scm& scm, std::size_t n, std::uint64_t seed) {
    const Engine engine(scm, kDefaultUnitCap, false);
    std::vector<std::vector<Level>> levels;
    std::vector<std::vector<double>> cumulative;
    for (const auto& noise : scm.noise) {
        std::vector<Level> lv;
        std::vector<double> p;
        for (const auto& [level, q] : noise.pmf) {
            lv.push_back(level);
            p.push_back(q);
        }
        levels.push_back(std::move(lv));
        cumulative.push_back(cumulate(p));
    }
    Dataset ds;
    for (const auto& v : scm.variables) {
        if (v.role == Role::Covariate) ds.covariate_names.push_back(v.name);
        if (v.role == Role::InducedConfounder) ds.has_l = true;
    }
    ds.levels = scm.exposure_levels;
    ds.rows.reserve(n);
    Unit unit;
    unit.noise.resize(scm.noise.size());
    for (std::size_t k = 0; k < n; ++k) {
        CounterRng rng(seed, k);
        for (std::size_t j = 0; j < levels.size(); ++j) unit.noise[j] = levels[j][pick(cumulative[j], rng.uniform())];
        ds.rows.push_back(row_of(engine.observe(unit)));
    }
    return ds;
}

Dataset sample_joint(const FfrcistgSpec& spec, std::size_t n, std::uint64_t seed) {
    require_valid(spec);
    std::vector<double> p;
    for (const auto& atom : spec.atoms) p.push_back(atom.probability);
    const auto cumulative = cumulate(p);
    Dataset ds;
    ds.covariate_names = spec.covariate_names;
    ds.levels = spec.exposure_levels;
    ds.rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        CounterRng rng(seed, k);
        const auto& atom = spec.atoms[pick(cumulative, rng.uniform())];
        const int e = atom.exposure == spec.exposure_levels.a_star ? 0 : 1;
        const Level m = atom.mediator[e];
        const auto pos = std::find(spec.mediator_support.begin(), spec.mediator_support.end(), m) -
                         spec.mediator_support.begin();
        ds.rows.push_back({atom.covariates, atom.exposure, 0, m, atom.outcome[e][static_cast<std::size_t>(pos)]});
    }
    return ds;
}

}  // namespace

Dataset draw_samples(const CausalModel& model, std::size_t n, std::uint64_t seed) {
    Dataset ds = std::holds_alternative<Scm>(model) ? sample_scm(std::get<Scm>(model), n, seed)
                                                    : sample_joint(std::get<FfrcistgSpec>(model), n, seed);
    ds.source = model_name(model);
    ds.seed = seed;
    return ds;
}

namespace {

std::map<ObservedKey, std::size_t> cell_counts(const Dataset& ds) {
    std::map<ObservedKey, std::size_t> counts;
    for (const auto& r : ds.rows) ++counts[ObservedKey{r.c, r.a, ds.has_l ? r.l : 0, r.m, r.y}];
    return counts;
}

ObservedLaw law_of(const Dataset& ds, const std::vector<ObservedKey>& cells, const std::vector<std::size_t>& counts,
                   std::size_t n) {
    std::map<ObservedKey, double> pmf;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (counts[i] > 0) pmf[cells[i]] = static_cast<double>(counts[i]) / static_cast<double>(n);
    return ObservedLaw(ds.covariate_names, ds.has_l, ds.levels, pmf, n);
}

}  // namespace

ObservedLaw empirical_law(const Dataset& ds) {
    if (ds.rows.empty()) throw DomainError("cannot build an empirical law from an empty dataset");
    std::vector<ObservedKey> cells;
    std::vector<std::size_t> counts;
    for (const auto& [key, count] : cell_counts(ds)) {
        cells.push_back(key);
        counts.push_back(count);
    }
    return law_of(ds, cells, counts, ds.rows.size());
}

namespace {

void check_names(const Dataset& ds) {
    for (const auto& name : ds.covariate_names) {
        if (name == "A" || name == "L" || name == "M" || name == "Y" || name.empty() ||
            name.find_first_of(",\"\n\r") != std::string::npos) {
            throw DomainError("covariate name \"" + name + "\" cannot be written as a CSV column");
        }
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Level parse_level(const std::string& text, std::size_t line) {
    Level v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ParseError("line " + std::to_string(line) + ": \"" + text + "\" is not an integer");
    }
    return v;
}

}  // namespace

void write_csv(const Dataset& ds, std::ostream& out) {
    check_names(ds);
    for (const auto& name : ds.covariate_names) out << name << ',';
    out << (ds.has_l ? "A,L,M,Y\n" : "A,M,Y\n");
    for (const auto& r : ds.rows) {
        for (Level c : r.c) out << c << ',';
        out << r.a << ',';
        if (ds.has_l) out << r.l << ',';
        out << r.m << ',' << r.y << '\n';
    }
}

void write_csv_file(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_csv(ds, out);
    if (!out.flush()) throw IoError("write to " + path + " failed");
}

Dataset read_csv(std::istream& in, ExposureLevels levels) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input (missing header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::size_t ia = none, il = none, im = none, iy = none;
    std::vector<std::size_t> ic;
    Dataset ds;
    ds.levels = levels;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& h = header[i];
        std::size_t* slot = h == "A" ? &ia : h == "L" ? &il : h == "M" ? &im : h == "Y" ? &iy : nullptr;
        if (slot) {
            if (*slot != none) throw ParseError("duplicate column " + h);
            *slot = i;
        } else {
            if (h.empty()) throw ParseError("empty column name in header");
            ic.push_back(i);
            ds.covariate_names.push_back(h);
        }
    }
    if (ia == none || im == none || iy == none) throw ParseError("header must contain columns A, M and Y");
    ds.has_l = il != none;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " cells, found " + std::to_string(cells.size()));
        }
        DataRow r;
        for (std::size_t i : ic) r.c.push_back(parse_level(cells[i], line_no));
        r.a = parse_level(cells[ia], line_no);
        if (ds.has_l) r.l = parse_level(cells[il], line_no);
        r.m = parse_level(cells[im], line_no);
        r.y = parse_level(cells[iy], line_no);
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

Dataset read_csv_file(const std::string& path, ExposureLevels levels) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Dataset ds = read_csv(in, levels);
    ds.source = path;
    return ds;
}

namespace {

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Estimate estimate(const Dataset& ds, const Estimand& estimand, std::size_t n_boot, std::uint64_t seed) {
    const ObservedLaw law = empirical_law(ds);
    Estimate est;
    est.estimand = estimand;
    est.value = evaluate(law, estimand);
    est.n_boot = n_boot;
    if (n_boot == 0) return est;

    // Resampling n rows with replacement is a multinomial draw over the
    // observed cells, done here as a chain of conditional binomials.
    std::vector<ObservedKey> cells;
    std::vector<double> weight;
    for (const auto& [key, p] : law.pmf()) {
        cells.push_back(key);
        weight.push_back(p);
    }
    const std::size_t n = ds.rows.size();
    std::vector<double> values;
    values.reserve(n_boot);
    std::vector<std::size_t> counts(cells.size());
    for (std::size_t b = 0; b < n_boot; ++b) {
        CounterRng rng(seed, b);
        std::size_t left = n;
        double mass = 1.0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i + 1 == cells.size() || left == 0) {
                counts[i] = left;
            } else {
                const double p = std::clamp(weight[i] / mass, 0.0, 1.0);
                std::binomial_distribution<std::size_t> draw(left, p);
                counts[i] = draw(rng);
                mass -= weight[i];
            }
            left -= counts[i];
        }
        try {
            values.push_back(evaluate(law_of(ds, cells, counts, n), estimand));
        } catch (const DegenerateStratumError&) {
            ++est.failed;
        }
    }
    if (2 * est.failed > n_boot) {
        throw DegenerateStratumError(std::to_string(est.failed) + " of " + std::to_string(n_boot) +
                                     " bootstrap replicates hit an empty required cell");
    }
    std::sort(values.begin(), values.end());
    est.has_ci = true;
    est.ci_low = quantile(values, 0.025);
    est.ci_high = quantile(values, 0.975);
    return est;
}

}  // namespace medcrit
