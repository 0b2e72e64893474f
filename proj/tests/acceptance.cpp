// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "medcrit/criteria.hpp"
#include "medcrit/effects.hpp"
#include "medcrit/factories.hpp"
#include "medcrit/identify.hpp"
#include "medcrit/sample.hpp"

using namespace medcrit;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Statuses of every random model built by criteria 5-8, for criterion 9.
std::vector<NullStatus> collected;

Outcome induced_confounder_oracle() {
    Outcome o;
    double worst = 0;
    bool nulls = true;
    for (double pi : grid(0.05, 0.95, 21))
        for (double beta : grid(0.05, 0.95, 21)) {
            const auto t = counterfactual_table(CausalModel(induced_confounder_scm(pi, beta)));
            worst = std::max(worst, std::abs(effect_report(t).nie_r - pi * (1 - pi) * (2 * beta - 1)));
            const auto s = null_status(t);
            nulls = nulls && s.sharp_null && s.sharper_null;
        }
    double sup = 0;
    for (int k = 3; k <= 9; ++k)
        for (double beta : {std::pow(10.0, -k), 1 - std::pow(10.0, -k)})
            sup = std::max(sup, std::abs(effect_report(CausalModel(induced_confounder_scm(0.5, beta))).nie_r));
    o.pass = worst <= 1e-12 && nulls && sup > 0.249;
    o.detail = "max |NIE^R - pi(1-pi)(2beta-1)| = " + fmt("%.3g", worst) + ", nulls hold on grid: " +
               (nulls ? "yes" : "no") + ", corner sup |NIE^R| = " + fmt("%.9f", sup);
    return o;
}

Outcome three_level_confounder_oracle() {
    Outcome o;
    double worst_stated = 0, worst_enumerated = 0;
    int points = 0, mismatches = 0;
    bool monotone = true;
    for (double pi1 : grid(0.05, 0.85, 9))
        for (double pi2 : grid(0.05, 0.85, 9)) {
            if (pi1 + pi2 > 1 - 0.05 + 1e-12) continue;
            for (double beta : grid(0.05, 0.95, 10)) {
                const double pi0 = 1 - pi1 - pi2;
                const auto t = counterfactual_table(CausalModel(three_level_confounder_scm(pi0, pi1, pi2, beta)));
                const double v = effect_report(t).nie_r;
                const double stated = pi1 * (1 - pi1) * (2 * beta - 1) + pi2;
                const double enumerated_form = (1 - pi1) * (pi1 * (2 * beta - 1) + pi2);
                worst_stated = std::max(worst_stated, std::abs(v - stated));
                worst_enumerated = std::max(worst_enumerated, std::abs(v - enumerated_form));
                mismatches += std::abs(v - stated) > 1e-12;
                ++points;
                monotone = monotone && null_status(t).monotonicity == Direction::Nondecreasing;
            }
        }
    const double negative =
        effect_report(CausalModel(three_level_confounder_scm(0.4 + 1e-6, 0.5 - 1e-6, 0.1, 1e-6))).nie_r;
    o.pass = worst_stated <= 1e-12 && monotone && negative < 0;
    o.detail = "stated form pi1(1-pi1)(2beta-1)+pi2 misses at " + std::to_string(mismatches) + "/" +
               std::to_string(points) + " points (max gap " + fmt("%.6g", worst_stated) +
               "); enumeration equals (1-pi1)(pi1(2beta-1)+pi2) within " + fmt("%.3g", worst_enumerated) +
               "; monotonicity nondecreasing everywhere: " + (monotone ? "yes" : "no") +
               "; NIE^R at (0.5-1e-6, 1e-6, 0.1) = " + fmt("%.9g", negative);
    return o;
}

Outcome cross_world_oracle() {
    Outcome o;
    double worst = 0;
    bool sharper = true, a4_fails = true;
    int points = 0;
    for (double pi : grid(0.1, 0.9, 5))
        for (double b2 : grid(0.05, 0.45, 5))
            for (double b3 : grid(0.05, 0.45, 5))
                for (double gamma : {0.3, 0.7}) {
                    const double rest = 1 - b2 - b3, b1 = 0.4 * rest, b4 = rest - b1;
                    const auto t = counterfactual_table(CausalModel(cross_world_joint(pi, b1, b2, b3, b4, gamma)));
                    const double closed = ((1 - pi) * b4 - pi * b1) * (b3 - b2);
                    worst = std::max(worst, std::abs(effect_report(t).nie_r - closed));
                    sharper = sharper && null_status(t).sharper_null;
                    a4_fails = a4_fails && !check_assumption(t, Assumption::A4).holds;
                    ++points;
                }
    o.pass = worst <= 1e-12 && sharper && a4_fails;
    o.detail = std::to_string(points) + " points, max closed-form gap " + fmt("%.3g", worst) +
               ", sharper null everywhere: " + (sharper ? "yes" : "no") + ", A4 fails everywhere: " +
               (a4_fails ? "yes" : "no");
    return o;
}

Outcome l_conditioned_oracle() {
    Outcome o;
    double worst = 0;
    for (double pi : {0.2, 0.5, 0.8})
        for (double beta : grid(0.05, 0.95, 19)) {
            const auto t = counterfactual_table(CausalModel(induced_confounder_scm(pi, beta)));
            const auto r = effect_report(t);
            const double psi = psi_nie_rl(observational_law(t));
            worst = std::max({worst, std::abs(*r.nie_r_L - (beta - 0.5)), std::abs(psi - (beta - 0.5)),
                              std::abs(*r.nie_r_La), std::abs(r.nie)});
        }
    o.pass = worst <= 1e-12;
    o.detail = "max deviation over 57 points " + fmt("%.3g", worst);
    return o;
}

Outcome identification_equivalence() {
    Outcome o;
    double worst_nie = 0, worst_te = 0, worst_l = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto t = counterfactual_table(CausalModel(random_scm({s, s % 2 == 1, false, true})));
        const auto law = observational_law(t);
        const auto r = effect_report(t);
        worst_nie = std::max(worst_nie, std::abs(psi_nie(law) - r.nie));
        worst_te = std::max(worst_te, std::abs(psi_te(law) - r.te));
        collected.push_back(null_status(t));
    }
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto t = counterfactual_table(CausalModel(random_scm({s, s % 2 == 1, true, true})));
        worst_l = std::max(worst_l, std::abs(psi_nie_r_L(observational_law(t)) - effect_report(t).nie_r));
        collected.push_back(null_status(t));
    }
    o.pass = worst_nie < 1e-10 && worst_te < 1e-10 && worst_l < 1e-10;
    o.detail = "200+200 models; max |psi_nie-NIE| " + fmt("%.3g", worst_nie) + ", |psi_te-TE| " +
               fmt("%.3g", worst_te) + ", |psi_nie_r_L-NIE^R| " + fmt("%.3g", worst_l);
    return o;
}

Outcome no_interaction() {
    Outcome o;
    double worst = 0;
    int binary = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto t = counterfactual_table(CausalModel(additive_outcome_scm({s, s % 4 < 2, s % 2 == 1})));
        const auto r = effect_report(t);
        worst = std::max(worst, std::abs(r.nie - r.nie_r));
        for (const auto& [m, pe] : r.pe) worst = std::max(worst, std::abs(r.nie - pe));
        for (const auto& [mm, v] : r.int_ref) worst = std::max(worst, std::abs(v));
        binary += !r.int_ref.empty();
        collected.push_back(null_status(t));
    }
    o.pass = worst < 1e-10;
    o.detail = "100 models (50 with L), " + std::to_string(binary) + " with binary M; max deviation " +
               fmt("%.3g", worst);
    return o;
}

Outcome pe_counterexample_check() {
    Outcome o;
    double worst = 0;
    for (int i = 1; i <= 9; ++i) {
        const double p = i / 10.0;
        const auto r = effect_report(CausalModel(pe_counterexample(p)));
        worst = std::max({worst, std::abs(r.te - p), std::abs(r.nie)});
        for (Level m : {0, 1})
            worst = std::max({worst, std::abs(r.cde.at(m) - m), std::abs(r.pe.at(m) - (p - m))});
    }
    o.pass = worst <= 1e-12;
    o.detail = "max deviation " + fmt("%.3g", worst);
    return o;
}

Outcome separable_and_always_affects() {
    Outcome o;
    double worst_sep = 0, worst_aa = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto t = counterfactual_table(CausalModel(separable_scm({s, s % 2 == 1, false})));
        const auto r = effect_report(t);
        worst_sep = std::max(worst_sep, std::abs(r.nie - r.nie_r));
        collected.push_back(null_status(t));
    }
    int accepted = 0;
    for (std::uint64_t s = 0; s < 200 && accepted < 50; ++s) {
        const auto t = counterfactual_table(CausalModel(always_affects_scm({s, s % 2 == 1})));
        const bool unitwise = std::all_of(t.units.begin(), t.units.end(),
                                          [](const UnitProfile& u) { return u.m_cf[0] == u.m_cf[1]; });
        if (!unitwise || !m_always_affects_y_check(t)) continue;
        ++accepted;
        worst_aa = std::max(worst_aa, std::abs(effect_report(t).nie_r));
        collected.push_back(null_status(t));
    }
    o.pass = worst_sep < 1e-10 && accepted >= 50 && worst_aa <= 1e-12;
    o.detail = "separable max |NIE-NIE^R| " + fmt("%.3g", worst_sep) + "; " + std::to_string(accepted) +
               " always-affects models, max |NIE^R| " + fmt("%.3g", worst_aa);
    return o;
}

Outcome criteria_soundness() {
    Outcome o;
    SearchOptions opts;
    opts.grid = 11;
    std::string found;
    std::size_t rows = 0;
    for (const auto& family : families()) {
        const auto hits = search_violations(family, opts, parse_selector("NIE"));
        rows += sweep(family, opts, parse_selector("NIE")).size();
        if (!hits.empty()) found += family.name + " ";
    }
    int broken = 0;
    for (const auto& s : collected) {
        if (s.sharper_null && !s.sharp_null) ++broken;
        if (s.sharp_null && s.monotonicity != Direction::Both) ++broken;
    }
    o.pass = found.empty() && broken == 0 && collected.size() >= 500;
    o.detail = "NIE refutations in " + std::to_string(families().size()) + " families (" + std::to_string(rows) +
               " points): " + (found.empty() ? std::string("none") : found) + "; implication breaks " +
               std::to_string(broken) + " over " + std::to_string(collected.size()) + " random models";
    return o;
}

Outcome estimation_consistency() {
    Outcome o;
    const CausalModel model = induced_confounder_scm(0.5, 0.9);
    const Estimand e = parse_estimand("psi_nie_r_L");
    std::vector<double> medians;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        std::vector<double> errors;
        for (std::uint64_t s = 0; s < 20; ++s)
            errors.push_back(std::abs(estimate(draw_samples(model, n, 1000 + s), e, 0).value - 0.2));
        medians.push_back(median(errors));
    }
    int covered = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto est = estimate(draw_samples(model, 100000, 5000 + r), e, 1000, r);
        covered += est.ci_low <= 0.2 && 0.2 <= est.ci_high;
    }
    o.pass = medians[0] > medians[1] && medians[1] > medians[2] && medians[2] < 0.01 && covered >= 90;
    o.detail = "median |error| " + fmt("%.4g", medians[0]) + " > " + fmt("%.4g", medians[1]) + " > " +
               fmt("%.4g", medians[2]) + "; CI coverage " + std::to_string(covered) + "/100";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"induced-confounder NIE^R closed form and nulls", 1, induced_confounder_oracle},
        {"three-level confounder closed form and monotonicity", 1, three_level_confounder_oracle},
        {"cross-world joint closed form, sharper null, A4", 1, cross_world_oracle},
        {"L-conditioned effects and their functional", 0, l_conditioned_oracle},
        {"identification equivalence on random NPSEMs", 30, identification_equivalence},
        {"no-interaction equalities on additive outcomes", 0, no_interaction},
        {"PE toy model", 0, pe_counterexample_check},
        {"separable effects and always-affects mediators", 0, separable_and_always_affects},
        {"criteria engine soundness", 0, criteria_soundness},
        {"estimation consistency and bootstrap coverage", 120, estimation_consistency},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[i].budget_s > 0 && secs > criteria[i].budget_s) {
            out.pass = false;
            out.detail += "; over time budget";
        }
        failures += !out.pass;
        std::printf("%s %zu %s: %s [%.2fs]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, out.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
