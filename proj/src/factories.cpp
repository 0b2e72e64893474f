#include "medcrit/factories.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "medcrit/errors.hpp"
#include "medcrit/rng.hpp"
#include "medcrit/scm_builder.hpp"

namespace medcrit {

namespace {

void require_open_unit(const char* what, double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError(std::string(what) + " must lie in (0, 1), got " + std::to_string(x));
    }
}

void require_closed_unit(const char* what, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(x));
    }
}

void require_simplex(double sum) {
    if (std::abs(sum - 1.0) > kPmfTolerance) {
        throw DomainError("probabilities must sum to 1, got " + std::to_string(sum));
    }
}

std::map<Level, double> bernoulli(double p) { return {{0, 1.0 - p}, {1, p}}; }
const std::map<Level, double> kDegenerate{{0, 1.0}};

std::vector<Level> levels(int k) {
    std::vector<Level> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

// Random draws for the generators. Table entries are hashed from
// (key, parent tuple, noise level) so a table is a pure function of the seed.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : seed_(seed), rng_(seed, 0x6d6f64656cULL) {}

    int choose(int lo, int hi) { return lo + static_cast<int>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1))); }

    // Strictly positive pmf over levels 0..k-1.
    std::map<Level, double> pmf(int k) {
        std::vector<double> w(static_cast<std::size_t>(k));
        double total = 0.0;
        for (auto& x : w) total += (x = 0.1 + 0.9 * rng_.uniform());
        std::map<Level, double> out;
        double acc = 0.0;
        for (int i = 0; i + 1 < k; ++i) acc += (out[i] = w[static_cast<std::size_t>(i)] / total);
        out[k - 1] = 1.0 - acc;
        return out;
    }

    std::uint64_t key() { return rng_.next(); }

    std::uint64_t hash(std::uint64_t key, const std::vector<Level>& parents, Level noise) const {
        std::uint64_t h = mix64(seed_ ^ key);
        for (Level v : parents) h = mix64(h ^ static_cast<std::uint64_t>(v + 1));
        return mix64(h ^ (static_cast<std::uint64_t>(noise) << 32));
    }

    // Structural function onto 0..k-1 that is onto for every parent tuple as
    // long as the noise has at least k levels.
    ScmBuilder::Function onto(int k) {
        const std::uint64_t key_value = key();
        return [this, key_value, k](const std::vector<Level>& parents, Level e) -> Level {
            const auto kk = static_cast<std::uint64_t>(k);
            if (e < k) {
                const std::uint64_t shift = hash(key_value, parents, -1) % kk;
                return static_cast<Level>((static_cast<std::uint64_t>(e) + shift) % kk);
            }
            return static_cast<Level>(hash(key_value, parents, e) % kk);
        };
    }

    ScmBuilder::Function arbitrary(int k) {
        const std::uint64_t key_value = key();
        return [this, key_value, k](const std::vector<Level>& parents, Level e) -> Level {
            return static_cast<Level>(hash(key_value, parents, e) % static_cast<std::uint64_t>(k));
        };
    }

private:
    std::uint64_t seed_;
    CounterRng rng_;
};

std::vector<std::string> with_c(bool c, std::vector<std::string> rest) {
    if (c) rest.insert(rest.begin(), "C");
    return rest;
}

void add_covariate_and_exposure(ScmBuilder& b, Draws& d, bool with_covariate, int k_exposure) {
    if (with_covariate) {
        b.add("C", Role::Covariate, {0, 1}, {}, d.pmf(2), [](const auto&, Level e) { return e; });
    }
    const auto noise = d.pmf(k_exposure);
    const auto f = d.onto(k_exposure);
    b.add("A", Role::Exposure, levels(k_exposure), with_c(with_covariate, {}), noise, f);
}

}  // namespace

Scm induced_confounder_scm(double pi, double beta) {
    require_open_unit("pi", pi);
    require_open_unit("beta", beta);
    ScmBuilder b("t1");
    b.add("A", Role::Exposure, {0, 1}, {}, bernoulli(0.5), [](const auto&, Level e) { return e; });
    b.add("L", Role::InducedConfounder, {0, 1}, {"A"}, bernoulli(pi),
          [](const auto& p, Level e) { return p[0] * e + (1 - p[0]) * (1 - e); });
    b.add("M", Role::Mediator, {0, 1}, {"A", "L"}, bernoulli(beta), [](const auto& p, Level e) {
        const Level a = p[0], l = p[1];
        return (a + l - a * l) * e + (1 - a) * (1 - l) * (1 - e);
    });
    b.add("Y", Role::Outcome, {0, 1}, {"A", "L", "M"}, kDegenerate, [](const auto& p, Level) {
        const Level a = p[0], l = p[1], m = p[2];
        return (1 - a) * l * m + a * (l + m - l * m);
    });
    return b.build();
}

Scm three_level_confounder_scm(double pi0, double pi1, double pi2, double beta) {
    require_closed_unit("pi0", pi0);
    require_closed_unit("pi1", pi1);
    require_closed_unit("pi2", pi2);
    require_simplex(pi0 + pi1 + pi2);
    require_open_unit("beta", beta);
    ScmBuilder b("t2");
    b.add("A", Role::Exposure, {0, 1}, {}, bernoulli(0.5), [](const auto&, Level e) { return e; });
    b.add("L", Role::InducedConfounder, {0, 1, 2}, {"A"}, {{0, pi0}, {1, pi1}, {2, pi2}},
          [](const auto& p, Level e) { return (1 - p[0]) * (e == 0) + p[0] * (e == 1) + 2 * (e == 2); });
    b.add("M", Role::Mediator, {0, 1}, {"A", "L"}, bernoulli(beta), [](const auto& p, Level e) {
        const Level a = p[0], l = p[1];
        if (l == 2) return a;
        return (a + l - a * l) * e + (1 - a) * (1 - l) * (1 - e);
    });
    b.add("Y", Role::Outcome, {0, 1}, {"A", "L", "M"}, kDegenerate, [](const auto& p, Level) {
        const Level a = p[0], l = p[1], m = p[2];
        if (l == 2) return m;
        return (1 - a) * l * m + a * (l + m - l * m);
    });
    return b.build();
}

FfrcistgSpec cross_world_joint(double pi, double beta1, double beta2, double beta3, double beta4, double gamma) {
    require_open_unit("pi", pi);
    require_open_unit("gamma", gamma);
    const double betas[4] = {beta1, beta2, beta3, beta4};
    for (double b : betas) require_closed_unit("beta", b);
    require_simplex(beta1 + beta2 + beta3 + beta4);

    FfrcistgSpec spec;
    spec.name = "t3";
    for (Level a = 0; a <= 1; ++a)
        for (Level ma = 0; ma <= 1; ++ma)
            for (int j = 0; j < 4; ++j)
                for (Level ys = 0; ys <= 1; ++ys) {
                    const Level y0 = j / 2, y1 = j % 2;
                    CounterfactualAtom atom;
                    atom.probability = 0.5 * (ma ? pi : 1.0 - pi) * betas[j] * (ys ? gamma : 1.0 - gamma);
                    atom.exposure = a;
                    atom.mediator = {y0 * y1 + ma * std::abs(y1 - y0), ma};
                    atom.outcome = {std::vector<Level>{ys, ys}, std::vector<Level>{y0, y1}};
                    spec.atoms.push_back(std::move(atom));
                }
    return spec;
}

Scm pe_counterexample(double p) {
    require_open_unit("p", p);
    ScmBuilder b("pe");
    b.add("A", Role::Exposure, {0, 1}, {}, bernoulli(0.5), [](const auto&, Level e) { return e; });
    b.add("M", Role::Mediator, {0, 1}, {"A"}, bernoulli(p), [](const auto&, Level e) { return e; });
    b.add("Y", Role::Outcome, {0, 1}, {"A", "M"}, kDegenerate, [](const auto& q, Level) { return q[0] * q[1]; });
    return b.build();
}

Scm random_scm(const RandomScmOptions& o) {
    Draws d(o.seed);
    const int k_a = d.choose(2, 3), k_l = d.choose(2, 3), k_m = d.choose(2, 3), k_y = d.choose(2, 3);
    ScmBuilder b(o.with_l ? "random-l" : "random-no-l");
    add_covariate_and_exposure(b, d, o.with_covariate, k_a);
    std::vector<std::string> m_parents;
    if (o.a_affects_m) m_parents.push_back("A");
    if (o.with_l) {
        const auto noise = d.pmf(k_l + d.choose(0, 1));
        const auto f = d.onto(k_l);
        b.add("L", Role::InducedConfounder, levels(k_l), with_c(o.with_covariate, {"A"}), noise, f);
        m_parents.push_back("L");
    }
    const auto m_noise = d.pmf(k_m + d.choose(0, 1));
    const auto m_fn = d.onto(k_m);
    b.add("M", Role::Mediator, levels(k_m), with_c(o.with_covariate, m_parents), m_noise, m_fn);
    std::vector<std::string> y_parents{"A"};
    if (o.with_l) y_parents.push_back("L");
    y_parents.push_back("M");
    const auto y_noise = d.pmf(d.choose(1, 3));
    const auto y_fn = d.arbitrary(k_y);
    b.add("Y", Role::Outcome, levels(k_y), with_c(o.with_covariate, y_parents), y_noise, y_fn);
    return b.build();
}

Scm separable_scm(const SeparableOptions& o) {
    Draws d(o.seed);
    const int k_m = d.choose(2, 3), k_y = d.choose(2, 3);
    ScmBuilder b("separable");
    add_covariate_and_exposure(b, d, o.with_covariate, 2);
    auto identity = [](const std::vector<Level>& p, Level) { return p[0]; };
    b.add("N", Role::SeparableN, {0, 1}, {"A"}, kDegenerate, identity);
    b.add("O", Role::SeparableO, {0, 1}, {"A"}, kDegenerate, identity);
    const auto m_noise = d.pmf(k_m + d.choose(0, 1));
    const auto m_fn = d.onto(k_m);
    b.add("M", Role::Mediator, levels(k_m), with_c(o.with_covariate, {"N"}), m_noise, m_fn);
    const auto noise = d.pmf(d.choose(1, 3));
    if (o.constant_outcome) {
        b.add("Y", Role::Outcome, {0}, with_c(o.with_covariate, {"O", "M"}), noise, [](const auto&, Level) { return 0; });
    } else {
        b.add("Y", Role::Outcome, levels(k_y), with_c(o.with_covariate, {"O", "M"}), noise, d.arbitrary(k_y));
    }
    return b.build();
}

Scm additive_outcome_scm(const AdditiveOptions& o) {
    Draws d(o.seed);
    const int k_l = d.choose(2, 3), k_m = d.choose(2, 3);
    ScmBuilder b(o.with_l ? "additive-l" : "additive");
    add_covariate_and_exposure(b, d, o.with_covariate, 2);
    if (o.with_l) {
        const auto l_noise = d.pmf(k_l);
        const auto l_fn = d.onto(k_l);
        b.add("L", Role::InducedConfounder, levels(k_l), with_c(o.with_covariate, {"A"}), l_noise, l_fn);
    }
    std::vector<std::string> m_parents{"A"};
    if (o.with_l) m_parents.push_back("L");
    const auto m_noise = d.pmf(k_m + d.choose(0, 1));
    const auto m_fn = d.onto(k_m);
    b.add("M", Role::Mediator, levels(k_m), with_c(o.with_covariate, m_parents), m_noise, m_fn);

    // e_Y encodes (e, s): level 2e + (s == +1).
    const auto e_pmf = d.pmf(2);
    std::map<Level, double> noise;
    for (const auto& [e, p] : e_pmf) {
        if (o.unit_level_interaction) {
            noise[2 * e] = 0.5 * p;
            noise[2 * e + 1] = 0.5 * p;
        } else {
            noise[2 * e] = p;
        }
    }
    const std::uint64_t f_key = d.key(), g_key = d.key();
    const bool with_c_parent = o.with_covariate, with_l = o.with_l, zero_direct = o.zero_direct,
               interacting = o.unit_level_interaction;
    std::vector<std::string> y_parents{"A"};
    if (o.with_l) y_parents.push_back("L");
    y_parents.push_back("M");
    b.add("Y", Role::Outcome, {}, with_c(o.with_covariate, y_parents), noise,
          [&d, f_key, g_key, with_c_parent, with_l, zero_direct, interacting](const std::vector<Level>& p, Level code) {
              std::size_t i = 0;
              std::vector<Level> c;
              if (with_c_parent) c.push_back(p[i++]);
              const Level a = p[i++];
              const Level l = with_l ? p[i++] : 0;
              const Level m = p[i++];
              std::vector<Level> cm = c, cal = c;
              cm.push_back(m);
              cal.push_back(a);
              cal.push_back(l);
              const Level f = static_cast<Level>(d.hash(f_key, cm, 0) % 3);
              const Level g = zero_direct ? 0 : static_cast<Level>(d.hash(g_key, cal, 0) % 3) - 1;
              const Level e = code / 2;
              const Level s = code % 2 == 1 ? 1 : -1;
              return f + g + e + (interacting ? s * a * m : 0);
          });
    return b.build();
}

Scm always_affects_scm(const AlwaysAffectsOptions& o) {
    Draws d(o.seed);
    const int k_m = d.choose(2, 3);
    ScmBuilder b("always-affects");
    add_covariate_and_exposure(b, d, o.with_covariate, 2);
    const auto m_noise = d.pmf(k_m);
    const auto m_fn = d.onto(k_m);
    b.add("M", Role::Mediator, levels(k_m), with_c(o.with_covariate, {}), m_noise, m_fn);
    const auto shift = d.arbitrary(k_m);
    const auto y_noise = d.pmf(d.choose(1, 3));
    b.add("Y", Role::Outcome, levels(k_m), with_c(o.with_covariate, {"A", "M"}), y_noise,
          [shift, k_m](const std::vector<Level>& p, Level e) {
              std::vector<Level> context(p.begin(), p.end() - 1);
              return (p.back() + shift(context, e)) % k_m;
          });
    return b.build();
}

}  // namespace medcrit
