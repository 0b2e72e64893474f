#pragma once

#include <cstdint>

#include "medcrit/model.hpp"

namespace medcrit {

// Counterexample models. Exposure levels are a* = 0, a = 1 and C is empty.

/// Induced-L model: A ~ Bern(1/2), L = A e_L + (1-A)(1-e_L),
/// M = (A+L-AL) e_M + (1-A)(1-L)(1-e_M), Y = (1-A)LM + A(L+M-LM),
/// with e_L ~ Bern(pi), e_M ~ Bern(beta). Requires 0 < pi, beta < 1.
[[nodiscard]] Scm induced_confounder_scm(double pi, double beta);

/// Three-level-L extension of the model above: e_L ~ Cat(pi0, pi1, pi2) and
/// level 2 of L routes A straight through M to Y.
[[nodiscard]] Scm three_level_confounder_scm(double pi0, double pi1, double pi2, double beta);

/// Explicit counterfactual joint with cross-world dependence between M(a*)
/// and Y(a, .): M(a) ~ Bern(pi), (Y(a,0), Y(a,1)) ~ Cat(beta1..beta4) over
/// (0,0),(0,1),(1,0),(1,1), M(a*) = Y(a,0)Y(a,1) + M(a)|Y(a,1)-Y(a,0)|,
/// Y(a*, .) constant at 0 or 1 with P(1) = gamma.
[[nodiscard]] FfrcistgSpec cross_world_joint(double pi, double beta1, double beta2, double beta3, double beta4,
                                               double gamma);

/// M = e_M ~ Bern(p) regardless of A, Y = A M.
[[nodiscard]] Scm pe_counterexample(double p);

// Seeded random model generators. Every generated model has positive
// P(A = a' | C) and P(M = m | A, [L,] C) on all cells.

struct RandomScmOptions {
    std::uint64_t seed = 0;
    bool with_covariate = false;  // one binary C
    bool with_l = false;          // induced confounder (exposure-induced L)
    bool a_affects_m = true;      // false: M has no A parent (instrument-like shape when with_l)
};

/// NPSEM with binary or ternary M, Y (and L) chosen by the seed.
[[nodiscard]] Scm random_scm(const RandomScmOptions& options);

struct SeparableOptions {
    std::uint64_t seed = 0;
    bool with_covariate = false;
    bool constant_outcome = false;
};

/// A acts on M only through N = A and on Y only through O = A.
[[nodiscard]] Scm separable_scm(const SeparableOptions& options);

struct AdditiveOptions {
    std::uint64_t seed = 0;
    bool with_covariate = false;
    bool with_l = false;
    bool zero_direct = false;            // g == 0
    bool unit_level_interaction = true;  // add s A M with s = +-1 independent of everything
};

/// Y = f(C, M) + g(C, A[, L]) + e (+ s A M): the A-M interaction vanishes in
/// mean within every stratum of (M(a*), C).
[[nodiscard]] Scm additive_outcome_scm(const AdditiveOptions& options);

struct AlwaysAffectsOptions {
    std::uint64_t seed = 0;
    bool with_covariate = false;
};

/// M ignores A, and Y is injective in M for every (C, A, e_Y).
[[nodiscard]] Scm always_affects_scm(const AlwaysAffectsOptions& options);

}  // namespace medcrit
