#pragma once

// Brute-force reference computations that share no code with the engine:
// structural tables are searched row by row, noise atoms come from a plain
// odometer, and randomized draws are written as explicit sums over pairs of
// units (one for the outcome, an independent one for the drawn mediator).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medcrit/model.hpp"
#include "medcrit/observed_law.hpp"

namespace oracle {

using medcrit::Level;
using Assignment = std::map<std::string, Level>;

struct Atom {
    double w = 0.0;
    std::map<std::string, Level> noise;  // by noise name
};

std::vector<Atom> atoms(const medcrit::Scm& scm);

/// Solves the structural equations with `fixed` variables held.
Assignment solve(const medcrit::Scm& scm, const Atom& atom, const Assignment& fixed = {});

struct Effects {
    double te = 0, nde = 0, nie = 0;
    double nie_r = 0, nde_r = 0;
    std::map<Level, double> cde;
    std::optional<double> nie_r_L, nie_r_La;
};

Effects effects(const medcrit::Scm& scm);

std::map<medcrit::ObservedKey, double> observed(const medcrit::Scm& scm);

/// Per-unit null statuses straight from the definitions.
struct Nulls {
    bool sharp = true, sharper = true;
    bool mono_nonincreasing = true, mono_nondecreasing = true;
};

Nulls nulls(const medcrit::Scm& scm);

}  // namespace oracle
