#pragma once

#include <variant>

#include "critmult/hpoly.hpp"

namespace critmult {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;  // optimal point, or a feasible point when unbounded
  Rational value;
};

// maximize <c, x> over P; dense two-phase simplex with Bland's rule, exact.
LpResult lp_maximize(const HPoly& p, const Vec& c);

struct Feasible {
  Vec witness;
};
// Multipliers (y for inequalities, z for equalities) with y >= 0,
// sum y_i a_i + sum z_j e_j = 0 and sum y_i b_i + sum z_j f_j < 0.
struct Infeasible {
  Vec certificate;
};
using Feasibility = std::variant<Feasible, Infeasible>;

Feasibility lp_feasible(const HPoly& p);
bool is_feasible(const HPoly& p);
bool verify_farkas(const HPoly& p, const Vec& certificate);

}  // namespace critmult
