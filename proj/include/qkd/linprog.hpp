#pragma once

#include <optional>
#include <vector>

namespace qkd {

/// Maximize c.x subject to eq_a x = eq_b, ineq_g x <= ineq_h, 0 <= x <= 1.
/// Small and dense; the unit box keeps the feasible set bounded.
struct BoxedLp {
    int n = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> eq_a;
    std::vector<double> eq_b;
    std::vector<std::vector<double>> ineq_g;
    std::vector<double> ineq_h;
};

struct LpVertex {
    std::vector<double> x;
    double value = 0.0;
};

/// Exact solve by enumerating basic solutions: every vertex fixes enough
/// variables at a bound (or activates an inequality) to leave a square
/// system in the remaining free variables. Deterministic; first optimum
/// found wins ties. Returns nullopt when no vertex is feasible.
std::optional<LpVertex> lp_solve_enumerate(const BoxedLp& lp);

bool lp_feasible(const BoxedLp& lp);

}  // namespace qkd
