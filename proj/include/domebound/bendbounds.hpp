#pragma once

#include <utility>
#include <vector>

namespace domebound::bendbounds {

// Upper bound 2 acos(-sinh(L/2)) on the L-roundness of an embedded pleated
// plane, defined for L in (0, 2 asinh 1).
double c1(double L);

// f(L, x) = min(L e^{|x|/2}, asinh(e^{|x|} sinh L)); even in x, f(L,0) = L.
double f_shear(double L, double x);

// g(L, x) = max(L e^{-|x|/2}, asinh(e^{-|x|} sinh L)); even in x, g(L,0) = L.
// For L below the root of 2 tanh(L) = L the first branch wins everywhere.
double g_shear(double L, double x);

// Unique positive root of 2 tanh(L) = L, about 1.91501.
double solve_L0(double tol = 1e-12);

// Q(L, x) = max(G(L)/ceil(f(L,x)/L), G(g(L,x))); even in x, Q(L,0) = G(L),
// non-increasing in |x|.
double q_bound(double L, double x);

struct QBranches {
    double ceiling_branch = 0.0;     // G(L)/ceil(f(L,x)/L)
    double continuous_branch = 0.0;  // G(g(L,x))
    long ceil_f_over_L = 0;
};

// Both branch values of Q at a point (neither branch is "the" value near a
// crossover, so expose both).
QBranches q_branches(double L, double x);

struct QProfile {
    double L = 0.0;
    // Solutions of f(L, x) = k L for integers k >= 2, ascending, each
    // located to width <= 1e-10.
    std::vector<double> jump_abscissas;
    // Closed intervals, each bracketing one crossing of the two branches of
    // Q(L, .) with a verified sign change of their difference.
    std::vector<std::pair<double, double>> crossover_intervals;
};

QProfile q_profile(double L, double x_max);

} // namespace domebound::bendbounds
