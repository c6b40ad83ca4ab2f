#include "domebound/specialfn.hpp"

#include "domebound/errors.hpp"
#include "domebound/roots.hpp"

#include <cmath>
#include <sstream>

namespace domebound::specialfn {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        std::ostringstream msg;
        msg << what << ": non-finite input " << x;
        throw PreconditionError(msg.str());
    }
}

// Below this L the residual is flatter than double arithmetic can resolve
// (its range is ~L^3/6); the series c = L/3 + O(L^3), G = L (1 - L^2/18)
// is exact to well past machine precision there.
constexpr double kSeriesThreshold = 3e-7;

} // namespace

double hill(double x) {
    require_finite(x, "hill");
    return std::acos(std::tanh(x));
}

double hill_deriv(double x) {
    require_finite(x, "hill_deriv");
    return -1.0 / std::cosh(x);
}

double hill_drop(double x1, double x2) {
    const double h2 = hill(x2);
    const double direct = hill(x1) - h2;
    if (std::fabs(direct) > 1e-2 * h2) return direct;
    // The direct subtraction cancels; use
    // h(x1) - h(x2) = atan(sinh x2) - atan(sinh x1) folded into a single
    // atan.  The numerator is a product, so it cannot cancel, and for a
    // small drop the denominator stays away from zero.
    const double num = 2.0 * std::cosh(0.5 * (x1 + x2)) * std::sinh(0.5 * (x2 - x1));
    const double den = 1.0 + std::sinh(x1) * std::sinh(x2);
    if (den <= 0.0) return direct;  // wrap region only occurs for large drops
    return std::atan(num / den);
}

TangentSolution solve_tangent(double L, double tol) {
    require_finite(L, "solve_tangent");
    if (L <= 0.0) throw PreconditionError("solve_tangent: L must be positive");
    if (!(tol > 0.0)) throw PreconditionError("solve_tangent: tol must be positive");

    auto residual_at = [L](double c) {
        return hill_drop(c - L, c) + L * hill_deriv(c);
    };

    TangentSolution sol;
    sol.L = L;

    if (L < kSeriesThreshold) {
        sol.c = L / 3.0;
        sol.theta = hill(sol.c);
        sol.g_value = hill_drop(sol.c - L, sol.c);
        sol.residual = std::fabs(residual_at(sol.c));
        return sol;
    }

    const double eps = 1e-12 * std::max(1.0, L);
    const RootResult root = brent_root(residual_at, eps, L - eps, tol, 0.0, 200);

    sol.c = root.x;
    sol.theta = hill(sol.c);
    sol.g_value = hill_drop(sol.c - L, sol.c);
    sol.residual = std::fabs(root.fx);

    if (!(sol.c > 0.0 && sol.c < L)) {
        std::ostringstream msg;
        msg << "solve_tangent: root " << sol.c << " escaped (0, " << L << ")";
        throw SolverError(msg.str());
    }
    return sol;
}

double g_func(double L) {
    return solve_tangent(L).g_value;
}

double theta_func(double L) {
    return solve_tangent(L).theta;
}

} // namespace domebound::specialfn
