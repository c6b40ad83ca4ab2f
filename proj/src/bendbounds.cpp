#include "domebound/bendbounds.hpp"

#include "domebound/errors.hpp"
#include "domebound/roots.hpp"
#include "domebound/specialfn.hpp"

#include <cmath>
#include <sstream>

namespace domebound::bendbounds {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        std::ostringstream msg;
        msg << what << ": non-finite input " << x;
        throw PreconditionError(msg.str());
    }
}

// log(sinh L), overflow-safe.
double log_sinh(double L) {
    if (L > 20.0) return L - std::log(2.0) + std::log1p(-std::exp(-2.0 * L));
    return std::log(std::sinh(L));
}

// asinh(e^t), overflow-safe for large t.
double asinh_exp(double t) {
    if (t > 20.0) return t + std::log(2.0);  // relative error below e^{-2t}
    return std::asinh(std::exp(t));
}

} // namespace

double c1(double L) {
    require_finite(L, "c1");
    const double L_max = 2.0 * std::asinh(1.0);
    if (!(L > 0.0 && L < L_max)) {
        std::ostringstream msg;
        msg << "c1: L = " << L << " outside (0, 2 asinh 1) = (0, " << L_max << ")";
        throw PreconditionError(msg.str());
    }
    return 2.0 * std::acos(-std::sinh(0.5 * L));
}

double f_shear(double L, double x) {
    require_finite(L, "f_shear");
    require_finite(x, "f_shear");
    if (L <= 0.0) throw PreconditionError("f_shear: L must be positive");
    if (x == 0.0) return L;
    const double ax = std::fabs(x);
    const double a = L * std::exp(0.5 * ax);
    const double b = asinh_exp(ax + log_sinh(L));
    return a < b ? a : b;
}

double g_shear(double L, double x) {
    require_finite(L, "g_shear");
    require_finite(x, "g_shear");
    if (L <= 0.0) throw PreconditionError("g_shear: L must be positive");
    if (x == 0.0) return L;
    const double ax = std::fabs(x);
    const double a = L * std::exp(-0.5 * ax);
    const double b = std::asinh(std::exp(-ax) * std::sinh(L));
    return a > b ? a : b;
}

double solve_L0(double tol) {
    if (!(tol > 0.0)) throw PreconditionError("solve_L0: tol must be positive");
    auto f = [](double L) { return 2.0 * std::tanh(L) - L; };
    return brent_root(f, 1.0, 3.0, tol, 0.0, 200).x;
}

QBranches q_branches(double L, double x) {
    QBranches out;
    const double g_of_L = specialfn::g_func(L);
    const double f = f_shear(L, x);
    double k = std::ceil(f / L);
    if (k < 1.0) k = 1.0;
    out.ceil_f_over_L = static_cast<long>(k);
    out.ceiling_branch = g_of_L / k;
    const double g = g_shear(L, x);
    out.continuous_branch = g > 0.0 ? specialfn::g_func(g) : 0.0;
    return out;
}

double q_bound(double L, double x) {
    const QBranches b = q_branches(L, x);
    return b.ceiling_branch > b.continuous_branch ? b.ceiling_branch : b.continuous_branch;
}

QProfile q_profile(double L, double x_max) {
    require_finite(L, "q_profile");
    require_finite(x_max, "q_profile");
    if (L <= 0.0) throw PreconditionError("q_profile: L must be positive");
    if (!(x_max > 0.0)) throw PreconditionError("q_profile: x_max must be positive");

    QProfile prof;
    prof.L = L;

    // Jump abscissas: one root of f(L, x) = k L per integer k >= 2 up to
    // f(L, x_max)/L; f is strictly increasing in x on [0, inf), which
    // brackets each root between the previous jump and x_max.
    const double f_end = f_shear(L, x_max);
    const long k_end = static_cast<long>(std::floor(f_end / L));
    double lo = 0.0;
    for (long k = 2; k <= k_end; ++k) {
        const double target = static_cast<double>(k) * L;
        auto fk = [&](double x) { return f_shear(L, x) - target; };
        if (fk(x_max) < 0.0) break;  // k_end rounding edge
        const RootResult r = brent_root(fk, lo, x_max, 0.0, 0.5e-10, 400);
        prof.jump_abscissas.push_back(r.x);
        lo = r.x;
    }

    // Crossovers: on each interval of constancy of ceil(f/L) the ceiling
    // branch is a constant G(L)/k while G(g(L, .)) decreases, so the branch
    // difference changes sign at most once per interval.
    const double g_of_L = specialfn::g_func(L);
    auto diff = [&](double x, double plateau_value) {
        return specialfn::g_func(g_shear(L, x)) - plateau_value;
    };
    const double pad = 1e-9;
    std::vector<double> edges;
    edges.push_back(0.0);
    for (double j : prof.jump_abscissas) edges.push_back(j);
    edges.push_back(x_max);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i] + pad;
        const double b = edges[i + 1] - pad;
        if (!(b > a)) continue;
        const double plateau = g_of_L / static_cast<double>(i + 2);  // ceil = i+2 on this piece
        const double da = diff(a, plateau);
        const double db = diff(b, plateau);
        if (da == 0.0 || db == 0.0 || (da > 0.0) != (db > 0.0)) {
            RootResult r;
            try {
                r = bisect_root([&](double x) { return diff(x, plateau); }, a, b, 1e-10, 200);
            } catch (const IterationLimitError&) {
                std::ostringstream msg;
                msg << "q_profile: crossover on [" << a << ", " << b
                    << "] could not be isolated to width 1e-10";
                throw SolverError(msg.str());
            }
            prof.crossover_intervals.emplace_back(r.bracket_lo, r.bracket_hi);
        }
    }
    return prof;
}

} // namespace domebound::bendbounds
