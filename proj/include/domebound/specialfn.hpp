#pragma once

namespace domebound::specialfn {

inline constexpr double kDefaultTangentTol = 1e-14;

// Solution of the tangent-line problem on the graph of the hill function
// h(x) = acos(tanh x): the tangent at (c, h(c)) meets the graph again at
// (c - L, h(c - L)).
struct TangentSolution {
    double L = 0.0;         // arc length parameter, > 0
    double c = 0.0;         // tangent point, 0 < c < L
    double theta = 0.0;     // Theta(L) = h(c)
    double g_value = 0.0;   // G(L) = h(c - L) - h(c) = -L h'(c)
    double residual = 0.0;  // |L h'(c) - h(c) + h(c - L)| at the returned c
};

// h(x) = acos(tanh x), a decreasing homeomorphism R -> (0, pi) with
// h(0) = pi/2 and h(x) + h(-x) = pi.
double hill(double x);

// h'(x) = -sech(x) = -sin(h(x)).
double hill_deriv(double x);

// h(x1) - h(x2) for x1 < x2, evaluated through an atan identity when the
// direct subtraction would cancel.
double hill_drop(double x1, double x2);

// Unique root c in (0, L) of h(c - L) - h(c) + L h'(c) = 0.
TangentSolution solve_tangent(double L, double tol = kDefaultTangentTol);

// G(L), strictly increasing in L.
double g_func(double L);

// Theta(L) = h(c(L)).
double theta_func(double L);

} // namespace domebound::specialfn
