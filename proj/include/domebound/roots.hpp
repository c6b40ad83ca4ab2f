#pragma once

#include <functional>

namespace domebound {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    double bracket_lo = 0.0;  // final bracket with a verified sign change
    double bracket_hi = 0.0;
    int iterations = 0;
};

// Bracketed Brent root finder.  Stops once |f(x)| <= tol_f or the bracket
// width drops below tol_x (absolute).  Throws SolverError when the initial
// bracket carries no sign change (message includes the evaluated endpoints)
// and IterationLimitError when neither stopping criterion is met within
// max_iter iterations.
RootResult brent_root(const std::function<double(double)>& f, double a, double b,
                      double tol_f, double tol_x = 0.0, int max_iter = 200);

// Plain bisection down to a bracket of width <= tol_x; returns the final
// bracket.  Used where a verified sign-change interval is the deliverable.
RootResult bisect_root(const std::function<double(double)>& f, double a, double b,
                       double tol_x, int max_iter = 200);

struct MinResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

// Golden-section minimization of a unimodal function on [a, b].
MinResult golden_min(const std::function<double(double)>& f, double a, double b,
                     double tol_x, int max_iter = 400);

} // namespace domebound
