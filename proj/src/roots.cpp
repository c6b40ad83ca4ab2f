#include "domebound/roots.hpp"
#include "domebound/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace domebound {

RootResult brent_root(const std::function<double(double)>& f, double a, double b,
                      double tol_f, double tol_x, int max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, a, a, 0};
    if (fb == 0.0) return {b, fb, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "brent_root: no sign change on bracket: f(" << a << ") = " << fa
            << ", f(" << b << ") = " << fb;
        throw SolverError(msg.str());
    }

    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol_x;
        const double xm = 0.5 * (c - b);
        if (std::fabs(fb) <= tol_f || std::fabs(xm) <= tol1) {
            double lo = b < c ? b : c;
            double hi = b < c ? c : b;
            return {b, fb, lo, hi, iter};
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            const double min2 = std::fabs(e * q);
            if (2.0 * p < (min1 < min2 ? min1 : min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::fabs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? std::fabs(tol1) : -std::fabs(tol1));
        fb = f(b);
    }

    std::ostringstream msg;
    msg << "brent_root: iteration cap " << max_iter << " reached, |f| = "
        << std::fabs(fb) << " > tol " << tol_f;
    throw IterationLimitError(msg.str());
}

RootResult bisect_root(const std::function<double(double)>& f, double a, double b,
                       double tol_x, int max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, a, a, 0};
    if (fb == 0.0) return {b, fb, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "bisect_root: no sign change on bracket: f(" << a << ") = " << fa
            << ", f(" << b << ") = " << fb;
        throw SolverError(msg.str());
    }
    int iter = 0;
    while (b - a > tol_x && iter < max_iter) {
        ++iter;
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // bracket exhausted in doubles
        const double fm = f(m);
        if (fm == 0.0) return {m, 0.0, m, m, iter};
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    if (b - a > tol_x) {
        std::ostringstream msg;
        msg << "bisect_root: bracket width " << (b - a)
            << " above tolerance " << tol_x << " after " << iter << " iterations";
        throw IterationLimitError(msg.str());
    }
    const double x = std::fabs(fa) < std::fabs(fb) ? a : b;
    return {x, f(x), a, b, iter};
}

MinResult golden_min(const std::function<double(double)>& f, double a, double b,
                     double tol_x, int max_iter) {
    static constexpr double R = 0.6180339887498949;
    static constexpr double C = 1.0 - R;
    double x0 = a, x3 = b;
    double x1 = a + C * (b - a);
    double x2 = a + R * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int evals = 2;
    while (std::fabs(x3 - x0) > tol_x && evals < max_iter) {
        if (f2 < f1) {
            x0 = x1; x1 = x2; f1 = f2;
            x2 = x1 + R * (x3 - x1);
            f2 = f(x2);
        } else {
            x3 = x2; x2 = x1; f2 = f1;
            x1 = x2 - R * (x2 - x0);
            f1 = f(x1);
        }
        ++evals;
    }
    if (f1 < f2) return {x1, f1, evals};
    return {x2, f2, evals};
}

} // namespace domebound
