#include "domebound/hypmetric.hpp"

#include "domebound/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace domebound::hypmetric {

double d_uhp(Complex z, Complex w) {
    if (!(z.imag() > 0.0) || !(w.imag() > 0.0)) {
        std::ostringstream msg;
        msg << "d_uhp: points must lie in the open upper half-plane, got Im = "
            << z.imag() << ", " << w.imag();
        throw PreconditionError(msg.str());
    }
    const double sq = std::norm(z - w);
    // Clamp absorbs rounding at coincident points.
    const double arg = std::max(1.0, 1.0 + sq / (2.0 * z.imag() * w.imag()));
    return std::acosh(arg);
}

double domain_distance(const scmap::SCMap& map, Complex p, Complex q) {
    const double tol = 1e-12;
    const Complex zp = scmap::sc_inverse(map, p, tol);
    const Complex zq = scmap::sc_inverse(map, q, tol);
    return d_uhp(zp, zq);
}

double halfplane_distance(double m, Complex p, Complex q) {
    if (!(m > 0.0)) throw PreconditionError("halfplane_distance: m must be positive");
    if (!(p.imag() > -m) || !(q.imag() > -m))
        throw PreconditionError("halfplane_distance: point below the half-plane");
    return d_uhp(p + Complex(0.0, m), q + Complex(0.0, m));
}

double halfstrip_distance(double a, double q0, Complex p, Complex q) {
    if (!(a > 0.0) || !(q0 > 0.0))
        throw PreconditionError("halfstrip_distance: strip parameters must be positive");
    const auto inside = [&](Complex z) {
        return std::fabs(z.real()) < a && z.imag() > -q0;
    };
    if (!inside(p) || !inside(q))
        throw PreconditionError("halfstrip_distance: point outside the strip");
    const double scale = std::numbers::pi / (2.0 * a);
    const Complex zp = std::sin(scale * (p + Complex(0.0, q0)));
    const Complex zq = std::sin(scale * (q + Complex(0.0, q0)));
    return d_uhp(zp, zq);
}

} // namespace domebound::hypmetric
