#pragma once

#include "domebound/scmap.hpp"

#include <complex>

namespace domebound::hypmetric {

using Complex = std::complex<double>;

// Poincare distance in the upper half-plane,
// acosh(1 + |z-w|^2 / (2 Im z Im w)).
double d_uhp(Complex z, Complex w);

// Hyperbolic distance inside the mapped polygon: pull both points back to
// the half-plane through the solved SC map.
double domain_distance(const scmap::SCMap& map, Complex p, Complex q);

// Distance in the half-plane {Im > -m}; a lower bound for any domain
// contained in it.
double halfplane_distance(double m, Complex p, Complex q);

// Distance in the half-strip {|Re| < a, Im > -q0} via the sine map; an upper
// bound for any domain containing the strip.
double halfstrip_distance(double a, double q0, Complex p, Complex q);

struct DistanceCertificate {
    double value = 0.0;        // distance in the approximating polygon
    double lower_bound = 0.0;  // half-plane oracle
    double upper_bound = 0.0;  // half-strip oracle
    double map_accuracy = 0.0;

    bool holds(double slack = 1e-9) const {
        return lower_bound <= value + slack && value <= upper_bound + slack;
    }
};

} // namespace domebound::hypmetric
