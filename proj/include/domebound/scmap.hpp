#pragma once

#include "domebound/region.hpp"

#include <complex>
#include <string>
#include <vector>

namespace domebound::scmap {

using Complex = std::complex<double>;

// Solved Schwarz-Christoffel data for the map from the upper half-plane onto
// a GeneralizedPolygon with its single infinite vertex at the prevertex
// infinity.  Immutable once solved; forward/inverse evaluation is safe to
// call concurrently.
struct SCMap {
    region::GeneralizedPolygon polygon;   // canonicalized: infinite vertex last
    std::vector<double> prevertices;      // ascending, one per finite vertex
    std::vector<double> angle_params;     // finite alpha_k (copied from polygon)
    Complex affine_scale;                 // C
    Complex affine_shift;                 // A; f(z) = A + C * Integral from prevertices[1]
    int quad_order = 8;                   // Gauss-Jacobi nodes per subinterval
    double accuracy = 0.0;                // max vertex reproduction error
    bool crowding_warning = false;

    // Cached by the solver.
    std::vector<double> betas;            // alpha_k - 1
    std::vector<Complex> side_phases;     // constant phase of the integrand per side
    std::vector<Complex> cumulative;      // Integral from prevertices[1] to prevertices[k]
    std::vector<Complex> prevertex_images;
    Complex anchor_z;                     // interior reference point
    Complex anchor_w;                     // forward(anchor_z)
};

struct SolveOptions {
    int quad_order = 8;
    double tol = 1e-10;
    double pin0 = -1.0;  // prevertex pinned to the first finite vertex
    double pin1 = 0.0;   // prevertex pinned to the second finite vertex
    int max_iterations = 200;
};

SCMap solve_parameters(const region::GeneralizedPolygon& polygon, int quad_order, double tol);
SCMap solve_parameters(const region::GeneralizedPolygon& polygon, const SolveOptions& options);

// SC integral evaluation at a point of the closed upper half-plane.
Complex sc_forward(const SCMap& map, Complex z);

// Same value computed by integrating from an explicit prevertex anchor;
// exposes path independence for verification.
Complex sc_forward_from(const SCMap& map, Complex z, std::size_t anchor_index);

// Newton inversion with ODE initialization; result lies in the open upper
// half-plane and reproduces w under sc_forward within tol.
Complex sc_inverse(const SCMap& map, Complex w, double tol = 1e-12);

std::string serialize(const SCMap& map);
// Rebuild a solved map from its serialized form plus the polygon it solved.
SCMap deserialize(const std::string& text, const region::GeneralizedPolygon& polygon);

} // namespace domebound::scmap
