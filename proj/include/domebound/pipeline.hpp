#pragma once

#include "domebound/hypmetric.hpp"
#include "domebound/region.hpp"
#include "domebound/scmap.hpp"

#include <string>
#include <utility>
#include <vector>

namespace domebound::pipeline {

inline constexpr int kDefaultSamples = 192;
inline constexpr int kDefaultQuadOrder = 8;
inline constexpr double kDefaultScTol = 1e-10;

struct BoundResult {
    double L = 0.0;
    double G_value = 0.0;
    double c1_value = 0.0;
    double half_width = 0.0;
    std::size_t interval_count = 0;
    double sc_accuracy = 0.0;
    double H = 0.0;  // hyperbolic distance in the approximating polygon
    double K = 0.0;  // exp(H), the certified upper bound
    hypmetric::DistanceCertificate certificate;
    int samples_per_branch = 0;
    int quad_order = 0;
};

// Full chain: step function -> polygon -> SC parameter problem -> distance
// between 0 and i c1(L), with the half-plane/half-strip sandwich
// certificate.  half_width <= 0 selects the automatic truncation point.
BoundResult compute_bound(double L, int samples_per_branch = kDefaultSamples,
                          int quad_order = kDefaultQuadOrder, double half_width = 0.0);

struct OptimizeResult {
    double L_best = 0.0;
    BoundResult best;
    bool unimodal = true;  // the coarse scan had a single local minimum
    std::vector<std::pair<double, double>> scan;  // (L, K) at evaluated points
};

// Coarse scan plus golden-section refinement of K(L).
OptimizeResult optimize_L(double L_min, double L_max, int coarse_steps, double tol,
                          int samples_per_branch = kDefaultSamples,
                          int quad_order = kDefaultQuadOrder);

struct GCurveRow {
    double L = 0.0;
    double g = 0.0;            // G(L)
    double conjectured = 0.0;  // 2 asin(tanh(L/2))
};

std::vector<GCurveRow> gcurve_table(const std::vector<double>& grid);
std::vector<double> uniform_grid(double lo, double hi, int points);

// Reference constant 2 pi - 2 asin(sech 1) from the earlier roundness bound,
// kept in the regression table.
double emit_fbound_reference();

std::string serialize(const BoundResult& r);
std::string gcurve_csv(const std::vector<GCurveRow>& rows);
void write_gcurve_svg(const std::string& path, const std::vector<GCurveRow>& rows);
void write_polygon_svg(const std::string& path, const region::StepFunction& step);

} // namespace domebound::pipeline
