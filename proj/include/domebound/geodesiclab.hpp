#pragma once

#include "domebound/rng.hpp"

#include <cstddef>
#include <vector>

namespace domebound::geodesiclab {

// Point or tangent vector in the hyperboloid model of H^3 inside R^{3,1};
// points satisfy <v, v> = -1 with v.t > 0.
struct Vec4 {
    double t = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

double lorentz_dot(const Vec4& a, const Vec4& b);
double dist(const Vec4& a, const Vec4& b);

// Orthonormal moving frame: position p, unit tangent u, normals n and b.
struct Frame {
    Vec4 p, u, n, b;
};

// Unit-speed piecewise geodesic on R, bending by bend_angles[i] at
// bend_times[i].  torsions[i] rotates the bending plane about the incoming
// direction first; planar curves use torsions in {0, pi} (pi flips the
// bending side).  Frames per segment are precomputed at construction.
class PiecewiseGeodesic {
public:
    PiecewiseGeodesic(std::vector<double> times, std::vector<double> angles,
                      std::vector<double> torsions, int dimension);

    const std::vector<double>& bend_times() const { return times_; }
    const std::vector<double>& bend_angles() const { return angles_; }
    const std::vector<double>& torsions() const { return torsions_; }
    int dimension() const { return dimension_; }

    Vec4 point(double t) const;
    Vec4 tangent(double t) const;          // from the segment containing t (right-continuous)
    Vec4 tangent_before(std::size_t bend) const;
    Vec4 tangent_after(std::size_t bend) const;

    double last_bend_time() const { return times_.empty() ? 0.0 : times_.back(); }

private:
    std::vector<double> times_, angles_, torsions_;
    int dimension_;
    std::vector<Frame> seg_frames_;  // frame valid on segment i, anchored at seg_refs_[i]
    std::vector<double> seg_refs_;
    std::size_t segment_of(double t) const;
};

// Supremum of the total bending angle over open parameter windows of length
// L (strict inequality t_k - t_j < L).
double roundness(const PiecewiseGeodesic& gamma, double L);

Vec4 trace(const PiecewiseGeodesic& gamma, double t);

struct ThetaProfile {
    std::vector<double> sample_times;
    std::vector<double> s_values;     // d(gamma(0), gamma(t))
    std::vector<double> theta_plus;   // angle between the ray from gamma(0) and the right tangent
    std::vector<double> theta_minus;  // same with the left tangent
    double ode_max_gap = 0.0;         // trig vs ODE cross-check discrepancy
};

// Profile computed from traced points; when ode_check is set the interval
// ODE s' = cos(theta), theta' = -sin(theta)/tanh(s) is integrated between
// samples and compared (post: agreement within 1e-6 away from s = 0).
ThetaProfile theta_s_profile(const PiecewiseGeodesic& gamma, const std::vector<double>& grid,
                             bool ode_check = true);

struct HillBoundReport {
    bool precondition_ok = false;  // roundness <= G(L)
    bool bound_ok = false;         // max theta_plus <= Theta(L) + G(L) + 1e-9
    double roundness_value = 0.0;
    double threshold = 0.0;        // Theta(L) + G(L)
    double max_theta_plus = 0.0;
    double margin = 0.0;           // threshold - max_theta_plus
    double argmax_time = 0.0;
};

HillBoundReport check_hill_bound(const PiecewiseGeodesic& gamma, double L);

// Minimum distance between sampled points at parameter separation greater
// than 2 * resolution; strictly positive certifies no detected
// self-intersection at this resolution.  t_end < 0 selects the default
// window [0, last bend + 1].
double check_embedding(const PiecewiseGeodesic& gamma, double resolution, double t_end = -1.0);

struct BilipschitzReport {
    bool precondition_ok = false;  // roundness < G(L) strictly
    bool bound_ok = false;         // measured >= predicted - 1e-6
    double roundness_value = 0.0;
    double B = 0.0;                // (G(L) - roundness)/2
    double predicted_ratio = 0.0;  // sin^2(B/2)
    double measured_ratio = 0.0;   // inf of d(gamma(t1), gamma(t2)) / |t1 - t2|
    double argmin_t1 = 0.0, argmin_t2 = 0.0;
};

BilipschitzReport bilipschitz_report(const PiecewiseGeodesic& gamma, double L);

// Planar piecewise geodesic through n consecutive points on a horocycle at
// pairwise consecutive distance L; every bending angle equals
// 2 asin(tanh(L/2)).
PiecewiseGeodesic horocycle_polygon(double L, int n);

struct IsoscelesReport {
    double theta = 0.0;
    double ell = 0.0;             // min over p on g_b of d(p, g_0) + d(p, g_k)
    double sinh_half_ell = 0.0;
    double cos_theta = 0.0;
    double identity_gap = 0.0;    // |sinh(ell/2) - cos(theta)|
    double equal_angle_gap = 0.0; // angle symmetry of the two feet at the minimizer
    double min_param = 0.0;       // circle parameter of the minimizing point
};

// Isosceles triangle with one ideal vertex: geodesics g_0, g_k share an
// ideal point, g_b meets both at interior angle theta; checks
// sinh(ell/2) = cos(theta).
IsoscelesReport isosceles_identity(double theta);

// Triangle-by-triangle unrolling into H^2 preserving d(gamma(0), gamma(t))
// for all t; planar bend angles never exceed the originals.
PiecewiseGeodesic planar_unroll(const PiecewiseGeodesic& gamma);

// Random curve for the property batteries: bend count uniform in
// {1..max_bends}, gaps exponential with mean L/2, angles uniform then
// rescaled so roundness(gamma, L) equals budget, torsions uniform when
// three_d is set.
PiecewiseGeodesic random_curve(Rng& rng, double L, double budget, int max_bends = 10,
                               bool three_d = true);

} // namespace domebound::geodesiclab
