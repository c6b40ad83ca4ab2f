#include "domebound/geodesiclab.hpp"

#include "domebound/errors.hpp"
#include "domebound/roots.hpp"
#include "domebound/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace domebound::geodesiclab {

namespace {

Vec4 add(const Vec4& a, const Vec4& b) { return {a.t + b.t, a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec4 scale(const Vec4& a, double s) { return {a.t * s, a.x * s, a.y * s, a.z * s}; }
Vec4 combine(const Vec4& a, double sa, const Vec4& b, double sb) {
    return add(scale(a, sa), scale(b, sb));
}

double clamp_cos(double c) { return std::min(1.0, std::max(-1.0, c)); }

Frame advanced(const Frame& f, double dt) {
    const double ch = std::cosh(dt), sh = std::sinh(dt);
    Frame out = f;
    out.p = combine(f.p, ch, f.u, sh);
    out.u = combine(f.p, sh, f.u, ch);
    return out;
}

// Bend by phi after rotating the normal plane about the tangent by tau.
Frame bent(const Frame& f, double phi, double tau) {
    Frame out = f;
    const Vec4 n1 = combine(f.n, std::cos(tau), f.b, std::sin(tau));
    const Vec4 b1 = combine(f.n, -std::sin(tau), f.b, std::cos(tau));
    out.u = combine(f.u, std::cos(phi), n1, std::sin(phi));
    out.n = combine(f.u, -std::sin(phi), n1, std::cos(phi));
    out.b = b1;
    return out;
}

// Inverse of bent(): undo the bend, then undo the torsion.
Frame unbent(const Frame& f, double phi, double tau) {
    Frame out = f;
    const Vec4 u0 = combine(f.u, std::cos(phi), f.n, -std::sin(phi));
    const Vec4 n1 = combine(f.u, std::sin(phi), f.n, std::cos(phi));
    out.u = u0;
    out.n = combine(n1, std::cos(tau), f.b, -std::sin(tau));
    out.b = combine(n1, std::sin(tau), f.b, std::cos(tau));
    return out;
}

// Lorentz Gram-Schmidt; composition drift stays at machine level.
void renormalize(Frame& f) {
    f.p = scale(f.p, 1.0 / std::sqrt(-lorentz_dot(f.p, f.p)));
    f.u = add(f.u, scale(f.p, lorentz_dot(f.u, f.p)));
    f.u = scale(f.u, 1.0 / std::sqrt(lorentz_dot(f.u, f.u)));
    f.n = add(f.n, scale(f.p, lorentz_dot(f.n, f.p)));
    f.n = add(f.n, scale(f.u, -lorentz_dot(f.n, f.u)));
    f.n = scale(f.n, 1.0 / std::sqrt(lorentz_dot(f.n, f.n)));
    f.b = add(f.b, scale(f.p, lorentz_dot(f.b, f.p)));
    f.b = add(f.b, scale(f.u, -lorentz_dot(f.b, f.u)));
    f.b = add(f.b, scale(f.n, -lorentz_dot(f.b, f.n)));
    f.b = scale(f.b, 1.0 / std::sqrt(lorentz_dot(f.b, f.b)));
}

// Unit tangent at b pointing away from a (the ray direction at b).
Vec4 ray_direction(const Vec4& a, const Vec4& b, double d) {
    const double sh = std::sinh(d);
    return combine(b, std::cosh(d) / sh, a, -1.0 / sh);
}

} // namespace

double lorentz_dot(const Vec4& a, const Vec4& b) {
    return -a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

double dist(const Vec4& a, const Vec4& b) {
    return std::acosh(std::max(1.0, -lorentz_dot(a, b)));
}

PiecewiseGeodesic::PiecewiseGeodesic(std::vector<double> times, std::vector<double> angles,
                                     std::vector<double> torsions, int dimension)
    : times_(std::move(times)), angles_(std::move(angles)), torsions_(std::move(torsions)),
      dimension_(dimension) {
    const std::size_t n = times_.size();
    if (angles_.size() != n)
        throw PreconditionError("PiecewiseGeodesic: times/angles size mismatch");
    if (torsions_.empty()) torsions_.assign(n, 0.0);
    if (torsions_.size() != n)
        throw PreconditionError("PiecewiseGeodesic: times/torsions size mismatch");
    if (dimension_ != 2 && dimension_ != 3)
        throw PreconditionError("PiecewiseGeodesic: dimension must be 2 or 3");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(times_[i]))
            throw PreconditionError("PiecewiseGeodesic: non-finite bend time");
        if (i + 1 < n && !(times_[i] < times_[i + 1]))
            throw PreconditionError("PiecewiseGeodesic: bend times must be strictly ascending");
        if (!(angles_[i] >= 0.0 && angles_[i] < std::numbers::pi))
            throw PreconditionError("PiecewiseGeodesic: bend angle outside [0, pi)");
        if (!(torsions_[i] >= 0.0 && torsions_[i] < 2.0 * std::numbers::pi))
            throw PreconditionError("PiecewiseGeodesic: torsion outside [0, 2 pi)");
        if (dimension_ == 2) {
            const double d0 = std::fabs(torsions_[i]);
            const double dpi = std::fabs(torsions_[i] - std::numbers::pi);
            if (std::min(d0, dpi) > 1e-12)
                throw PreconditionError("PiecewiseGeodesic: planar curves take torsions in {0, pi}");
        }
    }

    // Segment i lies between bends i-1 and i; the segment containing 0 gets
    // the base frame, the rest are walked outward through the bends.
    Frame base;
    base.p = {1.0, 0.0, 0.0, 0.0};
    base.u = {0.0, 1.0, 0.0, 0.0};
    base.n = {0.0, 0.0, 1.0, 0.0};
    base.b = {0.0, 0.0, 0.0, 1.0};
    seg_frames_.assign(n + 1, base);
    seg_refs_.assign(n + 1, 0.0);
    const std::size_t i0 = static_cast<std::size_t>(
        std::upper_bound(times_.begin(), times_.end(), 0.0) - times_.begin());
    seg_frames_[i0] = base;
    seg_refs_[i0] = 0.0;
    for (std::size_t i = i0 + 1; i <= n; ++i) {
        Frame f = advanced(seg_frames_[i - 1], times_[i - 1] - seg_refs_[i - 1]);
        f = bent(f, angles_[i - 1], torsions_[i - 1]);
        renormalize(f);
        seg_frames_[i] = f;
        seg_refs_[i] = times_[i - 1];
    }
    for (std::size_t i = i0; i-- > 0;) {
        Frame f = advanced(seg_frames_[i + 1], times_[i] - seg_refs_[i + 1]);
        f = unbent(f, angles_[i], torsions_[i]);
        renormalize(f);
        seg_frames_[i] = f;
        seg_refs_[i] = times_[i];
    }
}

std::size_t PiecewiseGeodesic::segment_of(double t) const {
    return static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) -
                                    times_.begin());
}

Vec4 PiecewiseGeodesic::point(double t) const {
    const std::size_t i = segment_of(t);
    const Frame& f = seg_frames_[i];
    const double dt = t - seg_refs_[i];
    return combine(f.p, std::cosh(dt), f.u, std::sinh(dt));
}

Vec4 PiecewiseGeodesic::tangent(double t) const {
    const std::size_t i = segment_of(t);
    const Frame& f = seg_frames_[i];
    const double dt = t - seg_refs_[i];
    return combine(f.p, std::sinh(dt), f.u, std::cosh(dt));
}

Vec4 PiecewiseGeodesic::tangent_before(std::size_t bend) const {
    const Frame& f = seg_frames_[bend];
    const double dt = times_[bend] - seg_refs_[bend];
    return combine(f.p, std::sinh(dt), f.u, std::cosh(dt));
}

Vec4 PiecewiseGeodesic::tangent_after(std::size_t bend) const {
    const Frame& f = seg_frames_[bend + 1];
    const double dt = times_[bend] - seg_refs_[bend + 1];
    return combine(f.p, std::sinh(dt), f.u, std::cosh(dt));
}

Vec4 trace(const PiecewiseGeodesic& gamma, double t) { return gamma.point(t); }

double roundness(const PiecewiseGeodesic& gamma, double L) {
    if (!(L > 0.0)) throw PreconditionError("roundness: L must be positive");
    const std::vector<double>& t = gamma.bend_times();
    const std::vector<double>& phi = gamma.bend_angles();
    const std::size_t n = t.size();
    double best = 0.0;
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) sum -= phi[j - 1];
        if (k < j) {
            k = j;
            sum = 0.0;
        }
        while (k < n && t[k] - t[j] < L) {
            sum += phi[k];
            ++k;
        }
        best = std::max(best, sum);
    }
    return best;
}

ThetaProfile theta_s_profile(const PiecewiseGeodesic& gamma, const std::vector<double>& grid,
                             bool ode_check) {
    if (grid.empty()) throw PreconditionError("theta_s_profile: empty grid");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] <= grid[i + 1]))
            throw PreconditionError("theta_s_profile: grid must be ascending");
    for (double tb : gamma.bend_times()) {
        if (tb <= grid.front() || tb >= grid.back()) continue;
        const auto it = std::lower_bound(grid.begin(), grid.end(), tb - 1e-12);
        if (it == grid.end() || std::fabs(*it - tb) > 1e-12)
            throw PreconditionError("theta_s_profile: grid must include all bend times in range");
    }

    const Vec4 origin = gamma.point(0.0);
    const std::vector<double>& bends = gamma.bend_times();

    ThetaProfile prof;
    for (double t : grid) {
        const Vec4 p = gamma.point(t);
        const double s = dist(origin, p);
        prof.sample_times.push_back(t);
        prof.s_values.push_back(s);
        if (s < 1e-12) {
            prof.theta_plus.push_back(0.0);
            prof.theta_minus.push_back(0.0);
            continue;
        }
        const Vec4 away = ray_direction(origin, p, s);
        const auto bend_it = std::lower_bound(bends.begin(), bends.end(), t - 1e-14);
        const bool at_bend = bend_it != bends.end() && std::fabs(*bend_it - t) <= 1e-14;
        if (at_bend) {
            const std::size_t bi = static_cast<std::size_t>(bend_it - bends.begin());
            prof.theta_minus.push_back(std::acos(clamp_cos(lorentz_dot(away, gamma.tangent_before(bi)))));
            prof.theta_plus.push_back(std::acos(clamp_cos(lorentz_dot(away, gamma.tangent_after(bi)))));
        } else {
            const double th = std::acos(clamp_cos(lorentz_dot(away, gamma.tangent(t))));
            prof.theta_minus.push_back(th);
            prof.theta_plus.push_back(th);
        }
    }

    if (ode_check) {
        // Integrate s' = cos(theta), theta' = -sin(theta)/tanh(s) across each
        // sample interval that starts away from the origin singularity.
        for (std::size_t i = 0; i + 1 < prof.sample_times.size(); ++i) {
            const double t0 = prof.sample_times[i];
            const double t1 = prof.sample_times[i + 1];
            const double len = t1 - t0;
            if (len <= 0.0) continue;
            double s = prof.s_values[i];
            double th = prof.theta_plus[i];
            if (s < 1e-3) continue;  // series start handled by the trig values
            const int steps = 2 + static_cast<int>(std::ceil(len / 0.02));
            const double h = len / steps;
            bool valid = true;
            for (int k = 0; k < steps && valid; ++k) {
                auto rhs = [](double ss, double tt, double& ds, double& dth) {
                    ds = std::cos(tt);
                    dth = -std::sin(tt) / std::tanh(ss);
                };
                double k1s, k1t, k2s, k2t, k3s, k3t, k4s, k4t;
                rhs(s, th, k1s, k1t);
                rhs(s + 0.5 * h * k1s, th + 0.5 * h * k1t, k2s, k2t);
                rhs(s + 0.5 * h * k2s, th + 0.5 * h * k2t, k3s, k3t);
                rhs(s + h * k3s, th + h * k3t, k4s, k4t);
                s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
                th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
                if (!(s > 1e-6) || !std::isfinite(th)) valid = false;
            }
            if (!valid) continue;
            prof.ode_max_gap = std::max(prof.ode_max_gap,
                                        std::fabs(s - prof.s_values[i + 1]));
            prof.ode_max_gap = std::max(prof.ode_max_gap,
                                        std::fabs(th - prof.theta_minus[i + 1]));
        }
    }
    return prof;
}

HillBoundReport check_hill_bound(const PiecewiseGeodesic& gamma, double L) {
    HillBoundReport rep;
    const specialfn::TangentSolution ts = specialfn::solve_tangent(L);
    rep.threshold = ts.theta + ts.g_value;
    rep.roundness_value = roundness(gamma, L);
    rep.precondition_ok = rep.roundness_value <= ts.g_value + 1e-12;
    if (!rep.precondition_ok) return rep;

    // theta is decreasing between bends, so its supremum over t > 0 is
    // attained just after a bend; a uniform grid is added for the record.
    std::vector<double> grid;
    const double t_end = gamma.last_bend_time() + 2.0 * L;
    const int samples = 160;
    for (int i = 0; i <= samples; ++i) grid.push_back(t_end * i / samples);
    for (double tb : gamma.bend_times())
        if (tb > 0.0 && tb < t_end) grid.push_back(tb);
    std::sort(grid.begin(), grid.end());

    const ThetaProfile prof = theta_s_profile(gamma, grid, false);
    for (std::size_t i = 0; i < prof.sample_times.size(); ++i) {
        const double th = std::max(prof.theta_plus[i], prof.theta_minus[i]);
        if (th > rep.max_theta_plus) {
            rep.max_theta_plus = th;
            rep.argmax_time = prof.sample_times[i];
        }
    }
    rep.margin = rep.threshold - rep.max_theta_plus;
    rep.bound_ok = rep.max_theta_plus <= rep.threshold + 1e-9;
    return rep;
}

namespace {

struct SegmentPiece {
    double a, b;  // parameter interval
};

// Branch-and-bound minimum distance between two parameter rectangles; the
// midpoint-minus-half-lengths bound prunes, leaves filter the adjacency
// window.
void min_dist_pieces(const PiecewiseGeodesic& g, double a0, double a1, double b0, double b1,
                     double window, double resolution, double& best) {
    const double la = a1 - a0, lb = b1 - b0;
    const Vec4 ma = g.point(0.5 * (a0 + a1));
    const Vec4 mb = g.point(0.5 * (b0 + b1));
    const double dmid = dist(ma, mb);
    if (dmid - 0.5 * la - 0.5 * lb >= best) return;
    if (la <= resolution && lb <= resolution) {
        for (double ta : {a0, a1})
            for (double tb : {b0, b1}) {
                if (std::fabs(tb - ta) <= window) continue;
                const double d = dist(g.point(ta), g.point(tb));
                if (d < best) best = d;
            }
        if (std::fabs(0.5 * (a0 + a1) - 0.5 * (b0 + b1)) > window && dmid < best) best = dmid;
        return;
    }
    if (la >= lb) {
        const double am = 0.5 * (a0 + a1);
        min_dist_pieces(g, a0, am, b0, b1, window, resolution, best);
        min_dist_pieces(g, am, a1, b0, b1, window, resolution, best);
    } else {
        const double bm = 0.5 * (b0 + b1);
        min_dist_pieces(g, a0, a1, b0, bm, window, resolution, best);
        min_dist_pieces(g, a0, a1, bm, b1, window, resolution, best);
    }
}

} // namespace

double check_embedding(const PiecewiseGeodesic& gamma, double resolution, double t_end) {
    if (!(resolution > 0.0)) throw PreconditionError("check_embedding: resolution must be positive");
    if (t_end < 0.0) t_end = std::max(1.0, gamma.last_bend_time() + 1.0);
    const double window = 2.0 * resolution;

    // Segment boundaries inside the sampling window.
    std::vector<double> cuts{0.0};
    for (double tb : gamma.bend_times())
        if (tb > 0.0 && tb < t_end) cuts.push_back(tb);
    cuts.push_back(t_end);

    // Points on one geodesic segment realize d = |dt|; the smallest sampled
    // separation beyond the window is 2 resolution + resolution.
    double best = 3.0 * resolution;

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        for (std::size_t j = i; j + 1 < cuts.size(); ++j) {
            if (i == j) continue;
            min_dist_pieces(gamma, cuts[i], cuts[i + 1], cuts[j], cuts[j + 1], window,
                            resolution, best);
        }
    }
    return best;
}

BilipschitzReport bilipschitz_report(const PiecewiseGeodesic& gamma, double L) {
    BilipschitzReport rep;
    const double g = specialfn::g_func(L);
    rep.roundness_value = roundness(gamma, L);
    rep.precondition_ok = rep.roundness_value < g;
    if (!rep.precondition_ok) return rep;
    rep.B = 0.5 * (g - rep.roundness_value);
    const double sb = std::sin(0.5 * rep.B);
    rep.predicted_ratio = sb * sb;

    const double t_end = std::max(1.0, gamma.last_bend_time() + L);
    const double step = 0.01;
    const int n = static_cast<int>(std::floor(t_end / step)) + 1;
    std::vector<Vec4> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = gamma.point(i * step);

    rep.measured_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double ratio = dist(pts[i], pts[j]) / ((j - i) * step);
            if (ratio < rep.measured_ratio) {
                rep.measured_ratio = ratio;
                rep.argmin_t1 = i * step;
                rep.argmin_t2 = j * step;
            }
        }
    }
    rep.bound_ok = rep.measured_ratio >= rep.predicted_ratio - 1e-6;
    return rep;
}

PiecewiseGeodesic horocycle_polygon(double L, int n) {
    if (!(L > 0.0)) throw PreconditionError("horocycle_polygon: L must be positive");
    if (n < 3) throw PreconditionError("horocycle_polygon: need n >= 3 points");
    const double phi = 2.0 * std::asin(std::tanh(0.5 * L));
    std::vector<double> times, angles;
    for (int i = 1; i <= n - 2; ++i) {
        times.push_back(L * i);
        angles.push_back(phi);
    }
    return PiecewiseGeodesic(times, angles, {}, 2);
}

IsoscelesReport isosceles_identity(double theta) {
    if (!(theta > 1e-6) || !(theta < std::numbers::pi / 2 - 1e-9))
        throw PreconditionError("isosceles_identity: theta outside (0, pi/2), construction degenerate");
    // Half-plane model: the shared ideal point is infinity, g_0 and g_k are
    // the vertical lines x = -+w with w = cos(theta), and g_b is the unit
    // semicircle, which meets both lines at interior angle theta.
    const double w = std::cos(theta);
    const auto total = [w](double phi) {
        const double sp = std::sin(phi), cp = std::cos(phi);
        return std::asinh((w - cp) / sp) + std::asinh((w + cp) / sp);
    };
    const MinResult min = golden_min(total, 1e-3, std::numbers::pi - 1e-3, 1e-12);

    IsoscelesReport rep;
    rep.theta = theta;
    rep.min_param = min.x;
    rep.ell = min.fx;
    rep.sinh_half_ell = std::sinh(0.5 * rep.ell);
    rep.cos_theta = w;
    rep.identity_gap = std::fabs(rep.sinh_half_ell - rep.cos_theta);

    // Equal-angle check at the minimizer: the feet geodesics to g_0 and g_k
    // are circles centered at (-+w, 0); angles against g_b are Euclidean in
    // the conformal model.
    const double cp = std::cos(min.x), sp = std::sin(min.x);
    const auto angle_with_gb = [&](double center) {
        const double rx = cp - center, ry = sp;
        double tx = -ry, ty = rx;  // tangent of the foot circle at p
        const double nrm = std::hypot(tx, ty);
        tx /= nrm;
        ty /= nrm;
        // tangent of g_b at p is (-sin, cos)
        return std::acos(clamp_cos(std::fabs(tx * (-sp) + ty * cp)));
    };
    rep.equal_angle_gap = std::fabs(angle_with_gb(-w) - angle_with_gb(+w));
    return rep;
}

namespace {

// Unroll the side of the curve with positive bend times into H^2 about the
// origin; returns the planar bend angles and their sides (+1 toward the
// base normal, -1 away).
void unroll_side(const PiecewiseGeodesic& gamma, const std::vector<double>& times,
                 std::vector<double>& out_angles, std::vector<int>& out_sides) {
    const std::size_t n = times.size();
    const Vec4 origin = gamma.point(0.0);

    // Distances from the origin to the bend points plus one virtual point
    // past the last bend, which pins the outgoing direction there.
    std::vector<double> f(n + 1), seg(n);
    std::vector<double> tt = times;
    tt.push_back(times.back() + 1.0);
    for (std::size_t i = 0; i <= n; ++i) {
        f[i] = dist(origin, gamma.point(tt[i]));
        if (f[i] < 1e-9)
            throw SolverError("planar_unroll: curve returns to its starting point");
    }
    for (std::size_t i = 0; i < n; ++i) seg[i] = tt[i + 1] - tt[i];

    // Cumulative angle at the origin; each triangle (origin, a_i, a_{i+1})
    // contributes the law-of-cosines angle.
    std::vector<double> psi(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double num = std::cosh(f[i]) * std::cosh(f[i + 1]) - std::cosh(seg[i]);
        const double den = std::sinh(f[i]) * std::sinh(f[i + 1]);
        psi[i + 1] = psi[i] + std::acos(clamp_cos(num / den));
    }

    // Place in the hyperboloid plane z = 0.
    const Vec4 o{1.0, 0.0, 0.0, 0.0};
    const Vec4 e1{0.0, 1.0, 0.0, 0.0};
    const Vec4 e2{0.0, 0.0, 1.0, 0.0};
    std::vector<Vec4> pts(n + 2);
    pts[0] = o;
    for (std::size_t i = 0; i <= n; ++i) {
        const Vec4 dir = combine(e1, std::cos(psi[i]), e2, std::sin(psi[i]));
        pts[i + 1] = combine(o, std::cosh(f[i]), dir, std::sinh(f[i]));
    }

    out_angles.assign(n, 0.0);
    out_sides.assign(n, +1);
    for (std::size_t i = 1; i <= n; ++i) {
        const Vec4& prev = pts[i - 1];
        const Vec4& cur = pts[i];
        const Vec4& next = pts[i + 1];
        const double din = dist(prev, cur), dout = dist(cur, next);
        const Vec4 t_in = scale(ray_direction(prev, cur, din), 1.0);
        const Vec4 t_out = ray_direction(next, cur, dout);  // toward next is -this
        // interior angle between the incoming continuation and the outgoing
        // direction gives the bend.
        out_angles[i - 1] = std::acos(clamp_cos(lorentz_dot(t_in, scale(t_out, -1.0))));
        // Side of the turn from the (t, x, y) orientation determinant.
        const Vec4 t_next = scale(t_out, -1.0);
        const double det = cur.t * (t_in.x * t_next.y - t_in.y * t_next.x) -
                           cur.x * (t_in.t * t_next.y - t_in.y * t_next.t) +
                           cur.y * (t_in.t * t_next.x - t_in.x * t_next.t);
        out_sides[i - 1] = det >= 0.0 ? +1 : -1;
    }
}

} // namespace

PiecewiseGeodesic planar_unroll(const PiecewiseGeodesic& gamma) {
    const std::vector<double>& times = gamma.bend_times();
    for (double t : times)
        if (std::fabs(t) < 1e-12)
            throw PreconditionError("planar_unroll: gamma(0) must not be a bend point");

    std::vector<double> pos, neg;
    for (double t : times) (t > 0.0 ? pos : neg).push_back(t);

    std::vector<double> ang_pos, ang_neg;
    std::vector<int> side_pos, side_neg;
    if (!pos.empty()) unroll_side(gamma, pos, ang_pos, side_pos);
    if (!neg.empty()) {
        // Unroll the time-reversed curve; reversal preserves bend angles.
        std::vector<double> rt, ra, rtau;
        for (std::size_t i = neg.size(); i-- > 0;) rt.push_back(-neg[i]);
        const std::vector<double>& all_a = gamma.bend_angles();
        const std::vector<double>& all_tau = gamma.torsions();
        for (std::size_t i = neg.size(); i-- > 0;) {
            ra.push_back(all_a[i]);
            rtau.push_back(all_tau[i]);
        }
        PiecewiseGeodesic reversed(rt, ra, rtau, gamma.dimension());
        std::vector<double> a_rev;
        std::vector<int> s_rev;
        unroll_side(reversed, rt, a_rev, s_rev);
        ang_neg.assign(a_rev.rbegin(), a_rev.rend());
        side_neg.assign(s_rev.rbegin(), s_rev.rend());
    }

    // Reassemble: negative-side bends first (ascending times), then positive.
    std::vector<double> out_times, out_angles, out_tors;
    std::vector<int> out_sides;
    for (std::size_t i = 0; i < neg.size(); ++i) {
        out_times.push_back(neg[i]);
        out_angles.push_back(ang_neg[i]);
        out_sides.push_back(side_neg[i]);
    }
    for (std::size_t i = 0; i < pos.size(); ++i) {
        out_times.push_back(pos[i]);
        out_angles.push_back(ang_pos[i]);
        out_sides.push_back(side_pos[i]);
    }

    // Torsions encode side flips: tracing bends toward the current normal,
    // whose orientation flips under a pi torsion.
    std::vector<double> torsions(out_times.size(), 0.0);
    int orient = +1;
    for (std::size_t i = 0; i < out_times.size(); ++i) {
        if (out_sides[i] == orient) {
            torsions[i] = 0.0;
        } else {
            torsions[i] = std::numbers::pi;
            orient = -orient;
        }
    }
    return PiecewiseGeodesic(out_times, out_angles, torsions, 2);
}

PiecewiseGeodesic random_curve(Rng& rng, double L, double budget, int max_bends, bool three_d) {
    if (!(budget > 0.0)) throw PreconditionError("random_curve: budget must be positive");
    const int count = 1 + rng.below(max_bends);
    std::vector<double> times, angles, torsions;
    double t = 0.0;
    for (int i = 0; i < count; ++i) {
        t += std::max(1e-4, rng.exponential(0.5 * L));
        times.push_back(t);
        angles.push_back(rng.uniform(1e-3, std::numbers::pi - 1e-3));
        torsions.push_back(three_d ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0);
    }
    PiecewiseGeodesic draft(times, angles, torsions, three_d ? 3 : 2);
    const double rho = roundness(draft, L);
    const double s = budget / rho;
    for (double& a : angles) a *= s;
    return PiecewiseGeodesic(times, angles, torsions, three_d ? 3 : 2);
}

} // namespace domebound::geodesiclab
