#include "domebound/region.hpp"

#include "domebound/bendbounds.hpp"
#include "domebound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace domebound::region {

namespace {

// Graded knot map for the refinement of the continuous-branch zone: knots
// are equispaced in Phi, which concentrates them near x = 0 on two scales
// (a sharp one so s(0) hugs Q(0), a broad one for the rest of the zone).
constexpr double kScaleSharp = 0.06;
constexpr double kScaleBroad = 1.0;
constexpr double kWeightSharp = 0.30;
constexpr double kWeightBroad = 0.70;

double knot_map(double x) {
    return kWeightSharp * std::atan(x / kScaleSharp) + kWeightBroad * std::atan(x / kScaleBroad);
}

// Inverse of knot_map by bisection (monotone).
double knot_map_inv(double value, double hi) {
    double lo = 0.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (knot_map(mid) < value)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Truncate downward to 12 decimal digits; interval values enter the
// certificate as decimal lower bounds.
double trunc12(double v) {
    return std::floor(v * 1e12) / 1e12;
}

// Q evaluated with a small rightward nudge so that a breakpoint sitting on
// a located ceiling jump is priced with the next plateau's value.
double q_right(double L, double x) {
    return bendbounds::q_bound(L, x + 1e-9 * (1.0 + std::fabs(x)));
}

} // namespace

double StepFunction::value_at(double x) const {
    if (breakpoints.empty()) return 0.0;
    if (x < breakpoints.front() || x >= breakpoints.back()) return 0.0;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - breakpoints.begin());
    return values[j - 1];
}

double GeneralizedPolygon::angle_param_sum() const {
    double s = alpha_infinity;
    for (double a : angle_params) s += a;
    return s;
}

double auto_half_width(double L, double q_tail) {
    if (!(q_tail > 0.0)) throw PreconditionError("auto_half_width: q_tail must be positive");
    for (int a = static_cast<int>(std::ceil(2.0 * L)) + 1; a <= 100000; ++a) {
        if (bendbounds::q_bound(L, static_cast<double>(a)) < q_tail)
            return static_cast<double>(a);
    }
    throw SolverError("auto_half_width: no truncation point found below 100000");
}

StepFunction build_step(double L, double half_width, int samples_per_branch) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw PreconditionError("build_step: L must be positive and finite");
    if (!(half_width > 2.0 * L))
        throw PreconditionError("build_step: half_width must exceed 2 L");
    if (samples_per_branch < 1)
        throw PreconditionError("build_step: samples_per_branch must be >= 1");
    if (!(bendbounds::q_bound(L, half_width) < 0.1)) {
        std::ostringstream msg;
        msg << "build_step: Q(L, half_width) = " << bendbounds::q_bound(L, half_width)
            << " >= 0.1; choose a larger half_width";
        throw PreconditionError(msg.str());
    }

    const double a = half_width;
    const bendbounds::QProfile prof = bendbounds::q_profile(L, a);

    // Base breakpoints on [0, a]: endpoints, ceiling jumps, crossover points.
    std::vector<double> base;
    base.push_back(0.0);
    base.push_back(a);
    for (double j : prof.jump_abscissas)
        if (j < a) base.push_back(j);
    for (const auto& c : prof.crossover_intervals) {
        const double mid = 0.5 * (c.first + c.second);
        if (mid < a) base.push_back(mid);
    }
    std::sort(base.begin(), base.end());
    const double dedupe = 1e-7;
    std::vector<double> pts;
    for (double x : base)
        if (pts.empty() || x - pts.back() > dedupe) pts.push_back(x);
    if (a - pts.back() < dedupe) pts.back() = a;

    // Graded refinement knots over [0, a]; only those landing inside
    // intervals where the continuous branch dominates are kept, since Q is
    // constant on ceiling-dominated pieces.  Knot count doubles exactly
    // when samples_per_branch doubles, which keeps refinements nested.
    const double phi_total = knot_map(a);
    std::vector<double> refined;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double p = pts[i];
        const double q = pts[i + 1];
        refined.push_back(p);
        const double probe = p + 1e-9 * (1.0 + p);
        const bendbounds::QBranches br = bendbounds::q_branches(L, probe);
        if (br.continuous_branch > br.ceiling_branch) {
            const int j_lo = static_cast<int>(std::ceil(knot_map(p) / phi_total * samples_per_branch));
            const int j_hi = static_cast<int>(std::floor(knot_map(q) / phi_total * samples_per_branch));
            for (int j = j_lo; j <= j_hi; ++j) {
                const double x = knot_map_inv(static_cast<double>(j) * phi_total / samples_per_branch, a);
                if (x - refined.back() > dedupe && q - x > dedupe) refined.push_back(x);
            }
        }
    }
    refined.push_back(a);

    // Interval values: Q at the right endpoint (Q is non-increasing in |x|),
    // truncated downward.
    std::vector<double> vals_pos;
    for (std::size_t i = 0; i + 1 < refined.size(); ++i) {
        const double v = trunc12(q_right(L, refined[i + 1]));
        if (!(v > 0.0)) {
            std::ostringstream msg;
            msg << "build_step: nonpositive step value at x = " << refined[i + 1];
            throw CertificateError(msg.str());
        }
        vals_pos.push_back(v);
    }

    // Merge adjacent intervals whose values coincide (plateaus keep exactly
    // one interval each).
    std::vector<double> bp_pos{refined.front()};
    std::vector<double> v_pos;
    for (std::size_t i = 0; i < vals_pos.size(); ++i) {
        if (!v_pos.empty() && std::fabs(vals_pos[i] - v_pos.back()) < 1e-13) {
            bp_pos.back() = refined[i + 1];
            continue;
        }
        v_pos.push_back(vals_pos[i]);
        bp_pos.push_back(refined[i + 1]);
    }

    // Mirror to [-a, a].  bp_pos.front() == 0 merges into one central
    // interval spanning [-b1, b1].
    StepFunction step;
    step.L = L;
    step.half_width = a;
    const std::size_t n = v_pos.size();
    for (std::size_t i = n; i >= 1; --i) step.breakpoints.push_back(-bp_pos[i]);
    for (std::size_t i = 1; i <= n; ++i) step.breakpoints.push_back(bp_pos[i]);
    for (std::size_t i = n; i >= 2; --i) step.values.push_back(v_pos[i - 1]);
    for (std::size_t i = 0; i < n; ++i) step.values.push_back(v_pos[i]);

    // Spot certificate: s <= Q on a few points per interval.
    for (std::size_t j = 0; j < step.values.size(); ++j) {
        const double lo = step.breakpoints[j];
        const double hi = step.breakpoints[j + 1];
        for (double frac : {0.0, 0.37, 0.73, 0.999}) {
            const double x = lo + frac * (hi - lo);
            if (step.values[j] > bendbounds::q_bound(L, x)) {
                std::ostringstream msg;
                msg << "build_step: certificate failure, s(" << x << ") = " << step.values[j]
                    << " > Q = " << bendbounds::q_bound(L, x);
                throw CertificateError(msg.str());
            }
        }
    }
    return step;
}

GeneralizedPolygon polygon_from_step(const StepFunction& step) {
    if (step.values.empty()) throw PreconditionError("polygon_from_step: empty step function");
    const double a = step.half_width;

    // Trace the staircase left to right; drop corners where the height
    // change is below merge tolerance.
    std::vector<std::complex<double>> v;
    v.emplace_back(-a, 0.0);
    v.emplace_back(-a, -step.values.front());
    for (std::size_t j = 0; j + 1 < step.values.size(); ++j) {
        const double x = step.breakpoints[j + 1];
        const double s0 = step.values[j];
        const double s1 = step.values[j + 1];
        if (std::fabs(s1 - s0) < 1e-13) continue;
        v.emplace_back(x, -s0);
        v.emplace_back(x, -s1);
    }
    v.emplace_back(a, -step.values.back());
    v.emplace_back(a, 0.0);

    // Interior angles from the turn between axis-parallel edges; the turn is
    // +-pi/2 exactly, so alphas are exact half-integers.
    GeneralizedPolygon poly;
    poly.vertices = v;
    poly.infinite_index = v.size();
    const std::size_t m = v.size();
    for (std::size_t k = 0; k < m; ++k) {
        // incoming direction: for k = 0 the ray from -infinity (+x).
        std::complex<double> din = (k == 0) ? std::complex<double>(1.0, 0.0)
                                            : v[k] - v[k - 1];
        std::complex<double> dout = (k + 1 == m) ? std::complex<double>(1.0, 0.0)
                                                 : v[k + 1] - v[k];
        const double cross = din.real() * dout.imag() - din.imag() * dout.real();
        // Left turn (ccw) by pi/2: interior angle pi/2; right turn: 3 pi/2.
        poly.angle_params.push_back(cross > 0.0 ? 0.5 : 1.5);
    }
    double fin = 0.0;
    for (double alpha : poly.angle_params) fin += alpha;
    poly.alpha_infinity = (static_cast<double>(m + 1) - 2.0) - fin;
    return poly;
}

std::string serialize(const GeneralizedPolygon& poly) {
    std::ostringstream out;
    out << "generalized_polygon\n";
    out << "finite_vertices " << poly.vertices.size() << "\n";
    out << "infinite_index " << poly.infinite_index << "\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g", poly.alpha_infinity);
    out << "alpha_infinity " << buf << "\n";
    for (std::size_t k = 0; k < poly.vertices.size(); ++k) {
        std::snprintf(buf, sizeof buf, "vertex %.17g %.17g %.17g",
                      poly.vertices[k].real(), poly.vertices[k].imag(), poly.angle_params[k]);
        out << buf << "\n";
    }
    return out.str();
}

GeneralizedPolygon parse_polygon(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    in >> tag;
    if (tag != "generalized_polygon")
        throw PreconditionError("parse_polygon: missing header");
    GeneralizedPolygon poly;
    std::size_t n = 0;
    while (in >> tag) {
        if (tag == "finite_vertices") {
            in >> n;
        } else if (tag == "infinite_index") {
            in >> poly.infinite_index;
        } else if (tag == "alpha_infinity") {
            in >> poly.alpha_infinity;
        } else if (tag == "vertex") {
            double x, y, alpha;
            in >> x >> y >> alpha;
            poly.vertices.emplace_back(x, y);
            poly.angle_params.push_back(alpha);
        } else {
            throw PreconditionError("parse_polygon: unknown tag '" + tag + "'");
        }
    }
    if (poly.vertices.size() != n)
        throw PreconditionError("parse_polygon: vertex count mismatch");
    return poly;
}

} // namespace domebound::region
