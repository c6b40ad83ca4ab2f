#include "domebound/pipeline.hpp"

#include "domebound/bendbounds.hpp"
#include "domebound/errors.hpp"
#include "domebound/roots.hpp"
#include "domebound/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace domebound::pipeline {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Half-strip oracle parameters: widest symmetric breakpoint span on which
// s stays above 0.9 s(0), floor just under the minimum there.
std::pair<double, double> strip_params(const region::StepFunction& step) {
    const double s0 = step.value_at(0.0);
    double a0 = 0.0;
    double q0 = s0;
    for (std::size_t j = 0; j < step.values.size(); ++j) {
        const double hi = step.breakpoints[j + 1];
        if (hi <= 0.0) continue;
        if (step.values[j] < 0.9 * s0) break;
        a0 = hi;
        q0 = std::min(q0, step.values[j]);
    }
    return {a0, 0.999 * q0};
}

} // namespace

BoundResult compute_bound(double L, int samples_per_branch, int quad_order, double half_width) {
    const double L_max = 2.0 * std::asinh(1.0);
    if (!(L > 0.0 && L < L_max))
        throw PreconditionError("compute_bound: L must lie in (0, 2 asinh 1)");

    BoundResult out;
    out.L = L;
    out.samples_per_branch = samples_per_branch;
    out.quad_order = quad_order;

    try {
        out.G_value = specialfn::g_func(L);
        out.c1_value = bendbounds::c1(L);
    } catch (const SolverError& e) {
        throw SolverError(std::string("compute_bound[specialfn]: ") + e.what());
    }

    if (half_width <= 0.0) half_width = region::auto_half_width(L);
    out.half_width = half_width;

    region::StepFunction step;
    region::GeneralizedPolygon poly;
    try {
        step = region::build_step(L, half_width, samples_per_branch);
        poly = region::polygon_from_step(step);
    } catch (const CertificateError& e) {
        throw CertificateError(std::string("compute_bound[region]: ") + e.what());
    }
    out.interval_count = step.interval_count();

    scmap::SCMap map;
    try {
        map = scmap::solve_parameters(poly, quad_order, kDefaultScTol);
    } catch (const SolverError& e) {
        throw SolverError(std::string("compute_bound[scmap]: ") + e.what());
    }
    out.sc_accuracy = map.accuracy;

    const hypmetric::Complex p(0.0, 0.0);
    const hypmetric::Complex q(0.0, out.c1_value);
    try {
        out.H = hypmetric::domain_distance(map, p, q);
    } catch (const SolverError& e) {
        throw SolverError(std::string("compute_bound[hypmetric]: ") + e.what());
    }
    out.K = std::exp(out.H);

    const auto [a0, q0] = strip_params(step);
    out.certificate.value = out.H;
    out.certificate.map_accuracy = map.accuracy;
    out.certificate.lower_bound = hypmetric::halfplane_distance(out.G_value, p, q);
    out.certificate.upper_bound = hypmetric::halfstrip_distance(a0, q0, p, q);
    if (!out.certificate.holds()) {
        std::ostringstream msg;
        msg << "compute_bound: sandwich certificate failed: lower " << out.certificate.lower_bound
            << ", value " << out.H << ", upper " << out.certificate.upper_bound;
        throw CertificateError(msg.str());
    }
    return out;
}

OptimizeResult optimize_L(double L_min, double L_max, int coarse_steps, double tol,
                          int samples_per_branch, int quad_order) {
    const double dom_max = 2.0 * std::asinh(1.0);
    if (!(L_min > 0.0 && L_max < dom_max && L_min < L_max))
        throw PreconditionError("optimize_L: range must lie inside (0, 2 asinh 1)");
    if (coarse_steps < 2) throw PreconditionError("optimize_L: need at least 2 coarse steps");
    if (!(tol > 0.0)) throw PreconditionError("optimize_L: tol must be positive");

    OptimizeResult res;
    std::map<double, BoundResult> cache;
    auto eval = [&](double L) -> const BoundResult& {
        auto it = cache.find(L);
        if (it == cache.end()) {
            it = cache.emplace(L, compute_bound(L, samples_per_branch, quad_order)).first;
            res.scan.emplace_back(L, it->second.K);
        }
        return it->second;
    };

    std::vector<double> grid;
    for (int i = 0; i <= coarse_steps; ++i)
        grid.push_back(L_min + (L_max - L_min) * i / coarse_steps);
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (eval(grid[i]).K < eval(grid[best_i]).K) best_i = i;

    int local_minima = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = eval(grid[i]).K;
        const bool left_up = i == 0 || eval(grid[i - 1]).K > k;
        const bool right_up = i + 1 == grid.size() || eval(grid[i + 1]).K > k;
        if (left_up && right_up) ++local_minima;
    }
    res.unimodal = local_minima <= 1;

    const double lo = grid[best_i == 0 ? 0 : best_i - 1];
    const double hi = grid[std::min(grid.size() - 1, best_i + 1)];
    if (res.unimodal && hi > lo) {
        golden_min([&](double L) { return eval(L).K; }, lo, hi, tol);
    }

    double best_L = grid[best_i];
    for (const auto& [L, r] : cache)
        if (r.K < cache.at(best_L).K) best_L = L;
    res.L_best = best_L;
    res.best = cache.at(best_L);
    std::sort(res.scan.begin(), res.scan.end());
    return res;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 2 || !(lo < hi)) throw PreconditionError("uniform_grid: bad arguments");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
    return g;
}

std::vector<GCurveRow> gcurve_table(const std::vector<double>& grid) {
    std::vector<GCurveRow> rows;
    for (double L : grid) {
        GCurveRow row;
        row.L = L;
        row.g = specialfn::g_func(L);
        row.conjectured = 2.0 * std::asin(std::tanh(0.5 * L));
        rows.push_back(row);
    }
    return rows;
}

double emit_fbound_reference() {
    const double pi = std::acos(-1.0);
    return 2.0 * pi - 2.0 * std::asin(1.0 / std::cosh(1.0));
}

std::string serialize(const BoundResult& r) {
    std::ostringstream out;
    out << "bound_result\n";
    out << "L " << fmt(r.L) << "\n";
    out << "samples_per_branch " << r.samples_per_branch << "\n";
    out << "quad_order " << r.quad_order << "\n";
    out << "sc_tol " << fmt(kDefaultScTol) << "\n";
    out << "half_width " << fmt(r.half_width) << "\n";
    out << "interval_count " << r.interval_count << "\n";
    out << "G " << fmt(r.G_value) << "\n";
    out << "c1 " << fmt(r.c1_value) << "\n";
    out << "sc_accuracy " << fmt(r.sc_accuracy) << "\n";
    out << "H " << fmt(r.H) << "\n";
    out << "K " << fmt(r.K) << "\n";
    out << "certificate_lower " << fmt(r.certificate.lower_bound) << "\n";
    out << "certificate_upper " << fmt(r.certificate.upper_bound) << "\n";
    out << "certificate_holds " << (r.certificate.holds() ? 1 : 0) << "\n";
    return out.str();
}

std::string gcurve_csv(const std::vector<GCurveRow>& rows) {
    std::ostringstream out;
    out << "L,G,conjectured\n";
    for (const auto& r : rows)
        out << fmt(r.L) << "," << fmt(r.g) << "," << fmt(r.conjectured) << "\n";
    return out.str();
}

namespace {

struct SvgCanvas {
    std::ostringstream body;
    double x0, x1, y0, y1;  // data ranges
    int width = 840, height = 420, margin = 40;

    double px(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
    double py(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
        body << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts) body << px(x) << "," << py(y) << " ";
        body << "\"/>\n";
    }

    void axes() {
        body << "<line stroke=\"#444\" x1=\"" << px(x0) << "\" y1=\"" << py(0.0) << "\" x2=\""
             << px(x1) << "\" y2=\"" << py(0.0) << "\"/>\n";
        body << "<line stroke=\"#444\" x1=\"" << px(0.0) << "\" y1=\"" << py(y0) << "\" x2=\""
             << px(0.0) << "\" y2=\"" << py(y1) << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, const char* color) {
        body << "<text x=\"" << px(x) << "\" y=\"" << py(y) << "\" fill=\"" << color
             << "\" font-size=\"13\">" << s << "</text>\n";
    }

    void save(const std::string& path) {
        std::ofstream out(path);
        if (!out) throw PreconditionError("svg: cannot open " + path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body.str() << "</svg>\n";
    }
};

} // namespace

void write_gcurve_svg(const std::string& path, const std::vector<GCurveRow>& rows) {
    if (rows.empty()) throw PreconditionError("write_gcurve_svg: empty table");
    SvgCanvas svg;
    svg.x0 = 0.0;
    svg.x1 = rows.back().L;
    svg.y0 = 0.0;
    svg.y1 = 1.05 * std::max(rows.back().g, rows.back().conjectured);
    std::vector<std::pair<double, double>> g_pts, c_pts;
    for (const auto& r : rows) {
        g_pts.emplace_back(r.L, r.g);
        c_pts.emplace_back(r.L, r.conjectured);
    }
    svg.axes();
    svg.polyline(g_pts, "#1f77b4");
    svg.polyline(c_pts, "#d62728");
    svg.text(0.1 * svg.x1, 0.95 * svg.y1, "G(L)", "#1f77b4");
    svg.text(0.1 * svg.x1, 0.88 * svg.y1, "2 asin(tanh(L/2))", "#d62728");
    svg.save(path);
}

void write_polygon_svg(const std::string& path, const region::StepFunction& step) {
    if (step.values.empty()) throw PreconditionError("write_polygon_svg: empty step function");
    SvgCanvas svg;
    const double a = step.half_width;
    double smax = 0.0;
    for (double v : step.values) smax = std::max(smax, v);
    svg.x0 = -1.1 * a;
    svg.x1 = 1.1 * a;
    svg.y0 = -1.3 * smax;
    svg.y1 = 0.4 * smax;
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(svg.x0, 0.0);
    pts.emplace_back(-a, 0.0);
    pts.emplace_back(-a, -step.values.front());
    for (std::size_t j = 0; j + 1 < step.values.size(); ++j) {
        pts.emplace_back(step.breakpoints[j + 1], -step.values[j]);
        pts.emplace_back(step.breakpoints[j + 1], -step.values[j + 1]);
    }
    pts.emplace_back(a, -step.values.back());
    pts.emplace_back(a, 0.0);
    pts.emplace_back(svg.x1, 0.0);
    svg.axes();
    svg.polyline(pts, "#1f77b4");
    svg.save(path);
}

} // namespace domebound::pipeline
