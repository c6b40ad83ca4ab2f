// Command-line front end: compute G(L), certified quasiconformal bounds,
// the L-optimization, figure data, and the geodesic-lab batteries.

#include "domebound/bendbounds.hpp"
#include "domebound/errors.hpp"
#include "domebound/geodesiclab.hpp"
#include "domebound/pipeline.hpp"
#include "domebound/region.hpp"
#include "domebound/rng.hpp"
#include "domebound/scmap.hpp"
#include "domebound/specialfn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace db = domebound;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw db::PreconditionError("cannot open output file " + path);
    out << content;
}

json bound_json(const db::pipeline::BoundResult& r) {
    json j;
    j["L"] = r.L;
    j["samples_per_branch"] = r.samples_per_branch;
    j["quad_order"] = r.quad_order;
    j["half_width"] = r.half_width;
    j["interval_count"] = r.interval_count;
    j["G"] = r.G_value;
    j["c1"] = r.c1_value;
    j["sc_accuracy"] = r.sc_accuracy;
    j["H"] = r.H;
    j["K"] = r.K;
    j["certificate"] = {{"lower", r.certificate.lower_bound},
                        {"upper", r.certificate.upper_bound},
                        {"holds", r.certificate.holds()}};
    return j;
}

int run_gfunc(double L, double tol) {
    const db::specialfn::TangentSolution ts = db::specialfn::solve_tangent(L, tol);
    std::cout << "tangent_solution\n";
    std::cout << "L " << fmt(ts.L) << "\n";
    std::cout << "c " << fmt(ts.c) << "\n";
    std::cout << "Theta " << fmt(ts.theta) << "\n";
    std::cout << "G " << fmt(ts.g_value) << "\n";
    std::cout << "residual " << fmt(ts.residual) << "\n";
    std::cout << "tol " << fmt(tol) << "\n";
    return 0;
}

int run_geodesic(const std::string& which, double L, std::uint64_t seed, int trials, int n_points,
                 const std::string& svg, const std::string& table) {
    db::Rng rng(seed);
    if (which == "horo") {
        const auto poly = db::geodesiclab::horocycle_polygon(L, n_points);
        const double phi = poly.bend_angles().front();
        std::cout << "horocycle_polygon\n";
        std::cout << "L " << fmt(L) << "\nn " << n_points << "\n";
        std::cout << "bend_angle " << fmt(phi) << "\n";
        std::cout << "closed_form " << fmt(2.0 * std::asin(std::tanh(0.5 * L))) << "\n";
        std::cout << "roundness " << fmt(db::geodesiclab::roundness(poly, L)) << "\n";
        if (!table.empty() || !svg.empty()) {
            std::ostringstream tab;
            tab << "t x_t x_x x_y x_z\n";
            const double t_end = poly.last_bend_time() + L;
            std::vector<std::pair<double, double>> proj;
            for (int i = 0; i <= 400; ++i) {
                const double t = t_end * i / 400;
                const auto p = db::geodesiclab::trace(poly, t);
                tab << fmt(t) << " " << fmt(p.t) << " " << fmt(p.x) << " " << fmt(p.y) << " "
                    << fmt(p.z) << "\n";
                proj.emplace_back(p.x, p.y);
            }
            if (!table.empty()) write_file(table, tab.str());
            if (!svg.empty()) {
                std::ostringstream s;
                double xmax = 1e-9, ymax = 1e-9;
                for (auto& [x, y] : proj) {
                    xmax = std::max(xmax, std::fabs(x));
                    ymax = std::max(ymax, std::fabs(y));
                }
                s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\">\n"
                  << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
                  << "<polyline fill=\"none\" stroke=\"#1f77b4\" points=\"";
                for (auto& [x, y] : proj)
                    s << 300 + 280 * x / xmax << "," << 300 - 280 * y / ymax << " ";
                s << "\"/>\n</svg>\n";
                write_file(svg, s.str());
            }
        }
        return 0;
    }

    const double g = db::specialfn::g_func(L);
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        if (which == "hill") {
            const auto gamma = db::geodesiclab::random_curve(rng, L, g);
            const auto rep = db::geodesiclab::check_hill_bound(gamma, L);
            if (!rep.precondition_ok || !rep.bound_ok) ++failures;
            worst = std::max(worst, rep.max_theta_plus - rep.threshold);
        } else if (which == "embed") {
            const auto gamma = db::geodesiclab::random_curve(rng, L, 0.9 * g);
            const double sep = db::geodesiclab::check_embedding(gamma, 1e-3);
            if (!(sep > 0.0)) ++failures;
        } else if (which == "bilip") {
            const auto gamma = db::geodesiclab::random_curve(rng, L, 0.9 * g);
            const auto rep = db::geodesiclab::bilipschitz_report(gamma, L);
            if (!rep.precondition_ok || !rep.bound_ok) ++failures;
            worst = std::max(worst, rep.predicted_ratio - rep.measured_ratio);
        } else {
            throw db::PreconditionError("geodesic: unknown battery '" + which + "'");
        }
    }
    std::cout << "geodesic_battery " << which << "\n";
    std::cout << "L " << fmt(L) << "\nseed " << seed << "\ntrials " << trials << "\n";
    std::cout << "failures " << failures << "\n";
    if (which != "embed") std::cout << "worst_excess " << fmt(worst) << "\n";
    return failures == 0 ? 0 : static_cast<int>(db::ExitCode::certificate);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified bounds for conformally natural maps to the dome of a plane domain"};
    app.require_subcommand(1);

    double L = 1.48, tol = db::specialfn::kDefaultTangentTol;
    int samples = db::pipeline::kDefaultSamples;
    int quad = db::pipeline::kDefaultQuadOrder;
    double half_width = 0.0;
    bool as_json = false, as_csv = false;
    std::string svg_path, out_path, table_path, map_path;

    auto* gfunc = app.add_subcommand("gfunc", "Solve the tangent-line problem for G(L)");
    gfunc->add_option("--L", L, "arc length parameter")->required();
    gfunc->add_option("--tol", tol, "residual tolerance");

    auto* bound = app.add_subcommand("bound", "Compute the certified bound K(L)");
    bound->add_option("--L", L, "arc length parameter")->required();
    bound->add_option("--samples", samples, "refinement samples per branch");
    bound->add_option("--quad", quad, "Gauss-Jacobi nodes per subinterval");
    bound->add_option("--halfwidth", half_width, "truncation half width (0 = auto)");
    bound->add_flag("--json", as_json, "emit JSON");
    bound->add_flag("--csv", as_csv, "emit CSV");
    bound->add_option("--dump-polygon", out_path, "write the polygon document");
    bound->add_option("--dump-map", map_path, "write the solved SC map document");
    bound->add_option("--svg", svg_path, "write the staircase figure");

    double opt_min = 1.0, opt_max = 1.9, opt_tol = 0.02;
    int opt_steps = 19;
    auto* optimize = app.add_subcommand("optimize", "Minimize K(L) over an interval");
    optimize->add_option("--min", opt_min, "lower end")->required();
    optimize->add_option("--max", opt_max, "upper end")->required();
    optimize->add_option("--steps", opt_steps, "coarse scan steps");
    optimize->add_option("--tol", opt_tol, "refinement tolerance in L");
    optimize->add_option("--samples", samples, "refinement samples per branch");
    optimize->add_option("--quad", quad, "Gauss-Jacobi nodes per subinterval");
    optimize->add_flag("--json", as_json, "emit JSON");

    int points = 200;
    auto* gcurve = app.add_subcommand("gcurve", "Tabulate G(L) against 2 asin(tanh(L/2))");
    gcurve->add_option("--points", points, "grid size");
    gcurve->add_option("--svg", svg_path, "write the overlay figure");
    gcurve->add_flag("--csv", as_csv, "emit CSV");

    auto* polygon = app.add_subcommand("polygon", "Emit the staircase polygon for a given L");
    polygon->add_option("--L", L, "arc length parameter")->required();
    polygon->add_option("--samples", samples, "refinement samples per branch");
    polygon->add_option("--halfwidth", half_width, "truncation half width (0 = auto)");
    polygon->add_option("--svg", svg_path, "write the staircase figure");
    polygon->add_option("--out", out_path, "write the polygon document");

    std::string battery;
    std::uint64_t seed = 20240517;
    int trials = 100, n_points = 12;
    auto* geodesic = app.add_subcommand("geodesic", "Piecewise-geodesic lab batteries");
    geodesic->add_option("battery", battery, "hill|embed|bilip|horo")->required();
    geodesic->add_option("--L", L, "window length");
    geodesic->add_option("--seed", seed, "random seed");
    geodesic->add_option("--trials", trials, "number of random curves");
    geodesic->add_option("--n", n_points, "horocycle point count");
    geodesic->add_option("--svg", svg_path, "trajectory figure (horo)");
    geodesic->add_option("--table", table_path, "trajectory table (horo)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gfunc->parsed()) return run_gfunc(L, tol);
        if (bound->parsed()) {
            const auto r = db::pipeline::compute_bound(L, samples, quad, half_width);
            if (!out_path.empty() || !svg_path.empty() || !map_path.empty()) {
                const auto step = db::region::build_step(L, r.half_width, samples);
                if (!svg_path.empty()) db::pipeline::write_polygon_svg(svg_path, step);
                const auto poly = db::region::polygon_from_step(step);
                if (!out_path.empty()) write_file(out_path, db::region::serialize(poly));
                if (!map_path.empty()) {
                    const auto map =
                        db::scmap::solve_parameters(poly, quad, db::pipeline::kDefaultScTol);
                    write_file(map_path, db::scmap::serialize(map));
                }
            }
            if (as_json)
                std::cout << bound_json(r).dump(2) << "\n";
            else if (as_csv)
                std::cout << "L,G,c1,H,K,lower,upper\n"
                          << fmt(r.L) << "," << fmt(r.G_value) << "," << fmt(r.c1_value) << ","
                          << fmt(r.H) << "," << fmt(r.K) << "," << fmt(r.certificate.lower_bound)
                          << "," << fmt(r.certificate.upper_bound) << "\n";
            else
                std::cout << db::pipeline::serialize(r);
            return 0;
        }
        if (optimize->parsed()) {
            const auto res = db::pipeline::optimize_L(opt_min, opt_max, opt_steps, opt_tol,
                                                      samples, quad);
            if (!res.unimodal)
                std::cerr << "optimize: coarse scan is not unimodal; reporting the scan minimum\n";
            if (as_json) {
                json j;
                j["L_best"] = res.L_best;
                j["unimodal"] = res.unimodal;
                j["best"] = bound_json(res.best);
                j["scan"] = json::array();
                for (auto& [l, k] : res.scan) j["scan"].push_back({l, k});
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "optimize_result\n";
                std::cout << "L_best " << fmt(res.L_best) << "\n";
                std::cout << "unimodal " << (res.unimodal ? 1 : 0) << "\n";
                std::cout << db::pipeline::serialize(res.best);
            }
            return 0;
        }
        if (gcurve->parsed()) {
            const double hi = 2.0 * std::asinh(1.0);
            std::vector<double> grid;
            for (int i = 1; i <= points; ++i) grid.push_back(hi * i / points);
            const auto rows = db::pipeline::gcurve_table(grid);
            for (const auto& row : rows)
                if (!(row.g < row.conjectured))
                    throw db::CertificateError("gcurve: dominance G < 2 asin(tanh(L/2)) failed");
            if (!svg_path.empty()) db::pipeline::write_gcurve_svg(svg_path, rows);
            if (as_csv)
                std::cout << db::pipeline::gcurve_csv(rows);
            else
                std::cout << "gcurve_points " << rows.size() << "\nreference_F1 "
                          << fmt(db::pipeline::emit_fbound_reference()) << "\n";
            return 0;
        }
        if (polygon->parsed()) {
            if (half_width <= 0.0) half_width = db::region::auto_half_width(L);
            const auto step = db::region::build_step(L, half_width, samples);
            const auto poly = db::region::polygon_from_step(step);
            if (!svg_path.empty()) db::pipeline::write_polygon_svg(svg_path, step);
            const std::string doc = db::region::serialize(poly);
            if (!out_path.empty())
                write_file(out_path, doc);
            else
                std::cout << doc;
            return 0;
        }
        if (geodesic->parsed())
            return run_geodesic(battery, L, seed, trials, n_points, svg_path, table_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(db::exit_code_for(e));
    }
    return 0;
}
