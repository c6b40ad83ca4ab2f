#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "domebound/bendbounds.hpp"
#include "domebound/errors.hpp"
#include "domebound/hypmetric.hpp"
#include "domebound/pipeline.hpp"
#include "domebound/specialfn.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace domebound;
using namespace domebound::pipeline;

namespace {
const BoundResult& reference_bound() {
    static const BoundResult r = compute_bound(1.48);
    return r;
}
} // namespace

TEST_CASE("compute_bound reproduces the reference values at L = 1.48") {
    const BoundResult& r = reference_bound();
    CHECK(std::fabs(r.G_value - 1.327185362837166) < 1e-9);
    CHECK(std::fabs(r.c1_value - 5.027888826784) < 1e-9);
    CHECK(std::fabs(r.H - 1.969831901361628) < 2e-3);
    CHECK(std::fabs(r.K - 7.169471208698489) < 2e-2);
    CHECK(r.K == std::exp(r.H));
    CHECK(r.certificate.holds());
    CHECK(r.certificate.lower_bound < r.H);
    CHECK(r.H < r.certificate.upper_bound);
    CHECK(r.sc_accuracy < 1e-8);
}

TEST_CASE("compute_bound rejects L outside the domain") {
    CHECK_THROWS_AS(compute_bound(0.0), PreconditionError);
    CHECK_THROWS_AS(compute_bound(2.0 * std::asinh(1.0)), PreconditionError);
}

TEST_CASE("refinement does not increase H") {
    const double a = region::auto_half_width(1.48);
    const BoundResult coarse = compute_bound(1.48, 48, 8, a);
    const BoundResult fine = compute_bound(1.48, 96, 8, a);
    CHECK(fine.H <= coarse.H + 1e-6);
}

TEST_CASE("serialization is deterministic") {
    const BoundResult a = compute_bound(1.48, 32);
    const BoundResult b = compute_bound(1.48, 32);
    CHECK(serialize(a) == serialize(b));
    CHECK(serialize(a).find("certificate_holds 1") != std::string::npos);
}

TEST_CASE("gcurve table dominance and endpoints") {
    const double hi = 2.0 * std::asinh(1.0);
    std::vector<double> grid;
    for (int i = 1; i <= 200; ++i) grid.push_back(hi * i / 200);
    const auto rows = gcurve_table(grid);
    REQUIRE(rows.size() == 200);
    for (const auto& r : rows) CHECK(r.g < r.conjectured);
    // L = 1 row values
    const auto near1 = gcurve_table({1.0}).front();
    CHECK(near1.g == doctest::Approx(0.948).epsilon(1e-3));
    CHECK(std::fabs(near1.conjectured - 0.96076) < 1e-5);
    // both columns vanish at 0
    const auto small = gcurve_table({1e-8}).front();
    CHECK(small.g < 1e-7);
    CHECK(small.conjectured < 1e-7);
}

TEST_CASE("reference constant from the earlier roundness bound") {
    const double f1 = emit_fbound_reference();
    CHECK(std::fabs(f1 - 4.8731) < 5e-4);
    CHECK(f1 < 2.0 * std::acos(-1.0));
    CHECK(f1 == doctest::Approx(4.873131620069110487042).epsilon(1e-14));
}

TEST_CASE("svg writers produce files") {
    const auto rows = gcurve_table(uniform_grid(0.05, 1.7, 40));
    write_gcurve_svg("gcurve_test.svg", rows);
    std::ifstream in("gcurve_test.svg");
    REQUIRE(in.good());
    std::string first;
    std::getline(in, first);
    CHECK(first.find("<svg") != std::string::npos);
    std::remove("gcurve_test.svg");

    const auto step = region::build_step(1.48, region::auto_half_width(1.48), 24);
    write_polygon_svg("polygon_test.svg", step);
    std::ifstream in2("polygon_test.svg");
    REQUIRE(in2.good());
    std::remove("polygon_test.svg");
}

TEST_CASE("optimize_L finds the minimum near 1.48") {
    // modest resolution keeps this unit test quick; the acceptance suite
    // runs the full-resolution scan
    const OptimizeResult res = optimize_L(1.2, 1.8, 6, 0.05, 48, 8);
    CHECK(res.L_best > 1.30);
    CHECK(res.L_best < 1.65);
    CHECK(res.best.K < 7.30);
    CHECK(res.scan.size() >= 7);
    for (const auto& [L, K] : res.scan) {
        CHECK(K >= res.best.K);
        CHECK(L >= 1.2);
        CHECK(L <= 1.8);
    }
}
