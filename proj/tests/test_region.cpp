#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "domebound/bendbounds.hpp"
#include "domebound/errors.hpp"
#include "domebound/region.hpp"
#include "domebound/specialfn.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace domebound;
using namespace domebound::region;

namespace {
StepFunction default_step() {
    static const StepFunction step = build_step(1.48, auto_half_width(1.48), 64);
    return step;
}
} // namespace

TEST_CASE("auto_half_width reaches the tail threshold") {
    const double a = auto_half_width(1.48);
    CHECK(bendbounds::q_bound(1.48, a) < 0.06);
    CHECK(a == std::floor(a));
}

TEST_CASE("step function structure") {
    const StepFunction step = default_step();
    REQUIRE(step.breakpoints.size() == step.values.size() + 1);
    CHECK(step.breakpoints.front() == -step.half_width);
    CHECK(step.breakpoints.back() == step.half_width);
    for (std::size_t i = 0; i + 1 < step.breakpoints.size(); ++i)
        CHECK(step.breakpoints[i] < step.breakpoints[i + 1]);
    for (double v : step.values) CHECK(v > 0.0);
    CHECK(step.value_at(step.half_width + 1.0) == 0.0);
    CHECK(step.value_at(-step.half_width - 1.0) == 0.0);
}

TEST_CASE("step function is symmetric") {
    const StepFunction step = default_step();
    for (int i = 0; i <= 500; ++i) {
        const double x = step.half_width * (i / 500.0) * 0.999;
        CHECK(step.value_at(x) == step.value_at(-x));
    }
}

TEST_CASE("step value at zero hugs G at default resolution") {
    const StepFunction step = build_step(1.48, auto_half_width(1.48), 192);
    const double g = specialfn::g_func(1.48);
    CHECK(step.value_at(0.0) <= g);
    CHECK(step.value_at(0.0) >= g - 1e-3);
}

TEST_CASE("dense-grid certificate s <= Q") {
    const StepFunction step = default_step();
    const int n = 100000;
    for (int i = 0; i <= n; ++i) {
        const double x = -step.half_width + 2.0 * step.half_width * i / n;
        const double s = step.value_at(x);
        const double q = bendbounds::q_bound(1.48, x);
        REQUIRE(s <= q + 1e-15);
    }
}

TEST_CASE("doubling samples only raises the step function") {
    const double a = auto_half_width(1.48);
    const StepFunction coarse = build_step(1.48, a, 32);
    const StepFunction fine = build_step(1.48, a, 64);
    for (int i = 0; i <= 4000; ++i) {
        const double x = -a + 2.0 * a * i / 4000.0;
        CHECK(fine.value_at(x) >= coarse.value_at(x) - 1e-15);
    }
}

TEST_CASE("polygon from a single-interval step") {
    StepFunction step;
    step.L = 1.0;
    step.half_width = 2.0;
    step.breakpoints = {-2.0, 2.0};
    step.values = {0.5};
    const GeneralizedPolygon poly = polygon_from_step(step);
    CHECK(poly.vertices.size() == 4);          // staircase corners
    CHECK(poly.vertex_count() == 5);           // plus the vertex at infinity
    CHECK(poly.angle_param_sum() == doctest::Approx(poly.vertex_count() - 2.0).epsilon(1e-15));
    CHECK(poly.alpha_infinity == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("staircase polygon properties") {
    const StepFunction step = default_step();
    const GeneralizedPolygon poly = polygon_from_step(step);
    const std::size_t n = poly.vertices.size();
    REQUIRE(n >= 4);
    CHECK(poly.infinite_index == n);

    // angle sum constraint
    CHECK(poly.angle_param_sum() == doctest::Approx(static_cast<double>(n + 1) - 2.0).epsilon(1e-12));

    // all finite edges axis-parallel
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto d = poly.vertices[i + 1] - poly.vertices[i];
        CHECK((d.real() == 0.0 || d.imag() == 0.0));
        CHECK(std::abs(d) > 0.0);
    }

    // simplicity: brute-force proper-intersection scan over edge pairs
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 2; j + 1 < n; ++j)
            REQUIRE(!oracles::segments_intersect(poly.vertices[i], poly.vertices[i + 1],
                                                 poly.vertices[j], poly.vertices[j + 1]));
}

TEST_CASE("containment sandwich and marked points") {
    const StepFunction step = default_step();
    const GeneralizedPolygon poly = polygon_from_step(step);
    const double g = specialfn::g_func(1.48);
    // contained in {y > -G}
    for (const auto& v : poly.vertices) CHECK(v.imag() >= -g - 1e-12);
    // contains the half-strip over the central plateau
    double q0 = step.value_at(0.0);
    const double a0 = 0.5;
    for (int i = -100; i <= 100; ++i) q0 = std::min(q0, step.value_at(a0 * i / 100.0));
    for (int i = -100; i <= 100; ++i) {
        const double x = a0 * i / 100.0;
        CHECK(step.value_at(x) >= q0);
    }
    // marked points interior: 0 strictly above the staircase, i c1 in the
    // upper half-plane
    CHECK(step.value_at(0.0) > 0.0);
    CHECK(bendbounds::c1(1.48) > 0.0);
}

TEST_CASE("degenerate steps are merged before polygon emission") {
    StepFunction step;
    step.L = 1.0;
    step.half_width = 3.0;
    step.breakpoints = {-3.0, -1.0, 1.0, 3.0};
    step.values = {0.25, 0.25 + 1e-15, 0.25};
    const GeneralizedPolygon poly = polygon_from_step(step);
    CHECK(poly.vertices.size() == 4);  // interior corners merged away
}

TEST_CASE("polygon serialization round trip") {
    const StepFunction step = default_step();
    const GeneralizedPolygon poly = polygon_from_step(step);
    const GeneralizedPolygon back = parse_polygon(serialize(poly));
    REQUIRE(back.vertices.size() == poly.vertices.size());
    CHECK(back.infinite_index == poly.infinite_index);
    CHECK(back.alpha_infinity == poly.alpha_infinity);
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        CHECK(back.vertices[i] == poly.vertices[i]);
        CHECK(back.angle_params[i] == poly.angle_params[i]);
    }
}

TEST_CASE("build_step rejects bad arguments") {
    CHECK_THROWS_AS(build_step(-1.0, 10.0, 8), PreconditionError);
    CHECK_THROWS_AS(build_step(1.48, 1.0, 8), PreconditionError);
    CHECK_THROWS_AS(build_step(1.48, 10.0, 0), PreconditionError);
    // tail still too high at half_width 4
    CHECK_THROWS_AS(build_step(1.48, 4.0, 8), PreconditionError);
}
