#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "domebound/errors.hpp"
#include "domebound/region.hpp"
#include "domebound/rng.hpp"
#include "domebound/scmap.hpp"

#include <cmath>
#include <complex>

using namespace domebound;
using namespace domebound::scmap;
using region::GeneralizedPolygon;
using region::StepFunction;

namespace {

constexpr double kPi = 3.14159265358979323846;

GeneralizedPolygon half_strip() {
    GeneralizedPolygon poly;
    poly.vertices = {{-1.0, 0.0}, {1.0, 0.0}};
    poly.angle_params = {0.5, 0.5};
    poly.alpha_infinity = 0.0;
    poly.infinite_index = 2;
    return poly;
}

GeneralizedPolygon upper_half_plane() {
    GeneralizedPolygon poly;
    poly.alpha_infinity = -1.0;
    poly.infinite_index = 0;
    return poly;
}

// analytic half-strip map composed with the normalizing automorphism
// zeta = 2 z + 1 (prevertices -1, 0 -> analytic prevertices -1, +1).
Complex analytic_half_strip(Complex z) {
    return 2.0 / kPi * std::asin(2.0 * z + 1.0);
}

const SCMap& staircase_map() {
    static const SCMap map = [] {
        const StepFunction step = region::build_step(1.48, region::auto_half_width(1.48), 48);
        return solve_parameters(region::polygon_from_step(step), 8, 1e-10);
    }();
    return map;
}

} // namespace

TEST_CASE("half-strip parameter solve against the analytic arcsine map") {
    const SCMap map = solve_parameters(half_strip(), 8, 1e-10);
    CHECK(map.accuracy < 1e-9);
    double worst = 0.0;
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        // test grid inside the preimage strip: z with Re in (-1, 0), Im > 0
        const Complex z(rng.uniform(-0.95, -0.05), rng.uniform(0.05, 3.0));
        worst = std::max(worst, std::abs(sc_forward(map, z) - analytic_half_strip(z)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("degenerate upper half-plane polygon is affine") {
    const SCMap map = solve_parameters(upper_half_plane(), 8, 1e-10);
    const Complex i(0.0, 1.0);
    CHECK(std::abs(sc_forward(map, i) - i) < 1e-15);
    CHECK(std::abs(sc_inverse(map, i) - i) < 1e-15);
}

TEST_CASE("vertex reproduction on the staircase polygon") {
    const SCMap& map = staircase_map();
    CHECK(map.accuracy < 10.0 * 1e-10);
    for (std::size_t k = 0; k < map.prevertices.size(); ++k)
        CHECK(std::abs(map.prevertex_images[k] - map.polygon.vertices[k]) <= 10.0 * 1e-10);
}

TEST_CASE("prevertices ascend") {
    const SCMap& map = staircase_map();
    for (std::size_t k = 0; k + 1 < map.prevertices.size(); ++k)
        CHECK(map.prevertices[k] < map.prevertices[k + 1]);
}

TEST_CASE("forward at a prevertex returns the vertex") {
    const SCMap& map = staircase_map();
    const std::size_t k = map.prevertices.size() / 2;
    CHECK(std::abs(sc_forward(map, Complex(map.prevertices[k], 0.0)) - map.polygon.vertices[k]) <
          1e-12);
    CHECK_THROWS_AS(
        sc_forward(map, Complex(std::numeric_limits<double>::infinity(), 0.0)),
        PreconditionError);
}

TEST_CASE("path independence of the forward integral") {
    const SCMap& map = staircase_map();
    Rng rng(5150);
    const std::size_t m = map.prevertices.size();
    for (int i = 0; i < 12; ++i) {
        const double span = map.prevertices.back() - map.prevertices.front();
        const Complex z(rng.uniform(map.prevertices.front(), map.prevertices.back()),
                        rng.uniform(0.02, 0.6) * span);
        const Complex w1 = sc_forward_from(map, z, rng.below(static_cast<int>(m)));
        const Complex w2 = sc_forward_from(map, z, rng.below(static_cast<int>(m)));
        CHECK(std::abs(w1 - w2) < 1e-9);
    }
}

TEST_CASE("boundary monotonicity: real points map onto the polygon edge") {
    const SCMap& map = staircase_map();
    const std::size_t m = map.prevertices.size();
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = static_cast<std::size_t>(rng.below(static_cast<int>(m - 1)));
        const double t = rng.uniform(0.15, 0.85);
        const double x = map.prevertices[k] + t * (map.prevertices[k + 1] - map.prevertices[k]);
        const Complex w = sc_forward(map, Complex(x, 0.0));
        const Complex a = map.polygon.vertices[k];
        const Complex b = map.polygon.vertices[k + 1];
        // distance from w to segment [a, b]
        const Complex ab = b - a;
        const double lam =
            std::clamp(((w - a) / ab).real(), 0.0, 1.0);
        CHECK(std::abs(w - (a + lam * ab)) < 1e-8);
    }
}

TEST_CASE("forward/inverse round trip on random interior points") {
    const SCMap& map = staircase_map();
    Rng rng(90210);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double span = map.prevertices.back() - map.prevertices.front();
        const Complex z(rng.uniform(map.prevertices.front(), map.prevertices.back()),
                        rng.uniform(0.02, 1.0) * span);
        const Complex back = sc_inverse(map, sc_forward(map, z), 1e-12);
        worst = std::max(worst, std::abs(back - z));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("inverse respects the symmetry axis of the staircase") {
    // Two points on the polygon's symmetry axis pull back onto one geodesic
    // fixed by the anti-conformal symmetry: a circle centered on the real
    // axis through both preimages; probe points on the axis must land on it.
    const SCMap& map = staircase_map();
    const Complex z1 = sc_inverse(map, Complex(0.0, 0.5), 1e-12);
    const Complex z2 = sc_inverse(map, Complex(0.0, 2.0), 1e-12);
    // circle center c on R through z1, z2: |z1 - c| = |z2 - c|
    const double c = (std::norm(z1) - std::norm(z2)) / (2.0 * (z1.real() - z2.real()));
    const double r = std::abs(z1 - c);
    for (double y : {0.2, 1.0, 3.5}) {
        const Complex z = sc_inverse(map, Complex(0.0, y), 1e-12);
        CHECK(std::fabs(std::abs(z - c) - r) < 1e-8);
    }
}

TEST_CASE("inverse converges near a corner") {
    const SCMap& map = staircase_map();
    // near the deepest staircase corner
    std::size_t deep = 0;
    for (std::size_t k = 0; k < map.polygon.vertices.size(); ++k)
        if (map.polygon.vertices[k].imag() < map.polygon.vertices[deep].imag()) deep = k;
    const Complex corner = map.polygon.vertices[deep];
    const Complex w = corner + Complex(1e-3, 1e-3);
    const Complex z = sc_inverse(map, w, 1e-10);
    CHECK(std::abs(sc_forward(map, z) - w) < 1e-9);
}

TEST_CASE("conformality: difference quotients are direction independent") {
    const SCMap& map = staircase_map();
    Rng rng(31);
    for (int i = 0; i < 8; ++i) {
        const double span = map.prevertices.back() - map.prevertices.front();
        const Complex z(rng.uniform(map.prevertices.front(), map.prevertices.back()),
                        rng.uniform(0.05, 0.5) * span);
        const double h = 1e-5;
        const Complex d1 = (sc_forward(map, z + Complex(h, 0.0)) - sc_forward(map, z)) / h;
        const Complex d2 = (sc_forward(map, z + Complex(0.0, h)) - sc_forward(map, z)) / Complex(0.0, h);
        CHECK(std::abs(d1 - d2) / std::abs(d1) < 1e-6);
    }
}

TEST_CASE("angle parameters recovered from boundary probes") {
    const SCMap map = solve_parameters(half_strip(), 8, 1e-12);
    // probe half-disk images at each finite prevertex
    for (std::size_t k = 0; k < map.prevertices.size(); ++k) {
        const double rho = 1e-6;
        const double delta = 1e-3;
        const Complex v = map.polygon.vertices[k];
        const Complex p0 = sc_forward(map, Complex(map.prevertices[k] + rho * std::cos(delta),
                                                   rho * std::sin(delta)));
        const Complex p1 = sc_forward(map, Complex(map.prevertices[k], rho));
        const Complex p2 = sc_forward(map, Complex(map.prevertices[k] + rho * std::cos(kPi - delta),
                                                   rho * std::sin(kPi - delta)));
        const double swept = std::arg((p1 - v) / (p0 - v)) + std::arg((p2 - v) / (p1 - v));
        const double expected = map.angle_params[k] * (kPi - 2.0 * delta);
        CHECK(std::fabs(swept - expected) / (kPi - 2.0 * delta) * kPi < 1e-3);
    }
}

TEST_CASE("side-length residuals at the solution") {
    const SCMap& map = staircase_map();
    // vertex reproduction implies side lengths match within the tolerance
    for (std::size_t k = 0; k + 1 < map.prevertices.size(); ++k) {
        const double want = std::abs(map.polygon.vertices[k + 1] - map.polygon.vertices[k]);
        const double got = std::abs(map.prevertex_images[k + 1] - map.prevertex_images[k]);
        CHECK(std::fabs(got - want) / want < 1e-8);
    }
}

TEST_CASE("serialization rebuilds the solved map") {
    const SCMap& map = staircase_map();
    const SCMap back = deserialize(serialize(map), map.polygon);
    REQUIRE(back.prevertices.size() == map.prevertices.size());
    for (std::size_t k = 0; k < map.prevertices.size(); ++k)
        CHECK(back.prevertices[k] == map.prevertices[k]);
    CHECK(std::abs(back.affine_scale - map.affine_scale) == 0.0);
    const Complex z(0.5 * (map.prevertices.front() + map.prevertices.back()),
                    0.25 * (map.prevertices.back() - map.prevertices.front()));
    CHECK(std::abs(sc_forward(back, z) - sc_forward(map, z)) < 1e-10);
}

TEST_CASE("solver input validation") {
    GeneralizedPolygon bad = half_strip();
    bad.angle_params = {0.5, 0.4};  // breaks the closure sum
    CHECK_THROWS_AS(solve_parameters(bad, 8, 1e-10), PreconditionError);
    GeneralizedPolygon single;
    single.vertices = {{0.0, 0.0}};
    single.angle_params = {0.5};
    single.alpha_infinity = -0.5;
    single.infinite_index = 1;
    CHECK_THROWS_AS(solve_parameters(single, 8, 1e-10), PreconditionError);
}
