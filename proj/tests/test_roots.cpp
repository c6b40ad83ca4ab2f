#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "domebound/errors.hpp"
#include "domebound/roots.hpp"

#include <cmath>

using namespace domebound;

TEST_CASE("brent finds a simple root") {
    auto f = [](double x) { return x * x - 2.0; };
    const RootResult r = brent_root(f, 0.0, 2.0, 1e-14);
    CHECK(r.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::fabs(r.fx) < 1e-13);
}

TEST_CASE("brent rejects a bracket without sign change") {
    auto f = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(brent_root(f, -1.0, 1.0, 1e-12), SolverError);
}

TEST_CASE("brent reports the iteration cap distinctly") {
    auto f = [](double x) { return x > 0.3 ? 1.0 : -1.0; };  // step, |f| never small
    CHECK_THROWS_AS(brent_root(f, 0.0, 1.0, 1e-18, 0.0, 4), IterationLimitError);
}

TEST_CASE("bisect returns a verified bracket") {
    auto f = [](double x) { return std::cos(x); };
    const RootResult r = bisect_root(f, 1.0, 2.0, 1e-10);
    CHECK(r.bracket_hi - r.bracket_lo <= 1e-10);
    CHECK(f(r.bracket_lo) * f(r.bracket_hi) <= 0.0);
    CHECK(r.x == doctest::Approx(std::acos(0.0)).epsilon(1e-9));
}

TEST_CASE("golden section minimizes a parabola") {
    auto f = [](double x) { return (x - 0.7) * (x - 0.7) + 3.0; };
    const MinResult m = golden_min(f, -1.0, 2.0, 1e-10);
    CHECK(m.x == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(m.fx == doctest::Approx(3.0).epsilon(1e-12));
}
