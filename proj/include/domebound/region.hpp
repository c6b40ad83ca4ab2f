#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace domebound::region {

// Piecewise-constant certified lower bound s(x) <= Q(L, x), symmetric in x,
// positive on [-a, a] and zero outside.
struct StepFunction {
    double L = 0.0;
    double half_width = 0.0;              // a
    std::vector<double> breakpoints;      // ascending, breakpoints.front() = -a, back() = a
    std::vector<double> values;           // one value per interval, breakpoints.size() - 1 entries

    std::size_t interval_count() const { return values.size(); }
    // s(x); 0 outside [-a, a].  Half-open intervals [b_j, b_{j+1}).
    double value_at(double x) const;
};

// Boundary of the staircase region {y > -s(x)} as a generalized polygon:
// finite vertices counterclockwise plus one vertex at infinity.
struct GeneralizedPolygon {
    std::vector<std::complex<double>> vertices;  // finite vertices, ccw
    std::vector<double> angle_params;            // interior angle / pi per finite vertex
    double alpha_infinity = 0.0;                 // angle parameter at the infinite vertex
    // Position of the infinite vertex in the ccw cycle: it follows
    // vertices[infinite_index - 1] (infinite_index == vertices.size() means last).
    std::size_t infinite_index = 0;

    std::size_t vertex_count() const { return vertices.size() + 1; }
    double angle_param_sum() const;  // finite alphas + alpha at infinity
};

// Smallest integer a with Q(L, a) < q_tail.
double auto_half_width(double L, double q_tail = 0.06);

// Build the certified step function on [-half_width, half_width].  Interval
// values use Q at the right endpoint of the positive-side interval (valid
// since Q is non-increasing in |x|), truncated downward to 12 decimal
// digits.  samples_per_branch controls the graded refinement of the
// intervals where the continuous branch of Q dominates.
StepFunction build_step(double L, double half_width, int samples_per_branch);

// Staircase polygon bounded by the graph of -s(x) and the two real-axis
// rays; one vertex at infinity, interior on the left.
GeneralizedPolygon polygon_from_step(const StepFunction& step);

std::string serialize(const GeneralizedPolygon& poly);
GeneralizedPolygon parse_polygon(const std::string& text);

} // namespace domebound::region
