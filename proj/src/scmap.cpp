#include "domebound/scmap.hpp"

#include "domebound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace domebound::scmap {

namespace {

constexpr double kSubdivisionRatio = 0.35;  // piece length vs distance to nearest singularity
constexpr int kMaxPieces = 256;

// ---------------------------------------------------------------- quadrature

struct QuadRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // for weight (1-t)^A (1+t)^B
};

// Symmetric tridiagonal QL with implicit shifts, accumulating only the first
// component of each eigenvector (Golub-Welsch needs nothing else).
void tql_first_component(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw SolverError("jacobi rule: QL iteration failed");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

QuadRule make_jacobi(int n, double A, double B) {
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0), z(n, 0.0);
    z[0] = 1.0;
    const double apb = A + B;
    d[0] = (B - A) / (apb + 2.0);
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + apb;
        d[k] = (B * B - A * A) / (t * (t + 2.0));
    }
    if (n > 1) {
        e[0] = std::sqrt(4.0 * (A + 1.0) * (B + 1.0) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0)));
        for (int k = 2; k < n; ++k) {
            const double t = 2.0 * k + apb;
            e[k - 1] = std::sqrt(4.0 * k * (k + A) * (k + B) * (k + apb) /
                                 (t * t * (t + 1.0) * (t - 1.0)));
        }
    }
    tql_first_component(d, e, z);
    const double mu0 = std::exp((apb + 1.0) * std::numbers::ln2 + std::lgamma(A + 1.0) +
                                std::lgamma(B + 1.0) - std::lgamma(apb + 2.0));
    std::vector<std::pair<double, double>> both(n);
    for (int k = 0; k < n; ++k) both[k] = {d[k], mu0 * z[k] * z[k]};
    std::sort(both.begin(), both.end());
    QuadRule rule;
    for (auto& [x, w] : both) {
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

const QuadRule& jacobi_rule(int n, double A, double B) {
    static std::map<std::tuple<int, std::int64_t, std::int64_t>, QuadRule> cache;
    static std::mutex mutex;
    const auto key = std::make_tuple(n, static_cast<std::int64_t>(std::llround(A * 1099511627776.0)),
                                     static_cast<std::int64_t>(std::llround(B * 1099511627776.0)));
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_jacobi(n, A, B)).first;
    return it->second;
}

// ---------------------------------------------------------------- integrand

// Per-prevertex exponent classes: 0 skips the factor, +-1 marks beta = +-1/2
// (the staircase case, evaluated through a running product and one sqrt),
// 2 is the general-exponent fallback.
struct Integrand {
    const std::vector<double>* xs;
    const std::vector<double>* betas;
    std::vector<std::int8_t> cls;

    explicit Integrand(const std::vector<double>& x, const std::vector<double>& b)
        : xs(&x), betas(&b) {
        cls.reserve(b.size());
        for (double beta : b) {
            if (beta == 0.0)
                cls.push_back(0);
            else if (beta == 0.5)
                cls.push_back(1);
            else if (beta == -0.5)
                cls.push_back(-1);
            else
                cls.push_back(2);
        }
    }
};

// prod_k |t - x_k|^{beta_k} over real t, skipping up to two indices.
double real_density(const Integrand& ig, double t, int skip1, int skip2) {
    const std::vector<double>& x = *ig.xs;
    const std::vector<double>& beta = *ig.betas;
    const int m = static_cast<int>(x.size());
    double prod = 1.0;
    int ex = 0;
    double general = 0.0;
    int since_norm = 0;
    for (int k = 0; k < m; ++k) {
        if (k == skip1 || k == skip2) continue;
        const std::int8_t c = ig.cls[k];
        if (c == 0) continue;
        const double d = std::fabs(t - x[k]);
        if (c == 1) {
            prod *= d;
        } else if (c == -1) {
            prod /= d;
        } else {
            general += beta[k] * std::log(d);
            continue;
        }
        if (++since_norm == 24) {
            int e2;
            prod = std::frexp(prod, &e2);
            ex += e2;
            since_norm = 0;
        }
    }
    int e2;
    prod = std::frexp(prod, &e2);
    ex += e2;
    if (ex & 1) {
        prod *= 2.0;
        ex -= 1;
    }
    double out = std::sqrt(prod) * std::ldexp(1.0, ex / 2);
    if (general != 0.0) out *= std::exp(general);
    return out;
}

// prod_k (zeta - x_k)^{beta_k} with the principal branch, continuous on the
// closed upper half-plane.
Complex complex_density(const Integrand& ig, Complex zeta, int skip) {
    const std::vector<double>& x = *ig.xs;
    const std::vector<double>& beta = *ig.betas;
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (static_cast<int>(k) == skip || ig.cls[k] == 0) continue;
        acc += beta[k] * std::log(zeta - x[k]);
    }
    return std::exp(acc);
}

// Distance from p to the nearest singular prevertex, optionally excluding one.
double nearest_singularity(const Integrand& ig, Complex p, int exclude) {
    const std::vector<double>& x = *ig.xs;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (static_cast<int>(k) == exclude || ig.cls[k] == 0) continue;
        best = std::min(best, std::abs(p - Complex(x[k], 0.0)));
    }
    return best;
}

// Integral of the density over the straight segment from a (possibly a
// singular prevertex, exponent absorbed by Gauss-Jacobi) toward b, as a
// positive measure along the segment.  Real-axis version.
double real_quad_from(const Integrand& ig, double a, double b, int sing_a, int order) {
    const double len = std::fabs(b - a);
    if (len == 0.0) return 0.0;
    const double dir = b > a ? 1.0 : -1.0;
    const double beta_a = sing_a >= 0 ? (*ig.betas)[sing_a] : 0.0;

    double total = 0.0;
    double cur = a;
    double remaining = len;
    bool first = true;
    int pieces = 0;
    while (remaining > 0.0) {
        double reach = nearest_singularity(ig, Complex(cur, 0.0), first ? sing_a : -1);
        double step = std::min(remaining, kSubdivisionRatio * reach);
        if (!(step > 0.0) || ++pieces >= kMaxPieces) step = remaining;
        const double nxt = cur + dir * step;
        const double h = 0.5 * step;
        const QuadRule& rule = first ? jacobi_rule(order, 0.0, beta_a) : jacobi_rule(order, 0.0, 0.0);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = cur + dir * h * (1.0 + rule.nodes[q]);
            sum += rule.weights[q] * real_density(ig, t, first ? sing_a : -1, -1);
        }
        total += first ? std::pow(h, 1.0 + beta_a) * sum : h * sum;
        cur = nxt;
        remaining -= step;
        first = false;
    }
    return total;
}

// Complex-path version: integral of the density from a toward b along the
// straight segment, oriented (returns the signed complex integral).
Complex complex_quad_from(const Integrand& ig, Complex a, Complex b, int sing_a, int order) {
    const double len = std::abs(b - a);
    if (len == 0.0) return {0.0, 0.0};
    const Complex dir = (b - a) / len;
    const double beta_a = sing_a >= 0 ? (*ig.betas)[sing_a] : 0.0;

    Complex total(0.0, 0.0);
    Complex cur = a;
    double remaining = len;
    bool first = true;
    int pieces = 0;
    while (remaining > 0.0) {
        double reach = nearest_singularity(ig, cur, first ? sing_a : -1);
        double step = std::min(remaining, kSubdivisionRatio * reach);
        if (!(step > 0.0) || ++pieces >= kMaxPieces) step = remaining;
        const Complex nxt = cur + dir * step;
        const Complex half = 0.5 * step * dir;
        const QuadRule& rule = first ? jacobi_rule(order, 0.0, beta_a) : jacobi_rule(order, 0.0, 0.0);
        Complex sum(0.0, 0.0);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const Complex t = cur + half * (1.0 + rule.nodes[q]);
            sum += rule.weights[q] * complex_density(ig, t, first ? sing_a : -1);
        }
        total += first ? std::pow(half, Complex(1.0 + beta_a, 0.0)) * sum : half * sum;
        cur = nxt;
        remaining -= step;
        first = false;
    }
    return total;
}

// exp(i pi s) for a half-integer s, exact.
Complex half_integer_phase(double s) {
    const double two_s = 2.0 * s;
    const long n = std::lround(two_s);
    if (std::fabs(two_s - static_cast<double>(n)) < 1e-9) {
        switch (((n % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return std::exp(Complex(0.0, std::numbers::pi * s));
}

// ---------------------------------------------------------------- solve

region::GeneralizedPolygon canonicalize(const region::GeneralizedPolygon& poly) {
    const std::size_t m = poly.vertices.size();
    if (poly.infinite_index > m)
        throw PreconditionError("scmap: infinite_index out of range");
    region::GeneralizedPolygon out;
    out.alpha_infinity = poly.alpha_infinity;
    out.infinite_index = m;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = (poly.infinite_index + i) % m;
        out.vertices.push_back(poly.vertices[k]);
        out.angle_params.push_back(poly.angle_params[k]);
    }
    return out;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::isfinite(s) ? std::sqrt(s) : std::numeric_limits<double>::infinity();
}

double max_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

// Dense LU with partial pivoting; solves in place, returns false on
// singularity.
bool lu_solve(std::vector<double> A, std::vector<double>& b, int n) {
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::fabs(A[piv[col] * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::fabs(A[piv[r] * n + col]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) return false;
        std::swap(piv[col], piv[p]);
        const double pivval = A[piv[col] * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = A[piv[r] * n + col] / pivval;
            A[piv[r] * n + col] = f;
            for (int c = col + 1; c < n; ++c) A[piv[r] * n + c] -= f * A[piv[col] * n + c];
        }
    }
    std::vector<double> y(n);
    for (int r = 0; r < n; ++r) {
        double s = b[piv[r]];
        for (int c = 0; c < r; ++c) s -= A[piv[r] * n + c] * y[c];
        y[r] = s;
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = y[r];
        for (int c = r + 1; c < n; ++c) s -= A[piv[r] * n + c] * b[c];
        b[r] = s / A[piv[r] * n + r];
    }
    return true;
}

struct ParamWorkspace {
    const std::vector<Complex>* vertices;
    std::vector<double> betas;
    std::vector<double> loglen;  // log side lengths, finite sides
    double pin0, pin1;
    int order;

    std::vector<double> prevertices_of(const std::vector<double>& u) const {
        const std::size_t m = vertices->size();
        std::vector<double> x(m);
        x[0] = pin0;
        x[1] = pin1;
        for (std::size_t k = 2; k < m; ++k) {
            const double uu = std::clamp(u[k - 2], -46.0, 46.0);
            x[k] = x[k - 1] + std::exp(uu);
        }
        return x;
    }

    // r_i = log(R_{i+1}/R_0) - log(len_{i+1}/len_0), i = 0..m-3.
    std::vector<double> residual(const std::vector<double>& u) const {
        const std::vector<double> x = prevertices_of(u);
        const std::size_t m = x.size();
        Integrand ig(x, betas);
        std::vector<double> logR(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double mid = 0.5 * (x[i] + x[i + 1]);
            const double R = real_quad_from(ig, x[i], mid, static_cast<int>(i), order) +
                             real_quad_from(ig, x[i + 1], mid, static_cast<int>(i + 1), order);
            logR[i] = std::log(R);
        }
        std::vector<double> r(m - 2);
        for (std::size_t i = 1; i + 1 < m; ++i)
            r[i - 1] = (logR[i] - logR[0]) - (loglen[i] - loglen[0]);
        return r;
    }
};

void finalize_map(SCMap& map) {
    const std::vector<Complex>& v = map.polygon.vertices;
    const std::vector<double>& x = map.prevertices;
    const std::size_t m = x.size();
    Integrand ig(x, map.betas);

    // Constant phase of the integrand on each side (suffix sums of beta).
    std::vector<double> suffix(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] + map.betas[k];
    map.side_phases.assign(m > 0 ? m - 1 : 0, Complex(1.0, 0.0));
    std::vector<Complex> side_integrals(m > 0 ? m - 1 : 0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double mid = 0.5 * (x[i] + x[i + 1]);
        const double R = real_quad_from(ig, x[i], mid, static_cast<int>(i), map.quad_order) +
                         real_quad_from(ig, x[i + 1], mid, static_cast<int>(i + 1), map.quad_order);
        map.side_phases[i] = half_integer_phase(suffix[i + 1]);
        side_integrals[i] = map.side_phases[i] * R;
    }

    // Cumulative integral from x[1]; affine constants from the pinned pair.
    map.cumulative.assign(m, Complex(0.0, 0.0));
    if (m >= 2) {
        map.cumulative[0] = -side_integrals[0];
        for (std::size_t k = 2; k < m; ++k)
            map.cumulative[k] = map.cumulative[k - 1] + side_integrals[k - 1];
        map.affine_shift = v[1];
        map.affine_scale = (v[1] - v[0]) / side_integrals[0];
    } else {
        map.affine_shift = Complex(0.0, 0.0);
        map.affine_scale = Complex(1.0, 0.0);
    }

    map.prevertex_images.assign(m, Complex(0.0, 0.0));
    map.accuracy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        map.prevertex_images[k] = map.affine_shift + map.affine_scale * map.cumulative[k];
        map.accuracy = std::max(map.accuracy, std::abs(map.prevertex_images[k] - v[k]));
    }

    map.crowding_warning = false;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (x[k + 1] - x[k] < 1e-12) {
            map.crowding_warning = true;
            std::cerr << "scmap: crowding warning, prevertex gap " << (x[k + 1] - x[k])
                      << " below 1e-12 at index " << k << "\n";
        }
    }

    if (m >= 2) {
        map.anchor_z = Complex(0.5 * (x.front() + x.back()), 0.5 * (x.back() - x.front()));
        map.anchor_w = sc_forward(map, map.anchor_z);
    } else {
        map.anchor_z = Complex(0.0, 1.0);
        map.anchor_w = map.affine_shift + map.affine_scale * map.anchor_z;
    }
}

} // namespace

SCMap solve_parameters(const region::GeneralizedPolygon& polygon, int quad_order, double tol) {
    SolveOptions opts;
    opts.quad_order = quad_order;
    opts.tol = tol;
    return solve_parameters(polygon, opts);
}

SCMap solve_parameters(const region::GeneralizedPolygon& polygon, const SolveOptions& options) {
    if (options.quad_order < 2 || options.quad_order > 64)
        throw PreconditionError("solve_parameters: quad_order out of range [2, 64]");
    if (!(options.tol > 0.0)) throw PreconditionError("solve_parameters: tol must be positive");
    if (!(options.pin0 < options.pin1))
        throw PreconditionError("solve_parameters: pinned prevertices must be ordered");

    SCMap map;
    map.polygon = canonicalize(polygon);
    map.quad_order = options.quad_order;
    map.angle_params = map.polygon.angle_params;
    const std::size_t m = map.polygon.vertices.size();

    const double closure = map.polygon.angle_param_sum() - (static_cast<double>(m + 1) - 2.0);
    if (std::fabs(closure) > 1e-9) {
        std::ostringstream msg;
        msg << "solve_parameters: angle parameters violate the closure sum by " << closure;
        throw PreconditionError(msg.str());
    }
    for (double a : map.angle_params)
        if (!(a > 0.0 && a <= 2.0))
            throw PreconditionError("solve_parameters: finite angle parameter outside (0, 2]");

    map.betas.clear();
    for (double a : map.angle_params) map.betas.push_back(a - 1.0);

    if (m == 0) {  // degenerate: the polygon is the upper half-plane itself
        finalize_map(map);
        return map;
    }
    if (m == 1) throw PreconditionError("solve_parameters: a single finite vertex cannot be normalized");

    ParamWorkspace ws;
    ws.vertices = &map.polygon.vertices;
    ws.betas = map.betas;
    ws.pin0 = options.pin0;
    ws.pin1 = options.pin1;
    ws.order = options.quad_order;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double len = std::abs(map.polygon.vertices[i + 1] - map.polygon.vertices[i]);
        if (!(len > 0.0)) throw PreconditionError("solve_parameters: zero-length polygon side");
        ws.loglen.push_back(std::log(len));
    }

    const int n = static_cast<int>(m) - 2;
    std::vector<double> u(n, 0.0);
    if (n > 0) {
        // Initial guess: prevertex gaps proportional to boundary arc length.
        const double scale = std::exp(ws.loglen[0]);
        for (int i = 0; i < n; ++i)
            u[i] = std::log(std::abs(map.polygon.vertices[i + 2] - map.polygon.vertices[i + 1]) /
                            scale * (options.pin1 - options.pin0));

        std::vector<double> r = ws.residual(u);
        double rn = norm2(r);
        const auto fd_jacobian = [&](const std::vector<double>& uu, const std::vector<double>& rr) {
            std::vector<double> J(static_cast<std::size_t>(n) * n);
            const double delta = 1e-7;
            std::vector<double> up = uu;
            for (int j = 0; j < n; ++j) {
                up[j] += delta;
                const std::vector<double> rp = ws.residual(up);
                up[j] = uu[j];
                for (int i = 0; i < n; ++i) J[static_cast<std::size_t>(i) * n + j] = (rp[i] - rr[i]) / delta;
            }
            return J;
        };

        std::vector<double> J = fd_jacobian(u, r);
        bool fresh = true;
        int accepted_since_fd = 0;
        int iter = 0;
        while (max_abs(r) >= options.tol) {
            if (++iter > options.max_iterations) {
                std::ostringstream msg;
                msg << "solve_parameters: iteration cap " << options.max_iterations
                    << " reached; residual max " << max_abs(r) << ", first entries:";
                for (int i = 0; i < std::min(n, 6); ++i) msg << " " << r[i];
                throw IterationLimitError(msg.str());
            }
            std::vector<double> step = r;
            for (double& s : step) s = -s;
            if (!lu_solve(J, step, n)) {
                if (!fresh) {
                    J = fd_jacobian(u, r);
                    fresh = true;
                    continue;
                }
                throw SolverError("solve_parameters: singular Jacobian");
            }
            double lambda = std::min(1.0, 4.0 / std::max(1e-12, max_abs(step)));
            bool accepted = false;
            std::vector<double> u_try, r_try;
            double rn_try = 0.0;
            for (int back = 0; back < 14; ++back) {
                u_try = u;
                for (int i = 0; i < n; ++i) u_try[i] += lambda * step[i];
                r_try = ws.residual(u_try);
                rn_try = norm2(r_try);
                if (rn_try < rn) {
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) {
                if (!fresh) {
                    J = fd_jacobian(u, r);
                    fresh = true;
                    accepted_since_fd = 0;
                    continue;
                }
                std::ostringstream msg;
                msg << "solve_parameters: stalled with fresh Jacobian; residual max "
                    << max_abs(r) << ", first entries:";
                for (int i = 0; i < std::min(n, 6); ++i) msg << " " << r[i];
                throw SolverError(msg.str());
            }
            // Broyden rank-one update keeps the Jacobian useful between
            // finite-difference refreshes.
            std::vector<double> du(n), dr(n);
            double du2 = 0.0;
            for (int i = 0; i < n; ++i) {
                du[i] = u_try[i] - u[i];
                dr[i] = r_try[i] - r[i];
                du2 += du[i] * du[i];
            }
            std::vector<double> Jdu(n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) Jdu[i] += J[static_cast<std::size_t>(i) * n + j] * du[j];
            for (int i = 0; i < n; ++i) {
                const double coef = (dr[i] - Jdu[i]) / du2;
                for (int j = 0; j < n; ++j) J[static_cast<std::size_t>(i) * n + j] += coef * du[j];
            }
            u = u_try;
            r = r_try;
            rn = rn_try;
            fresh = false;
            if (++accepted_since_fd >= 12 && max_abs(r) >= options.tol) {
                J = fd_jacobian(u, r);
                fresh = true;
                accepted_since_fd = 0;
            }
        }
    }

    map.prevertices = ws.prevertices_of(u);
    finalize_map(map);
    return map;
}

Complex sc_forward(const SCMap& map, Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw PreconditionError("sc_forward: evaluation at the infinite prevertex rejected");
    const std::size_t m = map.prevertices.size();
    if (m == 0) return map.affine_shift + map.affine_scale * z;
    const double span = map.prevertices.back() - map.prevertices.front() + 1.0;
    if (z.imag() < -1e-12 * span)
        throw PreconditionError("sc_forward: point below the real axis");

    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        const double d = std::abs(z - Complex(map.prevertices[k], 0.0));
        if (d < best) {
            best = d;
            j = k;
        }
    }
    if (best <= 1e-14 * (1.0 + std::fabs(map.prevertices[j])))
        return map.polygon.vertices[j];

    Integrand ig(map.prevertices, map.betas);
    const Complex tail = complex_quad_from(ig, Complex(map.prevertices[j], 0.0), z,
                                           static_cast<int>(j), map.quad_order);
    // Phase bookkeeping: complex_quad_from uses the principal branch, which
    // matches the side-phase convention used for the cumulative integrals.
    return map.affine_shift + map.affine_scale * (map.cumulative[j] + tail);
}

Complex sc_forward_from(const SCMap& map, Complex z, std::size_t anchor_index) {
    const std::size_t m = map.prevertices.size();
    if (m == 0) return map.affine_shift + map.affine_scale * z;
    if (anchor_index >= m) throw PreconditionError("sc_forward_from: anchor index out of range");
    Integrand ig(map.prevertices, map.betas);
    const Complex tail = complex_quad_from(ig, Complex(map.prevertices[anchor_index], 0.0), z,
                                           static_cast<int>(anchor_index), map.quad_order);
    return map.affine_shift + map.affine_scale * (map.cumulative[anchor_index] + tail);
}

Complex sc_inverse(const SCMap& map, Complex w, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("sc_inverse: tol must be positive");
    const std::size_t m = map.prevertices.size();
    if (m == 0) return (w - map.affine_shift) / map.affine_scale;

    Integrand ig(map.prevertices, map.betas);
    const double span = map.prevertices.back() - map.prevertices.front() + 1.0;
    const double wtol = tol * (1.0 + std::abs(w));

    auto derivative = [&](Complex z) { return map.affine_scale * complex_density(ig, z, -1); };

    for (int attempt = 0; attempt < 4; ++attempt) {
        // ODE initialization along the straight w-segment from the anchor.
        const int steps = 24 << attempt;
        Complex z = map.anchor_z;
        const Complex dw = (w - map.anchor_w) / static_cast<double>(steps);
        bool ode_ok = true;
        for (int s = 0; s < steps && ode_ok; ++s) {
            auto rhs = [&](Complex zz) -> Complex {
                const Complex fp = derivative(zz);
                if (std::abs(fp) == 0.0) return {0.0, 0.0};
                return dw / fp;
            };
            const Complex k1 = rhs(z);
            const Complex k2 = rhs(z + 0.5 * k1);
            const Complex k3 = rhs(z + 0.5 * k2);
            const Complex k4 = rhs(z + k3);
            z += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) ode_ok = false;
            if (z.imag() < 1e-13 * span) z.imag(1e-13 * span);
        }
        if (!ode_ok) continue;

        // Newton polish with incremental forward evaluations.
        Complex f = sc_forward(map, z);
        double err = std::abs(f - w);
        bool diverged = false;
        for (int it = 0; it < 48 && err > wtol; ++it) {
            const Complex fp = derivative(z);
            if (std::abs(fp) == 0.0) {
                diverged = true;
                break;
            }
            Complex dz = (w - f) / fp;
            // Keep the iterate in the open half-plane.
            double shrink = 1.0;
            while (shrink > 1e-6 && (z + shrink * dz).imag() <= 0.0) shrink *= 0.5;
            const Complex z_next = z + shrink * dz;
            const Complex f_next = f + map.affine_scale *
                                           complex_quad_from(ig, z, z_next, -1, map.quad_order);
            const double err_next = std::abs(f_next - w);
            if (err_next > 4.0 * err + wtol) {
                diverged = true;
                break;
            }
            z = z_next;
            f = f_next;
            err = err_next;
        }
        if (diverged || err > wtol) continue;

        // Fresh verification from a prevertex anchor guards against drift in
        // the incremental path integrals.
        const double fresh_err = std::abs(sc_forward(map, z) - w);
        if (fresh_err <= std::max(wtol, 1e-10 * (1.0 + std::abs(w)))) {
            if (!(z.imag() > 0.0)) throw SolverError("sc_inverse: landed on the boundary");
            return z;
        }
    }
    std::ostringstream msg;
    msg << "sc_inverse: Newton divergence after restart budget at w = (" << w.real() << ", "
        << w.imag() << ")";
    throw SolverError(msg.str());
}

std::string serialize(const SCMap& map) {
    std::ostringstream out;
    char buf[128];
    out << "scmap\n";
    out << "quad_order " << map.quad_order << "\n";
    std::snprintf(buf, sizeof buf, "accuracy %.17g", map.accuracy);
    out << buf << "\n";
    std::snprintf(buf, sizeof buf, "affine_scale %.17g %.17g", map.affine_scale.real(),
                  map.affine_scale.imag());
    out << buf << "\n";
    std::snprintf(buf, sizeof buf, "affine_shift %.17g %.17g", map.affine_shift.real(),
                  map.affine_shift.imag());
    out << buf << "\n";
    out << "prevertices " << map.prevertices.size() << "\n";
    for (double x : map.prevertices) {
        std::snprintf(buf, sizeof buf, "p %.17g", x);
        out << buf << "\n";
    }
    return out.str();
}

SCMap deserialize(const std::string& text, const region::GeneralizedPolygon& polygon) {
    std::istringstream in(text);
    std::string tag;
    in >> tag;
    if (tag != "scmap") throw PreconditionError("scmap::deserialize: missing header");
    SCMap map;
    map.polygon = canonicalize(polygon);
    map.angle_params = map.polygon.angle_params;
    for (double a : map.angle_params) map.betas.push_back(a - 1.0);
    std::size_t n = 0;
    double acc = 0.0;
    while (in >> tag) {
        if (tag == "quad_order") in >> map.quad_order;
        else if (tag == "accuracy") in >> acc;
        else if (tag == "affine_scale") {
            double re, im;
            in >> re >> im;
            map.affine_scale = {re, im};
        } else if (tag == "affine_shift") {
            double re, im;
            in >> re >> im;
            map.affine_shift = {re, im};
        } else if (tag == "prevertices") in >> n;
        else if (tag == "p") {
            double x;
            in >> x;
            map.prevertices.push_back(x);
        } else throw PreconditionError("scmap::deserialize: unknown tag '" + tag + "'");
    }
    if (map.prevertices.size() != n || n != map.polygon.vertices.size())
        throw PreconditionError("scmap::deserialize: prevertex count mismatch");
    finalize_map(map);
    if (std::fabs(map.accuracy - acc) > 1e-6 + 1e-3 * std::fabs(acc))
        std::cerr << "scmap::deserialize: stored accuracy " << acc << " differs from recomputed "
                  << map.accuracy << "\n";
    return map;
}

} // namespace domebound::scmap
