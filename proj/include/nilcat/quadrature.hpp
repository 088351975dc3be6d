#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nilcat {

namespace detail {

struct GlRule {
    std::vector<double> node;    // on (-1, 1)
    std::vector<double> weight;
};

inline GlRule make_gl_rule(int n)
{
    // Newton iteration on Legendre polynomials; nodes symmetric about 0.
    GlRule r;
    r.node.resize(n);
    r.weight.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1; p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = r.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

// Rules for the doubling ladder, built once (thread-safe static init).
inline const GlRule& gl_rule(int n)
{
    static const std::vector<GlRule> rules = [] {
        std::vector<GlRule> v;
        for (int k = 8; k <= 1024; k *= 2) v.push_back(make_gl_rule(k));
        return v;
    }();
    int idx = 0;
    for (int k = 8; k < n; k *= 2) ++idx;
    return rules[static_cast<std::size_t>(idx)];
}

struct GlEstimate {
    double value;
    double l1;  // integral of |f|, for noise-floor scaling
};

template <class F>
GlEstimate gl_apply(F&& f, double a, double b, int n)
{
    const GlRule& r = gl_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0, asum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = f(mid + half * r.node[i]);
        sum += r.weight[i] * v;
        asum += r.weight[i] * std::fabs(v);
    }
    const GlEstimate q{half * sum, half * asum};
    if (!std::isfinite(q.value))
        throw std::runtime_error("quad: non-finite integrand (non-integrable singularity?)");
    return q;
}

} // namespace detail

/// Adaptive quadrature of a smooth integrand on a finite interval.
///
/// Doubles a Gauss-Legendre order ladder until two consecutive orders agree
/// within max(tol, roundoff floor); bisects the interval when the ladder
/// stalls.  When the ladder has converged to six-plus relative digits and
/// further refinement only injects floating-point noise (the signature of a
/// cancellation-limited integrand near a removed singularity), the best
/// estimate is returned instead of subdividing into the noise.
template <class F>
double quad(F&& f, double a, double b, double tol, int depth = 0)
{
    if (a == b) return 0.0;
    auto prev = detail::gl_apply(f, a, b, 8);
    double best_val = prev.value;
    double best_diff = std::numeric_limits<double>::infinity();
    double prev_diff = best_diff;
    int growing = 0;
    for (int n = 16; n <= 1024; n *= 2) {
        const auto cur = detail::gl_apply(f, a, b, n);
        const double diff = std::fabs(cur.value - prev.value);
        const double floor_ = 1e-15 * std::fmax(1.0, std::fabs(cur.value));
        if (diff <= std::fmax(tol, floor_)) return cur.value;
        if (diff < best_diff) { best_diff = diff; best_val = cur.value; }
        growing = (diff > 1.2 * prev_diff) ? growing + 1 : 0;
        if (growing >= 2 && best_diff <= 1e-6 * std::fmax(std::fabs(best_val), cur.l1))
            return best_val;
        prev = cur;
        prev_diff = diff;
    }
    if (depth >= 40)
        throw std::runtime_error("quad: tolerance not reached within budget");
    const double m = 0.5 * (a + b);
    return quad(f, a, m, 0.5 * tol, depth + 1) + quad(f, m, b, 0.5 * tol, depth + 1);
}

namespace detail {

// Integrates f over [a, b] with an inverse-square-root singularity allowed at
// one endpoint, removed by x = c + sinh^2(theta) (mirrored for the upper end).
// The transformed integrand is analytic whenever f is analytic on the open
// interval with at worst a (x-c)^(-1/2) endpoint blowup.
//
// f is called as f(x, d) with d the exact distance to the singular endpoint,
// so that differences like x^2 - c^2 = d (x + c) can be formed without the
// cancellation that x alone cannot avoid near c.
template <class F2>
double quad_sqrt_endpoint(F2&& f, double a, double b, bool at_lower, double tol)
{
    const double theta_max = std::asinh(std::sqrt(b - a));
    // keep evaluations a representable distance away from the singular point
    const double c = at_lower ? a : b;
    const double d_floor = 4.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, std::fabs(c));
    auto g = [&, d_floor](double th) {
        const double sh = std::sinh(th);
        const double d = std::fmax(sh * sh, d_floor);
        return f(at_lower ? a + d : b - d, d) * std::sinh(2.0 * th);
    };

    // The substitution turns an (x-c)^(-1/2) endpoint into a bounded
    // integrand; if the transformed values still blow up toward the endpoint
    // the singularity is stronger than advertised.
    double inner = std::fabs(g(1e-6 * theta_max));
    int blowups = 0;
    for (double th = 1e-5; th <= 1.01e-2; th *= 10.0) {
        const double outer = std::fabs(g(th * theta_max));
        if (inner > 8.0 * outer + 1e-300) ++blowups;
        inner = outer;
    }
    if (blowups >= 3)
        throw std::runtime_error(
            "quad_singular: non-integrable singularity detected (estimate diverges under refinement)");

    return quad(g, 0.0, theta_max, tol);
}

} // namespace detail

/// Offset-aware form of quad_singular: the integrand receives (x, d) where d
/// is the exact distance from x to the marked singular endpoint (to the
/// lower endpoint when none is marked).  Lets callers evaluate factors such
/// as x^2 - c^2 = d (x + c) at full precision arbitrarily close to c; the
/// plain quad_singular wraps this with d ignored.
template <class F2>
double quad_singular_offset(F2&& f, double lo, double hi, bool singular_lo, bool singular_hi,
                            double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("quad_singular: tol must be positive");
    if (!std::isfinite(lo)) throw std::invalid_argument("quad_singular: lo must be finite");
    if (std::isinf(hi)) {
        if (singular_hi)
            throw std::invalid_argument("quad_singular: cannot mark an infinite endpoint singular");
        double m = lo + std::fmax(1.0, std::fabs(lo));
        if (m <= 0.0) m = 1.0;  // the 1/x map needs a positive split point
        auto tail = [&](double u, double) {
            const double x = 1.0 / u;
            return f(x, x - lo) / (u * u);
        };
        return quad_singular_offset(f, lo, m, singular_lo, false, 0.5 * tol)
             + detail::quad_sqrt_endpoint(tail, 0.0, 1.0 / m, true, 0.5 * tol);
    }
    if (!(lo < hi)) {
        if (lo == hi) return 0.0;
        throw std::invalid_argument("quad_singular: lo must not exceed hi");
    }
    if (singular_lo && singular_hi) {
        const double m = 0.5 * (lo + hi);
        return detail::quad_sqrt_endpoint(f, lo, m, true, 0.5 * tol)
             + detail::quad_sqrt_endpoint(f, m, hi, false, 0.5 * tol);
    }
    if (singular_lo) return detail::quad_sqrt_endpoint(f, lo, hi, true, tol);
    if (singular_hi) return detail::quad_sqrt_endpoint(f, lo, hi, false, tol);
    auto g = [&](double x) { return f(x, x - lo); };
    return quad(g, lo, hi, tol);
}

/// Quadrature tolerant of inverse-square-root endpoint singularities and of
/// an infinite upper limit.
///
/// A marked endpoint may blow up at worst like (x-c)^(-1/2); it is removed by
/// the substitution x = c + sinh^2(theta).  hi may be +infinity, in which
/// case the integrand must eventually decay like x^(-p) with p > 1; the tail
/// is mapped by u = 1/x, and the mapped endpoint is treated as potentially
/// singular so that tails as slow as x^(-3/2) stay accurate.
template <class F>
double quad_singular(F&& f, double lo, double hi, bool singular_lo, bool singular_hi,
                     double tol)
{
    return quad_singular_offset([&](double x, double) { return f(x); },
                                lo, hi, singular_lo, singular_hi, tol);
}

} // namespace nilcat
