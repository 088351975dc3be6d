#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nilcat/jacobi.hpp"
#include "nilcat/ode.hpp"
#include "nilcat/profile.hpp"
#include "nilcat/quadrature.hpp"
#include "nilcat/roots.hpp"

namespace nilcat {

/// Half-length of the compactified coordinate interval,
///   S(a) = (2/a) Integral_1^inf du / sqrt((u^2 + 4/a^2)(u^2 - 1)).
inline double S_of_a(const CatenoidParams& params, const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    const double c = 4.0 / (a * a);
    auto f = [c](double u, double d) { return 1.0 / std::sqrt((u * u + c) * d * (u + 1.0)); };
    return (2.0 / a) * quad_singular_offset(f, 1.0, INFINITY, true, false, tol.quad_tol);
}

/// J(a) = 2 Integral_1^inf dv / (v (v + sqrt(v^2+4/a^2)) sqrt((v^2-1)(v^2+4/a^2)));
/// satisfies S(a) = pi/a - 4 J(a)/a^3 and tends to pi/4 for large a.
inline double J_of_a(double a, const Tolerances& tol = {})
{
    if (!(a > 0.0)) throw std::invalid_argument("J_of_a: a must be > 0");
    const double c = 4.0 / (a * a);
    auto f = [c](double v, double d) {
        const double r = std::sqrt(v * v + c);
        return 1.0 / (v * (v + r) * std::sqrt(d * (v + 1.0) * (v * v + c)));
    };
    return 2.0 * quad_singular_offset(f, 1.0, INFINITY, true, false, tol.quad_tol);
}

struct SMap {
    std::function<double(double)> s;  ///< s(t), odd diffeomorphism onto (-S, S)
    double S;                         ///< half-length of the image interval
};

/// The compactifying coordinate of the index analysis: s_t = D/G together
/// with the interval half-length S(a) from its own quadrature.
inline SMap s_map(const ProfileCurve& pc, const Tolerances& tol = {})
{
    const ProfileCurve* p = &pc;
    return {[p](double t) { return p->s(t); }, S_of_a(pc.params(), tol)};
}

/// Potential U of the one-dimensional reduction: U(s(t)) = (G V)(t), even,
/// continuous up to +-S(a) with boundary value a^2 + 2.
///
/// Built by resampling the co-integrated (f, s) data onto a uniform s-grid
/// (shape-preserving cubic interpolation); past the sampled range the tail
/// follows the closed-form asymptotics U = a^2 + 2 - 2 (S - s)^2 obtained
/// from the S(a) integral, accurate to O((S-s)^4).
class PotentialU {
public:
    explicit PotentialU(const ProfileCurve& pc, const Tolerances& tol = {})
    {
        a_ = pc.a();
        S_ = S_of_a(pc.params(), tol);
        s_core_ = pc.s(pc.t_max());
        if (!(s_core_ < S_))
            throw std::runtime_error("PotentialU: sampled range exceeds S(a)");

        const int M = 4000;
        y_.resize(M + 1);
        h_ = s_core_ / M;
        double t_lo = 0.0;
        const double t_hi = pc.t_max();
        y_[0] = potential_GV(pc, 0.0);
        for (int j = 1; j <= M; ++j) {
            const double sj = h_ * j;
            const double tj = (j == M) ? t_hi
                                       : find_root([&pc, sj](double t) { return pc.s(t) - sj; },
                                                   t_lo, t_hi, 1e-12);
            y_[j] = potential_GV(pc, tj);
            t_lo = std::fmax(0.0, tj - 1e-9);
        }
        build_slopes();
    }

    double operator()(double s) const
    {
        const double as = std::fabs(s);
        if (as <= s_core_) return hermite(as);
        if (as <= S_ * (1.0 + 1e-12)) {
            const double d = std::fmax(S_ - as, 0.0);
            return a_ * a_ + 2.0 - 2.0 * d * d;
        }
        throw std::out_of_range("PotentialU: |s| beyond S(a)");
    }

    double S() const { return S_; }
    double s_core() const { return s_core_; }
    double a() const { return a_; }

private:
    void build_slopes()
    {
        // Steffen's shape-preserving slopes on the uniform grid
        const std::size_t M = y_.size() - 1;
        m_.assign(M + 1, 0.0);
        auto sec = [&](std::size_t j) { return (y_[j + 1] - y_[j]) / h_; };
        m_[0] = sec(0);
        m_[M] = sec(M - 1);
        for (std::size_t j = 1; j < M; ++j) {
            const double dl = sec(j - 1), dr = sec(j);
            if (dl * dr <= 0.0) {
                m_[j] = 0.0;
            } else {
                const double p = 0.5 * (dl + dr);
                const double lim = 2.0 * std::fmin(std::fabs(dl), std::fabs(dr));
                m_[j] = (std::fabs(p) > lim) ? (p > 0 ? lim : -lim) : p;
            }
        }
    }

    double hermite(double s) const
    {
        const std::size_t M = y_.size() - 1;
        std::size_t j = static_cast<std::size_t>(s / h_);
        if (j >= M) j = M - 1;
        const double x = (s - h_ * j) / h_;
        const double x2 = x * x, x3 = x2 * x;
        return y_[j] * (2 * x3 - 3 * x2 + 1) + m_[j] * h_ * (x3 - 2 * x2 + x)
             + y_[j + 1] * (-2 * x3 + 3 * x2) + m_[j + 1] * h_ * (x3 - x2);
    }

    double a_ = 0.0, S_ = 0.0, s_core_ = 0.0, h_ = 0.0;
    std::vector<double> y_, m_;
};

inline PotentialU potential_in_s(const ProfileCurve& pc, const Tolerances& tol = {})
{
    return PotentialU(pc, tol);
}

/// U(s) wrapped as a tagged radial evaluator (argument is s, not t).
inline RadialScalar as_radial_scalar(const ProfileCurve& pc, const PotentialU& U)
{
    return RadialScalar(pc, RadialTag::PotentialU, [U](double s) { return U(s); });
}

/// Per-mode verdict of the Sturm-Liouville shooting test.  At most one
/// negative eigenvalue exists per mode, so a boolean suffices; witness is
/// the first zero of the shooting solution in s (or the location of its
/// minimum when it does not vanish).
struct SturmResult {
    int k = 0;
    bool has_negative = false;
    bool indeterminate = false;  ///< grazing minimum or zero within zero_eps of S(a)
    double witness = 0.0;
    double min_value = 0.0;
};

/// Shooting test on the compact interval: integrates u'' = (k^2 - U(s)) u
/// with u(0) = 1, u'(0) = 0 and reports whether u vanishes in (0, S(a)).
inline SturmResult mode_negative(const PotentialU& U, int k, const Tolerances& tol = {})
{
    if (k < 0) throw std::invalid_argument("mode_negative: k must be >= 0");
    const double S = U.S();
    auto rhs = [&U, k](double s, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = (static_cast<double>(k) * k - U(s)) * y[0];
    };
    auto traj = integrate_ode(rhs, {1.0, 0.0}, 0.0, S, tol);

    SturmResult res;
    res.k = k;

    // scan a fine grid plus the step nodes for the first sign change
    std::vector<double> samples;
    const int N = 2000;
    samples.reserve(N + traj.node_times().size());
    for (int i = 0; i <= N; ++i) samples.push_back(S * i / N);
    for (double tn : traj.node_times()) samples.push_back(tn);
    std::sort(samples.begin(), samples.end());

    double prev_s = 0.0, prev_u = 1.0;
    double min_u = 1.0, min_at = 0.0;
    double zero_at = -1.0;
    for (double s : samples) {
        if (s <= prev_s) continue;
        const double u = traj.eval(s, 0);
        if (u < min_u) { min_u = u; min_at = s; }
        if (prev_u > 0.0 && u <= 0.0) {
            zero_at = find_root([&traj](double x) { return traj.eval(x, 0); },
                                prev_s, s, 1e-13);
            break;
        }
        prev_s = s; prev_u = u;
    }

    res.min_value = min_u;
    if (zero_at >= 0.0) {
        res.has_negative = true;
        res.witness = zero_at;
        res.min_value = 0.0;
        if (S - zero_at < tol.zero_eps) res.indeterminate = true;
    } else {
        res.has_negative = false;
        res.witness = min_at;
        if (min_u > 0.0 && min_u < tol.zero_eps) res.indeterminate = true;
    }
    return res;
}

namespace detail {

// t_max large enough that the sampled s-range reaches within ~2/f_target of
// S(a); the tail asymptotics of PotentialU cover the remainder.
inline double index_t_max(const CatenoidParams& params, const Tolerances& tol)
{
    const double f_target = 100.0 * std::fmax(params.a, 2.0);
    return 1.02 * phi(params, f_target, tol);
}

} // namespace detail

/// Builds the potential for the given neck radius and runs the shooting test
/// for a single mode.
inline SturmResult mode_negative(const CatenoidParams& params, int k, const Tolerances& tol = {})
{
    params.validate();
    if (params.n != 1) throw std::invalid_argument("mode_negative: n must be 1");
    auto pc = solve_profile(params, detail::index_t_max(params, tol), tol);
    PotentialU U(pc, tol);
    return mode_negative(U, k, tol);
}

/// Shooting test carried out directly in the t coordinate (co-integrating
/// the profile), used to cross-validate the s-coordinate route.  Reports a
/// zero of the k-mode radial Jacobi equation in (0, t_max].
inline SturmResult mode_negative_t(const CatenoidParams& params, int k,
                                   const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    auto rhs = [a, k](double, const std::vector<double>& y, std::vector<double>& dy) {
        const double f = y[0], g = y[1];
        const double f2 = f * f;
        const double V = 2.0 * a * a / (f2 * f2)
                       + 2.0 * (a * a + 4.0) / ((4.0 + f2) * (4.0 + f2));
        dy[0] = g;
        dy[1] = 4.0 * (1.0 + g * g) / (f * (f2 + 4.0));
        dy[2] = 4.0 * y[3] / (a * (4.0 + f2));                       // u_t = (D/G) q
        dy[3] = (4.0 * k * k / (a * (4.0 + f2)) - (f2 / a) * V) * y[2];  // q_t = D (k^2/G - V) u
    };
    Tolerances eff = tol;
    eff.ode_rel = std::fmin(tol.ode_rel, 1e-12);
    eff.ode_abs = std::fmin(tol.ode_abs, 1e-12);
    const double t_max = detail::index_t_max(params, tol);
    auto traj = integrate_ode(rhs, {a, 0.0, 1.0, 0.0}, 0.0, t_max, eff);

    SturmResult res;
    res.k = k;
    double prev_t = 0.0, prev_u = 1.0;
    double min_u = 1.0, min_at = 0.0;
    const int N = 4000;
    for (int i = 1; i <= N; ++i) {
        const double t = t_max * i / N;
        const double u = traj.eval(t, 2);
        if (u < min_u) { min_u = u; min_at = t; }
        if (prev_u > 0.0 && u <= 0.0) {
            res.has_negative = true;
            res.witness = find_root([&traj](double x) { return traj.eval(x, 2); },
                                    prev_t, t, 1e-12);
            res.min_value = 0.0;
            return res;
        }
        prev_t = t; prev_u = u;
    }
    res.has_negative = false;
    res.witness = min_at;
    res.min_value = min_u;
    if (min_u > 0.0 && min_u < tol.zero_eps) res.indeterminate = true;
    return res;
}

/// Number of modes k >= 1 certified negative by the cosine trial function:
/// k^2 < a sqrt(a^2+4) - (pi/(2 S(a)))^2.
inline int trial_mode_count(const CatenoidParams& params, const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    const double S = S_of_a(params, tol);
    const double rhs = a * std::sqrt(a * a + 4.0) - std::pow(M_PI / (2.0 * S), 2);
    int count = 0;
    for (int k = 1; static_cast<double>(k) * k < rhs; ++k) ++count;
    return count;
}

/// Morse index bracket assembled from the per-mode shooting verdicts.
struct IndexReport {
    double a = 0.0;
    int lower_bound = 0;       ///< max(3, 1 + 2 * trial_bound_modes)
    int upper_bound = 0;       ///< 1 + 2 floor(sqrt(a^2+2))
    int computed = 0;          ///< 1 + 2 * number of definitely negative modes k >= 1
    int computed_hi = 0;       ///< computed plus twice the indeterminate modes
    bool indeterminate = false;
    int trial_bound_modes = 0;
    std::vector<SturmResult> per_mode;  // k = 0, 1, ..., kmax
};

/// Full index computation: shoots every mode 1 <= k < sqrt(a^2+2) (larger
/// modes are positive), combines with the k = 0 contribution, and attaches
/// the trial-function lower bound and the spectral upper bound.
inline IndexReport morse_index(const CatenoidParams& params, const Tolerances& tol = {})
{
    params.validate();
    if (params.n != 1) throw std::invalid_argument("morse_index: n must be 1");
    const double a = params.a;

    auto pc = solve_profile(params, detail::index_t_max(params, tol), tol);
    PotentialU U(pc, tol);

    IndexReport rep;
    rep.a = a;
    const double bound = std::sqrt(a * a + 2.0);
    rep.upper_bound = 1 + 2 * static_cast<int>(std::floor(bound));

    int kmax = static_cast<int>(std::ceil(bound)) - 1;
    if (kmax < 1) kmax = 1;  // k = 1 is always worth testing (and negative)

    int negative = 0, open = 0;
    for (int k = 0; k <= kmax; ++k) {
        SturmResult r = mode_negative(U, k, tol);
        if (k >= 1) {
            if (r.has_negative && !r.indeterminate) ++negative;
            else if (r.indeterminate) ++open;
        }
        rep.per_mode.push_back(r);
    }
    rep.computed = 1 + 2 * negative;
    rep.computed_hi = rep.computed + 2 * open;
    rep.indeterminate = (open > 0);
    rep.trial_bound_modes = trial_mode_count(params, tol);
    rep.lower_bound = std::max(3, 1 + 2 * rep.trial_bound_modes);
    return rep;
}

} // namespace nilcat
