#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nilcat/nilgeometry.hpp"
#include "nilcat/profile.hpp"
#include "nilcat/quadrature.hpp"
#include "nilcat/roots.hpp"

namespace nilcat {

struct MetricCoeffs {
    double G;  // f^2 (1 + f^2/4), the theta-theta coefficient
    double D;  // sqrt(det g) = f sqrt(1 + f_t^2 + f^2 f_t^2 / 4)
};

inline MetricCoeffs metric_coeffs(const ProfileCurve& pc, double t)
{
    const double f = pc.f(t), g = pc.f_t(t);
    const double G = f * f * (1.0 + 0.25 * f * f);
    const double D = f * std::sqrt(1.0 + g * g + 0.25 * f * f * g * g);
    return {G, D};
}

/// Normalizing factor W = (1 + f_t^2 + f^2 f_t^2/4)^(-1/2); equals a/f on
/// the catenoid.
inline double weight_W(const ProfileCurve& pc, double t)
{
    const double f = pc.f(t), g = pc.f_t(t);
    return 1.0 / std::sqrt(1.0 + g * g + 0.25 * f * f * g * g);
}

/// Radial amplitude of the first-mode Jacobi functions,
/// W1 = W sqrt(1 + f^2 f_t^2/4) = (1/f) sqrt((4a^2 + f^4)/(4 + f^2)).
inline double weight_W1(const ProfileCurve& pc, double t)
{
    const double f = pc.f(t), g = pc.f_t(t);
    return std::sqrt((1.0 + 0.25 * f * f * g * g) / (1.0 + g * g + 0.25 * f * f * g * g));
}

/// Unit normal along the surface in the left-invariant frame.
inline FrameVector normal_vector(const ProfileCurve& pc, double t, double theta)
{
    const double f = pc.f(t), g = pc.f_t(t);
    const double W = weight_W(pc, t);
    const double half_fg = 0.5 * f * g;
    return {W * (-std::cos(theta) - half_fg * std::sin(theta)),
            W * (-std::sin(theta) + half_fg * std::cos(theta)),
            W * g};
}

/// Jacobi function of the vertical Killing field: v = W f_t.  Odd in t,
/// positive on the upper half-catenoid; coincides with the Z-component
/// gamma of the unit normal.
inline double jacobi_v(const ProfileCurve& pc, double t)
{
    return weight_W(pc, t) * pc.f_t(t);
}

/// phi_tau(a, tau) = (a/2) sqrt((tau^2+4)/(tau^2-a^2)), the tau-derivative
/// of the inverse function (= 1/f_t at matching points).
inline double phi_tau(const CatenoidParams& params, double tau)
{
    const double a = params.a;
    if (!(tau > a)) throw std::invalid_argument("phi_tau: tau must be > a");
    return 0.5 * a * std::sqrt((tau * tau + 4.0) / (tau * tau - a * a));
}

/// v expressed through the inverse function:
/// v_tilde(a, tau) = (1 + tau^2/4 + phi_tau^2)^(-1/2).
inline double v_tilde(const CatenoidParams& params, double tau)
{
    const double pt = phi_tau(params, tau);
    return 1.0 / std::sqrt(1.0 + 0.25 * tau * tau + pt * pt);
}

/// e expressed through the inverse function: e_tilde = -phi_a * v_tilde.
inline double e_tilde(const CatenoidParams& params, double tau, const Tolerances& tol = {})
{
    return -phi_a(params, tau, tol) * v_tilde(params, tau);
}

/// Jacobi function of the neck-radius variation, e = W f_a.  Even in t with
/// e(a, 0) = 1; changes sign exactly once on (0, inf).  Evaluated through
/// the inverse-function identity e(t) = e_tilde(f(t)).
inline double jacobi_e(const ProfileCurve& pc, double t, const Tolerances& tol = {})
{
    if (t == 0.0) return 1.0;
    return e_tilde(pc.params(), pc.f(t), tol);
}

/// Phase of the first-mode Jacobi functions (odd, co-integrated with the
/// profile; omega_t = 4 f^2/(f^4 + 4a^2)).
inline double twist_omega(const ProfileCurve& pc, double t)
{
    return pc.omega(t);
}

/// Limit Omega(a) of the phase at infinity,
///   Omega(a) = 2a Integral_a^inf u^2 sqrt(u^2+4) / ((u^4+4a^2) sqrt(u^2-a^2)) du,
/// strictly between pi/2 and pi.
inline double omega_limit(const CatenoidParams& params, const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    auto f = [a](double u, double d) {
        const double u2 = u * u;
        return 2.0 * a * u2 * std::sqrt(u2 + 4.0)
               / ((u2 * u2 + 4.0 * a * a) * std::sqrt(d * (u + a)));
    };
    return quad_singular_offset(f, a, INFINITY, true, false, tol.quad_tol);
}

/// Omega expressed in the scale-free variable b = 4/a^2:
///   Omega1(b) = Integral_1^inf sqrt(u) sqrt(u+b) / ((u^2+b) sqrt(u-1)) du.
inline double omega_limit_scaled(double b, const Tolerances& tol = {})
{
    if (!(b > 0.0)) throw std::invalid_argument("omega_limit_scaled: b must be > 0");
    auto f = [b](double u, double d) {
        return std::sqrt(u) * std::sqrt(u + b) / ((u * u + b) * std::sqrt(d));
    };
    return quad_singular_offset(f, 1.0, INFINITY, true, false, tol.quad_tol);
}

/// Comparison integral I(b) = Integral_1^inf sqrt(u+b)/(u^2+b) du with
/// pi/2 < I(b) < Omega1(b).
inline double omega_comparison_I(double b, const Tolerances& tol = {})
{
    if (!(b > 0.0)) throw std::invalid_argument("omega_comparison_I: b must be > 0");
    auto f = [b](double u) { return std::sqrt(u + b) / (u * u + b); };
    return quad_singular(f, 1.0, INFINITY, false, false, tol.quad_tol);
}

/// Jacobi potential in the orthogonal parametrization:
///   V = 2a^2/f^4 + 2(a^2+4)/(4+f^2)^2.
inline double potential_V(const ProfileCurve& pc, double t)
{
    const double a = pc.a(), f = pc.f(t);
    const double f2 = f * f;
    return 2.0 * a * a / (f2 * f2) + 2.0 * (a * a + 4.0) / ((4.0 + f2) * (4.0 + f2));
}

/// G V = (a^2/2)(4+f^2)/f^2 + ((a^2+4)/2) f^2/(4+f^2), pinched between
/// a sqrt(a^2+4) and a^2+2 with the upper bound attained at t = 0.
inline double potential_GV(const ProfileCurve& pc, double t)
{
    const double a = pc.a(), f = pc.f(t);
    const double f2 = f * f;
    return 0.5 * a * a * (4.0 + f2) / f2 + 0.5 * (a * a + 4.0) * f2 / (4.0 + f2);
}

/// Same closed form as a function of the profile height (used when a full
/// ProfileCurve is not at hand).
inline double potential_GV_of_f(double a, double f)
{
    const double f2 = f * f;
    return 0.5 * a * a * (4.0 + f2) / f2 + 0.5 * (a * a + 4.0) * f2 / (4.0 + f2);
}

/// Squared norm of the second fundamental form, defined through the Jacobi
/// potential identity |A|^2 = V + 1/2 - gamma^2 (the Ricci term along the
/// normal is gamma^2 - 1/2).  Tends to 1/2 at infinity.
inline double second_ff_norm(const ProfileCurve& pc, double t)
{
    const double gamma = jacobi_v(pc, t);
    return potential_V(pc, t) + 0.5 - gamma * gamma;
}

/// Gauss curvature from the two expressions of the Jacobi operator:
/// K = 1/4 - gamma^2 - |A|^2/2.
inline double gauss_curvature(const ProfileCurve& pc, double t)
{
    const double gamma = jacobi_v(pc, t);
    return 0.25 - gamma * gamma - 0.5 * second_ff_norm(pc, t);
}

/// Half-width of the strip covered by the Gauss map: the maximum over t of
/// gamma(t) = 2 sqrt(f^2-a^2)/(f sqrt(f^2+4)), maximized over f >= a by
/// scalar optimization.  Strictly inside (0, 1).
inline double gauss_strip_halfwidth(const CatenoidParams& params, const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    auto neg_gamma = [a](double f) {
        const double d = std::fmax(f * f - a * a, 0.0);
        return -2.0 * std::sqrt(d) / (f * std::sqrt(f * f + 4.0));
    };
    const double f_star = minimize_scalar(neg_gamma, a, 2.0 * a + 4.0, tol.root_tol);
    return -neg_gamma(f_star);
}

/// Discrete residual of the Jacobi equation for a k-mode radial function:
/// max over interior grid points of |L u + (k^2/G) u - V u| with
/// L u = -(1/D) d/dt((G/D) u_t) discretized by the conservative second-order
/// stencil.  For exact Jacobi functions the residual is O(h^2).
template <class F>
double jacobi_residual(F&& u, const ProfileCurve& pc, int k, double t_lo, double t_hi,
                       double h = 1e-3)
{
    if (!(h > 0.0) || !(t_hi > t_lo))
        throw std::invalid_argument("jacobi_residual: bad grid");
    const int npts = static_cast<int>(std::floor((t_hi - t_lo) / h + 0.5)) + 1;
    if (npts < 5)
        throw std::invalid_argument("jacobi_residual: grid too coarse (fewer than 5 points)");

    std::vector<double> uv(npts);
    for (int i = 0; i < npts; ++i) uv[i] = u(t_lo + i * h);

    auto flow = [&pc](double t) {
        const auto [G, D] = metric_coeffs(pc, t);
        return G / D;
    };

    double worst = 0.0;
    for (int i = 1; i + 1 < npts; ++i) {
        const double t = t_lo + i * h;
        const auto [G, D] = metric_coeffs(pc, t);
        const double pp = flow(t + 0.5 * h), pm = flow(t - 0.5 * h);
        const double Lu = -(pp * (uv[i + 1] - uv[i]) - pm * (uv[i] - uv[i - 1])) / (h * h * D);
        const double r = Lu + (static_cast<double>(k) * k / G - potential_V(pc, t)) * uv[i];
        worst = std::fmax(worst, std::fabs(r));
    }
    return worst;
}

/// Scalar fields on the catenoid entering the stability analysis, tagged by
/// role.  PotentialU (a function of the compactified coordinate s) is built
/// by the index machinery and injected through the evaluator constructor.
enum class RadialTag {
    Gamma,        ///< Z-component of the unit normal (odd)
    V,            ///< Killing Jacobi function W f_t (odd, equals Gamma here)
    E,            ///< variation Jacobi function W f_a (even)
    Omega,        ///< first-mode phase (odd)
    PotentialV,   ///< Jacobi potential V (even)
    PotentialGV,  ///< G V (even)
    SecondFF,     ///< |A|^2 (even)
    PotentialU,   ///< G V transported to the s-coordinate (evaluator in s)
    WeightW,      ///< W (even)
    WeightW1,     ///< W1 (even)
    GaussCurv     ///< Gauss curvature (even)
};

class RadialScalar {
public:
    RadialScalar(const ProfileCurve& pc, RadialTag tag, Tolerances tol = {})
        : tag_(tag), profile_(&pc)
    {
        switch (tag) {
            case RadialTag::Gamma:
            case RadialTag::V:
                eval_ = [&pc](double t) { return jacobi_v(pc, t); };
                break;
            case RadialTag::E:
                eval_ = [&pc, tol](double t) { return jacobi_e(pc, t, tol); };
                break;
            case RadialTag::Omega:
                eval_ = [&pc](double t) { return pc.omega(t); };
                break;
            case RadialTag::PotentialV:
                eval_ = [&pc](double t) { return potential_V(pc, t); };
                break;
            case RadialTag::PotentialGV:
                eval_ = [&pc](double t) { return potential_GV(pc, t); };
                break;
            case RadialTag::SecondFF:
                eval_ = [&pc](double t) { return second_ff_norm(pc, t); };
                break;
            case RadialTag::WeightW:
                eval_ = [&pc](double t) { return weight_W(pc, t); };
                break;
            case RadialTag::WeightW1:
                eval_ = [&pc](double t) { return weight_W1(pc, t); };
                break;
            case RadialTag::GaussCurv:
                eval_ = [&pc](double t) { return gauss_curvature(pc, t); };
                break;
            case RadialTag::PotentialU:
                throw std::invalid_argument(
                    "RadialScalar: PotentialU needs an explicit evaluator (see the index module)");
        }
    }

    RadialScalar(const ProfileCurve& pc, RadialTag tag, std::function<double(double)> eval)
        : tag_(tag), profile_(&pc), eval_(std::move(eval)) {}

    double operator()(double x) const { return eval_(x); }
    RadialTag tag() const { return tag_; }
    const ProfileCurve& profile() const { return *profile_; }

private:
    RadialTag tag_;
    const ProfileCurve* profile_;
    std::function<double(double)> eval_;
};

/// One of the four bounded first-mode Jacobi functions
/// W1 {cos, sin}(omega) {cos, sin}(theta); their squares sum to W1^2.
class AngularJacobi {
public:
    enum class Phase { Cos, Sin };
    enum class Angular { Cos, Sin };

    AngularJacobi(const ProfileCurve& pc, Phase phase, Angular angular)
        : profile_(&pc), phase_(phase), angular_(angular) {}

    double radial(double t) const
    {
        const double w1 = weight_W1(*profile_, t);
        const double om = profile_->omega(t);
        return w1 * (phase_ == Phase::Cos ? std::cos(om) : std::sin(om));
    }

    double operator()(double t, double theta) const
    {
        return radial(t) * (angular_ == Angular::Cos ? std::cos(theta) : std::sin(theta));
    }

    int mode() const { return 1; }
    const ProfileCurve& profile() const { return *profile_; }

private:
    const ProfileCurve* profile_;
    Phase phase_;
    Angular angular_;
};

inline double jacobi_residual(const RadialScalar& u, double t_lo, double t_hi, double h = 1e-3)
{
    return jacobi_residual([&u](double t) { return u(t); }, u.profile(), 0, t_lo, t_hi, h);
}

inline double jacobi_residual(const AngularJacobi& u, double t_lo, double t_hi, double h = 1e-3)
{
    return jacobi_residual([&u](double t) { return u.radial(t); }, u.profile(), u.mode(),
                           t_lo, t_hi, h);
}

} // namespace nilcat
