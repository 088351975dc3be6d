#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "nilcat/ode.hpp"
#include "nilcat/quadrature.hpp"
#include "nilcat/roots.hpp"
#include "nilcat/tolerances.hpp"

namespace nilcat {

/// Neck radius a > 0 and dimension index n >= 1 of the catenoid C_a in
/// Nil(2n+1).  The three-dimensional modules fix n = 1.
struct CatenoidParams {
    double a = 1.0;
    int n = 1;

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("CatenoidParams: a must be > 0");
        if (n < 1) throw std::invalid_argument("CatenoidParams: n must be >= 1");
    }
};

/// Generating curve of the rotational catenoid in Nil(3).
///
/// Stores the dense solution of the profile Cauchy problem on [0, t_max]
/// together with the co-integrated arc coordinate s, the orthogonalizing
/// twist, and the phase omega.  Values for t < 0 come from the exact
/// even/odd extension (f even; f_t, s, twist, omega odd), so the symmetry
/// holds bit-exactly.  Immutable after construction.
class ProfileCurve {
public:
    ProfileCurve(CatenoidParams p, DenseTrajectory traj)
        : params_(p), traj_(std::move(traj)) {}

    const CatenoidParams& params() const { return params_; }
    double a() const { return params_.a; }
    double t_max() const { return traj_.t_end(); }
    const DenseTrajectory& trajectory() const { return traj_; }

    double f(double t) const      { return traj_.eval(std::fabs(t), 0); }
    double f_t(double t) const    { return sign(t) * traj_.eval(std::fabs(t), 1); }
    double s(double t) const      { return sign(t) * traj_.eval(std::fabs(t), 2); }
    double twist(double t) const  { return sign(t) * traj_.eval(std::fabs(t), 3); }
    double omega(double t) const  { return sign(t) * traj_.eval(std::fabs(t), 4); }

private:
    static double sign(double t) { return t < 0.0 ? -1.0 : 1.0; }

    CatenoidParams params_;
    DenseTrajectory traj_;
};

/// Solves the n = 1 profile Cauchy problem f(f^2+4) f_tt = 4(1+f_t^2),
/// f(0) = a, f_t(0) = 0, as a first-order system, co-integrating
/// s_t = 4/(a(4+f^2)), twist_t = 2/(4+f^2) and omega_t = 4f^2/(f^4+4a^2).
///
/// The integration runs at least as tight as 1e-12 regardless of the given
/// tolerances so that the curve honors its conservation contract (first
/// integral residual below 1e-8 over the whole range).
inline ProfileCurve solve_profile(CatenoidParams params, double t_max = 0.0,
                                  const Tolerances& tol = {})
{
    params.validate();
    if (params.n != 1)
        throw std::invalid_argument("solve_profile: n must be 1 (see the higher-dimension module)");
    if (t_max == 0.0) t_max = 40.0 / params.a;
    if (!(t_max > 0.0)) throw std::invalid_argument("solve_profile: t_max must be > 0");

    const double a = params.a;
    auto rhs = [a](double, const std::vector<double>& y, std::vector<double>& dy) {
        const double f = y[0], g = y[1];
        const double f2 = f * f;
        dy[0] = g;
        dy[1] = 4.0 * (1.0 + g * g) / (f * (f2 + 4.0));
        dy[2] = 4.0 / (a * (4.0 + f2));
        dy[3] = 2.0 / (4.0 + f2);
        dy[4] = 4.0 * f2 / (f2 * f2 + 4.0 * a * a);
    };

    Tolerances eff = tol;
    eff.ode_rel = std::fmin(tol.ode_rel, 1e-12);
    eff.ode_abs = std::fmin(tol.ode_abs, 1e-12);
    DenseTrajectory traj = integrate_ode(rhs, {a, 0.0, 0.0, 0.0, 0.0}, 0.0, t_max, eff);
    return ProfileCurve(params, std::move(traj));
}

/// Inverse function of f(a, .): time at which the profile reaches height tau,
///   phi(a, tau) = (a/2) Integral_1^{tau/a} sqrt((a^2 v^2 + 4)/(v^2 - 1)) dv.
/// Strictly increasing in tau with phi(a, a) = 0 and phi ~ (a/2) tau at
/// infinity.
inline double phi(const CatenoidParams& params, double tau, const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    if (!(tau >= a)) throw std::invalid_argument("phi: tau must be >= a");
    if (tau == a) return 0.0;
    auto integrand = [a](double v, double d) {
        // v^2 - 1 = d (v + 1) with d the exact distance to the endpoint
        return std::sqrt((a * a * v * v + 4.0) / (d * (v + 1.0)));
    };
    return 0.5 * a * quad_singular_offset(integrand, 1.0, tau / a, true, false, tol.quad_tol);
}

/// Partial derivative of phi with respect to the neck radius,
///   phi_a(a,tau) = Integral_1^{tau/a} (a^2 v^2 + 2)/sqrt((a^2 v^2+4)(v^2-1)) dv
///                  - (tau/2) sqrt((tau^2+4)/(tau^2-a^2)).
/// Tends to -infinity as tau -> a+, is strictly increasing in tau, and grows
/// without bound for n = 1; its unique zero determines the conjugate value.
inline double phi_a(const CatenoidParams& params, double tau, const Tolerances& tol = {})
{
    params.validate();
    const double a = params.a;
    if (!(tau > a)) throw std::invalid_argument("phi_a: tau must be > a");
    auto integrand = [a](double v, double d) {
        const double q = a * a * v * v;
        return (q + 2.0) / std::sqrt((q + 4.0) * d * (v + 1.0));
    };
    const double integral = quad_singular_offset(integrand, 1.0, tau / a, true, false, tol.quad_tol);
    const double boundary = 0.5 * tau * std::sqrt((tau * tau + 4.0) / (tau * tau - a * a));
    return integral - boundary;
}

/// (f, f_t) at t from the dense solution.
inline std::pair<double, double> eval_f(const ProfileCurve& profile, double t)
{
    return {profile.f(t), profile.f_t(t)};
}

/// f_t reconstructed from the first integral alone:
///   f_t = sign(t) * 2 sqrt(f^2 - a^2) / (a sqrt(f^2 + 4)).
/// Used to cross-check the ODE route.
inline double f_t_first_integral(const CatenoidParams& params, double f, double t_sign)
{
    const double a = params.a;
    const double d = std::fmax(f * f - a * a, 0.0);
    const double v = 2.0 * std::sqrt(d) / (a * std::sqrt(f * f + 4.0));
    return t_sign < 0.0 ? -v : v;
}

/// Residual of the first integral (f^2+4)(1+f_t^2)/f^2 - (a^2+4)/a^2; its
/// magnitude bounds the integration quality.
inline double first_integral_residual(const ProfileCurve& profile, double t)
{
    const double a = profile.a();
    const double f = profile.f(t), g = profile.f_t(t);
    return (f * f + 4.0) * (1.0 + g * g) / (f * f) - (a * a + 4.0) / (a * a);
}

} // namespace nilcat
