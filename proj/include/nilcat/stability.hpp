#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "nilcat/jacobi.hpp"
#include "nilcat/profile.hpp"
#include "nilcat/roots.hpp"

namespace nilcat {

enum class StabilityClass { Stable, StableUnstable, Unstable };

inline const char* to_string(StabilityClass c)
{
    switch (c) {
        case StabilityClass::Stable:         return "stable";
        case StabilityClass::StableUnstable: return "stable-unstable";
        case StabilityClass::Unstable:       return "unstable";
    }
    return "?";
}

/// Rotational domain D_a(t1, t2) with its classification and the Jacobi
/// function certifying it.
struct DomainSpec {
    double t1 = 0.0, t2 = 0.0;
    StabilityClass classification = StabilityClass::Stable;
    std::string basis;
};

namespace detail {

// Lower bracket endpoint for zero-finding in tau: moves toward a until
// phi_a is negative there (it blows down to -infinity at a+).
inline double lower_tau_bracket(const CatenoidParams& params, double level,
                                const Tolerances& tol)
{
    const double a = params.a;
    double delta = 1e-6 * a;
    for (int i = 0; i < 60; ++i) {
        if (phi_a(params, a + delta, tol) < level) return a + delta;
        delta *= 0.1;
    }
    throw std::runtime_error("stability: could not bracket phi_a from below");
}

} // namespace detail

/// The unique tau* > a with phi_a(a, tau*) = 0.
inline double conjugate_tau(const CatenoidParams& params, const Tolerances& tol = {})
{
    params.validate();
    if (params.n != 1) throw std::invalid_argument("conjugate_tau: n must be 1");
    auto fn = [&](double tau) { return phi_a(params, tau, tol); };
    const double lo = detail::lower_tau_bracket(params, 0.0, tol);
    auto [blo, bhi] = expand_bracket(fn, lo, 2.0 * params.a);
    return find_root(fn, blo, bhi, tol.root_tol);
}

/// Conjugate value z(a) = phi(a, tau*): the unique zero of e(a, .) on
/// (0, inf) and the boundary parameter of the symmetric stable-unstable
/// domain D_a(-z, z).
inline double conjugate_value(const CatenoidParams& params, const Tolerances& tol = {})
{
    return phi(params, conjugate_tau(params, tol), tol);
}

namespace detail {

// tau with phi(a, tau) = t1, found as a root in tau (quadrature-only route).
inline double invert_phi(const CatenoidParams& params, double t1, const Tolerances& tol)
{
    const double a = params.a;
    auto fn = [&](double tau) { return phi(params, tau, tol) - t1; };
    const double lo = a * (1.0 + 1e-14);
    if (fn(lo) >= 0.0)
        throw std::invalid_argument("companion_boundary: t1 too small to resolve in tau");
    auto [blo, bhi] = expand_bracket(fn, lo, a * 2.0);
    return find_root(fn, blo, bhi, tol.root_tol);
}

} // namespace detail

/// Companion boundary: the t2 > 0 for which D_a(-t1, t2) is
/// stable-unstable, characterized in the tau variable by
/// phi_a(a, tau2) = -phi_a(a, tau1).  Always exists for n = 1, and fixes
/// z(a) (phi_a vanishing there makes the relation symmetric).
inline double companion_boundary(const CatenoidParams& params, double t1,
                                 const Tolerances& tol = {})
{
    params.validate();
    if (params.n != 1) throw std::invalid_argument("companion_boundary: n must be 1");
    if (!(t1 > 0.0)) throw std::invalid_argument("companion_boundary: t1 must be > 0");

    const double tau1 = detail::invert_phi(params, t1, tol);
    const double target = -phi_a(params, tau1, tol);
    auto fn = [&](double tau) { return phi_a(params, tau, tol) - target; };

    // phi_a is strictly increasing from -inf to +inf, so one bracket that
    // starts below the target level always works
    const double lo = detail::lower_tau_bracket(params, target, tol);
    auto [blo, bhi] = expand_bracket(fn, lo, std::fmax(2.0 * params.a, 2.0 * lo));
    const double tau2 = find_root(fn, blo, bhi, tol.root_tol);
    return phi(params, tau2, tol);
}

/// The Jacobi function certifying companion domains:
/// w(a, t1, t) = v(a, t1) e(a, t) + e(a, t1) v(a, t); it vanishes at -t1 and
/// at the companion boundary.
inline double jacobi_w(const ProfileCurve& pc, double t1, double t, const Tolerances& tol = {})
{
    return jacobi_v(pc, t1) * jacobi_e(pc, t, tol) + jacobi_e(pc, t1, tol) * jacobi_v(pc, t);
}

/// Classifies the rotational domain D_a(t1, t2):
///   - if 0 is outside (t1, t2): stable (inside an r-stable half-catenoid,
///     strictly inside a stable-unstable domain);
///   - otherwise compare t2 with the companion boundary of -t1: equal within
///     zero_eps means stable-unstable, below stable, above unstable.
inline DomainSpec classify_domain(const CatenoidParams& params, double t1, double t2,
                                  const Tolerances& tol = {})
{
    params.validate();
    if (!(t1 < t2)) throw std::invalid_argument("classify_domain: need t1 < t2");

    DomainSpec spec;
    spec.t1 = t1;
    spec.t2 = t2;
    if (t1 >= 0.0 || t2 <= 0.0) {
        spec.classification = StabilityClass::Stable;
        spec.basis = "v_zeta";
        return spec;
    }

    const double companion = companion_boundary(params, -t1, tol);
    const double band = tol.zero_eps * std::fmax(1.0, std::fabs(t2));
    if (std::fabs(t2 - companion) <= band)
        spec.classification = StabilityClass::StableUnstable;
    else if (t2 < companion)
        spec.classification = StabilityClass::Stable;
    else
        spec.classification = StabilityClass::Unstable;
    spec.basis = "w";
    return spec;
}

} // namespace nilcat
