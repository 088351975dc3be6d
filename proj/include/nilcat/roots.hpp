#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace nilcat {

/// Brent's method on a sign-changing bracket [lo, hi].
///
/// Returns a point x with the final bracket narrower than tol (plus machine
/// slack proportional to |x|).  Deterministic for fixed inputs.  Throws
/// std::invalid_argument when fn(lo) and fn(hi) have the same sign.
template <class F>
double find_root(F&& fn, double lo, double hi, double tol = 1e-10)
{
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
    if (!(lo < hi)) throw std::invalid_argument("find_root: empty bracket");

    double a = lo, b = hi;
    double fa = fn(a), fb = fn(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("find_root: no sign change in bracket");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 256; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = e = b - a; }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // inverse quadratic / secant step
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc; r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::fmin(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = fn(b);
    }
    throw std::runtime_error("find_root: iteration limit reached");
}

/// Golden-section minimizer on [lo, hi]; returns the abscissa of the minimum
/// to within tol.  Intended for smooth unimodal objectives.
template <class F>
double minimize_scalar(F&& fn, double lo, double hi, double tol = 1e-10)
{
    if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: empty interval");
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = fn(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = fn(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Grows hi geometrically away from lo until fn changes sign, then returns
/// the sign-changing bracket.  fn(lo) must be nonzero and finite.
template <class F>
std::pair<double, double> expand_bracket(F&& fn, double lo, double hi, int max_doublings = 80)
{
    double flo = fn(lo);
    if (flo == 0.0) return {lo, lo};
    double x = hi;
    for (int i = 0; i < max_doublings; ++i) {
        const double fx = fn(x);
        if ((fx > 0.0) != (flo > 0.0) || fx == 0.0) return {lo, x};
        x = lo + 2.0 * (x - lo);
    }
    throw std::runtime_error("expand_bracket: no sign change found");
}

} // namespace nilcat
