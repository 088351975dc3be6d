#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "nilcat/profile.hpp"

namespace nilcat {

/// Point of Nil(3) in exponential coordinates; the group is all of R^3.
struct GroupPoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Tangent vector in the orthonormal left-invariant frame {X, Y, Z}.
struct FrameVector {
    double cX = 0.0, cY = 0.0, cZ = 0.0;

    double norm2() const { return cX * cX + cY * cY + cZ * cZ; }
};

/// Tangent vector in the canonical coordinate frame {dx, dy, dz}.
struct CanonicalVector {
    double dx = 0.0, dy = 0.0, dz = 0.0;
};

inline double dot(const FrameVector& u, const FrameVector& v)
{
    return u.cX * v.cX + u.cY * v.cY + u.cZ * v.cZ;
}

/// Group law (x,y,z) * (x',y',z') = (x+x', y+y', z+z' + (xy' - x'y)/2).
inline GroupPoint group_mul(const GroupPoint& p, const GroupPoint& q)
{
    return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y)};
}

inline GroupPoint group_inverse(const GroupPoint& p)
{
    return {-p.x, -p.y, -p.z};
}

/// Rotation about the z-axis (the center of the group) by angle theta.
inline GroupPoint rotate_z(const GroupPoint& p, double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    return {p.x * c - p.y * s, p.x * s + p.y * c, p.z};
}

/// Left-invariant frame at p in canonical coordinates:
/// X = dx - (y/2) dz,  Y = dy + (x/2) dz,  Z = dz.
inline std::array<CanonicalVector, 3> left_frame(const GroupPoint& p)
{
    return {CanonicalVector{1.0, 0.0, -0.5 * p.y},
            CanonicalVector{0.0, 1.0, 0.5 * p.x},
            CanonicalVector{0.0, 0.0, 1.0}};
}

inline CanonicalVector frame_to_canonical(const GroupPoint& p, const FrameVector& v)
{
    return {v.cX, v.cY, v.cZ - 0.5 * p.y * v.cX + 0.5 * p.x * v.cY};
}

inline FrameVector canonical_to_frame(const GroupPoint& p, const CanonicalVector& v)
{
    return {v.dx, v.dy, v.dz + 0.5 * p.y * v.dx - 0.5 * p.x * v.dy};
}

/// The four Killing fields of (Nil(3), g), in the frame {X, Y, Z}:
/// xi = X + yZ, eta = Y - xZ, zeta = Z, rho = yX - xY + (x^2+y^2)/2 Z.
struct KillingBasis {
    FrameVector xi, eta, zeta, rho;
};

inline KillingBasis killing_fields(const GroupPoint& p)
{
    return {FrameVector{1.0, 0.0, p.y},
            FrameVector{0.0, 1.0, -p.x},
            FrameVector{0.0, 0.0, 1.0},
            FrameVector{p.y, -p.x, 0.5 * (p.x * p.x + p.y * p.y)}};
}

/// Ricci curvature of Nil(3) along a unit vector with Z-component gamma:
/// Ric(N, N) = -1/2 + gamma^2.
inline double ricci_normal(double gamma)
{
    if (std::fabs(gamma) > 1.0 + 1e-12)
        throw std::invalid_argument("ricci_normal: |gamma| must not exceed 1");
    return -0.5 + gamma * gamma;
}

enum class Killing { Xi, Eta, Zeta, Rho };

/// Flux of a Killing field through the rotational circle C_t of a catenoid:
/// the integral of g(K, nu) against dsigma = f sqrt(1 + f^2/4) dtheta, where
/// nu is the unit tangent of the surface orthogonal to C_t.
///
/// For K = zeta the flux equals 4 pi f / sqrt(4 + (4+f^2) f_t^2) = 2 pi a
/// independently of t; for xi and eta it vanishes by angular parity, and for
/// rho the integrand itself vanishes.
inline double flux_circle(const ProfileCurve& profile, double t, Killing field)
{
    const double f = profile.f(t), ft = profile.f_t(t);
    const double alpha = 2.0 / (4.0 + f * f);
    const double inv_norm = 1.0 / std::sqrt(ft * ft + 4.0 / (4.0 + f * f));
    const double circ = f * std::sqrt(1.0 + 0.25 * f * f);

    // The integrand is a trigonometric polynomial of degree <= 2 in theta,
    // so the periodic trapezoid rule is exact well below N = 64.
    const int N = 64;
    double sum = 0.0;
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * M_PI * j / N;
        const double ct = std::cos(theta), st = std::sin(theta);
        const GroupPoint p{f * ct, f * st, t};
        const FrameVector nvec{ft * ct - alpha * f * st,
                               ft * st + alpha * f * ct,
                               1.0 - 0.5 * alpha * f * f};
        const KillingBasis kb = killing_fields(p);
        const FrameVector* K = nullptr;
        switch (field) {
            case Killing::Xi:   K = &kb.xi;   break;
            case Killing::Eta:  K = &kb.eta;  break;
            case Killing::Zeta: K = &kb.zeta; break;
            case Killing::Rho:  K = &kb.rho;  break;
        }
        sum += dot(*K, nvec) * inv_norm * circ;
    }
    return sum * 2.0 * M_PI / N;
}

} // namespace nilcat
