#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nilcat/jacobi.hpp"
#include "nilcat/profile.hpp"
#include "nilcat/stability.hpp"

using namespace nilcat;

TEST_CASE("conjugate value: e vanishes there and changes sign")
{
    for (double a : {0.5, 1.0, 2.0}) {
        const CatenoidParams prm{a, 1};
        const double z = conjugate_value(prm);
        REQUIRE(z > 0.0);
        REQUIRE(std::isfinite(z));

        auto pc = solve_profile(prm);
        REQUIRE(std::fabs(jacobi_e(pc, z)) < 1e-7);
        REQUIRE(jacobi_e(pc, 0.5 * z) > 0.0);
        REQUIRE(jacobi_e(pc, 2.0 * z) < 0.0);
    }
}

TEST_CASE("companion boundary: fixed point at z and the involution")
{
    for (double a : {0.5, 1.0, 2.0}) {
        const CatenoidParams prm{a, 1};
        const double z = conjugate_value(prm);

        REQUIRE(std::fabs(companion_boundary(prm, z) - z) < 1e-8);

        for (double t1 : {0.3 * z, 0.8 * z, 1.7 * z, 3.0 * z}) {
            const double t2 = companion_boundary(prm, t1);
            REQUIRE(std::fabs(companion_boundary(prm, t2) - t1) < 1e-7);
            // t1 and t2 sit on opposite sides of z
            REQUIRE(((t1 < z && t2 > z) || (t1 > z && t2 < z)));
        }
    }
}

TEST_CASE("companion boundary decreases strictly in t1")
{
    const CatenoidParams prm{1.0, 1};
    const double z = conjugate_value(prm);
    double prev = companion_boundary(prm, 0.1 * z);
    for (double r : {0.4, 0.8, 1.0, 1.6, 2.8, 4.0}) {
        const double t2 = companion_boundary(prm, r * z);
        if (r > 0.1) REQUIRE(t2 < prev);
        prev = t2;
    }
}

TEST_CASE("domain classification")
{
    const CatenoidParams prm{1.0, 1};
    const double z = conjugate_value(prm);

    REQUIRE(classify_domain(prm, 1.0, 5.0).classification == StabilityClass::Stable);
    REQUIRE(classify_domain(prm, -z, z).classification == StabilityClass::StableUnstable);
    REQUIRE(classify_domain(prm, -z - 1.0, z + 1.0).classification == StabilityClass::Unstable);

    // transition of the symmetric family across t = z
    REQUIRE(classify_domain(prm, -0.7 * z, 0.7 * z).classification == StabilityClass::Stable);
    REQUIRE(classify_domain(prm, -1.3 * z, 1.3 * z).classification == StabilityClass::Unstable);

    // half-catenoid subdomains are stable regardless of size
    REQUIRE(classify_domain(prm, 0.0, 30.0).classification == StabilityClass::Stable);
    REQUIRE(classify_domain(prm, -25.0, -0.5).classification == StabilityClass::Stable);

    REQUIRE_THROWS_AS(classify_domain(prm, 2.0, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(companion_boundary(prm, -1.0), std::invalid_argument);
}

TEST_CASE("involution and ordering hold for randomized parameters")
{
    // hand-rolled generator, fixed seed: a in [0.2, 8], t1 in (0, 4 z)
    unsigned long long state = 0x2545f4914f6cdd1dull;
    auto uniform = [&state](double lo, double hi) {
        state ^= state << 13; state ^= state >> 7; state ^= state << 17;
        return lo + (hi - lo) * ((state >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 12; ++trial) {
        const double a = uniform(0.2, 8.0);
        const CatenoidParams prm{a, 1};
        const double z = conjugate_value(prm);
        const double t1 = uniform(0.05, 4.0) * z;
        const double t2 = companion_boundary(prm, t1);
        INFO("a=" << a << " t1=" << t1);
        REQUIRE(t2 > 0.0);
        REQUIRE(std::fabs(companion_boundary(prm, t2) - t1) < 1e-6 * std::fmax(1.0, t1));
        REQUIRE(((t1 < z) == (t2 > z) || t1 == z));
    }
}

TEST_CASE("conjugate value at extreme neck radii")
{
    for (double a : {0.1, 10.0}) {
        const CatenoidParams prm{a, 1};
        const double tau_star = conjugate_tau(prm);
        REQUIRE(tau_star > a);
        REQUIRE(std::fabs(phi_a(prm, tau_star)) < 1e-7);
        const double z = conjugate_value(prm);
        REQUIRE(z > 0.0);
        REQUIRE(std::isfinite(z));
    }
}

TEST_CASE("w has exactly its two certified zeros")
{
    const CatenoidParams prm{1.0, 1};
    const double z = conjugate_value(prm);
    auto pc = solve_profile(prm);

    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double t1 = r * z;
        const double t2 = companion_boundary(prm, t1);

        const double lo = -1.5 * t1 - 1.0;
        const double hi = 1.2 * t2 + 1.0;
        const int N = 1200;
        int changes = 0;
        std::vector<double> where;
        double prev_t = lo, prev_w = jacobi_w(pc, t1, lo);
        for (int i = 1; i <= N; ++i) {
            const double t = lo + (hi - lo) * i / N;
            const double w = jacobi_w(pc, t1, t);
            if ((w > 0.0) != (prev_w > 0.0)) {
                ++changes;
                where.push_back(0.5 * (prev_t + t));
            }
            prev_t = t; prev_w = w;
        }
        INFO("t1=" << t1 << " t2=" << t2);
        REQUIRE(changes == 2);
        const double grid_h = (hi - lo) / N;
        REQUIRE(std::fabs(where[0] + t1) < grid_h);
        REQUIRE(std::fabs(where[1] - t2) < grid_h);
    }
}
