#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nilcat/tolerances.hpp"

namespace nilcat {

namespace detail {
struct TrajectoryBuilder;
}

/// Dense ODE solution on [t_begin, t_end]: piecewise quartic interpolant of
/// the accepted Dormand-Prince steps, evaluable at any interior time.
class DenseTrajectory {
public:
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    std::size_t dim() const { return dim_; }
    bool stopped_early() const { return stopped_; }

    /// Accepted step boundaries (ascending, includes both ends).
    const std::vector<double>& node_times() const { return nodes_; }

    double eval(double t, std::size_t comp) const
    {
        check_range(t);
        const std::size_t k = step_index(t);
        const Step& s = steps_[k];
        const double th = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
        const double* r = s.rcont.data() + 5 * comp;
        return r[0] + th * (r[1] + (1.0 - th) * (r[2] + th * (r[3] + (1.0 - th) * r[4])));
    }

    std::vector<double> eval(double t) const
    {
        std::vector<double> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out[i] = eval(t, i);
        return out;
    }

private:
    struct Step {
        double t0, h;
        std::vector<double> rcont;  // 5 coefficients per component
    };

    void check_range(double t) const
    {
        const double slack = 1e-9 * (1.0 + std::fabs(t_end_));
        if (t < t_begin_ - slack || t > t_end_ + slack)
            throw std::out_of_range("DenseTrajectory: t outside integration range");
    }

    std::size_t step_index(double t) const
    {
        // nodes_[k] <= t < nodes_[k+1]
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
        std::size_t k = (it == nodes_.begin()) ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
        if (k >= steps_.size()) k = steps_.size() - 1;
        return k;
    }

    friend struct detail::TrajectoryBuilder;

    std::vector<Step> steps_;
    std::vector<double> nodes_;
    double t_begin_ = 0.0, t_end_ = 0.0;
    std::size_t dim_ = 0;
    bool stopped_ = false;
};

namespace detail {

struct NoStop {
    bool operator()(double, const std::vector<double>&) const { return false; }
};

struct TrajectoryBuilder {
    DenseTrajectory traj;

    void begin(std::size_t dim, double t0)
    {
        traj.dim_ = dim;
        traj.t_begin_ = t0;
        traj.nodes_.push_back(t0);
    }
    void push_step(double t0, double h, std::vector<double> rcont)
    {
        traj.steps_.push_back({t0, h, std::move(rcont)});
        traj.nodes_.push_back(t0 + h);
    }
    void finish(double t_end, bool stopped)
    {
        traj.t_end_ = t_end;
        traj.stopped_ = stopped;
    }
};

} // namespace detail

/// Adaptive Dormand-Prince 5(4) integration with dense output.
///
/// rhs(t, y, dydt) fills dydt; the trajectory covers [t0, t1] unless the
/// optional stop predicate fires at an accepted step, in which case the
/// result ends there and reports stopped_early().  Throws on step-size
/// underflow (a singularity of the field) and on a non-finite initial slope
/// (blown-up state).  Deterministic for fixed inputs.
template <class Rhs, class Stop = detail::NoStop>
DenseTrajectory integrate_ode(Rhs&& rhs, const std::vector<double>& y0, double t0, double t1,
                              const Tolerances& tol = {}, Stop&& stop = Stop{})
{
    tol.validate();
    if (!(t1 > t0)) throw std::invalid_argument("integrate_ode: need t1 > t0");
    if (!std::isfinite(t0) || !std::isfinite(t1))
        throw std::invalid_argument("integrate_ode: t_span must be finite");

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    const std::size_t n = y0.size();
    detail::TrajectoryBuilder builder;
    builder.begin(n, t0);

    std::vector<double> y = y0, y1(n), ysti(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

    auto scale = [&](std::size_t i, const std::vector<double>& ya, const std::vector<double>& yb) {
        return tol.ode_abs + tol.ode_rel * std::fmax(std::fabs(ya[i]), std::fabs(yb[i]));
    };

    rhs(t0, y, k1);
    for (double v : k1)
        if (!std::isfinite(v)) throw std::runtime_error("integrate_ode: non-finite state");

    // initial step size: compare solution and slope scales, then trial-step
    double h;
    {
        double d0 = 0.0, dd1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale(i, y, y);
            d0 += (y[i] / sc) * (y[i] / sc);
            dd1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n); dd1 = std::sqrt(dd1 / n);
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
        h0 = std::fmin(h0, t1 - t0);
        for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * k1[i];
        rhs(t0 + h0, y1, k2);
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale(i, y, y);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::fmax(dd1, d2);
        const double h1 = (dm <= 1e-15) ? std::fmax(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        h = std::fmin(std::fmin(100.0 * h0, h1), t1 - t0);
    }

    double t = t0;
    bool last_rejected = false;
    const std::size_t max_steps = 4000000;
    for (std::size_t nstep = 0;; ++nstep) {
        if (nstep > max_steps) throw std::runtime_error("integrate_ode: too many steps");
        if (t >= t1) break;
        h = std::fmin(h, t1 - t);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, std::fabs(t)))
            throw std::runtime_error("integrate_ode: step size underflow (singularity reached)");

        for (std::size_t i = 0; i < n; ++i) ysti[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ysti, k2);
        for (std::size_t i = 0; i < n; ++i) ysti[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ysti, k3);
        for (std::size_t i = 0; i < n; ++i)
            ysti[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ysti, k4);
        for (std::size_t i = 0; i < n; ++i)
            ysti[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ysti, k5);
        for (std::size_t i = 0; i < n; ++i)
            ysti[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ysti, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, y1, k7);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(y1[i])) { finite = false; break; }
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i]
                                   + e6 * k6[i] + e7 * k7[i]);
            const double sc = scale(i, y, y1);
            err += (ei / sc) * (ei / sc);
        }
        err = finite ? std::sqrt(err / n) : std::numeric_limits<double>::infinity();

        if (err > 1.0) {
            h *= std::fmax(0.2, 0.9 * std::pow(1.0 / err, 0.2));
            last_rejected = true;
            continue;
        }

        // accept: store dense coefficients
        std::vector<double> rcont(5 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            double* r = rcont.data() + 5 * i;
            r[0] = y[i];
            r[1] = ydiff;
            r[2] = bspl;
            r[3] = ydiff - h * k7[i] - bspl;
            r[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        builder.push_step(t, h, std::move(rcont));
        t += h;
        y.swap(y1);
        k1.swap(k7);  // FSAL

        if (stop(t, y)) {
            builder.finish(t, true);
            return std::move(builder.traj);
        }

        double fac = 0.9 * std::pow(1.0 / std::fmax(err, 1e-10), 0.2);
        fac = std::fmin(last_rejected ? 1.0 : 10.0, std::fmax(0.2, fac));
        h *= fac;
        last_rejected = false;
    }

    builder.finish(t, false);
    return std::move(builder.traj);
}

} // namespace nilcat
