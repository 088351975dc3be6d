#pragma once

#include <stdexcept>

namespace nilcat {

/// Accuracy knobs shared by the numeric kernels.  All fields must be
/// strictly positive.
struct Tolerances {
    double ode_rel  = 1e-10;  ///< relative per-step ODE tolerance
    double ode_abs  = 1e-10;  ///< absolute per-step ODE tolerance
    double quad_tol = 1e-10;  ///< absolute quadrature tolerance
    double root_tol = 1e-10;  ///< root bracket width
    double zero_eps = 1e-8;   ///< sign-change detection threshold

    void validate() const {
        if (!(ode_rel > 0.0) || !(ode_abs > 0.0) || !(quad_tol > 0.0) ||
            !(root_tol > 0.0) || !(zero_eps > 0.0))
            throw std::invalid_argument("Tolerances: all fields must be strictly positive");
    }
};

} // namespace nilcat
