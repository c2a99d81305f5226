#pragma once

// Thin adaptive-quadrature wrappers (Boost.Math backends).

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace killdiff {

// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        std::forward<F>(f), a, b, 14, rel_tol);
}

// Semi-infinite integral over [a, inf) for decaying integrands.
template <typename F>
double integrate_half_line(F&& f, double a, double rel_tol = 1e-9) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(std::forward<F>(f), a,
                                std::numeric_limits<double>::infinity(),
                                rel_tol);
}

}  // namespace killdiff
