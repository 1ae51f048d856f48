#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace whc {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 52;
};

/// Raised when adaptive bisection runs out of depth with the local error
/// estimate still above tolerance. Callers must not treat a partial sum as
/// the integral.
struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive Simpson quadrature of f over [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& opts = {});

/// Integrate over consecutive intervals of the sorted breakpoint list and
/// sum. Breakpoints mark density kinks, support endpoints and atom
/// locations, so each sub-integral sees a smooth integrand.
double integrate_pieces(const std::function<double(double)>& f,
                        std::vector<double> breakpoints,
                        const QuadratureOptions& opts = {});

}  // namespace whc
