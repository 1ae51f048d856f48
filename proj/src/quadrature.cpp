#include "whc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace whc {
namespace {

struct Simpson {
    const std::function<double(double)>& f;
    int max_depth;

    double recurse(double a, double fa, double b, double fb, double m, double fm,
                   double whole, double eps, int depth) const {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double h = b - a;
        const double left = h / 12.0 * (fa + 4.0 * flm + fm);
        const double right = h / 12.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * eps || rm - lm <= 1e-300) {
            return left + right + delta / 15.0;
        }
        if (depth >= max_depth) {
            throw integration_error("adaptive quadrature did not converge on [" +
                                    std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        return recurse(a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1) +
               recurse(m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& opts) {
    if (!(lo < hi)) return 0.0;
    const double m = 0.5 * (lo + hi);
    // Integrands are piecewise smooth with jumps only at piece endpoints;
    // sampling one ulp inside keeps Simpson refinement off the jump.
    const double fa = f(std::nextafter(lo, hi));
    const double fb = f(std::nextafter(hi, lo));
    const double fm = f(m);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = std::max(opts.abs_tol, opts.rel_tol * std::abs(whole));
    Simpson s{f, opts.max_depth};
    return s.recurse(lo, fa, hi, fb, m, fm, whole, eps, 0);
}

double integrate_pieces(const std::function<double(double)>& f,
                        std::vector<double> breakpoints,
                        const QuadratureOptions& opts) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    double total = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        total += integrate(f, breakpoints[i - 1], breakpoints[i], opts);
    }
    return total;
}

}  // namespace whc
