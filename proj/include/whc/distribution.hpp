#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "whc/rng.hpp"

namespace whc {

/// Point mass of a distribution: location x with P({x}) = mass.
struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Absolutely continuous component of a distribution. `cdf` and `quantile`
/// refer to this component only: cdf(hi) = total_mass and quantile maps
/// [0,1) onto the support. `window_lo/hi` give a finite interval carrying
/// all but a negligible (< 1e-18) fraction of the mass; for bounded
/// supports it equals [lo, hi].
struct ContinuousPart {
    std::function<double(double)> density;
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
    double lo = 0.0;
    double hi = 0.0;
    double total_mass = 0.0;
    double mean_contrib = 0.0;  // integral of x * density(x)
    std::vector<double> breakpoints;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// A probability law on the real line: finitely many atoms plus an optional
/// absolutely continuous part. Immutable after construction and safe for
/// concurrent shared reads.
class Distribution {
public:
    static Distribution dirac(double x);
    static Distribution bernoulli(double p);
    static Distribution uniform(double a, double b);
    static Distribution gaussian(double mean, double stddev = 1.0);

    /// Piecewise-constant density: values[i] on [breaks[i], breaks[i+1]).
    /// Must integrate to 1.
    static Distribution piecewise_constant(std::vector<double> breaks,
                                           std::vector<double> values,
                                           std::string label);

    /// General constructor for mixed laws; validates the normalization
    /// invariant (atom masses + continuous mass = 1 within 1e-9).
    static Distribution mixed(std::vector<Atom> atoms,
                              std::optional<ContinuousPart> cont,
                              std::string label);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<ContinuousPart>& continuous() const { return cont_; }
    double mean() const { return mean_; }
    const std::string& label() const { return label_; }

    /// Mass at x if x is exactly an atom location, else 0.
    double atom_mass_at(double x) const;
    /// Continuous density at x (0 when there is no continuous part or x is
    /// outside its support).
    double density_at(double x) const;
    /// Full cumulative distribution function P(X <= x).
    double cdf(double x) const;

    double support_lo() const;
    double support_hi() const;
    bool bounded_support() const;

    double sample(Rng& rng) const;

private:
    Distribution() = default;
    void validate() const;

    std::vector<Atom> atoms_;  // sorted by location
    std::optional<ContinuousPart> cont_;
    double mean_ = 0.0;
    std::string label_;
};

/// Piecewise-constant density on dyadic intervals: value (1 - 1/k'_1) + 1/2
/// on [1/2, 1) and 2^{m-1}(1/k'_{m-1} - 1/k'_m) + 1/2 on [2^-m, 2^-(m-1))
/// for 2 <= m <= depth. The mass that the untruncated construction places
/// below 2^-depth is folded into the deepest piece, so the result
/// integrates to exactly 1.
Distribution build_prop3_density(const std::vector<long long>& kprime, int depth);

/// Inverse standard normal CDF, accurate to ~1 ulp after refinement.
double normal_quantile(double u);

}  // namespace whc
