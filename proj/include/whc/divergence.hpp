#pragma once

#include "whc/distribution_pair.hpp"
#include "whc/quadrature.hpp"
#include "whc/set_descriptor.hpp"

namespace whc {

/// The five divergence measures of a (P, Q) pair plus rho = chi2 + 1.
/// kl and chi2 are taken Q against P and are +inf when Q is not absolutely
/// continuous with respect to P.
struct DivergenceReport {
    double tv = 0.0;
    double kl = 0.0;
    double chi2 = 0.0;
    double hellinger_sq = 0.0;
    double bhattacharyya = 0.0;
    double rho = 0.0;
};

DivergenceReport divergences(const DistributionPair& pair,
                             const QuadratureOptions& opts = {});

struct DensitySetResult {
    double value = 0.0;    // P(A) - Q(A)
    SetDescriptor set;     // A = {x : p(x) > q(x)}
    double p_mass = 0.0;
    double q_mass = 0.0;
};

/// Total variation via the density comparison set A = {x : p(x) > q(x)}.
/// Throws std::runtime_error when the density difference alternates sign
/// more than `interval_budget` times.
DensitySetResult tv_via_density_set(const DistributionPair& pair,
                                    int interval_budget = 64);

/// A set with P(A) = 0 and Q(A) > 0; exists exactly when Q is not
/// absolutely continuous with respect to P (throws otherwise).
SetDescriptor null_witness_set(const DistributionPair& pair);

/// Probability the law assigns to the described set.
double set_probability(const Distribution& d, const SetDescriptor& set);

}  // namespace whc
