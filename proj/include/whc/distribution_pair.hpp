#pragma once

#include <string>
#include <vector>

#include "whc/distribution.hpp"

namespace whc {

/// A (P, Q) pair with densities taken against the shared dominating measure
/// (counting measure on the union of atom locations plus Lebesgue measure on
/// the continuous supports). At an atom location the "density" of each law
/// is its point mass there; elsewhere it is the continuous density.
class DistributionPair {
public:
    DistributionPair(Distribution p, Distribution q, std::string name = "");

    const Distribution& p() const { return p_; }
    const Distribution& q() const { return q_; }
    const std::string& name() const { return name_; }

    /// Sorted union of both atom sets.
    const std::vector<double>& dominating_atoms() const { return dominating_atoms_; }

    /// Whether Q is absolutely continuous with respect to P.
    bool q_dominated_by_p() const { return q_dominated_by_p_; }

    bool is_atom_location(double x) const;
    /// Density of P (resp. Q) at x under the dominating measure.
    double p_weight(double x) const;
    double q_weight(double x) const;

    /// log(q(x)/p(x)); -inf where q vanishes and p does not, +inf where p
    /// vanishes and q does not. Throws std::domain_error when both vanish.
    double log_ratio(double x) const;

private:
    Distribution p_;
    Distribution q_;
    std::string name_;
    std::vector<double> dominating_atoms_;
    bool q_dominated_by_p_ = false;
};

/// Named pair catalogue:
///   bernoulli_dirac(p)      P = Bern(p), Q = Dirac(1)
///   bernoulli_bernoulli(p,q)
///   uniform_shift(s)        P = Unif(0,1), Q = Unif(s, 1+s)
///   gaussian_shift(d)       P = N(0,1), Q = N(d,1)
///   uniform_vs_prop3([depth]) P = Unif(0,1), Q = dyadic construction
///   disjoint_uniform()      P = Unif(0,1), Q = Unif(1,2)
DistributionPair named_pair(const std::string& name, const std::vector<double>& params);

/// Parse a CLI-style pair spec "name" or "name:p1,p2".
DistributionPair parse_pair_spec(const std::string& spec);

}  // namespace whc
