#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "whc/graph.hpp"

namespace whc::linalg {

/// y = M x for a symmetric operator M.
using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

struct NormOptions {
    double rel_tol = 1e-8;
    /// Matvec cap; 0 means 10n + 1000.
    int max_matvecs = 0;
    std::uint64_t seed = 0x5eedf00dULL;
};

struct NormResult {
    double value = 0.0;
    int matvecs = 0;
    bool converged = true;
};

/// Largest absolute eigenvalue (spectral norm) of a symmetric operator.
/// For n <= 64 the matrix is materialized and solved exactly; otherwise
/// power iteration on the operator with a deterministic seeded start vector,
/// stopping when successive Rayleigh-quotient estimates of the squared
/// operator agree to rel_tol. On hitting the matvec cap the best estimate is
/// returned with converged = false.
NormResult operator_norm(int n, const MatVec& apply, const NormOptions& opts = {});

/// Spectral norm of X - shift * (J - I) for a weighted graph X, without
/// materializing the centered matrix.
NormResult operator_norm(const WeightedGraph& g, double offdiag_shift,
                         const NormOptions& opts = {});

/// Spectral norm of a dense symmetric matrix in row-major order.
NormResult operator_norm_dense(const std::vector<double>& rowmajor, int n,
                               const NormOptions& opts = {});

/// y = X x using the packed upper triangle of the graph, then
/// y -= shift * (sum(x) - x) to account for the centered off-diagonal.
void centered_matvec(const WeightedGraph& g, double offdiag_shift,
                     std::span<const double> x, std::span<double> y);

}  // namespace whc::linalg
