#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whc/divergence.hpp"
#include "whc/graph.hpp"
#include "whc/linalg.hpp"
#include "whc/set_descriptor.hpp"

namespace whc {

inline constexpr std::uint64_t kDefaultEnumBudget = 100'000'000ULL;

/// Raised when a subset enumeration would exceed the configured budget.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Decision { accept_H0, reject_H0 };

/// Side of the threshold on which a detector rejects. Comparisons are
/// strict: equality always accepts.
enum class Direction { greater, less };

struct TestVerdict {
    Decision decision = Decision::accept_H0;
    double statistic = 0.0;
    double threshold = 0.0;
    Direction direction = Direction::greater;
    std::string detector;
    std::optional<std::vector<int>> witness_vertices;
    std::optional<std::pair<double, double>> witness_interval;
    bool norm_converged = true;  // meaningful for the spectral tests
};

/// Rejects H0 iff any edge weight lies in A; sound (zero Type I) whenever
/// P(A) = 0. Witness: the vertices touched by offending edges.
TestVerdict support_test(const WeightedGraph& g, const SetDescriptor& setA);

/// Scan test: maximizes the per-edge log density ratio summed inside E(S)
/// over all k-subsets S; rejects when the maximum exceeds k log n. Exact
/// enumeration; witness is the lexicographically first maximizer.
TestVerdict scan_test(const WeightedGraph& g, const DistributionPair& pair, int k,
                      std::uint64_t budget = kDefaultEnumBudget);

/// Spectral test on the centered weight matrix: rejects when
/// ||X - mu_p (J - I)|| exceeds 4 (b - a) sqrt(n log 9 + log(4/delta)).
/// All weights must lie in [a, b].
TestVerdict spectral_test_T2(const WeightedGraph& g, double mu_p, double support_lo,
                             double support_hi, double delta,
                             const linalg::NormOptions& norm_opts = {});

/// Spectral test on the 0/1 transform Z_ij = 1{X_ij in A}. Delegates to
/// spectral_test_T2 with mu_p = P(A) and [a, b] = [0, 1], so the statistic
/// and threshold match T2 on the transformed matrix bit for bit.
TestVerdict spectral_test_T1(const WeightedGraph& g, const SetDescriptor& setA,
                             double p_of_A, double delta,
                             const linalg::NormOptions& norm_opts = {});

/// Interval scan: rejects iff some interval I captures at least k edges
/// spanning at most k vertices. Realized over contiguous windows of the
/// sorted edge-weight order; windows never split ties. Requires
/// 2 <= k <= n/2. Witness: the vertex set and interval of the window with
/// the most captured edges.
TestVerdict interval_scan_test(const WeightedGraph& g, int k);

/// Rejects iff the minimum edge weight is below 2^-n. Requires n <= 1022 so
/// the threshold stays a normal double.
TestVerdict min_test(const WeightedGraph& g);

/// Exact likelihood ratio test: statistic log L(X) with L averaged over all
/// k-subsets, threshold 0, rejection strict. Subsets containing an edge with
/// zero Q-density contribute nothing; an observation that is impossible
/// under P but not under Q forces L = +inf and rejection with a witness.
TestVerdict exact_lrt(const WeightedGraph& g, const DistributionPair& pair, int k,
                      std::uint64_t budget = kDefaultEnumBudget);

enum class DetectorKind { support, scan, t1, t2, interval, min, lrt };

const char* detector_name(DetectorKind kind);
DetectorKind detector_from_name(const std::string& name);

struct DetectorConfig {
    DetectorKind kind = DetectorKind::lrt;
    double delta = 0.1;
    std::uint64_t budget = kDefaultEnumBudget;
    double norm_rel_tol = 1e-8;
    /// Optional explicit set for support/t1; derived from the pair when
    /// absent (null_witness_set and tv_via_density_set respectively).
    std::optional<SetDescriptor> set;
};

using DetectorFn = std::function<TestVerdict(const PlantedInstance&)>;

/// Bind a detector configuration to a runnable function. Derived quantities
/// (witness sets, means, supports) are resolved once, up front.
DetectorFn make_detector(const DetectorConfig& config,
                         const std::optional<DistributionPair>& pair, int k);

/// log of binomial(n, k); -inf when the arguments are out of range.
double log_choose(int n, int k);

}  // namespace whc
