#pragma once

#include <cstdint>
#include <optional>

#include "whc/detectors.hpp"

namespace whc {

/// Empirical risk of a detector from paired null/planted Monte Carlo runs.
struct RiskEstimate {
    double type1 = 0.0;  // null rejections / trials
    double type2 = 0.0;  // planted acceptances / trials
    double risk = 0.0;   // type1 + type2
    int trials_per_hypothesis = 0;
    double ci95_halfwidth = 0.0;  // the two per-rate intervals in quadrature
    std::uint64_t base_seed = 0;
    int null_failures = 0;
    int planted_failures = 0;
};

/// Runs `trials` null and `trials` planted instances with per-trial derived
/// seeds and tallies the detector's errors. Deterministic for a given
/// (seed, trials) regardless of the worker count: trials own independent
/// streams and only integer counts are aggregated. Detector exceptions are
/// tallied as failures (the trial counts toward neither rejection nor
/// acceptance).
RiskEstimate estimate_risk(const DetectorFn& detector, int n, int k,
                           const DistributionPair& pair, int trials,
                           std::uint64_t seed, int threads = 0);

/// Exact risk of the likelihood ratio test on finite-support pairs by full
/// enumeration of the weight outcome space.
struct ExactLrtRisk {
    double risk = 0.0;      // R(T*)
    double half_e_abs = 0.0;  // E0[|L - 1|] / 2
    double e_sqrt = 0.0;    // E0[sqrt(L)]
};

ExactLrtRisk exact_lrt_risk(int n, int k, const DistributionPair& pair,
                            std::uint64_t budget = kDefaultEnumBudget);

/// Closed-form second moment of the likelihood ratio under the null,
/// E0[L^2] = sum_i C(k,i) C(n-k,k-i) / C(n,k) * rho^C(i,2), together with
/// the i >= 1 tail bound on E0[L^2] - 1 and the induced risk lower bound
/// 1 - sqrt(E0[L^2] - 1) (negative values mean the bound is vacuous).
struct SecondMoment {
    double e_l2 = 0.0;
    double tail_bound = 0.0;
    double risk_lower_bound = 0.0;
};

SecondMoment second_moment(int n, int k, double rho);

/// Detection and indistinguishability thresholds for a pair at size n.
struct ThresholdReport {
    double kl = 0.0;
    double tv = 0.0;
    double rho = 0.0;
    double kl_threshold_k = 0.0;  // (2+eps) log n / KL; fallback_c * log n when KL = inf
    bool kl_fallback = false;
    double omega_n = 0.0;
    long long chi2_indist_k = 0;  // floor(omega_n - eps)
    double spectral_norm_threshold_T1 = 0.0;  // 4 sqrt(n log 9 + log(4/delta))
    double spectral_norm_threshold_T2 = 0.0;  // 4 (b-a) sqrt(...)
    double spectral_k_T1 = 0.0;  // norm threshold / tv
    double spectral_k_T2 = 0.0;  // norm threshold / |mu_Q - mu_P|, inf when unbounded
    double bc_risk_lower_bound = 0.0;  // evaluated at bc_bound_k
    int bc_bound_k = 0;
};

ThresholdReport thresholds(int n, const DistributionPair& pair, double epsilon,
                           double delta, double fallback_c = 1.0);

/// Risk lower bound 1 - sqrt(1 - BC(P,Q)^(2 C(k,2))) valid for every test.
double bc_risk_lower_bound(int k, const DistributionPair& pair);

}  // namespace whc
