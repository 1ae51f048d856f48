#include "whc/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace whc {

namespace {

constexpr std::uint64_t kNullTag = 0x6e756c6cULL;     // "null"
constexpr std::uint64_t kPlantedTag = 0x706c616eULL;  // "plan"

// Kahan compensated accumulator; the exact-enumeration identities are
// checked to 1e-12 over millions of terms, which naive summation misses.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("WHC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return std::min(v, 256);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

// 95% halfwidth: normal approximation, switching to the Wilson interval
// when the success count is small.
double rate_ci95(double rate, int trials) {
    if (trials <= 0) return 0.0;
    const double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double successes = rate * nt;
    if (successes < 10.0 || nt - successes < 10.0) {
        return z * std::sqrt(rate * (1.0 - rate) / nt + z * z / (4.0 * nt * nt)) /
               (1.0 + z * z / nt);
    }
    return z * std::sqrt(rate * (1.0 - rate) / nt);
}

}  // namespace

RiskEstimate estimate_risk(const DetectorFn& detector, int n, int k,
                           const DistributionPair& pair, int trials,
                           std::uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_risk: trials must be >= 1");
    const int workers = std::max(1, std::min(resolve_threads(threads), trials));

    struct Counts {
        long long null_rejects = 0;
        long long planted_accepts = 0;
        long long null_failures = 0;
        long long planted_failures = 0;
    };
    std::vector<Counts> per_worker(static_cast<std::size_t>(workers));

    auto work = [&](int w) {
        Counts& c = per_worker[static_cast<std::size_t>(w)];
        for (int t = w; t < trials; t += workers) {
            const std::uint64_t ti = static_cast<std::uint64_t>(t);
            try {
                const PlantedInstance inst =
                    sample_null(n, pair.p(), derive_seed(seed, kNullTag, ti));
                if (detector(inst).decision == Decision::reject_H0) ++c.null_rejects;
            } catch (const std::exception&) {
                ++c.null_failures;
            }
            try {
                const PlantedInstance inst =
                    sample_planted(n, k, pair, derive_seed(seed, kPlantedTag, ti));
                if (detector(inst).decision == Decision::accept_H0) ++c.planted_accepts;
            } catch (const std::exception&) {
                ++c.planted_failures;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& th : pool) th.join();
    }

    Counts total;
    for (const Counts& c : per_worker) {
        total.null_rejects += c.null_rejects;
        total.planted_accepts += c.planted_accepts;
        total.null_failures += c.null_failures;
        total.planted_failures += c.planted_failures;
    }

    RiskEstimate est;
    est.trials_per_hypothesis = trials;
    est.base_seed = seed;
    est.type1 = static_cast<double>(total.null_rejects) / trials;
    est.type2 = static_cast<double>(total.planted_accepts) / trials;
    est.risk = est.type1 + est.type2;
    est.ci95_halfwidth = std::hypot(rate_ci95(est.type1, trials),
                                    rate_ci95(est.type2, trials));
    est.null_failures = static_cast<int>(total.null_failures);
    est.planted_failures = static_cast<int>(total.planted_failures);
    return est;
}

ExactLrtRisk exact_lrt_risk(int n, int k, const DistributionPair& pair,
                            std::uint64_t budget) {
    if (n < 2 || k < 2 || k > n) {
        throw std::invalid_argument("exact_lrt_risk: need 2 <= k <= n");
    }
    if (pair.p().continuous() || pair.q().continuous()) {
        throw std::invalid_argument(
            "exact_lrt_risk: both laws must have finite (purely atomic) support");
    }
    const std::vector<double>& points = pair.dominating_atoms();
    const std::size_t v = points.size();
    const std::size_t m = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (m * std::log(static_cast<double>(v)) >
        std::log(static_cast<double>(budget)) + 1e-9) {
        throw budget_error("exact_lrt_risk: |support|^edges exceeds the budget");
    }

    std::vector<double> pm(v), qm(v);
    for (std::size_t i = 0; i < v; ++i) {
        pm[i] = pair.p().atom_mass_at(points[i]);
        qm[i] = pair.q().atom_mass_at(points[i]);
    }

    // Edge lists and membership masks of every k-subset.
    std::vector<std::vector<std::size_t>> subset_edges;
    std::vector<std::vector<char>> subset_mask;
    {
        std::vector<int> subset(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
        while (true) {
            std::vector<std::size_t> edges;
            for (int a = 0; a < k; ++a) {
                for (int b = a + 1; b < k; ++b) {
                    edges.push_back(WeightedGraph::edge_index(
                        n, subset[static_cast<std::size_t>(a)],
                        subset[static_cast<std::size_t>(b)]));
                }
            }
            std::vector<char> mask(m, 0);
            for (std::size_t e : edges) mask[e] = 1;
            subset_edges.push_back(std::move(edges));
            subset_mask.push_back(std::move(mask));
            int i = k - 1;
            while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++subset[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) {
                subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    const double n_subsets = std::exp(log_choose(n, k));

    std::vector<std::size_t> idx(m, 0);
    Kahan risk_acc, e_abs_acc, e_sqrt_acc;
    while (true) {
        double p0 = 1.0;
        for (std::size_t e = 0; e < m; ++e) p0 *= pm[idx[e]];
        double l;   // likelihood ratio L(x), +inf possible
        double p1;  // alternative mass of the outcome
        if (p0 > 0.0) {
            double sum = 0.0;
            for (const auto& edges : subset_edges) {
                double prod = 1.0;
                for (std::size_t e : edges) prod *= qm[idx[e]] / pm[idx[e]];
                sum += prod;
            }
            l = sum / n_subsets;
            p1 = p0 * l;
        } else {
            // Impossible under the null; L = +inf whenever the alternative
            // assigns the outcome positive mass.
            p1 = 0.0;
            for (const auto& mask : subset_mask) {
                double prod = 1.0;
                for (std::size_t e = 0; e < m && prod > 0.0; ++e) {
                    prod *= mask[e] ? qm[idx[e]] : pm[idx[e]];
                }
                p1 += prod;
            }
            p1 /= n_subsets;
            l = p1 > 0.0 ? HUGE_VAL : 0.0;
        }

        risk_acc.add(l > 1.0 ? p0 : p1);  // Type I resp. Type II mass; ties accept
        if (p0 > 0.0) {
            e_abs_acc.add(p0 * std::abs(l - 1.0));
            e_sqrt_acc.add(p0 * std::sqrt(l));
        }

        std::size_t e = 0;
        while (e < m && ++idx[e] == v) {
            idx[e] = 0;
            ++e;
        }
        if (e == m) break;
    }
    ExactLrtRisk out;
    out.risk = risk_acc.sum;
    out.e_sqrt = e_sqrt_acc.sum;
    out.half_e_abs = 0.5 * e_abs_acc.sum;

    const double identity_gap = std::abs(out.risk - (1.0 - out.half_e_abs));
    if (identity_gap > 1e-12) {
        throw std::logic_error(
            "exact_lrt_risk: R(T*) = 1 - E0|L-1|/2 failed by " +
            std::to_string(identity_gap));
    }
    return out;
}

SecondMoment second_moment(int n, int k, double rho) {
    if (k < 2 || k > n) throw std::invalid_argument("second_moment: need 2 <= k <= n");
    if (!(rho >= 1.0)) throw std::invalid_argument("second_moment: rho must be >= 1");
    SecondMoment out;
    const double log_rho = std::log(rho);
    double e_l2 = 0.0, tail = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double lt = log_choose(k, i) + log_choose(n - k, k - i) -
                          log_choose(n, k) +
                          0.5 * static_cast<double>(i) * (i - 1) * log_rho;
        if (lt == -HUGE_VAL) continue;
        const double term = std::exp(lt);
        e_l2 += term;
        if (i >= 1) tail += term;
    }
    out.e_l2 = e_l2;
    out.tail_bound = tail;
    out.risk_lower_bound = 1.0 - std::sqrt(std::max(e_l2 - 1.0, 0.0));
    return out;
}

ThresholdReport thresholds(int n, const DistributionPair& pair, double epsilon,
                           double delta, double fallback_c) {
    if (n < 3) throw std::invalid_argument("thresholds: need n >= 3");
    if (!(epsilon > 0.0)) throw std::invalid_argument("thresholds: epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("thresholds: delta must lie in (0,1)");
    }
    const DivergenceReport div = divergences(pair);
    ThresholdReport r;
    r.kl = div.kl;
    r.tv = div.tv;
    r.rho = div.rho;
    if (!(r.rho > 1.0)) {
        throw std::invalid_argument("thresholds: rho = chi2 + 1 must exceed 1 (P != Q)");
    }

    const double log_n = std::log(static_cast<double>(n));
    if (std::isinf(div.kl)) {
        r.kl_fallback = true;
        r.kl_threshold_k = fallback_c * log_n;
    } else {
        r.kl_threshold_k = (2.0 + epsilon) * log_n / div.kl;
    }

    if (std::isinf(r.rho)) {
        // Limit of 2 log_rho n - 2 log_rho log_rho n - 1 + 2 log_rho e as
        // rho grows without bound.
        r.omega_n = -1.0;
    } else {
        const double lr = std::log(r.rho);
        const double t = log_n / lr;
        r.omega_n = 2.0 * t - 2.0 * std::log(t) / lr - 1.0 + 2.0 / lr;
    }
    r.chi2_indist_k = static_cast<long long>(std::floor(r.omega_n - epsilon));

    const double base = 4.0 * std::sqrt(n * std::log(9.0) + std::log(4.0 / delta));
    r.spectral_norm_threshold_T1 = base;
    r.spectral_k_T1 = div.tv > 0.0 ? base / div.tv : HUGE_VAL;
    const double lo = std::min(pair.p().support_lo(), pair.q().support_lo());
    const double hi = std::max(pair.p().support_hi(), pair.q().support_hi());
    const double dmu = std::abs(pair.q().mean() - pair.p().mean());
    if (std::isfinite(lo) && std::isfinite(hi)) {
        r.spectral_norm_threshold_T2 = (hi - lo) * base;
        r.spectral_k_T2 = dmu > 0.0 ? (hi - lo) * base / dmu : HUGE_VAL;
    } else {
        r.spectral_norm_threshold_T2 = HUGE_VAL;
        r.spectral_k_T2 = HUGE_VAL;
    }

    r.bc_bound_k = static_cast<int>(std::max<long long>(2, r.chi2_indist_k));
    r.bc_risk_lower_bound = bc_risk_lower_bound(r.bc_bound_k, pair);
    return r;
}

double bc_risk_lower_bound(int k, const DistributionPair& pair) {
    if (k < 2) throw std::invalid_argument("bc_risk_lower_bound: need k >= 2");
    const DivergenceReport div = divergences(pair);
    const double bc = std::min(div.bhattacharyya, 1.0);
    const double pairs = 0.5 * static_cast<double>(k) * (k - 1);
    const double powered = bc <= 0.0 ? 0.0 : std::exp(2.0 * pairs * std::log(bc));
    // 1 - sqrt(1 - x) written without cancellation for small x
    const double root = std::sqrt(std::max(0.0, 1.0 - powered));
    return powered / (1.0 + root);
}

}  // namespace whc
