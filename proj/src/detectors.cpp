#include "whc/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace whc {

namespace {

bool rejects(double statistic, double threshold, Direction dir) {
    return dir == Direction::greater ? statistic > threshold : statistic < threshold;
}

TestVerdict finish(TestVerdict v) {
    v.decision = rejects(v.statistic, v.threshold, v.direction) ? Decision::reject_H0
                                                                : Decision::accept_H0;
    return v;
}

// Per-edge log ratio, classified so that infinities are carried
// symbolically through subset sums.
struct EdgeScore {
    double finite = 0.0;
    int cls = 0;  // 0 finite, +1 for +inf (p vanishes), -1 for -inf (q vanishes)
};

std::vector<EdgeScore> edge_scores(const WeightedGraph& g, const DistributionPair& pair) {
    std::vector<EdgeScore> scores(g.edge_count());
    const std::span<const double> w = g.packed();
    for (std::size_t e = 0; e < w.size(); ++e) {
        const double lr = pair.log_ratio(w[e]);
        if (lr == HUGE_VAL) {
            scores[e] = {0.0, +1};
        } else if (lr == -HUGE_VAL) {
            scores[e] = {0.0, -1};
        } else {
            scores[e] = {lr, 0};
        }
    }
    return scores;
}

void check_enumeration_budget(int n, int k, std::uint64_t budget) {
    if (log_choose(n, k) > std::log(static_cast<double>(budget)) + 1e-9) {
        throw budget_error("subset enumeration over C(" + std::to_string(n) + "," +
                           std::to_string(k) + ") exceeds the budget of " +
                           std::to_string(budget));
    }
}

// Enumerates k-subsets of [0, n) in lexicographic order, maintaining the
// sum of pairwise edge scores of the chosen vertices. The leaf callback
// returns false to stop the enumeration; subtrees whose partial sum is
// already -inf may be skipped when prune_neg is set (their leaves can never
// strictly exceed any value >= -inf and contribute nothing to sums).
class SubsetEnumerator {
public:
    SubsetEnumerator(int n, int k, const std::vector<EdgeScore>& scores)
        : n_(n), k_(k), scores_(scores) {}

    template <typename Leaf>
    void run(bool prune_neg, Leaf&& leaf) {
        chosen_.clear();
        recurse(0, 0.0, 0, 0, prune_neg, leaf);
    }

private:
    template <typename Leaf>
    bool recurse(int start, double sum, int pos, int neg, bool prune_neg, Leaf&& leaf) {
        if (static_cast<int>(chosen_.size()) == k_) {
            return leaf(chosen_, sum, pos, neg);
        }
        const int remaining = k_ - static_cast<int>(chosen_.size());
        for (int v = start; v <= n_ - remaining; ++v) {
            double add = 0.0;
            int dpos = 0, dneg = 0;
            for (int u : chosen_) {
                const EdgeScore& s = scores_[WeightedGraph::edge_index(n_, u, v)];
                if (s.cls == 0) {
                    add += s.finite;
                } else if (s.cls > 0) {
                    ++dpos;
                } else {
                    ++dneg;
                }
            }
            if (prune_neg && neg + dneg > 0) continue;
            chosen_.push_back(v);
            const bool keep = recurse(v + 1, sum + add, pos + dpos, neg + dneg,
                                      prune_neg, leaf);
            chosen_.pop_back();
            if (!keep) return false;
        }
        return true;
    }

    int n_;
    int k_;
    const std::vector<EdgeScore>& scores_;
    std::vector<int> chosen_;
};

}  // namespace

double log_choose(int n, int k) {
    if (k < 0 || n < 0 || k > n) return -HUGE_VAL;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

const char* detector_name(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::support: return "support";
        case DetectorKind::scan: return "scan";
        case DetectorKind::t1: return "t1";
        case DetectorKind::t2: return "t2";
        case DetectorKind::interval: return "interval";
        case DetectorKind::min: return "min";
        case DetectorKind::lrt: return "lrt";
    }
    return "?";
}

DetectorKind detector_from_name(const std::string& name) {
    if (name == "support") return DetectorKind::support;
    if (name == "scan") return DetectorKind::scan;
    if (name == "t1") return DetectorKind::t1;
    if (name == "t2") return DetectorKind::t2;
    if (name == "interval") return DetectorKind::interval;
    if (name == "min") return DetectorKind::min;
    if (name == "lrt") return DetectorKind::lrt;
    throw std::invalid_argument("unknown detector '" + name + "'");
}

TestVerdict support_test(const WeightedGraph& g, const SetDescriptor& setA) {
    if (setA.empty()) {
        throw std::invalid_argument("support_test: empty set descriptor");
    }
    const int n = g.vertex_count();
    std::set<int> touched;
    std::size_t count = 0;
    std::size_t e = 0;
    const std::span<const double> w = g.packed();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) {
            if (setA.contains(w[e])) {
                ++count;
                touched.insert(i);
                touched.insert(j);
            }
        }
    }
    TestVerdict v;
    v.detector = "support";
    v.statistic = static_cast<double>(count);
    v.threshold = 0.0;
    v.direction = Direction::greater;
    if (!touched.empty()) {
        v.witness_vertices = std::vector<int>(touched.begin(), touched.end());
    }
    return finish(v);
}

TestVerdict scan_test(const WeightedGraph& g, const DistributionPair& pair, int k,
                      std::uint64_t budget) {
    const int n = g.vertex_count();
    if (k < 2 || k > n) throw std::invalid_argument("scan_test: need 2 <= k <= n");
    check_enumeration_budget(n, k, budget);
    const std::vector<EdgeScore> scores = edge_scores(g, pair);

    // Lexicographically first subset seeds the maximum so that -inf
    // subtrees can be skipped without losing the tie-breaking contract.
    double best_sum = 0.0;
    int best_cls;  // -1: -inf, 0: finite, +1: +inf
    std::vector<int> best_subset(static_cast<std::size_t>(k));
    std::iota(best_subset.begin(), best_subset.end(), 0);
    {
        double sum = 0.0;
        int pos = 0, neg = 0;
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) {
                const EdgeScore& s = scores[WeightedGraph::edge_index(n, a, b)];
                if (s.cls == 0) {
                    sum += s.finite;
                } else if (s.cls > 0) {
                    ++pos;
                } else {
                    ++neg;
                }
            }
        }
        best_cls = neg > 0 ? -1 : (pos > 0 ? +1 : 0);
        best_sum = sum;
    }

    if (best_cls != +1) {
        SubsetEnumerator enumerator(n, k, scores);
        enumerator.run(true, [&](const std::vector<int>& subset, double sum, int pos,
                                 int neg) {
            const int cls = neg > 0 ? -1 : (pos > 0 ? +1 : 0);
            const bool better =
                cls > best_cls || (cls == 0 && best_cls == 0 && sum > best_sum);
            if (better) {
                best_cls = cls;
                best_sum = sum;
                best_subset = subset;
            }
            // The first +inf subset is the lexicographically first global
            // maximum; nothing can strictly beat it.
            return best_cls != +1;
        });
    }

    TestVerdict v;
    v.detector = "scan";
    v.threshold = k * std::log(static_cast<double>(n));
    v.statistic = best_cls == 0 ? best_sum : (best_cls > 0 ? HUGE_VAL : -HUGE_VAL);
    v.direction = Direction::greater;
    v.witness_vertices = std::move(best_subset);
    return finish(v);
}

TestVerdict spectral_test_T2(const WeightedGraph& g, double mu_p, double support_lo,
                             double support_hi, double delta,
                             const linalg::NormOptions& norm_opts) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("spectral_test_T2: delta must lie in (0,1)");
    }
    if (!(support_lo < support_hi) || !std::isfinite(support_lo) ||
        !std::isfinite(support_hi)) {
        throw std::invalid_argument("spectral_test_T2: support [a,b] must be bounded");
    }
    for (double w : g.packed()) {
        if (!(w >= support_lo && w <= support_hi)) {
            throw std::invalid_argument("spectral_test_T2: edge weight " +
                                        std::to_string(w) + " outside [a,b]");
        }
    }
    const int n = g.vertex_count();
    const linalg::NormResult nr = linalg::operator_norm(g, mu_p, norm_opts);
    TestVerdict v;
    v.detector = "t2";
    v.statistic = nr.value;
    v.threshold = 4.0 * (support_hi - support_lo) *
                  std::sqrt(n * std::log(9.0) + std::log(4.0 / delta));
    v.direction = Direction::greater;
    v.norm_converged = nr.converged;
    return finish(v);
}

TestVerdict spectral_test_T1(const WeightedGraph& g, const SetDescriptor& setA,
                             double p_of_A, double delta,
                             const linalg::NormOptions& norm_opts) {
    if (!(p_of_A >= 0.0 && p_of_A <= 1.0)) {
        throw std::invalid_argument("spectral_test_T1: P(A) must lie in [0,1]");
    }
    const int n = g.vertex_count();
    WeightedGraph z(n);
    const std::span<const double> w = g.packed();
    const std::span<double> zw = z.packed();
    for (std::size_t e = 0; e < w.size(); ++e) {
        zw[e] = setA.contains(w[e]) ? 1.0 : 0.0;
    }
    TestVerdict v = spectral_test_T2(z, p_of_A, 0.0, 1.0, delta, norm_opts);
    v.detector = "t1";
    return v;
}

TestVerdict interval_scan_test(const WeightedGraph& g, int k) {
    const int n = g.vertex_count();
    if (k < 2 || 2 * k > n) {
        throw std::invalid_argument("interval_scan_test: need 2 <= k <= n/2");
    }
    const std::span<const double> w = g.packed();
    const std::size_t m = w.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&w](std::size_t a, std::size_t b) {
        return w[a] != w[b] ? w[a] < w[b] : a < b;
    });
    // Tie groups: a real interval can never separate equal weights.
    std::vector<std::size_t> group_start;
    for (std::size_t t = 0; t < m; ++t) {
        if (t == 0 || w[order[t]] != w[order[t - 1]]) group_start.push_back(t);
    }
    group_start.push_back(m);

    // Edge endpoints in sorted order.
    std::vector<std::pair<int, int>> ends(m);
    {
        std::size_t e = 0;
        std::vector<std::pair<int, int>> lex(m);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j, ++e) lex[e] = {i, j};
        }
        for (std::size_t t = 0; t < m; ++t) ends[t] = lex[order[t]];
    }

    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    std::vector<int> touched;
    std::size_t best_edges = 0;
    std::size_t best_lo = 0, best_hi = 0;  // sorted positions [lo, hi)

    const std::size_t groups = group_start.size() - 1;
    for (std::size_t gi = 0; gi < groups; ++gi) {
        const std::size_t lo = group_start[gi];
        int distinct = 0;
        touched.clear();
        bool over = false;
        for (std::size_t gj = gi; gj < groups && !over; ++gj) {
            for (std::size_t t = group_start[gj]; t < group_start[gj + 1]; ++t) {
                for (int v : {ends[t].first, ends[t].second}) {
                    if (degree[static_cast<std::size_t>(v)]++ == 0) {
                        ++distinct;
                        touched.push_back(v);
                    }
                }
                if (distinct > k) {
                    over = true;
                    break;
                }
            }
            if (over) break;
            const std::size_t edges = group_start[gj + 1] - lo;
            if (edges >= static_cast<std::size_t>(k) && edges > best_edges) {
                best_edges = edges;
                best_lo = lo;
                best_hi = group_start[gj + 1];
            }
        }
        for (int v : touched) degree[static_cast<std::size_t>(v)] = 0;
    }

    TestVerdict v;
    v.detector = "interval";
    v.threshold = 0.0;
    v.direction = Direction::greater;
    v.statistic = static_cast<double>(best_edges);
    if (best_edges > 0) {
        std::set<int> verts;
        for (std::size_t t = best_lo; t < best_hi; ++t) {
            verts.insert(ends[t].first);
            verts.insert(ends[t].second);
        }
        v.witness_vertices = std::vector<int>(verts.begin(), verts.end());
        v.witness_interval = {w[order[best_lo]], w[order[best_hi - 1]]};
    }
    return finish(v);
}

TestVerdict min_test(const WeightedGraph& g) {
    const int n = g.vertex_count();
    if (n > 1022) {
        throw std::invalid_argument(
            "min_test: threshold 2^-n underflows for n > 1022");
    }
    const std::span<const double> w = g.packed();
    std::size_t arg = 0;
    for (std::size_t e = 1; e < w.size(); ++e) {
        if (w[e] < w[arg]) arg = e;
    }
    TestVerdict v;
    v.detector = "min";
    v.statistic = w[arg];
    v.threshold = std::ldexp(1.0, -n);
    v.direction = Direction::less;
    // argmin edge endpoints, handy when the verdict is a rejection
    std::size_t e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) {
            if (e == arg) v.witness_vertices = std::vector<int>{i, j};
        }
    }
    return finish(v);
}

TestVerdict exact_lrt(const WeightedGraph& g, const DistributionPair& pair, int k,
                      std::uint64_t budget) {
    const int n = g.vertex_count();
    if (k < 2 || k > n) throw std::invalid_argument("exact_lrt: need 2 <= k <= n");
    check_enumeration_budget(n, k, budget);
    const std::vector<EdgeScore> scores = edge_scores(g, pair);

    // Streaming log-sum-exp over finite subset log products; subsets with a
    // vanishing Q-density edge contribute zero. A subset whose edges are all
    // P-impossible but Q-possible makes L infinite.
    double max_log = -HUGE_VAL;
    double acc = 0.0;
    std::optional<std::vector<int>> inf_witness;
    SubsetEnumerator enumerator(n, k, scores);
    enumerator.run(true, [&](const std::vector<int>& subset, double sum, int pos,
                             int neg) {
        (void)neg;  // pruned subtrees never reach the leaf with neg > 0
        if (pos > 0) {
            inf_witness = subset;
            return false;
        }
        if (sum > max_log) {
            acc = acc * std::exp(max_log - sum) + 1.0;
            max_log = sum;
        } else {
            acc += std::exp(sum - max_log);
        }
        return true;
    });

    TestVerdict v;
    v.detector = "lrt";
    v.threshold = 0.0;
    v.direction = Direction::greater;
    if (inf_witness) {
        v.statistic = HUGE_VAL;
        v.witness_vertices = std::move(inf_witness);
    } else if (max_log == -HUGE_VAL) {
        v.statistic = -HUGE_VAL;  // L = 0: every subset impossible under Q
    } else {
        v.statistic = max_log + std::log(acc) - log_choose(n, k);
    }
    return finish(v);
}

DetectorFn make_detector(const DetectorConfig& config,
                         const std::optional<DistributionPair>& pair, int k) {
    const auto require_pair = [&]() -> const DistributionPair& {
        if (!pair) {
            throw std::invalid_argument(std::string("detector '") +
                                        detector_name(config.kind) +
                                        "' requires a distribution pair");
        }
        return *pair;
    };
    linalg::NormOptions norm_opts;
    norm_opts.rel_tol = config.norm_rel_tol;

    switch (config.kind) {
        case DetectorKind::support: {
            const SetDescriptor set =
                config.set ? *config.set : null_witness_set(require_pair());
            return [set](const PlantedInstance& inst) {
                return support_test(inst.graph, set);
            };
        }
        case DetectorKind::scan: {
            const DistributionPair p = require_pair();
            const std::uint64_t budget = config.budget;
            return [p, k, budget](const PlantedInstance& inst) {
                return scan_test(inst.graph, p, k, budget);
            };
        }
        case DetectorKind::t1: {
            const DistributionPair& p = require_pair();
            SetDescriptor set;
            double p_of_A;
            if (config.set) {
                set = *config.set;
                p_of_A = set_probability(p.p(), set);
            } else {
                const DensitySetResult dsr = tv_via_density_set(p);
                set = dsr.set;
                p_of_A = dsr.p_mass;
            }
            const double delta = config.delta;
            return [set, p_of_A, delta, norm_opts](const PlantedInstance& inst) {
                return spectral_test_T1(inst.graph, set, p_of_A, delta, norm_opts);
            };
        }
        case DetectorKind::t2: {
            const DistributionPair& p = require_pair();
            const double mu_p = p.p().mean();
            const double lo = std::min(p.p().support_lo(), p.q().support_lo());
            const double hi = std::max(p.p().support_hi(), p.q().support_hi());
            if (!std::isfinite(lo) || !std::isfinite(hi)) {
                throw std::invalid_argument(
                    "detector 't2' requires distributions with bounded support");
            }
            const double delta = config.delta;
            return [mu_p, lo, hi, delta, norm_opts](const PlantedInstance& inst) {
                return spectral_test_T2(inst.graph, mu_p, lo, hi, delta, norm_opts);
            };
        }
        case DetectorKind::interval:
            return [k](const PlantedInstance& inst) {
                return interval_scan_test(inst.graph, k);
            };
        case DetectorKind::min:
            return [](const PlantedInstance& inst) { return min_test(inst.graph); };
        case DetectorKind::lrt: {
            const DistributionPair p = require_pair();
            const std::uint64_t budget = config.budget;
            return [p, k, budget](const PlantedInstance& inst) {
                return exact_lrt(inst.graph, p, k, budget);
            };
        }
    }
    throw std::logic_error("make_detector: unhandled detector kind");
}

}  // namespace whc
