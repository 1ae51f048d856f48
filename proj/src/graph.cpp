#include "whc/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace whc {

WeightedGraph::WeightedGraph(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("WeightedGraph: need n >= 2");
    weights_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
}

std::size_t WeightedGraph::edge_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    // row i occupies n-1-i slots starting at i*n - i*(i+1)/2 - i
    return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 +
           static_cast<std::size_t>(j - i - 1);
}

namespace {

void check_vertex_count(int n) {
    if (n < 2) throw std::invalid_argument("instance sampling: need n >= 2");
    if (n > kMaxVertices) {
        throw std::invalid_argument("instance sampling: n exceeds the cap of " +
                                    std::to_string(kMaxVertices));
    }
}

std::vector<int> draw_subset(int n, int k, Rng& rng) {
    // Partial Fisher-Yates: first k entries of a uniformly shuffled [0, n).
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - i)));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    std::vector<int> subset(perm.begin(), perm.begin() + k);
    std::sort(subset.begin(), subset.end());
    return subset;
}

}  // namespace

PlantedInstance sample_null(int n, const Distribution& p, std::uint64_t seed) {
    check_vertex_count(n);
    Rng rng(splitmix64(seed));
    WeightedGraph g(n);
    auto w = g.packed();
    for (double& x : w) x = p.sample(rng);
    return PlantedInstance{std::move(g), std::nullopt, Hypothesis::H0, seed};
}

PlantedInstance sample_planted(int n, int k, const DistributionPair& pair,
                               std::uint64_t seed) {
    check_vertex_count(n);
    if (k < 2 || k > n) {
        throw std::invalid_argument("sample_planted: need 2 <= k <= n");
    }
    Rng rng(splitmix64(seed));
    std::vector<int> subset = draw_subset(n, k, rng);
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    for (int v : subset) in_set[static_cast<std::size_t>(v)] = 1;
    WeightedGraph g(n);
    auto w = g.packed();
    std::size_t e = 0;
    for (int i = 0; i < n; ++i) {
        const bool i_in = in_set[static_cast<std::size_t>(i)] != 0;
        for (int j = i + 1; j < n; ++j, ++e) {
            const bool planted = i_in && in_set[static_cast<std::size_t>(j)] != 0;
            w[e] = planted ? pair.q().sample(rng) : pair.p().sample(rng);
        }
    }
    return PlantedInstance{std::move(g), std::move(subset), Hypothesis::H1, seed};
}

void write_instance(const PlantedInstance& inst, std::ostream& os) {
    const int n = inst.graph.vertex_count();
    const int k = inst.hidden_set ? static_cast<int>(inst.hidden_set->size()) : 0;
    os << n << ' ' << k << ' ' << (inst.hypothesis == Hypothesis::H0 ? "H0" : "H1")
       << ' ' << inst.seed << '\n';
    char buf[64];
    for (double w : inst.graph.packed()) {
        std::snprintf(buf, sizeof(buf), "%.17g", w);
        os << buf << '\n';
    }
    if (inst.hidden_set) {
        for (std::size_t i = 0; i < inst.hidden_set->size(); ++i) {
            os << (i ? " " : "") << (*inst.hidden_set)[i];
        }
        os << '\n';
    }
}

void write_instance_file(const PlantedInstance& inst, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_instance(inst, os);
    if (!os) throw std::runtime_error("failed writing instance to '" + path + "'");
}

PlantedInstance read_instance(std::istream& is) {
    int n = 0, k = 0;
    std::string hyp;
    std::uint64_t seed = 0;
    if (!(is >> n >> k >> hyp >> seed)) {
        throw std::runtime_error("instance parse error: bad header line");
    }
    if (n < 2) throw std::runtime_error("instance parse error: n < 2");
    if (hyp != "H0" && hyp != "H1") {
        throw std::runtime_error("instance parse error: hypothesis must be H0 or H1");
    }
    WeightedGraph g(n);
    auto w = g.packed();
    for (std::size_t e = 0; e < w.size(); ++e) {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("instance parse error: missing weights");
        std::size_t pos = 0;
        w[e] = std::stod(tok, &pos);
        if (pos != tok.size()) {
            throw std::runtime_error("instance parse error: bad weight '" + tok + "'");
        }
    }
    std::optional<std::vector<int>> hidden;
    if (hyp == "H1") {
        if (k < 2 || k > n) throw std::runtime_error("instance parse error: bad k");
        std::vector<int> subset(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            if (!(is >> subset[static_cast<std::size_t>(i)])) {
                throw std::runtime_error("instance parse error: missing hidden set");
            }
            if (subset[static_cast<std::size_t>(i)] < 0 ||
                subset[static_cast<std::size_t>(i)] >= n) {
                throw std::runtime_error("instance parse error: hidden vertex out of range");
            }
        }
        if (!std::is_sorted(subset.begin(), subset.end())) {
            throw std::runtime_error("instance parse error: hidden set must be sorted");
        }
        hidden = std::move(subset);
    }
    return PlantedInstance{std::move(g), std::move(hidden),
                           hyp == "H0" ? Hypothesis::H0 : Hypothesis::H1, seed};
}

PlantedInstance read_instance_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open instance file '" + path + "'");
    return read_instance(is);
}

}  // namespace whc
