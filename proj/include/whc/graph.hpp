#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whc/distribution_pair.hpp"

namespace whc {

/// Default cap on the vertex count of generated instances.
inline constexpr int kMaxVertices = 1 << 15;

/// Complete graph on n vertices with real edge weights, stored as the
/// packed upper triangle in lexicographic (i < j) order. The diagonal is
/// implicitly zero and never read.
class WeightedGraph {
public:
    explicit WeightedGraph(int n);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return weights_.size(); }

    static std::size_t edge_index(int n, int i, int j);

    double weight(int i, int j) const { return weights_[edge_index(n_, i, j)]; }
    void set_weight(int i, int j, double w) { weights_[edge_index(n_, i, j)] = w; }

    /// Packed upper triangle, lexicographic (i < j).
    std::span<const double> packed() const { return weights_; }
    std::span<double> packed() { return weights_; }

private:
    int n_;
    std::vector<double> weights_;
};

enum class Hypothesis { H0, H1 };

struct PlantedInstance {
    WeightedGraph graph;
    std::optional<std::vector<int>> hidden_set;  // sorted, present iff H1
    Hypothesis hypothesis = Hypothesis::H0;
    std::uint64_t seed = 0;
};

/// Draw from the null model G(n, P): all edge weights i.i.d. from P,
/// generated in lexicographic edge order from the instance stream.
PlantedInstance sample_null(int n, const Distribution& p, std::uint64_t seed);

/// Draw from the planted model G(n, k, P, Q): a uniform k-subset S is drawn
/// first, then weights in lexicographic order, from Q inside E(S) and from P
/// outside.
PlantedInstance sample_planted(int n, int k, const DistributionPair& pair,
                               std::uint64_t seed);

/// Text instance format: header "n k hypothesis seed", one weight per line
/// with 17 significant digits in lexicographic order, and, for H1, a
/// trailing line with the sorted hidden set.
void write_instance(const PlantedInstance& inst, std::ostream& os);
void write_instance_file(const PlantedInstance& inst, const std::string& path);
PlantedInstance read_instance(std::istream& is);
PlantedInstance read_instance_file(const std::string& path);

}  // namespace whc
