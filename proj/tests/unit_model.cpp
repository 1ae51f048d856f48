#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "oracle.hpp"
#include "whc/graph.hpp"

using namespace whc;

TEST_CASE("edge indexing is lexicographic and symmetric") {
    const int n = 6;
    std::size_t e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) {
            CHECK(WeightedGraph::edge_index(n, i, j) == e);
            CHECK(WeightedGraph::edge_index(n, j, i) == e);
        }
    }
    WeightedGraph g(n);
    g.set_weight(4, 2, 3.25);
    CHECK(g.weight(2, 4) == 3.25);
}

TEST_CASE("null sampling: n=2 dirac") {
    const PlantedInstance inst = sample_null(2, Distribution::dirac(1.0), 5);
    CHECK(inst.graph.edge_count() == 1);
    CHECK(inst.graph.weight(0, 1) == 1.0);
    CHECK(inst.hypothesis == Hypothesis::H0);
    CHECK_FALSE(inst.hidden_set.has_value());
}

TEST_CASE("null sampling: bernoulli edge mean concentrates") {
    const PlantedInstance inst = sample_null(100, Distribution::bernoulli(0.5), 99);
    double sum = 0.0;
    for (double w : inst.graph.packed()) sum += w;
    CHECK(std::abs(sum / 4950.0 - 0.5) < 0.02);
}

TEST_CASE("same seed gives bitwise identical graphs") {
    const PlantedInstance a = sample_null(40, Distribution::uniform(0.0, 1.0), 1234);
    const PlantedInstance b = sample_null(40, Distribution::uniform(0.0, 1.0), 1234);
    const auto wa = a.graph.packed();
    const auto wb = b.graph.packed();
    for (std::size_t e = 0; e < wa.size(); ++e) CHECK(wa[e] == wb[e]);

    const DistributionPair pair = named_pair("disjoint_uniform", {});
    const PlantedInstance c = sample_planted(30, 5, pair, 77);
    const PlantedInstance d = sample_planted(30, 5, pair, 77);
    CHECK(*c.hidden_set == *d.hidden_set);
    const auto wc = c.graph.packed();
    const auto wd = d.graph.packed();
    for (std::size_t e = 0; e < wc.size(); ++e) CHECK(wc[e] == wd[e]);
}

TEST_CASE("planted sampling: k=n draws every edge from Q") {
    const DistributionPair pair = named_pair("disjoint_uniform", {});
    const PlantedInstance inst = sample_planted(8, 8, pair, 3);
    for (double w : inst.graph.packed()) CHECK(w >= 1.0);
}

TEST_CASE("planted sampling: disjoint supports expose exactly the planted edges") {
    const DistributionPair pair = named_pair("disjoint_uniform", {});
    const PlantedInstance inst = sample_planted(50, 10, pair, 2024);
    REQUIRE(inst.hidden_set.has_value());
    REQUIRE(inst.hidden_set->size() == 10);
    std::vector<char> in_set(50, 0);
    for (int v : *inst.hidden_set) in_set[static_cast<std::size_t>(v)] = 1;
    int planted = 0;
    for (int i = 0; i < 50; ++i) {
        for (int j = i + 1; j < 50; ++j) {
            const bool inside = in_set[static_cast<std::size_t>(i)] &&
                                in_set[static_cast<std::size_t>(j)];
            const bool high = inst.graph.weight(i, j) >= 1.0;
            CHECK(high == inside);
            planted += high ? 1 : 0;
        }
    }
    CHECK(planted == 45);
}

TEST_CASE("planted sampling: k=2 plants a single edge") {
    const DistributionPair pair = named_pair("disjoint_uniform", {});
    const PlantedInstance inst = sample_planted(50, 2, pair, 11);
    int planted = 0;
    for (double w : inst.graph.packed()) planted += w >= 1.0 ? 1 : 0;
    CHECK(planted == 1);
}

TEST_CASE("hidden sets are uniform over k-subsets") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    std::map<std::vector<int>, int> counts;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const PlantedInstance inst =
            sample_planted(6, 3, pair, derive_seed(5, 0, static_cast<std::uint64_t>(t)));
        counts[*inst.hidden_set]++;
    }
    CHECK(counts.size() == 20);
    for (const auto& [subset, count] : counts) {
        CHECK(std::abs(count / static_cast<double>(trials) - 0.05) < 0.01);
    }
}

TEST_CASE("marginals: planted edges follow Q, the rest follow P") {
    const DistributionPair pair(Distribution::uniform(0.0, 1.0),
                                Distribution::uniform(0.25, 0.75), "narrow");
    std::vector<double> planted, off;
    for (int t = 0; t < 10000; ++t) {
        const PlantedInstance inst =
            sample_planted(8, 4, pair, derive_seed(9, 1, static_cast<std::uint64_t>(t)));
        std::vector<char> in_set(8, 0);
        for (int v : *inst.hidden_set) in_set[static_cast<std::size_t>(v)] = 1;
        for (int i = 0; i < 8; ++i) {
            for (int j = i + 1; j < 8; ++j) {
                (in_set[i] && in_set[j] ? planted : off).push_back(inst.graph.weight(i, j));
            }
        }
    }
    const double ks_q = oracle::ks_statistic(std::move(planted), [&](double x) {
        return pair.q().cdf(x);
    });
    const double ks_p = oracle::ks_statistic(std::move(off), [&](double x) {
        return pair.p().cdf(x);
    });
    // 60000 planted / 220000 null samples; 0.01 is ~2.5x the 1% critical value
    CHECK(ks_q < 0.01);
    CHECK(ks_p < 0.005);
}

TEST_CASE("instance files round trip bitwise") {
    const DistributionPair pair = named_pair("gaussian_shift", {1.0});
    const PlantedInstance inst = sample_planted(12, 4, pair, 31415);
    std::stringstream ss;
    write_instance(inst, ss);
    const PlantedInstance back = read_instance(ss);
    CHECK(back.graph.vertex_count() == 12);
    CHECK(back.hypothesis == Hypothesis::H1);
    CHECK(back.seed == 31415);
    CHECK(*back.hidden_set == *inst.hidden_set);
    const auto wa = inst.graph.packed();
    const auto wb = back.graph.packed();
    for (std::size_t e = 0; e < wa.size(); ++e) CHECK(wa[e] == wb[e]);
}

TEST_CASE("instance parsing rejects malformed input") {
    {
        std::stringstream ss("not a header");
        CHECK_THROWS_AS(read_instance(ss), std::runtime_error);
    }
    {
        std::stringstream ss("3 0 H0 7\n0.5\n0.25\n");  // missing one weight
        CHECK_THROWS_AS(read_instance(ss), std::runtime_error);
    }
    {
        std::stringstream ss("3 0 H2 7\n0.5\n0.25\n0.75\n");
        CHECK_THROWS_AS(read_instance(ss), std::runtime_error);
    }
}

TEST_CASE("sampling preconditions") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    CHECK_THROWS_AS(sample_null(1, pair.p(), 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_planted(10, 1, pair, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_planted(10, 11, pair, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_null(kMaxVertices + 1, pair.p(), 0), std::invalid_argument);
}
