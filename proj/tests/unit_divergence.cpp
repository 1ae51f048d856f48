#include <doctest.h>

#include <cmath>

#include "whc/divergence.hpp"
#include "whc/rng.hpp"

using namespace whc;

namespace {

// Random discrete pair on a common support of size <= 8, masses normalized.
DistributionPair random_discrete_pair(Rng& rng) {
    const int support = 2 + static_cast<int>(rng.uniform_int(7));
    std::vector<Atom> pa, qa;
    double ps = 0.0, qs = 0.0;
    for (int i = 0; i < support; ++i) {
        const double pv = 0.05 + rng.uniform();
        const double qv = 0.05 + rng.uniform();
        pa.push_back({static_cast<double>(i), pv});
        qa.push_back({static_cast<double>(i), qv});
        ps += pv;
        qs += qv;
    }
    for (Atom& a : pa) a.mass /= ps;
    for (Atom& a : qa) a.mass /= qs;
    return DistributionPair(Distribution::mixed(pa, std::nullopt, "p"),
                            Distribution::mixed(qa, std::nullopt, "q"), "random");
}

}  // namespace

TEST_CASE("divergences of the classical pair match hand computation") {
    const DivergenceReport r = divergences(named_pair("bernoulli_dirac", {0.5}));
    CHECK(std::abs(r.tv - 0.5) < 1e-9);
    CHECK(std::abs(r.kl - std::log(2.0)) < 1e-9);
    CHECK(std::abs(r.chi2 - 1.0) < 1e-9);
    CHECK(std::abs(r.rho - 2.0) < 1e-9);
    CHECK(std::abs(r.bhattacharyya - std::sqrt(0.5)) < 1e-9);
    CHECK(std::abs(r.hellinger_sq - (1.0 - std::sqrt(0.5))) < 1e-9);
}

TEST_CASE("divergences of identical laws vanish") {
    const DistributionPair pair(Distribution::uniform(0.0, 1.0),
                                Distribution::uniform(0.0, 1.0), "pp");
    const DivergenceReport r = divergences(pair);
    CHECK(std::abs(r.tv) < 1e-12);
    CHECK(std::abs(r.kl) < 1e-12);
    CHECK(std::abs(r.chi2) < 1e-12);
    CHECK(std::abs(r.hellinger_sq) < 1e-12);
    CHECK(std::abs(r.bhattacharyya - 1.0) < 1e-12);
}

TEST_CASE("gaussian shift divergences match closed forms") {
    const DivergenceReport r = divergences(named_pair("gaussian_shift", {1.0}));
    // KL = d^2/2, chi2 = e^{d^2} - 1, tv = 2 Phi(d/2) - 1 at d = 1
    CHECK(std::abs(r.kl - 0.5) < 1e-6);
    CHECK(std::abs(r.chi2 - (std::exp(1.0) - 1.0)) < 1e-6);
    CHECK(std::abs(r.tv - 0.38292492254802621) < 1e-6);
}

TEST_CASE("non-dominated pairs report infinite KL and chi2") {
    const DivergenceReport r = divergences(named_pair("disjoint_uniform", {}));
    CHECK(std::isinf(r.kl));
    CHECK(std::isinf(r.chi2));
    CHECK(std::abs(r.tv - 1.0) < 1e-9);
    CHECK(std::abs(r.bhattacharyya) < 1e-9);
}

TEST_CASE("divergence relations hold on 100 random discrete pairs") {
    Rng rng(20240901ULL);
    for (int rep = 0; rep < 100; ++rep) {
        const DistributionPair pair = random_discrete_pair(rng);
        const DivergenceReport r = divergences(pair);
        CAPTURE(rep);
        CHECK(r.kl <= std::log1p(r.chi2) + 1e-9);
        CHECK(std::log1p(r.chi2) <= r.chi2 + 1e-9);
        CHECK(std::abs(r.hellinger_sq - (1.0 - r.bhattacharyya)) < 1e-9);
        CHECK(r.hellinger_sq <= r.tv + 1e-9);
        CHECK(r.tv <= std::sqrt(2.0) * std::sqrt(r.hellinger_sq) + 1e-9);
    }
}

TEST_CASE("divergences are symmetric where the theory says so") {
    Rng rng(77ULL);
    for (int rep = 0; rep < 20; ++rep) {
        const DistributionPair pair = random_discrete_pair(rng);
        const DistributionPair flipped(pair.q(), pair.p(), "flipped");
        const DivergenceReport a = divergences(pair);
        const DivergenceReport b = divergences(flipped);
        CHECK(std::abs(a.tv - b.tv) < 1e-9);
        CHECK(std::abs(a.hellinger_sq - b.hellinger_sq) < 1e-9);
    }
}

TEST_CASE("discrete divergences agree with direct finite sums") {
    Rng rng(31337ULL);
    for (int rep = 0; rep < 20; ++rep) {
        const DistributionPair pair = random_discrete_pair(rng);
        double tv = 0.0, kl = 0.0, chi2 = 0.0, hell = 0.0, bc = 0.0;
        for (const Atom& a : pair.p().atoms()) {
            const double p = a.mass;
            const double q = pair.q().atom_mass_at(a.location);
            tv += 0.5 * std::abs(p - q);
            if (q > 0.0) kl += q * std::log(q / p);
            chi2 += (q - p) * (q - p) / p;
            hell += 0.5 * (std::sqrt(q) - std::sqrt(p)) * (std::sqrt(q) - std::sqrt(p));
            bc += std::sqrt(p * q);
        }
        const DivergenceReport r = divergences(pair);
        CHECK(std::abs(r.tv - tv) < 1e-12);
        CHECK(std::abs(r.kl - kl) < 1e-12);
        CHECK(std::abs(r.chi2 - chi2) < 1e-12);
        CHECK(std::abs(r.hellinger_sq - hell) < 1e-12);
        CHECK(std::abs(r.bhattacharyya - bc) < 1e-12);
    }
}

TEST_CASE("tv via density set: classical pair") {
    const DensitySetResult r = tv_via_density_set(named_pair("bernoulli_dirac", {0.5}));
    REQUIRE(r.set.atoms.size() == 1);
    CHECK(r.set.atoms[0] == 0.0);
    CHECK(r.set.intervals.empty());
    CHECK(std::abs(r.value - 0.5) < 1e-12);
}

TEST_CASE("tv via density set: identical laws give the empty set") {
    const DistributionPair pair(Distribution::uniform(0.0, 1.0),
                                Distribution::uniform(0.0, 1.0), "pp");
    const DensitySetResult r = tv_via_density_set(pair);
    CHECK(r.set.empty());
    CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("tv via density set: disjoint uniforms") {
    const DensitySetResult r = tv_via_density_set(named_pair("disjoint_uniform", {}));
    REQUIRE(r.set.intervals.size() == 1);
    CHECK(r.set.intervals[0].lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.set.intervals[0].hi == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(r.value - 1.0) < 1e-9);
}

TEST_CASE("tv via density set agrees with the integral route") {
    for (const char* name : {"gaussian_shift", "uniform_vs_prop3"}) {
        const DistributionPair pair =
            std::string(name) == "gaussian_shift" ? named_pair(name, {1.0})
                                                  : named_pair(name, {10});
        CAPTURE(name);
        const DivergenceReport r = divergences(pair);
        const DensitySetResult d = tv_via_density_set(pair);
        CHECK(std::abs(d.value - r.tv) < 1e-6);
    }
}

TEST_CASE("tv via density set enforces the interval budget") {
    // densities crossing on every one of ~100 alternating pieces
    std::vector<double> breaks;
    std::vector<double> vp, vq;
    const int pieces = 100;
    for (int i = 0; i <= pieces; ++i) breaks.push_back(i / static_cast<double>(pieces));
    for (int i = 0; i < pieces; ++i) {
        vp.push_back(i % 2 == 0 ? 1.5 : 0.5);
        vq.push_back(i % 2 == 0 ? 0.5 : 1.5);
    }
    const DistributionPair pair(
        Distribution::piecewise_constant(breaks, vp, "zigzag_p"),
        Distribution::piecewise_constant(breaks, vq, "zigzag_q"), "zigzag");
    CHECK_THROWS_AS(tv_via_density_set(pair, 16), std::runtime_error);
}

TEST_CASE("null witness set for non-dominated pairs") {
    const SetDescriptor a = null_witness_set(named_pair("disjoint_uniform", {}));
    const DistributionPair pair = named_pair("disjoint_uniform", {});
    CHECK(set_probability(pair.p(), a) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(set_probability(pair.q(), a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(null_witness_set(named_pair("bernoulli_dirac", {0.5})),
                    std::invalid_argument);
}
