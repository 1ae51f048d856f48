#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "whc/risk.hpp"

using namespace whc;

namespace {

TestVerdict fixed_verdict(Decision d) {
    TestVerdict v;
    v.decision = d;
    v.statistic = d == Decision::reject_H0 ? 1.0 : 0.0;
    v.threshold = 0.5;
    v.detector = "fixed";
    return v;
}

}  // namespace

TEST_CASE("estimate_risk on an always-accept detector") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    const RiskEstimate est = estimate_risk(
        [](const PlantedInstance&) { return fixed_verdict(Decision::accept_H0); }, 10, 3,
        pair, 500, 1);
    CHECK(est.type1 == 0.0);
    CHECK(est.type2 == 1.0);
    CHECK(est.risk == 1.0);
}

TEST_CASE("estimate_risk on a seeded coin flip sits near risk one") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    const DetectorFn coin = [](const PlantedInstance& inst) {
        Rng rng(splitmix64(inst.seed ^ 0xc01uLL));
        return fixed_verdict(rng.uniform() < 0.5 ? Decision::reject_H0
                                                 : Decision::accept_H0);
    };
    const RiskEstimate est = estimate_risk(coin, 8, 3, pair, 4000, 7);
    CHECK(std::abs(est.risk - 1.0) <= 3.0 * est.ci95_halfwidth);
}

TEST_CASE("estimate_risk is deterministic and thread-count independent") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    DetectorConfig config;
    config.kind = DetectorKind::lrt;
    const DetectorFn detector = make_detector(config, pair, 3);
    const RiskEstimate one = estimate_risk(detector, 8, 3, pair, 300, 42, 1);
    const RiskEstimate two = estimate_risk(detector, 8, 3, pair, 300, 42, 2);
    const RiskEstimate four = estimate_risk(detector, 8, 3, pair, 300, 42, 4);
    CHECK(one.type1 == two.type1);
    CHECK(one.type2 == two.type2);
    CHECK(one.type1 == four.type1);
    CHECK(one.type2 == four.type2);
}

TEST_CASE("estimate_risk counts detector failures per trial") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    int calls = 0;
    const DetectorFn flaky = [&calls](const PlantedInstance&) -> TestVerdict {
        throw std::runtime_error("boom");
    };
    (void)calls;
    const RiskEstimate est = estimate_risk(flaky, 6, 3, pair, 50, 3, 1);
    CHECK(est.null_failures == 50);
    CHECK(est.planted_failures == 50);
    CHECK(est.type1 == 0.0);
    CHECK(est.type2 == 0.0);
}

TEST_CASE("min test empirical null rate at n=20 via the harness") {
    const DistributionPair pair(Distribution::uniform(0.0, 1.0),
                                Distribution::uniform(0.0, 1.0), "unif");
    DetectorConfig config;
    config.kind = DetectorKind::min;
    const DetectorFn detector = make_detector(config, std::nullopt, 0);
    const RiskEstimate est = estimate_risk(detector, 20, 2, pair, 20000, 123);
    const double exact = 1.0 - std::pow(1.0 - std::ldexp(1.0, -20), 190.0);
    const double se = std::sqrt(exact * (1.0 - exact) / 20000.0);
    CHECK(std::abs(est.type1 - exact) <= 3.0 * se);
}

TEST_CASE("exact lrt risk of identical laws is one") {
    const DistributionPair pair(Distribution::bernoulli(0.5),
                                Distribution::bernoulli(0.5), "pp");
    const ExactLrtRisk r = exact_lrt_risk(4, 2, pair);
    CHECK(r.risk == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.half_e_abs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.e_sqrt == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact lrt risk matches a from-scratch enumeration at n=4,k=2") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    // independent oracle: 2^6 outcomes, L = (1/6) * sum over edges of 2 * 1{x_e = 1}
    double risk = 0.0, e_abs = 0.0, e_sqrt = 0.0;
    for (int mask = 0; mask < 64; ++mask) {
        const double p0 = 1.0 / 64.0;
        double sum = 0.0;
        for (int e = 0; e < 6; ++e) sum += (mask >> e) & 1 ? 2.0 : 0.0;
        const double l = sum / 6.0;
        double p1 = p0 * l;
        risk += l > 1.0 ? p0 : p1;
        e_abs += p0 * std::abs(l - 1.0);
        e_sqrt += p0 * std::sqrt(l);
    }
    const ExactLrtRisk r = exact_lrt_risk(4, 2, pair);
    CHECK(r.risk == doctest::Approx(risk).epsilon(1e-12));
    CHECK(r.half_e_abs == doctest::Approx(0.5 * e_abs).epsilon(1e-12));
    CHECK(r.e_sqrt == doctest::Approx(e_sqrt).epsilon(1e-12));
}

TEST_CASE("exact lrt risk obeys the root-likelihood sandwich") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    for (int n : {4, 5, 6}) {
        const ExactLrtRisk r = exact_lrt_risk(n, 2, pair);
        const double lower = 1.0 - std::sqrt(std::max(0.0, 1.0 - r.e_sqrt * r.e_sqrt));
        CHECK(lower <= r.risk + 1e-12);
        CHECK(r.risk <= r.e_sqrt + 1e-12);
    }
}

TEST_CASE("exact lrt risk input validation") {
    const DistributionPair cont = named_pair("gaussian_shift", {1.0});
    CHECK_THROWS_AS(exact_lrt_risk(4, 2, cont), std::invalid_argument);
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    CHECK_THROWS_AS(exact_lrt_risk(30, 3, pair), budget_error);
}

TEST_CASE("second moment closed form: rho = 1 collapses by Vandermonde") {
    const SecondMoment sm = second_moment(7, 3, 1.0);
    CHECK(sm.e_l2 == doctest::Approx(1.0).epsilon(1e-12));
    // 1 - C(4,3)/C(7,3) = 31/35
    CHECK(sm.tail_bound == doctest::Approx(1.0 - 4.0 / 35.0).epsilon(1e-12));
}

TEST_CASE("second moment closed form: k = n keeps a single subset") {
    const SecondMoment sm = second_moment(5, 5, 2.0);
    CHECK(sm.e_l2 == doctest::Approx(std::pow(2.0, 10.0)).epsilon(1e-12));
}

TEST_CASE("second moment matches brute force at n=7,k=3,rho=2") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    const oracle::NullMoments m = oracle::null_moments_binary(7, 3, pair);
    const SecondMoment sm = second_moment(7, 3, 2.0);
    CHECK(std::abs(sm.e_l2 - m.e_l2) < 1e-10);
}

TEST_CASE("second moment rejects rho below one") {
    CHECK_THROWS_AS(second_moment(6, 3, 0.5), std::invalid_argument);
}

TEST_CASE("threshold report on the classical pair at n=1024") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    const ThresholdReport r = thresholds(1024, pair, 1.0, 0.1);
    CHECK(r.rho == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.omega_n == doctest::Approx(15.241533892003202).epsilon(1e-9));
    CHECK(r.chi2_indist_k == 14);
    // (2 + 1) log(1024) / log 2 = 30
    CHECK(r.kl_threshold_k == doctest::Approx(30.0).epsilon(1e-9));
    CHECK_FALSE(r.kl_fallback);
}

TEST_CASE("threshold report spectral entries at n=4096") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    const ThresholdReport r = thresholds(4096, pair, 1.0, 0.1);
    const double base = 4.0 * std::sqrt(4096.0 * std::log(9.0) + std::log(40.0));
    CHECK(r.spectral_norm_threshold_T2 == doctest::Approx(base).epsilon(1e-12));
    CHECK(r.spectral_k_T2 == doctest::Approx(base / 0.5).epsilon(1e-12));
    CHECK(r.spectral_k_T1 == doctest::Approx(base / 0.5).epsilon(1e-9));  // tv = 1/2
}

TEST_CASE("threshold report falls back when KL is infinite") {
    const DistributionPair pair = named_pair("disjoint_uniform", {});
    const ThresholdReport r = thresholds(100, pair, 0.5, 0.1, 2.0);
    CHECK(r.kl_fallback);
    CHECK(r.kl_threshold_k == doctest::Approx(2.0 * std::log(100.0)).epsilon(1e-12));
    CHECK(r.omega_n == doctest::Approx(-1.0));  // rho = inf limit
}

TEST_CASE("threshold report on unbounded supports marks T2 unusable") {
    const DistributionPair pair = named_pair("gaussian_shift", {1.0});
    const ThresholdReport r = thresholds(64, pair, 0.5, 0.1);
    CHECK(std::isinf(r.spectral_k_T2));
    CHECK(std::isfinite(r.spectral_k_T1));
}

TEST_CASE("thresholds reject degenerate pairs") {
    const DistributionPair pair(Distribution::bernoulli(0.5),
                                Distribution::bernoulli(0.5), "pp");
    CHECK_THROWS_AS(thresholds(100, pair, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("bc risk lower bound") {
    const DistributionPair same(Distribution::bernoulli(0.5),
                                Distribution::bernoulli(0.5), "pp");
    CHECK(bc_risk_lower_bound(2, same) == doctest::Approx(1.0).epsilon(1e-9));
    const DistributionPair disjoint = named_pair("disjoint_uniform", {});
    CHECK(bc_risk_lower_bound(2, disjoint) == doctest::Approx(0.0).epsilon(1e-9));
    const DistributionPair classic = named_pair("bernoulli_dirac", {0.5});
    CHECK(bc_risk_lower_bound(3, classic) ==
          doctest::Approx(0.064585653306514654).epsilon(1e-9));
    CHECK_THROWS_AS(bc_risk_lower_bound(1, classic), std::invalid_argument);
}

TEST_CASE("lrt risk lower-bounds the other detectors on a tiny grid") {
    const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
    const int n = 6, k = 3, trials = 2000;
    const ExactLrtRisk star = exact_lrt_risk(n, k, pair);
    for (DetectorKind kind : {DetectorKind::scan, DetectorKind::min, DetectorKind::t2}) {
        DetectorConfig config;
        config.kind = kind;
        const DetectorFn detector = make_detector(config, pair, k);
        const RiskEstimate est = estimate_risk(detector, n, k, pair, trials, 2024);
        const double se = est.ci95_halfwidth / 1.96;
        CAPTURE(detector_name(kind));
        CHECK(est.risk >= star.risk - 3.0 * se - 1e-9);
    }
}
