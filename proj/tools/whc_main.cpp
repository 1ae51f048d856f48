// Command-line front end: instance generation, detection, divergence
// reports, threshold calculators and Monte Carlo risk sweeps.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "whc/detectors.hpp"
#include "whc/divergence.hpp"
#include "whc/graph.hpp"
#include "whc/json_writer.hpp"
#include "whc/risk.hpp"

namespace {

using namespace whc;

constexpr int kSchemaVersion = 1;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    os << text << '\n';
}

void write_verdict(JsonWriter& w, const TestVerdict& v) {
    w.key("detector").value(v.detector);
    w.key("decision").value(v.decision == Decision::reject_H0 ? "reject_H0" : "accept_H0");
    w.key("statistic").value(v.statistic);
    w.key("threshold").value(v.threshold);
    w.key("direction").value(v.direction == Direction::greater ? "greater" : "less");
    if (v.detector == "t1" || v.detector == "t2") {
        w.key("norm_converged").value(v.norm_converged);
    }
    if (v.witness_vertices) {
        w.key("witness_vertices").begin_array();
        for (int x : *v.witness_vertices) w.value(x);
        w.end_array();
    }
    if (v.witness_interval) {
        w.key("witness_interval").begin_array();
        w.value(v.witness_interval->first);
        w.value(v.witness_interval->second);
        w.end_array();
    }
}

void write_set(JsonWriter& w, const SetDescriptor& set) {
    w.begin_object();
    w.key("atoms").begin_array();
    for (double a : set.atoms) w.value(a);
    w.end_array();
    w.key("intervals").begin_array();
    for (const auto& iv : set.intervals) {
        w.begin_object();
        w.key("lo").value(iv.lo);
        w.key("hi").value(iv.hi);
        w.key("lo_closed").value(iv.lo_closed);
        w.key("hi_closed").value(iv.hi_closed);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

struct CommonOpts {
    std::string pair_spec;
    std::string out_path;
};

int cmd_generate(const std::string& pair_spec, int n, int k, std::uint64_t seed,
                 const std::string& out_path) {
    const DistributionPair pair = parse_pair_spec(pair_spec);
    const PlantedInstance inst = k > 0 ? sample_planted(n, k, pair, seed)
                                       : sample_null(n, pair.p(), seed);
    if (out_path.empty() || out_path == "-") {
        write_instance(inst, std::cout);
    } else {
        write_instance_file(inst, out_path);
        JsonWriter w;
        w.begin_object();
        w.key("schema").value(kSchemaVersion);
        w.key("command").value("generate");
        w.key("config").begin_object();
        w.key("pair").value(pair.name());
        w.key("n").value(n);
        w.key("k").value(k);
        w.key("seed").value(seed);
        w.key("out").value(out_path);
        w.end_object();
        w.key("hypothesis").value(inst.hypothesis == Hypothesis::H0 ? "H0" : "H1");
        w.key("edges").value(inst.graph.edge_count());
        w.end_object();
        std::cout << w.str() << '\n';
    }
    return 0;
}

int cmd_detect(const std::string& test, const std::string& in_path,
               const std::string& pair_spec, int k_flag, double delta,
               std::uint64_t budget, const std::string& out_path) {
    const PlantedInstance inst = read_instance_file(in_path);
    const DetectorKind kind = detector_from_name(test);
    std::optional<DistributionPair> pair;
    if (!pair_spec.empty()) pair = parse_pair_spec(pair_spec);

    int k = k_flag;
    if (k <= 0 && inst.hidden_set) k = static_cast<int>(inst.hidden_set->size());
    if (k <= 0 && (kind == DetectorKind::scan || kind == DetectorKind::lrt ||
                   kind == DetectorKind::interval)) {
        throw std::invalid_argument("detector '" + test +
                                    "' needs --k (instance file carries none)");
    }

    DetectorConfig config;
    config.kind = kind;
    config.delta = delta;
    config.budget = budget;

    // Resolve the derived set up front so it can be echoed.
    std::optional<SetDescriptor> derived_set;
    std::optional<double> p_mass, q_mass;
    if (kind == DetectorKind::support) {
        if (!pair) throw std::invalid_argument("detector 'support' needs --pair");
        derived_set = null_witness_set(*pair);
        config.set = derived_set;
        p_mass = set_probability(pair->p(), *derived_set);
        q_mass = set_probability(pair->q(), *derived_set);
    } else if (kind == DetectorKind::t1) {
        if (!pair) throw std::invalid_argument("detector 't1' needs --pair");
        const DensitySetResult dsr = tv_via_density_set(*pair);
        derived_set = dsr.set;
        config.set = derived_set;
        p_mass = dsr.p_mass;
        q_mass = dsr.q_mass;
    }

    const DetectorFn detector = make_detector(config, pair, k);
    const TestVerdict verdict = detector(inst);

    JsonWriter w;
    w.begin_object();
    w.key("schema").value(kSchemaVersion);
    w.key("command").value("detect");
    w.key("config").begin_object();
    w.key("test").value(test);
    w.key("in").value(in_path);
    if (pair) w.key("pair").value(pair->name());
    if (k > 0) w.key("k").value(k);
    if (kind == DetectorKind::t1 || kind == DetectorKind::t2) {
        w.key("delta").value(delta);
    }
    w.key("budget").value(budget);
    w.key("instance_seed").value(inst.seed);
    w.key("instance_hypothesis").value(inst.hypothesis == Hypothesis::H0 ? "H0" : "H1");
    w.end_object();
    if (derived_set) {
        w.key("set");
        write_set(w, *derived_set);
        w.key("set_p_mass").value(*p_mass);
        w.key("set_q_mass").value(*q_mass);
        w.key("set_separation").value(*p_mass - *q_mass);
    }
    write_verdict(w, verdict);
    w.end_object();
    emit(w.str(), out_path);
    return 0;
}

int cmd_divergence(const std::string& pair_spec, const std::string& out_path) {
    const DistributionPair pair = parse_pair_spec(pair_spec);
    const DivergenceReport rep = divergences(pair);
    const DensitySetResult dsr = tv_via_density_set(pair);
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(kSchemaVersion);
    w.key("command").value("divergence");
    w.key("config").begin_object();
    w.key("pair").value(pair.name());
    w.end_object();
    w.key("tv").value(rep.tv);
    w.key("kl").value(rep.kl);
    w.key("chi2").value(rep.chi2);
    w.key("hellinger_sq").value(rep.hellinger_sq);
    w.key("bhattacharyya").value(rep.bhattacharyya);
    w.key("rho").value(rep.rho);
    w.key("q_dominated_by_p").value(pair.q_dominated_by_p());
    w.key("tv_via_density_set").value(dsr.value);
    w.key("density_set");
    write_set(w, dsr.set);
    w.end_object();
    emit(w.str(), out_path);
    return 0;
}

int cmd_thresholds(const std::string& pair_spec, int n, double epsilon, double delta,
                   double fallback_c, const std::string& out_path) {
    const DistributionPair pair = parse_pair_spec(pair_spec);
    const ThresholdReport r = thresholds(n, pair, epsilon, delta, fallback_c);
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(kSchemaVersion);
    w.key("command").value("thresholds");
    w.key("config").begin_object();
    w.key("pair").value(pair.name());
    w.key("n").value(n);
    w.key("epsilon").value(epsilon);
    w.key("delta").value(delta);
    w.key("fallback_c").value(fallback_c);
    w.end_object();
    w.key("kl").value(r.kl);
    w.key("tv").value(r.tv);
    w.key("rho").value(r.rho);
    w.key("kl_threshold_k").value(r.kl_threshold_k);
    w.key("kl_fallback").value(r.kl_fallback);
    w.key("omega_n").value(r.omega_n);
    w.key("chi2_indist_k").value(r.chi2_indist_k);
    w.key("spectral_norm_threshold_T1").value(r.spectral_norm_threshold_T1);
    w.key("spectral_norm_threshold_T2").value(r.spectral_norm_threshold_T2);
    w.key("spectral_k_T1").value(r.spectral_k_T1);
    w.key("spectral_k_T2").value(r.spectral_k_T2);
    w.key("bc_risk_lower_bound").value(r.bc_risk_lower_bound);
    w.key("bc_bound_k").value(r.bc_bound_k);
    w.key("note").value(
        "spectral_k thresholds take the (1+o(1)) factor as 1; sweep over k to "
        "find the smallest empirically detecting size");
    w.end_object();
    emit(w.str(), out_path);
    return 0;
}

void write_risk_fields(JsonWriter& w, const RiskEstimate& est) {
    w.key("type1").value(est.type1);
    w.key("type2").value(est.type2);
    w.key("risk").value(est.risk);
    w.key("trials_per_hypothesis").value(est.trials_per_hypothesis);
    w.key("ci95_halfwidth").value(est.ci95_halfwidth);
    w.key("base_seed").value(est.base_seed);
    w.key("null_failures").value(est.null_failures);
    w.key("planted_failures").value(est.planted_failures);
}

int cmd_risk(const std::string& test, const std::string& pair_spec, int n, int k,
             int trials, std::uint64_t seed, double delta, std::uint64_t budget,
             int threads, const std::string& out_path) {
    const DistributionPair pair = parse_pair_spec(pair_spec);
    DetectorConfig config;
    config.kind = detector_from_name(test);
    config.delta = delta;
    config.budget = budget;
    const DetectorFn detector = make_detector(config, pair, k);
    const RiskEstimate est = estimate_risk(detector, n, k, pair, trials, seed, threads);
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(kSchemaVersion);
    w.key("command").value("risk");
    w.key("config").begin_object();
    w.key("test").value(test);
    w.key("pair").value(pair.name());
    w.key("n").value(n);
    w.key("k").value(k);
    w.key("trials").value(trials);
    w.key("seed").value(seed);
    w.key("delta").value(delta);
    w.key("budget").value(budget);
    w.end_object();
    write_risk_fields(w, est);
    w.end_object();
    emit(w.str(), out_path);
    return 0;
}

int cmd_sweep(const std::string& tests_csv, const std::string& pair_spec, int n,
              const std::string& k_range, int trials, std::uint64_t seed, double delta,
              std::uint64_t budget, int threads, const std::string& out_path) {
    const DistributionPair pair = parse_pair_spec(pair_spec);
    std::vector<std::string> tests;
    {
        std::stringstream ss(tests_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) tests.push_back(tok);
        }
    }
    if (tests.empty()) throw std::invalid_argument("sweep: no tests given");
    int k_lo = 0, k_hi = 0, k_step = 1;
    {
        char c1 = 0, c2 = 0;
        std::stringstream ss(k_range);
        if (!(ss >> k_lo >> c1 >> k_hi) || c1 != ':') {
            throw std::invalid_argument("sweep: --k-range must be a:b or a:b:step");
        }
        if (ss >> c2 >> k_step) {
            if (c2 != ':' || k_step < 1) {
                throw std::invalid_argument("sweep: bad --k-range step");
            }
        }
    }
    std::ostringstream csv;
    csv << "# schema=" << kSchemaVersion << " command=sweep pair=" << pair.name()
        << " n=" << n << " k_range=" << k_range << " trials=" << trials
        << " seed=" << seed << " delta=" << delta << "\n";
    csv << "n,k,test,type1,type2,risk,ci95\n";
    char buf[64];
    for (int k = k_lo; k <= k_hi; k += k_step) {
        for (const std::string& test : tests) {
            DetectorConfig config;
            config.kind = detector_from_name(test);
            config.delta = delta;
            config.budget = budget;
            const DetectorFn detector = make_detector(config, pair, k);
            const std::uint64_t row_seed =
                derive_seed(seed, 0x73776565ULL, static_cast<std::uint64_t>(k));
            const RiskEstimate est =
                estimate_risk(detector, n, k, pair, trials, row_seed, threads);
            csv << n << ',' << k << ',' << test << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", est.type1);
            csv << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", est.type2);
            csv << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", est.risk);
            csv << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", est.ci95_halfwidth);
            csv << buf << '\n';
        }
    }
    std::string text = csv.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    emit(text, out_path);
    return 0;
}

int cmd_selfcheck(const std::string& out_path) {
    struct Check {
        std::string name;
        bool ok;
        std::string note;
    };
    std::vector<Check> checks;
    auto run = [&](const std::string& name, auto&& fn) {
        try {
            fn();
            checks.push_back({name, true, ""});
        } catch (const std::exception& ex) {
            checks.push_back({name, false, ex.what()});
        }
    };
    auto expect = [](bool cond, const std::string& msg) {
        if (!cond) throw std::runtime_error(msg);
    };

    run("divergence_closed_forms", [&] {
        const DivergenceReport r = divergences(named_pair("bernoulli_dirac", {0.5}));
        expect(std::abs(r.tv - 0.5) < 1e-9, "tv");
        expect(std::abs(r.kl - std::log(2.0)) < 1e-9, "kl");
        expect(std::abs(r.chi2 - 1.0) < 1e-9, "chi2");
        expect(std::abs(r.bhattacharyya - std::sqrt(0.5)) < 1e-9, "bc");
    });
    run("divergence_inequalities_random_pairs", [&] {
        Rng rng(20240901ULL);
        for (int rep = 0; rep < 100; ++rep) {
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
            for (auto& a : pa) a.mass /= ps;
            for (auto& a : qa) a.mass /= qs;
            const DistributionPair pair(
                Distribution::mixed(pa, std::nullopt, "p"),
                Distribution::mixed(qa, std::nullopt, "q"), "random");
            const DivergenceReport r = divergences(pair);
            expect(r.kl <= std::log1p(r.chi2) + 1e-9, "kl <= log(1+chi2)");
            expect(std::log1p(r.chi2) <= r.chi2 + 1e-9, "log(1+chi2) <= chi2");
            expect(std::abs(r.hellinger_sq - (1.0 - r.bhattacharyya)) < 1e-9, "H2=1-BC");
            expect(r.hellinger_sq <= r.tv + 1e-9, "H2 <= tv");
            expect(r.tv <= std::sqrt(2.0 * r.hellinger_sq) + 1e-9, "tv <= sqrt(2)H");
        }
    });
    run("lrt_null_expectation_is_one", [&] {
        // E0[L] over the full binary outcome space at n=5, k=2.
        const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
        const int n = 5, k = 2;
        const std::size_t m = 10;
        double e0l = 0.0;
        for (std::size_t mask = 0; mask < (1u << m); ++mask) {
            WeightedGraph g(n);
            auto w = g.packed();
            for (std::size_t e = 0; e < m; ++e) w[e] = (mask >> e) & 1 ? 1.0 : 0.0;
            const TestVerdict v = exact_lrt(g, pair, k);
            const double l = std::isinf(v.statistic)
                                 ? (v.statistic > 0 ? HUGE_VAL : 0.0)
                                 : std::exp(v.statistic);
            e0l += std::ldexp(l, -static_cast<int>(m));
        }
        expect(std::abs(e0l - 1.0) < 1e-12, "E0[L] != 1");
    });
    run("second_moment_matches_brute_force", [&] {
        const int n = 5, k = 2;
        const std::size_t m = 10;
        const DistributionPair pair = named_pair("bernoulli_dirac", {0.5});
        double e0l2 = 0.0;
        for (std::size_t mask = 0; mask < (1u << m); ++mask) {
            WeightedGraph g(n);
            auto w = g.packed();
            for (std::size_t e = 0; e < m; ++e) w[e] = (mask >> e) & 1 ? 1.0 : 0.0;
            const TestVerdict v = exact_lrt(g, pair, k);
            const double l = std::isinf(v.statistic) ? 0.0 : std::exp(v.statistic);
            e0l2 += std::ldexp(l * l, -static_cast<int>(m));
        }
        const SecondMoment sm = second_moment(n, k, 2.0);
        expect(std::abs(sm.e_l2 - e0l2) < 1e-10, "closed form != enumeration");
    });
    run("exact_lrt_risk_identities", [&] {
        const ExactLrtRisk r = exact_lrt_risk(4, 2, named_pair("bernoulli_dirac", {0.5}));
        expect(std::abs(r.risk - (1.0 - r.half_e_abs)) < 1e-12, "tv identity");
        const double lower = 1.0 - std::sqrt(std::max(0.0, 1.0 - r.e_sqrt * r.e_sqrt));
        expect(lower <= r.risk + 1e-12, "sandwich lower");
        expect(r.risk <= r.e_sqrt + 1e-12, "sandwich upper");
    });

    JsonWriter w;
    w.begin_object();
    w.key("schema").value(kSchemaVersion);
    w.key("command").value("selfcheck");
    bool all_ok = true;
    w.key("checks").begin_array();
    for (const Check& c : checks) {
        w.begin_object();
        w.key("name").value(c.name);
        w.key("ok").value(c.ok);
        if (!c.note.empty()) w.key("note").value(c.note);
        w.end_object();
        all_ok = all_ok && c.ok;
    }
    w.end_array();
    w.key("ok").value(all_ok);
    w.end_object();
    emit(w.str(), out_path);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted hidden clique detection toolkit"};
    app.require_subcommand(1);

    std::string pair_spec, out_path, in_path, test, k_range, tests_csv;
    int n = 0, k = 0, trials = 1000, threads = 0;
    std::uint64_t seed = 0, budget = kDefaultEnumBudget;
    double delta = 0.1, epsilon = 1.0, fallback_c = 1.0;

    auto* gen = app.add_subcommand("generate", "sample an instance and write it to a file");
    gen->add_option("--pair", pair_spec, "pair spec, e.g. bernoulli_dirac:0.5")->required();
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--k", k, "planted size; 0 or absent samples the null model");
    gen->add_option("--seed", seed, "instance seed");
    gen->add_option("--out", out_path, "output path ('-' for stdout)");

    auto* det = app.add_subcommand("detect", "run one detector on an instance file");
    det->add_option("--test", test, "support|scan|t1|t2|interval|min|lrt")->required();
    det->add_option("--in", in_path, "instance file")->required();
    det->add_option("--pair", pair_spec, "pair spec (required by most tests)");
    det->add_option("--k", k, "subset size (defaults to the file's k)");
    det->add_option("--delta", delta, "risk budget for the spectral tests");
    det->add_option("--budget", budget, "subset enumeration budget");
    det->add_option("--out", out_path, "output path (default stdout)");

    auto* divc = app.add_subcommand("divergence", "divergence report for a pair");
    divc->add_option("--pair", pair_spec, "pair spec")->required();
    divc->add_option("--out", out_path, "output path (default stdout)");

    auto* thr = app.add_subcommand("thresholds", "threshold calculators for a pair");
    thr->add_option("--pair", pair_spec, "pair spec")->required();
    thr->add_option("--n", n, "vertex count")->required();
    thr->add_option("--epsilon", epsilon, "slack epsilon");
    thr->add_option("--delta", delta, "spectral risk budget");
    thr->add_option("--fallback-c", fallback_c, "constant for k = c log n when KL is infinite");
    thr->add_option("--out", out_path, "output path (default stdout)");

    auto* rsk = app.add_subcommand("risk", "Monte Carlo risk estimate for one detector");
    rsk->add_option("--test", test, "detector name")->required();
    rsk->add_option("--pair", pair_spec, "pair spec")->required();
    rsk->add_option("--n", n, "vertex count")->required();
    rsk->add_option("--k", k, "planted size")->required();
    rsk->add_option("--trials", trials, "trials per hypothesis");
    rsk->add_option("--seed", seed, "base seed");
    rsk->add_option("--delta", delta, "risk budget for the spectral tests");
    rsk->add_option("--budget", budget, "subset enumeration budget");
    rsk->add_option("--threads", threads, "worker threads (0 = auto)");
    rsk->add_option("--out", out_path, "output path (default stdout)");

    auto* swp = app.add_subcommand("sweep", "risk sweep over k, CSV output");
    swp->add_option("--test", tests_csv, "detector name(s), comma separated")->required();
    swp->add_option("--pair", pair_spec, "pair spec")->required();
    swp->add_option("--n", n, "vertex count")->required();
    swp->add_option("--k-range", k_range, "a:b or a:b:step")->required();
    swp->add_option("--trials", trials, "trials per hypothesis");
    swp->add_option("--seed", seed, "base seed");
    swp->add_option("--delta", delta, "risk budget for the spectral tests");
    swp->add_option("--budget", budget, "subset enumeration budget");
    swp->add_option("--threads", threads, "worker threads (0 = auto)");
    swp->add_option("--out", out_path, "output path (default stdout)");

    auto* self = app.add_subcommand("selfcheck", "run the built-in oracle suites");
    self->add_option("--out", out_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(pair_spec, n, k, seed, out_path);
        if (det->parsed())
            return cmd_detect(test, in_path, pair_spec, k, delta, budget, out_path);
        if (divc->parsed()) return cmd_divergence(pair_spec, out_path);
        if (thr->parsed())
            return cmd_thresholds(pair_spec, n, epsilon, delta, fallback_c, out_path);
        if (rsk->parsed())
            return cmd_risk(test, pair_spec, n, k, trials, seed, delta, budget, threads,
                            out_path);
        if (swp->parsed())
            return cmd_sweep(tests_csv, pair_spec, n, k_range, trials, seed, delta,
                             budget, threads, out_path);
        if (self->parsed()) return cmd_selfcheck(out_path);
    } catch (const std::exception& ex) {
        JsonWriter w;
        w.begin_object();
        w.key("schema").value(kSchemaVersion);
        w.key("error").value(ex.what());
        w.end_object();
        std::cout << w.str() << '\n';
        return 1;
    }
    return 0;
}
