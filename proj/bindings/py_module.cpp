// pybind11 surface: samplers, detectors, divergences, thresholds and the
// Monte Carlo risk harness.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "whc/detectors.hpp"
#include "whc/divergence.hpp"
#include "whc/graph.hpp"
#include "whc/risk.hpp"

namespace py = pybind11;
using namespace whc;

namespace {

py::dict verdict_to_dict(const TestVerdict& v) {
    py::dict d;
    d["detector"] = v.detector;
    d["decision"] = v.decision == Decision::reject_H0 ? "reject_H0" : "accept_H0";
    d["statistic"] = v.statistic;
    d["threshold"] = v.threshold;
    d["direction"] = v.direction == Direction::greater ? "greater" : "less";
    if (v.witness_vertices) d["witness_vertices"] = *v.witness_vertices;
    if (v.witness_interval) {
        d["witness_interval"] = py::make_tuple(v.witness_interval->first,
                                               v.witness_interval->second);
    }
    d["norm_converged"] = v.norm_converged;
    return d;
}

py::dict divergences_dict(const DistributionPair& pair) {
    const DivergenceReport r = divergences(pair);
    py::dict d;
    d["tv"] = r.tv;
    d["kl"] = r.kl;
    d["chi2"] = r.chi2;
    d["hellinger_sq"] = r.hellinger_sq;
    d["bhattacharyya"] = r.bhattacharyya;
    d["rho"] = r.rho;
    return d;
}

py::array_t<double> instance_matrix(const PlantedInstance& inst) {
    const int n = inst.graph.vertex_count();
    py::array_t<double> out({n, n});
    auto m = out.mutable_unchecked<2>();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = i == j ? 0.0 : inst.graph.weight(i, j);
        }
    }
    return out;
}

TestVerdict run_detector(const PlantedInstance& inst, const std::string& test,
                         const std::optional<DistributionPair>& pair, int k,
                         double delta, std::uint64_t budget) {
    DetectorConfig config;
    config.kind = detector_from_name(test);
    config.delta = delta;
    config.budget = budget;
    return make_detector(config, pair, k)(inst);
}

}  // namespace

PYBIND11_MODULE(whclique, m) {
    m.doc() = "weighted hidden clique detection: samplers, tests, divergences, risk";

    py::class_<Distribution>(m, "Distribution")
        .def_property_readonly("mean", &Distribution::mean)
        .def_property_readonly("label", &Distribution::label)
        .def("cdf", &Distribution::cdf, py::arg("x"))
        .def(
            "sample",
            [](const Distribution& d, std::uint64_t seed, std::size_t count) {
                Rng rng(splitmix64(seed));
                py::array_t<double> out(count);
                auto v = out.mutable_unchecked<1>();
                for (std::size_t i = 0; i < count; ++i) v(i) = d.sample(rng);
                return out;
            },
            py::arg("seed"), py::arg("count") = 1)
        .def("__repr__",
             [](const Distribution& d) { return "Distribution(" + d.label() + ")"; });

    m.def("dirac", &Distribution::dirac, py::arg("x"));
    m.def("bernoulli", &Distribution::bernoulli, py::arg("p"));
    m.def("uniform", &Distribution::uniform, py::arg("a"), py::arg("b"));
    m.def("gaussian", &Distribution::gaussian, py::arg("mean"), py::arg("stddev") = 1.0);
    m.def("prop3_density", &build_prop3_density, py::arg("kprime"), py::arg("depth"));

    py::class_<DistributionPair>(m, "DistributionPair")
        .def(py::init<Distribution, Distribution, std::string>(), py::arg("p"),
             py::arg("q"), py::arg("name") = "")
        .def_property_readonly("p", &DistributionPair::p)
        .def_property_readonly("q", &DistributionPair::q)
        .def_property_readonly("name", &DistributionPair::name)
        .def_property_readonly("q_dominated_by_p", &DistributionPair::q_dominated_by_p)
        .def("log_ratio", &DistributionPair::log_ratio, py::arg("x"))
        .def("__repr__", [](const DistributionPair& p) {
            return "DistributionPair(" + p.name() + ")";
        });

    m.def("named_pair",
          py::overload_cast<const std::string&, const std::vector<double>&>(&named_pair),
          py::arg("name"), py::arg("params") = std::vector<double>{});
    m.def("parse_pair_spec", &parse_pair_spec, py::arg("spec"));

    m.def("divergences", &divergences_dict, py::arg("pair"));
    m.def(
        "tv_via_density_set",
        [](const DistributionPair& pair, int interval_budget) {
            const DensitySetResult r = tv_via_density_set(pair, interval_budget);
            py::dict d;
            d["value"] = r.value;
            d["p_mass"] = r.p_mass;
            d["q_mass"] = r.q_mass;
            d["atoms"] = r.set.atoms;
            py::list ivs;
            for (const auto& iv : r.set.intervals) {
                ivs.append(py::make_tuple(iv.lo, iv.hi, iv.lo_closed, iv.hi_closed));
            }
            d["intervals"] = ivs;
            return d;
        },
        py::arg("pair"), py::arg("interval_budget") = 64);

    py::class_<PlantedInstance>(m, "Instance")
        .def_property_readonly(
            "n", [](const PlantedInstance& i) { return i.graph.vertex_count(); })
        .def_property_readonly("hypothesis",
                               [](const PlantedInstance& i) {
                                   return i.hypothesis == Hypothesis::H0 ? "H0" : "H1";
                               })
        .def_property_readonly("hidden_set",
                               [](const PlantedInstance& i) -> py::object {
                                   if (!i.hidden_set) return py::none();
                                   return py::cast(*i.hidden_set);
                               })
        .def_property_readonly("seed",
                               [](const PlantedInstance& i) { return i.seed; })
        .def("matrix", &instance_matrix)
        .def("write", [](const PlantedInstance& i, const std::string& path) {
            write_instance_file(i, path);
        });

    m.def("sample_null", &sample_null, py::arg("n"), py::arg("p"), py::arg("seed"));
    m.def("sample_planted", &sample_planted, py::arg("n"), py::arg("k"), py::arg("pair"),
          py::arg("seed"));
    m.def("read_instance", &read_instance_file, py::arg("path"));

    m.def(
        "detect",
        [](const PlantedInstance& inst, const std::string& test,
           const std::optional<DistributionPair>& pair, int k, double delta,
           std::uint64_t budget) {
            return verdict_to_dict(run_detector(inst, test, pair, k, delta, budget));
        },
        py::arg("instance"), py::arg("test"), py::arg("pair") = py::none(),
        py::arg("k") = 0, py::arg("delta") = 0.1,
        py::arg("budget") = kDefaultEnumBudget);

    m.def(
        "estimate_risk",
        [](const std::string& test, int n, int k, const DistributionPair& pair,
           int trials, std::uint64_t seed, double delta, std::uint64_t budget,
           int threads) {
            DetectorConfig config;
            config.kind = detector_from_name(test);
            config.delta = delta;
            config.budget = budget;
            const RiskEstimate est =
                estimate_risk(make_detector(config, pair, k), n, k, pair, trials, seed,
                              threads);
            py::dict d;
            d["type1"] = est.type1;
            d["type2"] = est.type2;
            d["risk"] = est.risk;
            d["trials_per_hypothesis"] = est.trials_per_hypothesis;
            d["ci95_halfwidth"] = est.ci95_halfwidth;
            d["base_seed"] = est.base_seed;
            d["null_failures"] = est.null_failures;
            d["planted_failures"] = est.planted_failures;
            return d;
        },
        py::arg("test"), py::arg("n"), py::arg("k"), py::arg("pair"), py::arg("trials"),
        py::arg("seed"), py::arg("delta") = 0.1, py::arg("budget") = kDefaultEnumBudget,
        py::arg("threads") = 0);

    m.def(
        "exact_lrt_risk",
        [](int n, int k, const DistributionPair& pair, std::uint64_t budget) {
            const ExactLrtRisk r = exact_lrt_risk(n, k, pair, budget);
            py::dict d;
            d["risk"] = r.risk;
            d["half_e_abs"] = r.half_e_abs;
            d["e_sqrt"] = r.e_sqrt;
            return d;
        },
        py::arg("n"), py::arg("k"), py::arg("pair"),
        py::arg("budget") = kDefaultEnumBudget);

    m.def(
        "second_moment",
        [](int n, int k, double rho) {
            const SecondMoment sm = second_moment(n, k, rho);
            py::dict d;
            d["e_l2"] = sm.e_l2;
            d["tail_bound"] = sm.tail_bound;
            d["risk_lower_bound"] = sm.risk_lower_bound;
            return d;
        },
        py::arg("n"), py::arg("k"), py::arg("rho"));

    m.def(
        "thresholds",
        [](int n, const DistributionPair& pair, double epsilon, double delta,
           double fallback_c) {
            const ThresholdReport r = thresholds(n, pair, epsilon, delta, fallback_c);
            py::dict d;
            d["kl"] = r.kl;
            d["tv"] = r.tv;
            d["rho"] = r.rho;
            d["kl_threshold_k"] = r.kl_threshold_k;
            d["kl_fallback"] = r.kl_fallback;
            d["omega_n"] = r.omega_n;
            d["chi2_indist_k"] = r.chi2_indist_k;
            d["spectral_norm_threshold_T1"] = r.spectral_norm_threshold_T1;
            d["spectral_norm_threshold_T2"] = r.spectral_norm_threshold_T2;
            d["spectral_k_T1"] = r.spectral_k_T1;
            d["spectral_k_T2"] = r.spectral_k_T2;
            d["bc_risk_lower_bound"] = r.bc_risk_lower_bound;
            d["bc_bound_k"] = r.bc_bound_k;
            return d;
        },
        py::arg("n"), py::arg("pair"), py::arg("epsilon") = 1.0, py::arg("delta") = 0.1,
        py::arg("fallback_c") = 1.0);

    m.def("bc_risk_lower_bound", &bc_risk_lower_bound, py::arg("k"), py::arg("pair"));

    m.def(
        "operator_norm",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> matrix,
           double rel_tol) {
            if (matrix.ndim() != 2 || matrix.shape(0) != matrix.shape(1)) {
                throw std::invalid_argument("operator_norm: need a square 2-D array");
            }
            const int n = static_cast<int>(matrix.shape(0));
            std::vector<double> rowmajor(static_cast<std::size_t>(n) * n);
            std::copy(matrix.data(), matrix.data() + rowmajor.size(), rowmajor.begin());
            linalg::NormOptions opts;
            opts.rel_tol = rel_tol;
            const linalg::NormResult r = linalg::operator_norm_dense(rowmajor, n, opts);
            py::dict d;
            d["value"] = r.value;
            d["matvecs"] = r.matvecs;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("matrix"), py::arg("rel_tol") = 1e-8);
}
