#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "comomab/config.hpp"
#include "comomab/envs.hpp"
#include "comomab/pareto.hpp"
#include "comomab/results.hpp"
#include "comomab/simkit.hpp"

namespace py = pybind11;
using namespace comomab;

namespace {

std::vector<RewardVector> to_vectors(const std::vector<std::vector<double>>& rows) {
    std::vector<RewardVector> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(r);
    return out;
}

std::vector<std::vector<double>> from_vectors(const std::vector<RewardVector>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.to_vector());
    return out;
}

py::dict environment_info(const Environment& env) {
    const RegretOracle o = build_oracle(env);
    const auto& a = *env.action_set();
    py::dict d;
    d["kind"] = std::string(env.kind());
    d["actions"] = a.size();
    d["arms"] = a.n_arms();
    d["max_support"] = a.max_support();
    d["dimension"] = a.dimension();
    d["max_weight"] = a.max_weight();
    d["action_means"] = from_vectors(o.action_means);
    d["spf"] = o.gaps.spf_indices;
    d["pareto_front"] = o.pareto_indices;
    d["psg"] = o.gaps.psg_per_action;
    d["delta_min"] = o.gaps.delta_min;
    d["delta_max"] = o.gaps.delta_max;
    return d;
}

py::dict run_config(const std::filesystem::path& path, std::optional<std::uint64_t> horizon,
                    std::optional<std::uint64_t> runs, std::optional<std::uint64_t> seed, std::size_t workers) {
    ConfigFile cfg = load_config(path);
    if (horizon) cfg.horizon = *horizon;
    if (runs) cfg.runs = *runs;
    if (seed) cfg.seed = *seed;
    const ExperimentSpec spec = make_experiment_spec(cfg, workers);
    ExperimentResult res;
    {
        py::gil_scoped_release release;
        res = run_experiment(spec);
    }
    py::dict out;
    for (const PolicyAggregate& p : res.policies) {
        py::dict d;
        d["checkpoints"] = p.checkpoints;
        d["mean_regret"] = p.mean_regret;
        d["std_regret"] = p.std_regret;
        d["mean_spf_fraction"] = p.mean_spf_fraction;
        d["mean_pareto_fraction"] = p.mean_pareto_fraction;
        d["fairness"] = p.pooled_fairness;
        out[py::str(p.policy)] = d;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_comomab, m) {
    m.doc() = "Combinatorial multi-objective bandits: fronts, gaps, bounds, environments and simulation.";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);

    m.def("weakly_dominates", [](std::vector<double> u, std::vector<double> v) { return weakly_dominates(u, v); });
    m.def("dominates", [](std::vector<double> u, std::vector<double> v) { return dominates(u, v); });
    m.def("super_dominates", [](std::vector<double> u, std::vector<double> v) { return super_dominates(u, v); });
    m.def("incomparable", [](std::vector<double> u, std::vector<double> v) { return incomparable(u, v); });

    m.def("compute_spf", [](const std::vector<std::vector<double>>& means) { return compute_spf(to_vectors(means)); });
    m.def("compute_pareto_front",
          [](const std::vector<std::vector<double>>& means) { return compute_pareto_front(to_vectors(means)); });
    m.def("psg", [](const std::vector<double>& mean, const std::vector<std::vector<double>>& front) {
        return psg(RewardVector(mean), to_vectors(front));
    });
    m.def(
        "psg_oracle",
        [](const std::vector<double>& mean, const std::vector<std::vector<double>>& front, double tol) {
            return psg_oracle(RewardVector(mean), to_vectors(front), tol);
        },
        py::arg("mean"), py::arg("front"), py::arg("tol") = 1e-10);

    m.def(
        "theorem1_bound",
        [](double horizon, std::size_t n_arms, std::size_t max_support, std::size_t dimension, double max_weight,
           double delta_min, double delta_max) {
            return theorem1_bound({horizon, n_arms, max_support, dimension, max_weight, delta_min, delta_max}).value;
        },
        py::arg("horizon"), py::arg("n_arms"), py::arg("max_support"), py::arg("dimension"), py::arg("max_weight"),
        py::arg("delta_min"), py::arg("delta_max"));
    m.def("hoeffding_violation_bound", &hoeffding_violation_bound, py::arg("n"), py::arg("k"), py::arg("dimension"));

    m.def("lambert_w", &lambert_w);
    m.def("outage_probability", &outage_probability, py::arg("lam"), py::arg("rate"), py::arg("snr"));

    m.def("paper6_environment", [] { return environment_info(CommEnvironment(paper6_comm_config())); },
          "Structure and exact means of the two-user, four-channel, three-rate instance.");
    m.def("environment_from_config", [](const std::filesystem::path& path) {
        return environment_info(*build_environment(load_config(path)));
    });
    m.def("run_config", &run_config, py::arg("path"), py::arg("horizon") = std::nullopt, py::arg("runs") = std::nullopt,
          py::arg("seed") = std::nullopt, py::arg("workers") = 1,
          "Run the experiment described by a config file; returns per-policy aggregates.");
}
