#include "comomab/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace comomab {

RegretOracle build_oracle(const Environment& env) {
    RegretOracle o;
    o.action_means = env.true_action_means();
    o.gaps = gap_stats(o.action_means);
    o.pareto_indices = compute_pareto_front(o.action_means);
    o.in_spf.assign(o.action_means.size(), false);
    o.in_pareto.assign(o.action_means.size(), false);
    o.spf_slot.assign(o.action_means.size(), RegretOracle::npos);
    for (std::size_t s = 0; s < o.gaps.spf_indices.size(); ++s) {
        o.in_spf[o.gaps.spf_indices[s]] = true;
        o.spf_slot[o.gaps.spf_indices[s]] = s;
    }
    for (std::size_t k : o.pareto_indices) o.in_pareto[k] = true;
    return o;
}

std::vector<std::uint64_t> checkpoint_steps(std::uint64_t horizon, std::uint64_t stride) {
    if (stride == 0) throw ConfigurationError("checkpoint stride must be >= 1");
    std::vector<std::uint64_t> out;
    for (std::uint64_t t = stride; t <= horizon; t += stride) out.push_back(t);
    if (out.empty() || out.back() != horizon) out.push_back(horizon);
    return out;
}

RunSeeds derive_run_seeds(std::uint64_t master, std::uint64_t run, std::string_view policy_id) {
    const std::uint64_t key = hash_name(policy_id);
    return {derive_seed(master, run, key, Stream::policy), derive_seed(master, run, key, Stream::environment)};
}

RunTrace run_single(const Environment& env, const RegretOracle& oracle, Policy& policy, std::uint64_t horizon,
                    std::uint64_t stride, RunSeeds seeds) {
    if (horizon == 0) throw ConfigurationError("horizon must be >= 1");
    const auto& actions = env.action_set();
    if (oracle.action_means.size() != actions->size()) throw std::logic_error("oracle does not match environment");
    policy.reset(actions, seeds.policy);
    Rng env_rng(seeds.environment);

    RunTrace trace;
    trace.checkpoints = checkpoint_steps(horizon, stride);
    trace.cumulative_regret.reserve(trace.checkpoints.size());
    trace.spf_hits.reserve(trace.checkpoints.size());
    trace.pareto_hits.reserve(trace.checkpoints.size());
    trace.spf_action_counts.assign(oracle.gaps.spf_indices.size(), 0);

    double regret = 0.0;
    std::uint64_t spf_hits = 0;
    std::uint64_t pareto_hits = 0;
    std::size_t next_checkpoint = 0;
    std::vector<std::size_t> arms;
    std::vector<ArmFeedback> feedback;

    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const std::size_t chosen = policy.select(t);
        if (chosen >= actions->size()) throw std::logic_error("policy selected an invalid action");

        regret += oracle.gaps.psg_per_action[chosen];
        if (oracle.in_spf[chosen]) {
            ++spf_hits;
            ++trace.spf_action_counts[oracle.spf_slot[chosen]];
        }
        if (oracle.in_pareto[chosen]) ++pareto_hits;

        arms.clear();
        for (const Action::Entry& e : (*actions)[chosen].support()) arms.push_back(e.arm);
        std::vector<RewardVector> rewards = env.sample(arms, env_rng);
        feedback.clear();
        for (std::size_t q = 0; q < arms.size(); ++q) feedback.push_back({arms[q], std::move(rewards[q])});
        policy.update(t, chosen, feedback);

        if (t == trace.checkpoints[next_checkpoint]) {
            trace.cumulative_regret.push_back(regret);
            trace.spf_hits.push_back(spf_hits);
            trace.pareto_hits.push_back(pareto_hits);
            ++next_checkpoint;
        }
    }
    trace.total_steps = horizon;
    return trace;
}

std::vector<double> fairness_profile(const RunTrace& trace) {
    std::uint64_t total = 0;
    for (std::uint64_t c : trace.spf_action_counts) total += c;
    if (total == 0) return {};
    std::vector<double> out;
    out.reserve(trace.spf_action_counts.size());
    for (std::uint64_t c : trace.spf_action_counts) out.push_back(static_cast<double>(c) / static_cast<double>(total));
    return out;
}

void mean_and_std(std::span<const std::vector<double>> series, std::vector<double>& mean, std::vector<double>& stddev) {
    mean.clear();
    stddev.clear();
    if (series.empty()) return;
    const std::size_t len = series.front().size();
    const double n = static_cast<double>(series.size());
    mean.assign(len, 0.0);
    stddev.assign(len, 0.0);
    for (const auto& s : series) {
        if (s.size() != len) throw DimensionError("series have different lengths");
        for (std::size_t q = 0; q < len; ++q) mean[q] += s[q];
    }
    for (double& m : mean) m /= n;
    if (series.size() < 2) return;
    for (const auto& s : series) {
        for (std::size_t q = 0; q < len; ++q) stddev[q] += (s[q] - mean[q]) * (s[q] - mean[q]);
    }
    for (double& v : stddev) v = std::sqrt(v / (n - 1.0));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (!spec.environment) throw ConfigurationError("experiment has no environment");
    if (spec.policies.empty()) throw ConfigurationError("experiment has no policies");
    if (spec.runs < 1) throw ConfigurationError("runs must be >= 1");
    if (spec.horizon < spec.environment->n_arms()) {
        throw ConfigurationError("horizon must be at least the number of arms");
    }
    const Environment& env = *spec.environment;

    ExperimentResult result;
    result.oracle = build_oracle(env);
    const RegretOracle& oracle = result.oracle;

    // Validate every policy config before any work starts.
    for (const PolicyConfig& p : spec.policies) make_policy(p);

    const std::size_t n_policies = spec.policies.size();
    const std::size_t n_jobs = n_policies * spec.runs;
    std::vector<RunTrace> traces(n_jobs);
    std::vector<std::exception_ptr> errors(n_jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t job = next.fetch_add(1); job < n_jobs; job = next.fetch_add(1)) {
            const std::size_t p = job / spec.runs;
            const std::uint64_t run = job % spec.runs;
            try {
                auto policy = make_policy(spec.policies[p]);
                const RunSeeds seeds = derive_run_seeds(spec.master_seed, run, spec.policies[p].id);
                traces[job] = run_single(env, oracle, *policy, spec.horizon, spec.checkpoint_stride, seeds);
            } catch (...) {
                errors[job] = std::current_exception();
            }
        }
    };

    std::size_t workers = spec.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : spec.workers;
    workers = std::min(workers, n_jobs);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    for (std::size_t p = 0; p < n_policies; ++p) {
        PolicyAggregate agg;
        agg.policy = spec.policies[p].id;
        agg.runs.assign(std::make_move_iterator(traces.begin() + static_cast<std::ptrdiff_t>(p * spec.runs)),
                        std::make_move_iterator(traces.begin() + static_cast<std::ptrdiff_t>((p + 1) * spec.runs)));
        agg.checkpoints = agg.runs.front().checkpoints;

        std::vector<std::vector<double>> regret;
        std::vector<std::vector<double>> spf_fraction;
        std::vector<std::vector<double>> pareto_fraction;
        agg.pooled_spf_counts.assign(oracle.gaps.spf_indices.size(), 0);
        for (const RunTrace& tr : agg.runs) {
            regret.push_back(tr.cumulative_regret);
            std::vector<double> sf(tr.checkpoints.size());
            std::vector<double> pf(tr.checkpoints.size());
            for (std::size_t q = 0; q < tr.checkpoints.size(); ++q) {
                sf[q] = static_cast<double>(tr.spf_hits[q]) / static_cast<double>(tr.checkpoints[q]);
                pf[q] = static_cast<double>(tr.pareto_hits[q]) / static_cast<double>(tr.checkpoints[q]);
            }
            spf_fraction.push_back(std::move(sf));
            pareto_fraction.push_back(std::move(pf));
            for (std::size_t s = 0; s < tr.spf_action_counts.size(); ++s) agg.pooled_spf_counts[s] += tr.spf_action_counts[s];
        }
        mean_and_std(regret, agg.mean_regret, agg.std_regret);
        mean_and_std(spf_fraction, agg.mean_spf_fraction, agg.std_spf_fraction);
        std::vector<double> unused;
        mean_and_std(pareto_fraction, agg.mean_pareto_fraction, unused);

        RunTrace pooled;
        pooled.spf_action_counts = agg.pooled_spf_counts;
        agg.pooled_fairness = fairness_profile(pooled);
        result.policies.push_back(std::move(agg));
    }
    return result;
}

}  // namespace comomab
