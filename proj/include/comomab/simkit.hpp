#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "comomab/envs.hpp"
#include "comomab/pareto.hpp"
#include "comomab/policies.hpp"

namespace comomab {

/// Ground truth for regret accounting, computed once per environment from the
/// exact action means. Never handed to a policy.
struct RegretOracle {
    std::vector<RewardVector> action_means;
    GapStats gaps;
    std::vector<std::size_t> pareto_indices;
    std::vector<bool> in_spf;
    std::vector<bool> in_pareto;
    // Position of each SPF action inside gaps.spf_indices, or npos.
    std::vector<std::size_t> spf_slot;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

RegretOracle build_oracle(const Environment& env);

/// Steps s, 2s, ... up to T, with T appended when it is not a multiple of s.
std::vector<std::uint64_t> checkpoint_steps(std::uint64_t horizon, std::uint64_t stride);

struct RunTrace {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> cumulative_regret;   // per checkpoint
    std::vector<std::uint64_t> spf_hits;     // cumulative SPF selections per checkpoint
    std::vector<std::uint64_t> pareto_hits;  // cumulative Pareto-front selections per checkpoint
    std::vector<std::uint64_t> spf_action_counts;  // aligned with RegretOracle::gaps.spf_indices
    std::uint64_t total_steps = 0;
};

struct RunSeeds {
    std::uint64_t policy = 0;
    std::uint64_t environment = 0;
};

RunSeeds derive_run_seeds(std::uint64_t master, std::uint64_t run, std::string_view policy_id);

/// One replication. The policy is reset with `seeds.policy`; environment
/// draws use a generator seeded with `seeds.environment`.
RunTrace run_single(const Environment& env, const RegretOracle& oracle, Policy& policy, std::uint64_t horizon,
                    std::uint64_t stride, RunSeeds seeds);

/// Per-SPF-action share of the SPF-hitting steps. Empty when the run never
/// selected an SPF action.
std::vector<double> fairness_profile(const RunTrace& trace);

struct ExperimentSpec {
    std::string name = "experiment";
    std::shared_ptr<const Environment> environment;
    std::vector<PolicyConfig> policies;
    std::uint64_t horizon = 0;
    std::uint64_t runs = 1;
    std::uint64_t master_seed = 0;
    std::uint64_t checkpoint_stride = 100;
    // Worker threads for replications; 0 means hardware concurrency.
    std::size_t workers = 1;
};

struct PolicyAggregate {
    std::string policy;
    std::vector<RunTrace> runs;  // in run order
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> mean_regret;
    std::vector<double> std_regret;
    std::vector<double> mean_spf_fraction;
    std::vector<double> std_spf_fraction;
    std::vector<double> mean_pareto_fraction;
    // SPF counts pooled over runs, aligned with the oracle's SPF list.
    std::vector<std::uint64_t> pooled_spf_counts;
    std::vector<double> pooled_fairness;
};

struct ExperimentResult {
    RegretOracle oracle;
    std::vector<PolicyAggregate> policies;  // in spec order
};

/// R replications per policy. Aggregation happens in run order after all
/// workers join, so results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Pointwise mean and sample standard deviation (n - 1; zero for one run).
void mean_and_std(std::span<const std::vector<double>> series, std::vector<double>& mean, std::vector<double>& stddev);

}  // namespace comomab
