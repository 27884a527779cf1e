#include "comomab/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace comomab {

namespace {

// Aggregates in (policy id) order.
std::vector<const PolicyAggregate*> sorted_by_id(const ExperimentResult& result) {
    std::vector<const PolicyAggregate*> out;
    for (const PolicyAggregate& p : result.policies) out.push_back(&p);
    std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->policy < b->policy; });
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    out << contents;
    out.flush();
    if (!out) throw OutputError("failed while writing " + path.string());
}

}  // namespace

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string regret_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << kRegretHeader << '\n';
    for (const PolicyAggregate* p : sorted_by_id(result)) {
        for (std::size_t q = 0; q < p->checkpoints.size(); ++q) {
            out << p->checkpoints[q] << ',' << p->policy << ',' << format_float(p->mean_regret[q]) << ','
                << format_float(p->std_regret[q]) << '\n';
        }
    }
    return out.str();
}

std::string spf_fraction_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << kSpfFractionHeader << '\n';
    for (const PolicyAggregate* p : sorted_by_id(result)) {
        for (std::size_t q = 0; q < p->checkpoints.size(); ++q) {
            out << p->checkpoints[q] << ',' << p->policy << ',' << format_float(p->mean_spf_fraction[q]) << ','
                << format_float(p->std_spf_fraction[q]) << '\n';
        }
    }
    return out.str();
}

std::string fairness_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << kFairnessHeader << '\n';
    const auto& spf = result.oracle.gaps.spf_indices;
    for (const PolicyAggregate* p : sorted_by_id(result)) {
        // An empty profile (no SPF selections) writes no rows; summary.txt flags it.
        for (std::size_t s = 0; s < p->pooled_fairness.size(); ++s) {
            out << p->policy << ',' << spf[s] << ',' << format_float(p->pooled_fairness[s]) << '\n';
        }
    }
    return out.str();
}

std::string summary_text(const ExperimentResult& result, const Environment& env, std::uint64_t horizon) {
    const ActionSet& actions = *env.action_set();
    const GapStats& gaps = result.oracle.gaps;
    std::ostringstream out;
    out << "environment: " << env.kind() << '\n'
        << "actions: " << actions.size() << '\n'
        << "arms: " << actions.n_arms() << '\n'
        << "max_support: " << actions.max_support() << '\n'
        << "dimension: " << actions.dimension() << '\n'
        << "max_weight: " << format_float(actions.max_weight()) << '\n'
        << "spf_size: " << gaps.spf_indices.size() << '\n'
        << "pareto_front_size: " << result.oracle.pareto_indices.size() << '\n'
        << "delta_min: " << format_float(gaps.delta_min) << '\n'
        << "delta_max: " << format_float(gaps.delta_max) << '\n'
        << "horizon: " << horizon << '\n';
    if (horizon > actions.n_arms()) {
        const RegretBound bound = theorem1_bound({static_cast<double>(horizon), actions.n_arms(), actions.max_support(), actions.dimension(),
                                                  actions.max_weight(), gaps.delta_min, gaps.delta_max});
        out << "theorem1_bound: " << format_float(bound.value) << '\n';
    } else {
        out << "theorem1_bound: undefined (horizon <= arms)\n";
    }
    out << "spf_actions:";
    for (std::size_t k : gaps.spf_indices) out << ' ' << k;
    out << '\n';
    for (const PolicyAggregate* p : sorted_by_id(result)) {
        out << "policy " << p->policy << ": runs=" << p->runs.size()
            << " final_mean_regret=" << format_float(p->mean_regret.back())
            << " final_spf_fraction=" << format_float(p->mean_spf_fraction.back())
            << " final_pareto_fraction=" << format_float(p->mean_pareto_fraction.back());
        if (p->pooled_fairness.empty()) {
            out << " fairness=empty(no SPF selections)";
        } else {
            const auto [lo, hi] = std::minmax_element(p->pooled_fairness.begin(), p->pooled_fairness.end());
            out << " fairness_max_over_min=" << format_float(*lo > 0.0 ? *hi / *lo : INFINITY);
        }
        out << '\n';
    }
    return out.str();
}

std::string gnuplot_script(const ExperimentResult& result) {
    std::string ids;
    for (const PolicyAggregate* p : sorted_by_id(result)) ids += (ids.empty() ? "" : " ") + p->policy;
    std::string script = R"(# gnuplot -persist plots.gp
set datafile separator ','
set key left top
set terminal pngcairo size 900,600

set output 'regret.png'
set xlabel 't'
set ylabel 'cumulative Pareto regret'
plot for [p in "@IDS@"] \
  'regret.csv' using ($2 eq p ? $1 : 1/0):3 skip 1 with lines title p

set output 'spf_fraction.png'
set ylabel 'fraction of SPF selections'
set yrange [0:1]
plot for [p in "@IDS@"] \
  'spf_fraction.csv' using ($2 eq p ? $1 : 1/0):3 skip 1 with lines title p

set output 'fairness.png'
set autoscale y
set style data histograms
set style fill solid 0.8
set xlabel 'SPF action'
set ylabel 'share of SPF selections'
plot for [p in "@IDS@"] \
  'fairness.csv' using ($1 eq p ? $3 : 1/0):xtic(2) skip 1 title p
)";
    for (auto at = script.find("@IDS@"); at != std::string::npos; at = script.find("@IDS@")) script.replace(at, 5, ids);
    return script;
}

std::vector<std::filesystem::path> write_results(const ExperimentResult& result, const Environment& env,
                                                 std::uint64_t horizon, const std::filesystem::path& out_dir,
                                                 bool emit_plots) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw OutputError("cannot create output directory " + out_dir.string());
    }
    std::vector<std::pair<std::filesystem::path, std::string>> files = {
        {out_dir / "regret.csv", regret_csv(result)},
        {out_dir / "spf_fraction.csv", spf_fraction_csv(result)},
        {out_dir / "fairness.csv", fairness_csv(result)},
        {out_dir / "summary.txt", summary_text(result, env, horizon)},
    };
    if (emit_plots) files.emplace_back(out_dir / "plots.gp", gnuplot_script(result));
    std::vector<std::filesystem::path> written;
    for (const auto& [path, contents] : files) {
        write_file(path, contents);
        written.push_back(path);
    }
    return written;
}

}  // namespace comomab
