#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "comomab/envs.hpp"
#include "comomab/simkit.hpp"

namespace comomab {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Golden CSV headers.
inline constexpr const char* kRegretHeader = "t,policy,mean_regret,std_regret";
inline constexpr const char* kSpfFractionHeader = "t,policy,mean_fraction,std_fraction";
inline constexpr const char* kFairnessHeader = "policy,spf_action_index,fraction";

/// Floats are written with 9 significant digits.
std::string format_float(double v);

std::string regret_csv(const ExperimentResult& result);
std::string spf_fraction_csv(const ExperimentResult& result);
std::string fairness_csv(const ExperimentResult& result);
std::string summary_text(const ExperimentResult& result, const Environment& env, std::uint64_t horizon);
std::string gnuplot_script(const ExperimentResult& result);

/// Writes regret.csv, spf_fraction.csv, fairness.csv and summary.txt (plus
/// plots.gp when requested) into `out_dir`, creating it if needed. Returns
/// the written paths. Throws OutputError when the directory is unwritable.
std::vector<std::filesystem::path> write_results(const ExperimentResult& result, const Environment& env,
                                                 std::uint64_t horizon, const std::filesystem::path& out_dir,
                                                 bool emit_plots = false);

}  // namespace comomab
