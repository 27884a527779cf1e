#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "comomab/envs.hpp"
#include "comomab/policies.hpp"
#include "comomab/simkit.hpp"

namespace comomab {

/// Config parse/validation failure. `key()` names the offending key (or
/// section) so the CLI can print a one-line diagnostic.
class ConfigError : public ConfigurationError {
public:
    ConfigError(std::string key, const std::string& what)
        : ConfigurationError(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct CommEnvSpec {
    CommConfig comm;
    // "paper6" derives the schedule from lambda; "explicit" takes `rates`.
    std::string rate_schedule = "paper6";
};

struct RoutingEnvSpec {
    std::filesystem::path graph;
    std::string source;
    std::string destination;
    std::size_t max_path_len = 0;
};

using EnvSpec = std::variant<CommEnvSpec, RecConfig, RoutingEnvSpec>;

/// Sectioned key = value experiment file:
///
///   [experiment]  name, horizon, runs, seed, checkpoint_stride
///   [env]         kind = comm | recommender | routing, plus kind-specific keys
///   [policies]    one policy per line: `id [key=value ...]`
///
/// Lists are whitespace- or comma-separated. '#' starts a comment.
struct ConfigFile {
    std::string name = "experiment";
    std::uint64_t horizon = 0;
    std::uint64_t runs = 1;
    std::uint64_t seed = 0;
    std::uint64_t checkpoint_stride = 100;
    EnvSpec env;
    std::vector<PolicyConfig> policies;
};

/// Relative routing graph paths are resolved against `base_dir`.
ConfigFile parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ConfigFile load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ConfigFile& cfg);

std::shared_ptr<const Environment> build_environment(const ConfigFile& cfg);
ExperimentSpec make_experiment_spec(const ConfigFile& cfg, std::size_t workers);

}  // namespace comomab
