#include "comomab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace comomab {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

// Keys of one section in file order, with lookup that records which keys
// were consumed so leftovers can be rejected.
class Section {
public:
    explicit Section(std::string name) : name_(std::move(name)) {}

    void add(const std::string& key, std::string value, std::size_t line) {
        if (entries_.contains(key)) throw ConfigError(key, "duplicate key on line " + std::to_string(line));
        entries_.emplace(key, Entry{std::move(value), line});
    }

    const std::string* find(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_.insert(key);
        return &it->second.value;
    }

    const std::string& require(const std::string& key) {
        const std::string* v = find(key);
        if (!v) throw ConfigError(key, "missing required key in [" + name_ + "]");
        return *v;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_) {
            if (!used_.contains(key)) {
                throw ConfigError(key, "unknown key in [" + name_ + "] on line " + std::to_string(entry.line));
            }
        }
    }

private:
    std::string name_;
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

std::uint64_t parse_u64(const std::string& key, std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key, "expected a nonnegative integer, got '" + std::string(s) + "'");
    return v;
}

double parse_double(const std::string& key, std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + std::string(s) + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
    std::string spaced = s;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<double> out;
    for (std::string tok; in >> tok;) out.push_back(parse_double(key, tok));
    if (out.empty()) throw ConfigError(key, "expected a list of numbers");
    return out;
}

std::uint64_t at_least(const std::string& key, std::uint64_t v, std::uint64_t lo) {
    if (v < lo) throw ConfigError(key, "must be >= " + std::to_string(lo));
    return v;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t q = 0; q < v.size(); ++q) {
        if (q) out += ' ';
        out += fmt_double(v[q]);
    }
    return out;
}

CommEnvSpec parse_comm(Section& env) {
    CommEnvSpec spec;
    CommConfig& c = spec.comm;
    c.users = at_least("m", parse_u64("m", env.require("m")), 1);
    c.channels = at_least("q", parse_u64("q", env.require("q")), 1);
    c.rates = at_least("h", parse_u64("h", env.require("h")), 1);
    if (c.channels < c.users) throw ConfigError("q", "need q >= m (one channel per user)");
    c.snr = parse_double("snr", env.require("snr"));
    if (!(c.snr > 0.0)) throw ConfigError("snr", "must be positive");
    c.lambda = parse_list("lambda", env.require("lambda"));
    if (c.lambda.size() != c.users * c.channels) {
        throw ConfigError("lambda", "expected m*q = " + std::to_string(c.users * c.channels) + " values");
    }
    for (double l : c.lambda) {
        if (!(l > 0.0)) throw ConfigError("lambda", "entries must be positive");
    }
    if (const std::string* mode = env.find("rate_schedule")) spec.rate_schedule = *mode;
    if (spec.rate_schedule == "paper6") {
        if (c.rates != 3) throw ConfigError("h", "rate_schedule = paper6 needs h = 3");
        c.rate_schedule = paper6_rate_schedule(c.lambda);
    } else if (spec.rate_schedule == "explicit") {
        c.rate_schedule = parse_list("rates", env.require("rates"));
        if (c.rate_schedule.size() != c.users * c.channels * c.rates) {
            throw ConfigError("rates", "expected m*q*h = " + std::to_string(c.users * c.channels * c.rates) + " values");
        }
        for (std::size_t pair = 0; pair < c.lambda.size(); ++pair) {
            const double* r = c.rate_schedule.data() + pair * c.rates;
            if (!(r[0] > 0.0)) throw ConfigError("rates", "must be positive");
            for (std::size_t k = 1; k < c.rates; ++k) {
                if (!(r[k - 1] < r[k])) throw ConfigError("rates", "must be strictly increasing per user/channel");
            }
        }
    } else {
        throw ConfigError("rate_schedule", "expected paper6 or explicit, got '" + spec.rate_schedule + "'");
    }
    return spec;
}

RecConfig parse_rec(Section& env) {
    RecConfig c;
    c.items = at_least("n", parse_u64("n", env.require("n")), 1);
    c.slate_size = at_least("k", parse_u64("k", env.require("k")), 1);
    if (c.slate_size > c.items) throw ConfigError("k", "slate size must be <= n");
    c.users = at_least("users", parse_u64("users", env.require("users")), 1);
    c.type_probs = parse_list("type_probs", env.require("type_probs"));
    double mass = 0.0;
    for (double p : c.type_probs) {
        if (p < 0.0) throw ConfigError("type_probs", "must be nonnegative");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-9) throw ConfigError("type_probs", "must sum to 1");
    c.like_probs = parse_list("like_probs", env.require("like_probs"));
    if (c.like_probs.size() != c.type_probs.size() * c.items) {
        throw ConfigError("like_probs", "expected types*n = " + std::to_string(c.type_probs.size() * c.items) + " values");
    }
    for (double q : c.like_probs) {
        if (q < 0.0 || q > 1.0) throw ConfigError("like_probs", "must lie in [0,1]");
    }
    if (const std::string* mode = env.find("diversity")) {
        if (*mode == "cosine") {
            c.diversity = DiversityMode::cosine;
        } else if (*mode == "variance") {
            c.diversity = DiversityMode::variance;
        } else {
            throw ConfigError("diversity", "expected cosine or variance");
        }
    }
    if (c.diversity == DiversityMode::cosine && c.users < 2) throw ConfigError("users", "cosine diversity needs >= 2");
    return c;
}

RoutingEnvSpec parse_routing(Section& env, const std::filesystem::path& base_dir) {
    RoutingEnvSpec r;
    r.graph = env.require("graph");
    if (r.graph.is_relative() && !base_dir.empty()) r.graph = base_dir / r.graph;
    r.source = env.require("source");
    r.destination = env.require("destination");
    if (r.source == r.destination) throw ConfigError("destination", "must differ from source");
    if (const std::string* cap = env.find("max_path_len")) {
        r.max_path_len = at_least("max_path_len", parse_u64("max_path_len", *cap), 1);
    }
    return r;
}

PolicyConfig parse_policy_line(std::string_view line, std::size_t line_no) {
    std::istringstream in{std::string(line)};
    PolicyConfig p;
    in >> p.id;
    if (std::find(std::begin(kPolicyIds), std::end(kPolicyIds), p.id) == std::end(kPolicyIds)) {
        throw ConfigError("policies", "unknown policy '" + p.id + "' on line " + std::to_string(line_no));
    }
    for (std::string tok; in >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError(p.id, "expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (p.id == "pareto_ucb1" && key == "k_star") {
            p.k_star = parse_double("k_star", value);
            if (!(*p.k_star > 0.0)) throw ConfigError("k_star", "must be positive");
        } else if (p.id == "pareto_ucb1" && key == "exploration") {
            p.exploration = parse_double("exploration", value);
            if (!(*p.exploration > 0.0)) throw ConfigError("exploration", "must be positive");
        } else {
            throw ConfigError(key, "unknown parameter for policy " + p.id);
        }
    }
    if (p.id == "pareto_ucb1" && !p.k_star) throw ConfigError("k_star", "pareto_ucb1 requires k_star");
    return p;
}

}  // namespace

ConfigFile parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    Section experiment("experiment");
    Section env("env");
    std::vector<std::pair<std::string, std::size_t>> policy_lines;
    std::set<std::string> seen_sections;
    std::string current;

    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", "malformed section header on line " + std::to_string(line_no));
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (current != "experiment" && current != "env" && current != "policies") {
                throw ConfigError(current, "unknown section on line " + std::to_string(line_no));
            }
            if (!seen_sections.insert(current).second) throw ConfigError(current, "section repeated");
            continue;
        }
        if (current.empty()) throw ConfigError("", "line " + std::to_string(line_no) + " is outside any section");
        if (current == "policies") {
            policy_lines.emplace_back(std::string(line), line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", "expected key = value on line " + std::to_string(line_no));
        }
        const std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("", "empty key on line " + std::to_string(line_no));
        (current == "experiment" ? experiment : env).add(key, std::move(value), line_no);
    }
    for (const char* required : {"experiment", "env", "policies"}) {
        if (!seen_sections.contains(required)) throw ConfigError(required, "missing section");
    }

    ConfigFile cfg;
    if (const std::string* name = experiment.find("name")) cfg.name = *name;
    cfg.horizon = at_least("horizon", parse_u64("horizon", experiment.require("horizon")), 1);
    cfg.runs = at_least("runs", parse_u64("runs", experiment.require("runs")), 1);
    cfg.seed = parse_u64("seed", experiment.require("seed"));
    if (const std::string* stride = experiment.find("checkpoint_stride")) {
        cfg.checkpoint_stride = at_least("checkpoint_stride", parse_u64("checkpoint_stride", *stride), 1);
    }
    experiment.reject_unused();

    const std::string& kind = env.require("kind");
    if (kind == "comm") {
        cfg.env = parse_comm(env);
    } else if (kind == "recommender") {
        cfg.env = parse_rec(env);
    } else if (kind == "routing") {
        cfg.env = parse_routing(env, base_dir);
    } else {
        throw ConfigError("kind", "expected comm, recommender or routing, got '" + kind + "'");
    }
    env.reject_unused();

    std::set<std::string> ids;
    for (const auto& [line, no] : policy_lines) {
        PolicyConfig p = parse_policy_line(line, no);
        if (!ids.insert(p.id).second) throw ConfigError(p.id, "policy listed twice");
        cfg.policies.push_back(std::move(p));
    }
    if (cfg.policies.empty()) throw ConfigError("policies", "no policies listed");
    return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::string to_text(const ConfigFile& cfg) {
    std::ostringstream out;
    out << "[experiment]\n"
        << "name = " << cfg.name << "\n"
        << "horizon = " << cfg.horizon << "\n"
        << "runs = " << cfg.runs << "\n"
        << "seed = " << cfg.seed << "\n"
        << "checkpoint_stride = " << cfg.checkpoint_stride << "\n\n[env]\n";
    if (const auto* comm = std::get_if<CommEnvSpec>(&cfg.env)) {
        const CommConfig& c = comm->comm;
        out << "kind = comm\n"
            << "m = " << c.users << "\nq = " << c.channels << "\nh = " << c.rates << "\n"
            << "snr = " << fmt_double(c.snr) << "\n"
            << "lambda = " << fmt_list(c.lambda) << "\n"
            << "rate_schedule = " << comm->rate_schedule << "\n";
        if (comm->rate_schedule == "explicit") out << "rates = " << fmt_list(c.rate_schedule) << "\n";
    } else if (const auto* rec = std::get_if<RecConfig>(&cfg.env)) {
        out << "kind = recommender\n"
            << "n = " << rec->items << "\nk = " << rec->slate_size << "\nusers = " << rec->users << "\n"
            << "type_probs = " << fmt_list(rec->type_probs) << "\n"
            << "like_probs = " << fmt_list(rec->like_probs) << "\n"
            << "diversity = " << (rec->diversity == DiversityMode::cosine ? "cosine" : "variance") << "\n";
    } else {
        const auto& r = std::get<RoutingEnvSpec>(cfg.env);
        out << "kind = routing\n"
            << "graph = " << r.graph.string() << "\n"
            << "source = " << r.source << "\ndestination = " << r.destination << "\n";
        if (r.max_path_len) out << "max_path_len = " << r.max_path_len << "\n";
    }
    out << "\n[policies]\n";
    for (const PolicyConfig& p : cfg.policies) {
        out << p.id;
        if (p.k_star) out << " k_star=" << fmt_double(*p.k_star);
        if (p.exploration) out << " exploration=" << fmt_double(*p.exploration);
        out << "\n";
    }
    return out.str();
}

std::shared_ptr<const Environment> build_environment(const ConfigFile& cfg) {
    if (const auto* comm = std::get_if<CommEnvSpec>(&cfg.env)) return std::make_shared<CommEnvironment>(comm->comm);
    if (const auto* rec = std::get_if<RecConfig>(&cfg.env)) return std::make_shared<RecEnvironment>(*rec);
    const auto& r = std::get<RoutingEnvSpec>(cfg.env);
    RoutingConfig rc;
    try {
        rc.edges = load_edge_list(r.graph);
    } catch (const ConfigurationError& e) {
        throw ConfigError("graph", e.what());
    }
    rc.source = r.source;
    rc.destination = r.destination;
    rc.max_path_len = r.max_path_len;
    return std::make_shared<RoutingEnvironment>(std::move(rc));
}

ExperimentSpec make_experiment_spec(const ConfigFile& cfg, std::size_t workers) {
    ExperimentSpec spec;
    spec.name = cfg.name;
    spec.environment = build_environment(cfg);
    spec.policies = cfg.policies;
    spec.horizon = cfg.horizon;
    spec.runs = cfg.runs;
    spec.master_seed = cfg.seed;
    spec.checkpoint_stride = cfg.checkpoint_stride;
    spec.workers = workers;
    if (spec.horizon < spec.environment->n_arms()) {
        throw ConfigError("horizon", "must be at least the number of arms (" +
                                         std::to_string(spec.environment->n_arms()) + ")");
    }
    return spec;
}

}  // namespace comomab
