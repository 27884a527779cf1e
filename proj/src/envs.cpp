#include "comomab/envs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace comomab {

std::vector<RewardVector> Environment::true_action_means() const {
    return actions_->action_means(true_means());
}

// ------------------------------------------------------------ helpers

double lambert_w(double x) {
    if (std::isnan(x) || x < 0.0) throw std::domain_error("lambert_w: argument must be >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;

    double w = std::log1p(x);
    for (int iter = 0; iter < 100; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = ew * (w + 1.0);
        const double step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
        double next = w - step;
        // Damping: W is nonnegative on this branch.
        if (next < 0.0) next = 0.5 * w;
        const bool converged = std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + next);
        w = next;
        if (converged) break;
    }
    return w;
}

double outage_probability(double lambda, double rate, double snr) {
    // Exponential CDF at the gain needed to support `rate`: (e^R - 1) / snr.
    return -std::expm1(-lambda * std::expm1(rate) / snr);
}

// ---------------------------------------------------- multi-user comm

std::vector<double> paper6_rate_schedule(std::span<const double> lambda) {
    std::vector<double> out;
    out.reserve(lambda.size() * 3);
    for (double l : lambda) {
        const double r = lambert_w(15.0 * l);
        out.push_back(r / 4.0);
        out.push_back(r / 2.0);
        out.push_back(r);
    }
    return out;
}

CommConfig paper6_comm_config() {
    CommConfig cfg;
    cfg.users = 2;
    cfg.channels = 4;
    cfg.rates = 3;
    cfg.lambda = {0.14, 0.14, 0.16, 0.05, 0.05, 0.11, 0.13, 0.07};
    cfg.snr = 1.0;
    cfg.rate_schedule = paper6_rate_schedule(cfg.lambda);
    return cfg;
}

namespace {

std::vector<Action> enumerate_comm_actions(const CommConfig& cfg) {
    const std::size_t n_arms = cfg.users * cfg.channels * cfg.rates;
    std::vector<std::vector<std::size_t>> assignments;
    std::vector<std::size_t> current;
    std::vector<bool> used(cfg.channels, false);
    auto assign = [&](auto& self) -> void {
        if (current.size() == cfg.users) {
            assignments.push_back(current);
            return;
        }
        for (std::size_t c = 0; c < cfg.channels; ++c) {
            if (used[c]) continue;
            used[c] = true;
            current.push_back(c);
            self(self);
            current.pop_back();
            used[c] = false;
        }
    };
    assign(assign);

    std::size_t rate_combos = 1;
    for (std::size_t u = 0; u < cfg.users; ++u) rate_combos *= cfg.rates;

    std::vector<Action> actions;
    actions.reserve(assignments.size() * rate_combos);
    std::vector<std::size_t> arms(cfg.users);
    for (const auto& channel_of : assignments) {
        for (std::size_t combo = 0; combo < rate_combos; ++combo) {
            std::size_t rest = combo;
            for (std::size_t u = cfg.users; u-- > 0;) {
                const std::size_t k = rest % cfg.rates;
                rest /= cfg.rates;
                arms[u] = (u * cfg.channels + channel_of[u]) * cfg.rates + k;
            }
            actions.push_back(Action::unit(n_arms, arms));
        }
    }
    return actions;
}

}  // namespace

CommEnvironment::CommEnvironment(CommConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.users < 1 || cfg_.rates < 1) throw ConfigurationError("comm: need m >= 1 and h >= 1");
    if (cfg_.channels < cfg_.users) throw ConfigurationError("comm: q must be >= m (one channel per user)");
    if (cfg_.lambda.size() != cfg_.users * cfg_.channels) {
        throw ConfigurationError("comm: lambda must have m*q entries");
    }
    if (!(cfg_.snr > 0.0) || !std::isfinite(cfg_.snr)) throw ConfigurationError("comm: snr must be positive");
    for (double l : cfg_.lambda) {
        if (!(l > 0.0) || !std::isfinite(l)) throw ConfigurationError("comm: lambda entries must be positive");
    }
    if (cfg_.rate_schedule.size() != cfg_.lambda.size() * cfg_.rates) {
        throw ConfigurationError("comm: rate schedule must have m*q*h entries");
    }
    for (std::size_t pair = 0; pair < cfg_.lambda.size(); ++pair) {
        const double* r = cfg_.rate_schedule.data() + pair * cfg_.rates;
        if (!(r[0] > 0.0)) throw ConfigurationError("comm: rates must be positive");
        for (std::size_t k = 1; k < cfg_.rates; ++k) {
            if (!(r[k - 1] < r[k])) throw ConfigurationError("comm: rates must be strictly increasing");
        }
    }
    const std::size_t n_arms = cfg_.users * cfg_.channels * cfg_.rates;
    actions_ = std::make_shared<ActionSet>(n_arms, 2, enumerate_comm_actions(cfg_));
}

std::vector<RewardVector> CommEnvironment::true_means() const {
    std::vector<RewardVector> out;
    out.reserve(n_arms());
    for (std::size_t arm = 0; arm < n_arms(); ++arm) {
        const std::size_t pair = arm / cfg_.rates;
        const double rate = cfg_.rate_schedule[arm];
        const double top = cfg_.rate_schedule[pair * cfg_.rates + cfg_.rates - 1];
        const double success = 1.0 - outage_probability(cfg_.lambda[pair], rate, cfg_.snr);
        out.push_back({success, rate * success / top});
    }
    return out;
}

RewardVector CommEnvironment::sample_arm(std::size_t arm, Rng& rng) const {
    const std::size_t pair = arm / cfg_.rates;
    const double rate = cfg_.rate_schedule[arm];
    const double top = cfg_.rate_schedule[pair * cfg_.rates + cfg_.rates - 1];
    const double gain = rng.exponential(cfg_.lambda[pair]);
    const bool success = std::log1p(gain * cfg_.snr) >= rate;
    return success ? RewardVector{1.0, rate / top} : RewardVector{0.0, 0.0};
}

std::vector<RewardVector> CommEnvironment::sample(std::span<const std::size_t> arms, Rng& rng) const {
    std::vector<RewardVector> out;
    out.reserve(arms.size());
    for (std::size_t arm : arms) {
        if (arm >= n_arms()) throw std::out_of_range("comm: arm index out of range");
        out.push_back(sample_arm(arm, rng));
    }
    return out;
}

// -------------------------------------------------------- recommender

namespace {

std::vector<Action> enumerate_subsets(std::size_t n, std::size_t k) {
    std::vector<Action> out;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        out.push_back(Action::unit(n, pick));
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t q = pos; q < k; ++q) pick[q] = pick[q - 1] + 1;
    }
    return out;
}

// Pairwise 1 - cos between 0/1 rows a and b; 1 if either is all zero.
double cosine_gap(const unsigned char* a, const unsigned char* b, std::size_t width) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t q = 0; q < width; ++q) {
        dot += a[q] * b[q];
        na += a[q];
        nb += b[q];
    }
    if (na == 0.0 || nb == 0.0) return 1.0;
    return 1.0 - dot / std::sqrt(na * nb);
}

constexpr std::size_t kMaxCosineSlate = 16;

}  // namespace

double cosine_diversity(std::span<const unsigned char> likes, std::size_t users, std::size_t width) {
    if (users < 2) throw std::domain_error("cosine diversity needs at least two users");
    if (likes.size() != users * width) throw DimensionError("like matrix has wrong shape");
    double total = 0.0;
    for (std::size_t j = 0; j < users; ++j) {
        for (std::size_t l = 0; l < users; ++l) {
            if (j != l) total += cosine_gap(likes.data() + j * width, likes.data() + l * width, width);
        }
    }
    return total / static_cast<double>(users * (users - 1));
}

RecEnvironment::RecEnvironment(RecConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.items < 1 || cfg_.slate_size < 1) throw ConfigurationError("recommender: need n >= 1 and k >= 1");
    if (cfg_.slate_size > cfg_.items) throw ConfigurationError("recommender: k must be <= n");
    if (cfg_.users < 1) throw ConfigurationError("recommender: need at least one user per step");
    if (cfg_.diversity == DiversityMode::cosine && cfg_.users < 2) {
        throw ConfigurationError("recommender: cosine diversity needs users >= 2");
    }
    if (cfg_.diversity == DiversityMode::cosine && cfg_.slate_size > kMaxCosineSlate) {
        throw ConfigurationError("recommender: cosine mode supports k <= 16");
    }
    if (cfg_.type_probs.empty()) throw ConfigurationError("recommender: need at least one user type");
    double mass = 0.0;
    for (double p : cfg_.type_probs) {
        if (!(p >= 0.0)) throw ConfigurationError("recommender: type probabilities must be nonnegative");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-9) throw ConfigurationError("recommender: type probabilities must sum to 1");
    if (cfg_.like_probs.size() != cfg_.type_probs.size() * cfg_.items) {
        throw ConfigurationError("recommender: like_probs must have types*n entries");
    }
    for (double q : cfg_.like_probs) {
        if (!(q >= 0.0 && q <= 1.0)) throw ConfigurationError("recommender: like probabilities must lie in [0,1]");
    }
    actions_ = std::make_shared<ActionSet>(cfg_.items, 2, enumerate_subsets(cfg_.items, cfg_.slate_size));
}

std::vector<double> RecEnvironment::like_marginals() const {
    std::vector<double> rho(cfg_.items, 0.0);
    for (std::size_t t = 0; t < cfg_.type_probs.size(); ++t) {
        for (std::size_t i = 0; i < cfg_.items; ++i) rho[i] += cfg_.type_probs[t] * cfg_.like_probs[t * cfg_.items + i];
    }
    return rho;
}

std::vector<RewardVector> RecEnvironment::true_means() const {
    if (cfg_.diversity == DiversityMode::cosine) {
        throw std::logic_error("recommender: per-item means are undefined for slate-level cosine diversity");
    }
    const double m = static_cast<double>(cfg_.users);
    std::vector<RewardVector> out;
    for (double rho : like_marginals()) {
        // likes ~ Binomial(M, rho); E[p_hat (1 - p_hat)] = rho (1 - rho) (M - 1) / M.
        out.push_back({rho, 4.0 * rho * (1.0 - rho) * (m - 1.0) / m});
    }
    return out;
}

double RecEnvironment::expected_cosine_diversity(std::span<const std::size_t> slate) const {
    const std::size_t k = slate.size();
    const std::size_t patterns = std::size_t{1} << k;
    // Law of one user's like vector on the slate (types mixed in).
    std::vector<double> law(patterns, 0.0);
    for (std::size_t t = 0; t < cfg_.type_probs.size(); ++t) {
        for (std::size_t v = 0; v < patterns; ++v) {
            double p = cfg_.type_probs[t];
            for (std::size_t q = 0; q < k; ++q) {
                const double like = cfg_.like_probs[t * cfg_.items + slate[q]];
                p *= ((v >> q) & 1U) ? like : 1.0 - like;
            }
            law[v] += p;
        }
    }
    std::vector<unsigned char> bits(patterns * k);
    for (std::size_t v = 0; v < patterns; ++v) {
        for (std::size_t q = 0; q < k; ++q) bits[v * k + q] = static_cast<unsigned char>((v >> q) & 1U);
    }
    // Users are i.i.d., so every ordered pair has the same expected gap.
    double expected = 0.0;
    for (std::size_t v = 0; v < patterns; ++v) {
        if (law[v] == 0.0) continue;
        for (std::size_t w = 0; w < patterns; ++w) {
            expected += law[v] * law[w] * cosine_gap(bits.data() + v * k, bits.data() + w * k, k);
        }
    }
    return expected;
}

std::vector<RewardVector> RecEnvironment::true_action_means() const {
    if (cfg_.diversity == DiversityMode::variance) return Environment::true_action_means();
    const std::vector<double> rho = like_marginals();
    std::vector<RewardVector> out;
    out.reserve(actions_->size());
    std::vector<std::size_t> slate;
    for (const Action& a : actions_->actions()) {
        slate.clear();
        double liked = 0.0;
        for (const Action::Entry& e : a.support()) {
            slate.push_back(e.arm);
            liked += rho[e.arm];
        }
        const double diversity = expected_cosine_diversity(slate);
        out.push_back({liked, static_cast<double>(slate.size()) * diversity});
    }
    return out;
}

std::vector<RewardVector> RecEnvironment::sample(std::span<const std::size_t> arms, Rng& rng) const {
    const std::size_t m = cfg_.users;
    const std::size_t k = arms.size();
    for (std::size_t arm : arms) {
        if (arm >= cfg_.items) throw std::out_of_range("recommender: item index out of range");
    }
    std::vector<unsigned char> likes(m * k, 0);
    for (std::size_t u = 0; u < m; ++u) {
        double draw = rng.uniform01();
        std::size_t type = 0;
        while (type + 1 < cfg_.type_probs.size() && draw >= cfg_.type_probs[type]) {
            draw -= cfg_.type_probs[type];
            ++type;
        }
        for (std::size_t q = 0; q < k; ++q) {
            likes[u * k + q] = rng.bernoulli(cfg_.like_probs[type * cfg_.items + arms[q]]) ? 1 : 0;
        }
    }

    std::vector<RewardVector> out;
    out.reserve(k);
    const double slate_diversity =
        cfg_.diversity == DiversityMode::cosine ? cosine_diversity(likes, m, k) : 0.0;
    for (std::size_t q = 0; q < k; ++q) {
        double count = 0.0;
        for (std::size_t u = 0; u < m; ++u) count += likes[u * k + q];
        const double frac = count / static_cast<double>(m);
        const double second =
            cfg_.diversity == DiversityMode::cosine ? slate_diversity : 4.0 * frac * (1.0 - frac);
        out.push_back({frac, second});
    }
    return out;
}

// ------------------------------------------------------------ routing

std::vector<RoutingEdge> parse_edge_list(std::string_view text) {
    std::vector<RoutingEdge> edges;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        auto fail = [&](const std::string& why) {
            throw ConfigurationError("edge list line " + std::to_string(line_no) + ": " + why);
        };
        auto number = [&](const std::string& s) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                fail("not a number: " + s);
            }
            if (used != s.size() || !std::isfinite(v)) fail("not a number: " + s);
            return v;
        };
        if (tok.size() < 7 || (tok.size() - 4) % 3 != 0) {
            fail("expected 'src dst delay_max energy_max' followed by (prob delay energy) triples");
        }
        RoutingEdge e;
        e.src = tok[0];
        e.dst = tok[1];
        if (e.src == e.dst) fail("self-loop");
        e.delay_max = number(tok[2]);
        e.energy_max = number(tok[3]);
        if (!(e.delay_max > 0.0) || !(e.energy_max > 0.0)) fail("delay_max and energy_max must be positive");
        double mass = 0.0;
        for (std::size_t q = 4; q < tok.size(); q += 3) {
            EdgeOutcome o{number(tok[q]), number(tok[q + 1]), number(tok[q + 2])};
            if (!(o.prob >= 0.0)) fail("negative probability");
            if (o.delay < 0.0 || o.delay > e.delay_max) fail("delay outside [0, delay_max]");
            if (o.energy < 0.0 || o.energy > e.energy_max) fail("energy outside [0, energy_max]");
            mass += o.prob;
            e.outcomes.push_back(o);
        }
        if (std::abs(mass - 1.0) > 1e-9) fail("outcome probabilities must sum to 1");
        edges.push_back(std::move(e));
    }
    return edges;
}

std::vector<RoutingEdge> load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read edge list " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

namespace {

RewardVector edge_mean(const RoutingEdge& e) {
    double delay = 0.0;
    double energy = 0.0;
    for (const EdgeOutcome& o : e.outcomes) {
        delay += o.prob * o.delay;
        energy += o.prob * o.energy;
    }
    return {1.0 - delay / e.delay_max, 1.0 - energy / e.energy_max};
}

}  // namespace

RoutingEnvironment::RoutingEnvironment(RoutingConfig cfg) : cfg_(std::move(cfg)) {
    std::map<std::string, std::size_t> node_ids;
    auto node = [&](const std::string& name) {
        auto [it, inserted] = node_ids.try_emplace(name, node_ids.size());
        return it->second;
    };
    for (const RoutingEdge& e : cfg_.edges) {
        node(e.src);
        node(e.dst);
        if (e.outcomes.empty()) throw ConfigurationError("routing: edge " + e.src + "->" + e.dst + " has no outcomes");
    }
    if (!node_ids.contains(cfg_.source)) throw ConfigurationError("routing: unknown source node " + cfg_.source);
    if (!node_ids.contains(cfg_.destination)) {
        throw ConfigurationError("routing: unknown destination node " + cfg_.destination);
    }
    if (cfg_.source == cfg_.destination) throw ConfigurationError("routing: source equals destination");
    const std::size_t n_nodes = node_ids.size();
    const std::size_t cap = cfg_.max_path_len == 0 ? n_nodes : cfg_.max_path_len;

    std::vector<std::vector<std::size_t>> out_edges(n_nodes);
    for (std::size_t q = 0; q < cfg_.edges.size(); ++q) out_edges[node_ids[cfg_.edges[q].src]].push_back(q);

    const std::size_t s = node_ids[cfg_.source];
    const std::size_t d = node_ids[cfg_.destination];
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(n_nodes, false);
    auto dfs = [&](auto& self, std::size_t at) -> void {
        if (at == d) {
            paths.push_back(path);
            return;
        }
        if (path.size() == cap) return;
        for (std::size_t q : out_edges[at]) {
            const std::size_t next = node_ids[cfg_.edges[q].dst];
            if (on_path[next]) continue;
            on_path[next] = true;
            path.push_back(q);
            self(self, next);
            path.pop_back();
            on_path[next] = false;
        }
    };
    on_path[s] = true;
    dfs(dfs, s);
    if (paths.empty()) throw ConfigurationError("routing: no path from " + cfg_.source + " to " + cfg_.destination);

    std::vector<std::size_t> arm_of(cfg_.edges.size(), static_cast<std::size_t>(-1));
    std::vector<bool> used(cfg_.edges.size(), false);
    for (const auto& p : paths) {
        for (std::size_t q : p) used[q] = true;
    }
    for (std::size_t q = 0; q < cfg_.edges.size(); ++q) {
        if (used[q]) {
            arm_of[q] = arm_edges_.size();
            arm_edges_.push_back(q);
        }
    }
    std::vector<Action> actions;
    actions.reserve(paths.size());
    for (const auto& p : paths) {
        std::vector<std::size_t> arms;
        for (std::size_t q : p) arms.push_back(arm_of[q]);
        actions.push_back(Action::unit(arm_edges_.size(), std::move(arms)));
    }
    actions_ = std::make_shared<ActionSet>(arm_edges_.size(), 2, std::move(actions));
}

std::vector<RewardVector> RoutingEnvironment::true_means() const {
    std::vector<RewardVector> out;
    out.reserve(arm_edges_.size());
    for (std::size_t q : arm_edges_) out.push_back(edge_mean(cfg_.edges[q]));
    return out;
}

std::vector<RewardVector> RoutingEnvironment::sample(std::span<const std::size_t> arms, Rng& rng) const {
    std::vector<RewardVector> out;
    out.reserve(arms.size());
    for (std::size_t arm : arms) {
        const RoutingEdge& e = cfg_.edges[arm_edges_.at(arm)];
        double draw = rng.uniform01();
        std::size_t pick = 0;
        while (pick + 1 < e.outcomes.size() && draw >= e.outcomes[pick].prob) {
            draw -= e.outcomes[pick].prob;
            ++pick;
        }
        const EdgeOutcome& o = e.outcomes[pick];
        out.push_back({1.0 - o.delay / e.delay_max, 1.0 - o.energy / e.energy_max});
    }
    return out;
}

// ---------------------------------------------------- generic testbed

BernoulliEnvironment::BernoulliEnvironment(std::vector<RewardVector> arm_means, std::vector<Action> actions)
    : means_(std::move(arm_means)) {
    if (means_.empty()) throw ConfigurationError("bernoulli: need at least one arm");
    const std::size_t dim = means_.front().dim();
    for (const RewardVector& m : means_) {
        if (m.dim() != dim) throw DimensionError("bernoulli: arm means have mixed dimensions");
        if (!m.in_unit_cube()) throw ConfigurationError("bernoulli: arm means must lie in [0,1]^D");
    }
    actions_ = std::make_shared<ActionSet>(means_.size(), dim, std::move(actions));
}

std::vector<RewardVector> BernoulliEnvironment::sample(std::span<const std::size_t> arms, Rng& rng) const {
    std::vector<RewardVector> out;
    out.reserve(arms.size());
    for (std::size_t arm : arms) {
        const RewardVector& mu = means_.at(arm);
        RewardVector x(mu.dim());
        for (std::size_t j = 0; j < mu.dim(); ++j) x[j] = rng.bernoulli(mu[j]) ? 1.0 : 0.0;
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace comomab
