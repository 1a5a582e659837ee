#include "bessched/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bessched/errors.hpp"

namespace bessched {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

KvConfig KvConfig::from_string(const std::string& text) {
    KvConfig kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("empty key on config line " + std::to_string(lineno));
        kv.entries_[key] = value;
    }
    return kv;
}

bool KvConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KvConfig::get_str(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end != it->second.c_str() + it->second.size())
        throw ValidationError("config key " + key + " is not numeric: " + it->second);
    return v;
}

long KvConfig::get_long(const std::string& key, long fallback) const {
    double v = get_double(key, static_cast<double>(fallback));
    return static_cast<long>(v);
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError("config key " + key + " is not boolean: " + it->second);
}

void KvConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

BatteryParams battery_from(const KvConfig& kv) {
    BatteryParams b;
    b.capacity_kwh = kv.get_double("battery.capacity_kwh", b.capacity_kwh);
    b.soc_init = kv.get_double("battery.soc_init", b.soc_init);
    b.soc_min = kv.get_double("battery.soc_min", b.soc_min);
    b.soc_max = kv.get_double("battery.soc_max", b.soc_max);
    b.p_b_min = kv.get_double("battery.p_b_min", b.p_b_min);
    b.p_b_max = kv.get_double("battery.p_b_max", b.p_b_max);
    b.validate();
    return b;
}

GridParams grid_from(const KvConfig& kv) {
    GridParams g;
    g.p_g_min = kv.get_double("grid.p_g_min", g.p_g_min);
    g.p_g_max = kv.get_double("grid.p_g_max", g.p_g_max);
    g.validate();
    return g;
}

GradOptConfig grad_config_from(const KvConfig& kv) {
    GradOptConfig c;
    c.n_epochs = kv.get_long("grad_opt.n_epochs", c.n_epochs);
    c.tol = kv.get_double("grad_opt.tol", c.tol);
    c.init_lr = kv.get_double("grad_opt.init_lr", c.init_lr);
    c.d_rate = kv.get_double("grad_opt.d_rate", c.d_rate);
    c.d_steps = kv.get_long("grad_opt.d_steps", c.d_steps);
    c.alpha_min = kv.get_double("grad_opt.alpha_min", c.alpha_min);
    c.alpha_max = kv.get_double("grad_opt.alpha_max", c.alpha_max);
    c.alpha_cap = kv.get_double("grad_opt.alpha_cap", c.alpha_cap);
    c.lambda_soc = kv.get_double("grad_opt.lambda_soc", c.lambda_soc);
    c.lambda_balance = kv.get_double("grad_opt.lambda_balance", c.lambda_balance);
    c.lambda_alpha = kv.get_double("grad_opt.lambda_alpha", c.lambda_alpha);
    c.lambda_end_soc = kv.get_double("grad_opt.lambda_end_soc", c.lambda_end_soc);
    c.power_norm_k = kv.get_double("grad_opt.power_norm_k", c.power_norm_k);
    c.price_norm_k = kv.get_double("grad_opt.price_norm_k", c.price_norm_k);
    c.check_every = kv.get_long("grad_opt.check_every", c.check_every);
    c.wall_budget_s = kv.get_double("grad_opt.wall_budget_s", c.wall_budget_s);
    c.n_restarts = static_cast<int>(kv.get_long("grad_opt.n_restarts", c.n_restarts));
    c.validate();
    return c;
}

EnvConfig env_config_from(const KvConfig& kv) {
    EnvConfig c;
    c.alpha_g_fixed = kv.get_double("env.alpha_g_fixed", c.alpha_g_fixed);
    c.alpha_b_fixed = kv.get_double("env.alpha_b_fixed", c.alpha_b_fixed);
    c.alpha_s = kv.get_double("env.alpha_s", c.alpha_s);
    c.alpha_l = kv.get_double("env.alpha_l", c.alpha_l);
    c.alpha_p = kv.get_double("env.alpha_p", c.alpha_p);
    c.eta = kv.get_double("env.eta", c.eta);
    c.beta = kv.get_double("env.beta", c.beta);
    c.soc_min = kv.get_double("env.soc_min", c.soc_min);
    c.soc_max = kv.get_double("env.soc_max", c.soc_max);
    c.power_norm_k = kv.get_double("env.power_norm_k", c.power_norm_k);
    c.price_norm_k = kv.get_double("env.price_norm_k", c.price_norm_k);
    std::string mode = kv.get_str("env.state_mode", "per_step");
    if (mode == "per_step") c.state_mode = StateMode::PerStepUncertainty;
    else if (mode == "entropy") c.state_mode = StateMode::EntropyVector;
    else throw ValidationError("env.state_mode must be per_step or entropy");
    c.safety_enabled = kv.get_bool("env.safety_enabled", c.safety_enabled);
    c.validate();
    return c;
}

SacConfig sac_config_from(const KvConfig& kv) {
    SacConfig c;
    c.lr = kv.get_double("sac.lr", c.lr);
    c.buffer_capacity = static_cast<std::size_t>(
        kv.get_long("sac.buffer_capacity", static_cast<long>(c.buffer_capacity)));
    c.learning_starts = kv.get_long("sac.learning_starts", c.learning_starts);
    c.batch_size =
        static_cast<std::size_t>(kv.get_long("sac.batch_size", static_cast<long>(c.batch_size)));
    c.gamma = kv.get_double("sac.gamma", c.gamma);
    c.tau = kv.get_double("sac.tau", c.tau);
    c.temperature = kv.get_double("sac.temperature", c.temperature);
    c.auto_temperature = kv.get_bool("sac.auto_temperature", c.auto_temperature);
    c.total_steps = kv.get_long("sac.total_steps", c.total_steps);
    c.eval_every = kv.get_long("sac.eval_every", c.eval_every);
    c.eval_episodes = static_cast<int>(kv.get_long("sac.eval_episodes", c.eval_episodes));
    c.seed = static_cast<std::uint64_t>(kv.get_long("sac.seed", static_cast<long>(c.seed)));
    c.store_raw_action = kv.get_bool("sac.store_raw_action", c.store_raw_action);
    c.hidden = static_cast<int>(kv.get_long("sac.hidden", c.hidden));
    c.validate();
    return c;
}

DistSpec dist_spec_from(const KvConfig& kv) {
    DistSpec s = DistSpec::defaults(family_from_name(kv.get_str("uncertainty.family", "uniform")));
    s.mu = kv.get_double("uncertainty.params.mu", s.mu);
    s.sigma = kv.get_double("uncertainty.params.sigma", s.sigma);
    s.a = kv.get_double("uncertainty.params.a", s.a);
    s.b = kv.get_double("uncertainty.params.b", s.b);
    s.rate = kv.get_double("uncertainty.params.rate", s.rate);
    s.shift = kv.get_double("uncertainty.params.shift", s.shift);
    s.alpha = kv.get_double("uncertainty.params.alpha", s.alpha);
    s.beta = kv.get_double("uncertainty.params.beta", s.beta);
    s.scale = kv.get_double("uncertainty.params.scale", s.scale);
    s.validate();
    return s;
}

}  // namespace bessched
