#include "bessched/sac.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "bessched/errors.hpp"

namespace bessched {

namespace {
constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;
constexpr double kTanhEps = 1e-6;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * M_PI);
}  // namespace

Mlp Mlp::zeros(std::vector<int> sizes_in) {
    if (sizes_in.size() < 2) throw ShapeMismatch("mlp needs at least input and output sizes");
    Mlp net;
    net.sizes = std::move(sizes_in);
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l)
        count += static_cast<std::size_t>(net.sizes[l] + 1) * net.sizes[l + 1];
    net.params.assign(count, 0.0);
    return net;
}

Mlp Mlp::random(std::vector<int> sizes_in, Rng& rng) {
    Mlp net = zeros(std::move(sizes_in));
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
        const int fan_in = net.sizes[l];
        const int fan_out = net.sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (int i = 0; i < fan_out * fan_in; ++i) net.params[off + i] = rng.uniform(-bound, bound);
        off += static_cast<std::size_t>(fan_out) * fan_in;
        for (int i = 0; i < fan_out; ++i) net.params[off + i] = rng.uniform(-bound, bound);
        off += fan_out;
    }
    return net;
}

std::size_t Mlp::param_count() const {
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
        count += static_cast<std::size_t>(sizes[l] + 1) * sizes[l + 1];
    return count;
}

const std::vector<double>& mlp_forward_cached(const Mlp& net, const std::vector<double>& x,
                                              MlpCache& cache) {
    if (static_cast<int>(x.size()) != net.in_dim()) throw ShapeMismatch("mlp input size");
    const std::size_t layers = net.sizes.size() - 1;
    cache.acts.resize(layers + 1);
    cache.acts[0] = x;

    std::size_t off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        const int in_n = net.sizes[l];
        const int out_n = net.sizes[l + 1];
        const double* w = net.params.data() + off;
        const double* b = w + static_cast<std::size_t>(out_n) * in_n;
        const std::vector<double>& in = cache.acts[l];
        std::vector<double>& out = cache.acts[l + 1];
        out.resize(out_n);
        const bool last = l + 1 == layers;
        for (int i = 0; i < out_n; ++i) {
            double z = b[i];
            const double* wi = w + static_cast<std::size_t>(i) * in_n;
            for (int j = 0; j < in_n; ++j) z += wi[j] * in[j];
            out[i] = last ? z : std::tanh(z);
        }
        off += static_cast<std::size_t>(out_n) * (in_n + 1);
    }
    return cache.acts.back();
}

std::vector<double> mlp_forward(const Mlp& net, const std::vector<double>& x) {
    MlpCache cache;
    return mlp_forward_cached(net, x, cache);
}

std::vector<double> mlp_backward(const Mlp& net, const MlpCache& cache,
                                 const std::vector<double>& d_out,
                                 std::vector<double>& param_grad) {
    const std::size_t layers = net.sizes.size() - 1;
    if (cache.acts.size() != layers + 1) throw ShapeMismatch("stale forward cache");
    if (static_cast<int>(d_out.size()) != net.out_dim()) throw ShapeMismatch("d_out size");
    if (param_grad.size() != net.params.size()) throw ShapeMismatch("param_grad size");

    std::vector<std::size_t> offsets(layers);
    std::size_t off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        offsets[l] = off;
        off += static_cast<std::size_t>(net.sizes[l] + 1) * net.sizes[l + 1];
    }

    // Output layer is linear, so d_out is already dL/dz for the last layer.
    std::vector<double> delta = d_out;
    std::vector<double> d_in;
    for (std::size_t li = layers; li-- > 0;) {
        const int in_n = net.sizes[li];
        const int out_n = net.sizes[li + 1];
        const double* w = net.params.data() + offsets[li];
        double* gw = param_grad.data() + offsets[li];
        double* gb = gw + static_cast<std::size_t>(out_n) * in_n;
        const std::vector<double>& in = cache.acts[li];

        d_in.assign(in_n, 0.0);
        for (int i = 0; i < out_n; ++i) {
            const double dz = delta[i];
            gb[i] += dz;
            const double* wi = w + static_cast<std::size_t>(i) * in_n;
            double* gwi = gw + static_cast<std::size_t>(i) * in_n;
            for (int j = 0; j < in_n; ++j) {
                gwi[j] += dz * in[j];
                d_in[j] += dz * wi[j];
            }
        }
        if (li > 0) {
            // `in` is the tanh output of the previous layer.
            delta.resize(in_n);
            for (int j = 0; j < in_n; ++j) delta[j] = d_in[j] * (1.0 - in[j] * in[j]);
        }
    }
    return d_in;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
    if (capacity == 0) throw ValidationError("replay capacity must be > 0");
    obs_.resize(capacity * obs_dim);
    act_.resize(capacity * act_dim);
    reward_.resize(capacity);
    next_obs_.resize(capacity * obs_dim);
    done_.resize(capacity);
}

void ReplayBuffer::push(const std::vector<double>& obs, const std::vector<double>& act,
                        double reward, const std::vector<double>& next_obs, bool done) {
    if (obs.size() != obs_dim_ || next_obs.size() != obs_dim_ || act.size() != act_dim_)
        throw ShapeMismatch("replay push dims");
    std::copy(obs.begin(), obs.end(), obs_.begin() + cursor_ * obs_dim_);
    std::copy(act.begin(), act.end(), act_.begin() + cursor_ * act_dim_);
    reward_[cursor_] = reward;
    std::copy(next_obs.begin(), next_obs.end(), next_obs_.begin() + cursor_ * obs_dim_);
    done_[cursor_] = done ? 1.0 : 0.0;
    cursor_ = (cursor_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
    if (size_ < batch_size || batch_size == 0) throw BufferTooSmall();
    Batch b;
    b.size = batch_size;
    b.obs_dim = obs_dim_;
    b.act_dim = act_dim_;
    b.obs.resize(batch_size * obs_dim_);
    b.act.resize(batch_size * act_dim_);
    b.reward.resize(batch_size);
    b.next_obs.resize(batch_size * obs_dim_);
    b.done.resize(batch_size);
    for (std::size_t k = 0; k < batch_size; ++k) {
        std::size_t i = rng.integer(size_);
        std::copy_n(obs_.begin() + i * obs_dim_, obs_dim_, b.obs.begin() + k * obs_dim_);
        std::copy_n(act_.begin() + i * act_dim_, act_dim_, b.act.begin() + k * act_dim_);
        b.reward[k] = reward_[i];
        std::copy_n(next_obs_.begin() + i * obs_dim_, obs_dim_, b.next_obs.begin() + k * obs_dim_);
        b.done[k] = done_[i];
    }
    return b;
}

std::vector<double> ReplayBuffer::obs_at(std::size_t i) const {
    return {obs_.begin() + i * obs_dim_, obs_.begin() + (i + 1) * obs_dim_};
}

double ReplayBuffer::reward_at(std::size_t i) const { return reward_[i]; }

void SacConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must be in (0, 1)");
    if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("tau must be in (0, 1]");
    if (!(lr > 0.0)) throw ValidationError("lr must be > 0");
    if (batch_size == 0) throw ValidationError("batch_size must be > 0");
    if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
    if (hidden <= 0) throw ValidationError("hidden width must be > 0");
}

AgentParams AgentParams::init(int obs_dim, int act_dim, int hidden, double temperature, Rng& rng) {
    AgentParams a;
    a.actor = Mlp::random({obs_dim, hidden, hidden, 2 * act_dim}, rng);
    a.critic1 = Mlp::random({obs_dim + act_dim, hidden, hidden, 1}, rng);
    a.critic2 = Mlp::random({obs_dim + act_dim, hidden, hidden, 1}, rng);
    a.target1 = a.critic1;
    a.target2 = a.critic2;
    a.log_temperature = std::log(temperature);
    return a;
}

double AgentParams::temperature() const { return std::exp(log_temperature); }

namespace {

// One reparameterized draw with everything the backward pass needs.
struct ActorDraw {
    std::vector<double> mu, log_std_raw, log_std, sigma, zeta, action;
    double log_prob = 0.0;
};

ActorDraw sample_actor(const Mlp& actor, const std::vector<double>& obs, Rng& rng,
                       MlpCache& cache) {
    const std::vector<double>& head = mlp_forward_cached(actor, obs, cache);
    const int act_dim = actor.out_dim() / 2;
    ActorDraw d;
    d.mu.assign(head.begin(), head.begin() + act_dim);
    d.log_std_raw.assign(head.begin() + act_dim, head.end());
    d.log_std.resize(act_dim);
    d.sigma.resize(act_dim);
    d.zeta.resize(act_dim);
    d.action.resize(act_dim);
    for (int i = 0; i < act_dim; ++i) {
        d.log_std[i] = std::clamp(d.log_std_raw[i], kLogStdMin, kLogStdMax);
        d.sigma[i] = std::exp(d.log_std[i]);
        d.zeta[i] = rng.normal(0.0, 1.0);
        const double pre = d.mu[i] + d.sigma[i] * d.zeta[i];
        d.action[i] = std::tanh(pre);
        d.log_prob += -kHalfLog2Pi - d.log_std[i] - 0.5 * d.zeta[i] * d.zeta[i] -
                      std::log(1.0 - d.action[i] * d.action[i] + kTanhEps);
    }
    return d;
}

std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

PolicySample policy_sample(const Mlp& actor, const std::vector<double>& obs, Rng& rng) {
    MlpCache cache;
    ActorDraw d = sample_actor(actor, obs, rng, cache);
    return {std::move(d.action), d.log_prob};
}

std::vector<double> policy_mean_action(const Mlp& actor, const std::vector<double>& obs) {
    std::vector<double> head = mlp_forward(actor, obs);
    const int act_dim = static_cast<int>(head.size()) / 2;
    std::vector<double> a(act_dim);
    for (int i = 0; i < act_dim; ++i) a[i] = std::tanh(head[i]);
    return a;
}

std::array<double, 2> scale_action(const std::array<double, 2>& unit, const GridParams& grid,
                                   const BatteryParams& battery) {
    auto affine = [](double u, double lo, double hi) { return lo + 0.5 * (u + 1.0) * (hi - lo); };
    return {affine(unit[0], grid.p_g_min, grid.p_g_max),
            affine(unit[1], battery.p_b_min, battery.p_b_max)};
}

std::array<double, 2> unscale_action(const std::array<double, 2>& kw, const GridParams& grid,
                                     const BatteryParams& battery) {
    auto inverse = [](double p, double lo, double hi) {
        if (hi <= lo) return 0.0;
        return std::clamp(2.0 * (p - lo) / (hi - lo) - 1.0, -1.0, 1.0);
    };
    return {inverse(kw[0], grid.p_g_min, grid.p_g_max),
            inverse(kw[1], battery.p_b_min, battery.p_b_max)};
}

std::vector<double> critic_targets(const ReplayBuffer::Batch& batch, const AgentParams& agent,
                                   const SacConfig& config, Rng& rng) {
    std::vector<double> y(batch.size);
    const double alpha_t = agent.temperature();
    MlpCache actor_cache, q_cache;
    std::vector<double> next_obs(batch.obs_dim);
    for (std::size_t k = 0; k < batch.size; ++k) {
        std::copy_n(batch.next_obs.begin() + k * batch.obs_dim, batch.obs_dim, next_obs.begin());
        ActorDraw d = sample_actor(agent.actor, next_obs, rng, actor_cache);
        std::vector<double> xin = concat(next_obs, d.action);
        const double q1 = mlp_forward_cached(agent.target1, xin, q_cache)[0];
        const double q2 = mlp_forward_cached(agent.target2, xin, q_cache)[0];
        const double soft_q = std::min(q1, q2) - alpha_t * d.log_prob;
        y[k] = batch.reward[k] + config.gamma * (1.0 - batch.done[k]) * soft_q;
    }
    return y;
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
    if (target.params.size() != online.params.size()) throw ShapeMismatch("soft_update shapes");
    for (std::size_t i = 0; i < target.params.size(); ++i)
        target.params[i] = (1.0 - tau) * target.params[i] + tau * online.params[i];
}

SacOptimizerState::SacOptimizerState(const AgentParams& agent)
    : actor(agent.actor.param_count()),
      critic1(agent.critic1.param_count()),
      critic2(agent.critic2.param_count()),
      temperature(1) {}

UpdateDiag update_step(AgentParams& agent, SacOptimizerState& opt, const ReplayBuffer& buffer,
                       const SacConfig& config, Rng& rng) {
    config.validate();
    if (buffer.size() < static_cast<std::size_t>(std::max<long>(config.learning_starts, 1)) ||
        buffer.size() < config.batch_size)
        throw BufferTooSmall();

    const std::size_t B = config.batch_size;
    const double inv_b = 1.0 / static_cast<double>(B);
    ReplayBuffer::Batch batch = buffer.sample(B, rng);
    std::vector<double> y = critic_targets(batch, agent, config, rng);

    UpdateDiag diag;
    diag.temperature = agent.temperature();

    // Critic regression toward the bootstrap targets.
    MlpCache cache;
    std::vector<double> xin(batch.obs_dim + batch.act_dim);
    std::vector<double> grad;
    std::vector<double> d_out(1);
    for (int which = 0; which < 2; ++which) {
        Mlp& critic = which == 0 ? agent.critic1 : agent.critic2;
        AdamState& state = which == 0 ? opt.critic1 : opt.critic2;
        grad.assign(critic.params.size(), 0.0);
        double loss = 0.0;
        for (std::size_t k = 0; k < B; ++k) {
            std::copy_n(batch.obs.begin() + k * batch.obs_dim, batch.obs_dim, xin.begin());
            std::copy_n(batch.act.begin() + k * batch.act_dim, batch.act_dim,
                        xin.begin() + batch.obs_dim);
            const double q = mlp_forward_cached(critic, xin, cache)[0];
            const double err = q - y[k];
            loss += err * err * inv_b;
            d_out[0] = 2.0 * err * inv_b;
            mlp_backward(critic, cache, d_out, grad);
        }
        adam_step(state, critic.params, grad, config.lr);
        (which == 0 ? diag.critic1_loss : diag.critic2_loss) = loss;
    }

    // Actor ascent on min-Q with entropy regularization, via the
    // reparameterized draw. Critic parameter gradients land in a scratch
    // buffer; only the gradient w.r.t. the action input is used.
    const double alpha_t = agent.temperature();
    std::vector<double> actor_grad(agent.actor.params.size(), 0.0);
    std::vector<double> critic_scratch(agent.critic1.params.size(), 0.0);
    MlpCache actor_cache, q1_cache, q2_cache;
    const int act_dim = agent.act_dim();
    std::vector<double> obs(batch.obs_dim);
    std::vector<double> d_head(2 * act_dim);
    for (std::size_t k = 0; k < B; ++k) {
        std::copy_n(batch.obs.begin() + k * batch.obs_dim, batch.obs_dim, obs.begin());
        ActorDraw d = sample_actor(agent.actor, obs, rng, actor_cache);
        std::vector<double> q_in = concat(obs, d.action);
        const double q1 = mlp_forward_cached(agent.critic1, q_in, q1_cache)[0];
        const double q2 = mlp_forward_cached(agent.critic2, q_in, q2_cache)[0];
        const bool use1 = q1 <= q2;
        const double q_min = use1 ? q1 : q2;

        d_out[0] = -inv_b;
        std::vector<double> d_qin = mlp_backward(use1 ? agent.critic1 : agent.critic2,
                                                 use1 ? q1_cache : q2_cache, d_out, critic_scratch);

        for (int i = 0; i < act_dim; ++i) {
            const double a = d.action[i];
            const double one_m_a2 = 1.0 - a * a;
            const double da = d_qin[batch.obs_dim + i] +
                              alpha_t * inv_b * (2.0 * a / (one_m_a2 + kTanhEps));
            const double d_pre = da * one_m_a2;
            d_head[i] = d_pre;
            double d_ls = d_pre * d.sigma[i] * d.zeta[i] - alpha_t * inv_b;
            const bool clamped =
                d.log_std_raw[i] <= kLogStdMin || d.log_std_raw[i] >= kLogStdMax;
            d_head[act_dim + i] = clamped ? 0.0 : d_ls;
        }
        mlp_backward(agent.actor, actor_cache, d_head, actor_grad);
        diag.actor_loss += (alpha_t * d.log_prob - q_min) * inv_b;
        diag.mean_log_prob += d.log_prob * inv_b;
    }
    adam_step(opt.actor, agent.actor.params, actor_grad, config.lr);

    if (config.auto_temperature) {
        const double target_entropy = -static_cast<double>(act_dim);
        std::vector<double> lt = {agent.log_temperature};
        std::vector<double> g = {-(diag.mean_log_prob + target_entropy)};
        adam_step(opt.temperature, lt, g, config.lr);
        agent.log_temperature = lt[0];
    }

    soft_update(agent.target1, agent.critic1, config.tau);
    soft_update(agent.target2, agent.critic2, config.tau);
    return diag;
}

EvalReport evaluate(const AgentParams& agent, const EnvFactory& factory, int n_episodes, Rng& rng) {
    if (n_episodes < 1) throw ValidationError("n_episodes must be >= 1");
    EvalReport report;
    report.episodes.reserve(n_episodes);
    for (int e = 0; e < n_episodes; ++e) {
        BessEnv env = factory(rng.split());
        Policy policy = [&agent, &env](const EnvState& s) {
            std::vector<double> u = policy_mean_action(agent.actor, s.obs);
            return scale_action({u[0], u[1]}, env.grid(), env.battery());
        };
        RolloutResult r = rollout(policy, env);
        EvalEpisode ep;
        ep.total_reward = r.total_reward;
        ep.total_cost_usd = r.trajectory.total_cost;
        ep.min_soc = r.trajectory.min_soc;
        ep.end_soc = r.trajectory.end_soc;
        ep.soc_violations = r.trajectory.soc_violations;
        report.episodes.push_back(ep);
        report.mean_reward += ep.total_reward;
        report.mean_cost_usd += ep.total_cost_usd;
        report.mean_end_soc += ep.end_soc;
    }
    report.mean_reward /= n_episodes;
    report.mean_cost_usd /= n_episodes;
    report.mean_end_soc /= n_episodes;
    return report;
}

TrainResult train(const EnvFactory& factory, const SacConfig& config) {
    config.validate();
    Rng rng(config.seed);

    BessEnv env = factory(rng.split());
    EnvState state = env.reset();
    const int obs_dim = static_cast<int>(state.obs.size());
    const int act_dim = 2;

    TrainResult result{AgentParams::init(obs_dim, act_dim, config.hidden, config.temperature, rng),
                       {},
                       {}};
    SacOptimizerState opt(result.agent);
    ReplayBuffer buffer(config.buffer_capacity, obs_dim, act_dim);

    auto harvest_audit = [&result](const BessEnv& e) {
        result.audit.box_violations += e.box_violation_count();
        result.audit.unbalanced_feasible += e.unbalanced_feasible_count();
        result.audit.soc_violations += e.soc_violation_count();
    };

    auto eval_at = [&](long env_step) {
        Rng eval_rng(config.seed ^ (0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(env_step)));
        EvalReport er = evaluate(result.agent, factory, config.eval_episodes, eval_rng);
        result.curve.push_back({env_step, er.mean_reward, er.mean_cost_usd, er.mean_end_soc});
    };

    std::vector<double> unit(act_dim);
    for (long step = 0; step < config.total_steps; ++step) {
        if (state.done) {
            harvest_audit(env);
            env = factory(rng.split());
            state = env.reset();
        }
        if (step < config.learning_starts) {
            for (int i = 0; i < act_dim; ++i) unit[i] = rng.uniform(-1.0, 1.0);
        } else {
            unit = policy_sample(result.agent.actor, state.obs, rng).action;
        }
        Transition tr = env.step(scale_action({unit[0], unit[1]}, env.grid(), env.battery()));

        std::array<double, 2> stored =
            config.store_raw_action ? std::array<double, 2>{unit[0], unit[1]}
                                    : unscale_action(tr.action_executed, env.grid(), env.battery());
        buffer.push(tr.state.obs, {stored[0], stored[1]}, tr.reward, tr.next_state.obs,
                    tr.next_state.done);
        state = tr.next_state;

        if (static_cast<long>(buffer.size()) >= config.learning_starts &&
            buffer.size() >= config.batch_size)
            update_step(result.agent, opt, buffer, config, rng);

        if (config.eval_every > 0 && (step + 1) % config.eval_every == 0 &&
            step + 1 < config.total_steps)
            eval_at(step + 1);
    }
    harvest_audit(env);
    eval_at(config.total_steps);
    return result;
}

std::string sac_config_hash(const SacConfig& c) {
    // FNV-1a over a canonical rendering of the fields that shape training.
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%g|%zu|%ld|%zu|%g|%g|%g|%d|%ld|%d|%d",
                  c.lr, c.buffer_capacity, c.learning_starts, c.batch_size, c.gamma, c.tau,
                  c.temperature, c.auto_temperature ? 1 : 0, c.total_steps, c.hidden,
                  c.store_raw_action ? 1 : 0);
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

nlohmann::json mlp_to_json(const Mlp& net) {
    return {{"sizes", net.sizes}, {"params", net.params}};
}

Mlp mlp_from_json(const nlohmann::json& j) {
    Mlp net = Mlp::zeros(j.at("sizes").get<std::vector<int>>());
    net.params = j.at("params").get<std::vector<double>>();
    if (net.params.size() != net.param_count()) throw ShapeMismatch("checkpoint parameter count");
    return net;
}

}  // namespace

void save_checkpoint(const std::string& path, const AgentParams& agent, const SacConfig& config) {
    nlohmann::json j = {
        {"format", "sac-checkpoint-v1"},
        {"config_hash", sac_config_hash(config)},
        {"log_temperature", agent.log_temperature},
        {"actor", mlp_to_json(agent.actor)},
        {"critic1", mlp_to_json(agent.critic1)},
        {"critic2", mlp_to_json(agent.critic2)},
        {"target1", mlp_to_json(agent.target1)},
        {"target2", mlp_to_json(agent.target2)},
    };
    std::ofstream out(path);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("short write to " + path);
}

AgentParams load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "sac-checkpoint-v1")
        throw ValidationError("unsupported checkpoint format in " + path);
    AgentParams a;
    a.actor = mlp_from_json(j.at("actor"));
    a.critic1 = mlp_from_json(j.at("critic1"));
    a.critic2 = mlp_from_json(j.at("critic2"));
    a.target1 = mlp_from_json(j.at("target1"));
    a.target2 = mlp_from_json(j.at("target2"));
    a.log_temperature = j.at("log_temperature").get<double>();
    return a;
}

void write_learning_curve_csv(const std::string& path, const std::vector<EvalPoint>& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write curve: " + path);
    out << "env_step,mean_eval_reward,mean_cost,end_soc\n";
    char buf[160];
    for (const EvalPoint& p : curve) {
        std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%.6f", p.env_step, p.mean_reward,
                      p.mean_cost_usd, p.mean_end_soc);
        out << buf << '\n';
    }
}

}  // namespace bessched
