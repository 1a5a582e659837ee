#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bessched/env.hpp"
#include "bessched/grad_opt.hpp"
#include "bessched/rng.hpp"

namespace bessched {

// Dense network with tanh hidden layers and a linear output, parameters in
// one flat vector laid out per layer as [W row-major | b].
struct Mlp {
    std::vector<int> sizes;
    std::vector<double> params;

    static Mlp zeros(std::vector<int> sizes);
    // Uniform init in +-1/sqrt(fan_in) per layer.
    static Mlp random(std::vector<int> sizes, Rng& rng);
    std::size_t param_count() const;
    int in_dim() const { return sizes.front(); }
    int out_dim() const { return sizes.back(); }
};

std::vector<double> mlp_forward(const Mlp& net, const std::vector<double>& x);

// acts[0] is the input, acts[l+1] the post-activation output of layer l.
struct MlpCache {
    std::vector<std::vector<double>> acts;
};

const std::vector<double>& mlp_forward_cached(const Mlp& net, const std::vector<double>& x,
                                              MlpCache& cache);

// Reverse pass. Accumulates dL/dparams into param_grad (same layout as
// params, not zeroed here) and returns dL/dinput.
std::vector<double> mlp_backward(const Mlp& net, const MlpCache& cache,
                                 const std::vector<double>& d_out, std::vector<double>& param_grad);

class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t act_dim);

    void push(const std::vector<double>& obs, const std::vector<double>& act, double reward,
              const std::vector<double>& next_obs, bool done);

    struct Batch {
        std::size_t size = 0;
        std::size_t obs_dim = 0;
        std::size_t act_dim = 0;
        std::vector<double> obs;       // size * obs_dim
        std::vector<double> act;       // size * act_dim
        std::vector<double> reward;    // size
        std::vector<double> next_obs;  // size * obs_dim
        std::vector<double> done;      // size, 0 or 1
    };

    // Uniform sampling with replacement; requires size() >= batch_size.
    Batch sample(std::size_t batch_size, Rng& rng) const;

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }

    // Ring inspection, index 0 .. size()-1 in storage order.
    std::vector<double> obs_at(std::size_t i) const;
    double reward_at(std::size_t i) const;

private:
    std::size_t capacity_, obs_dim_, act_dim_;
    std::size_t cursor_ = 0, size_ = 0;
    std::vector<double> obs_, act_, reward_, next_obs_, done_;
};

struct SacConfig {
    double lr = 5e-4;
    std::size_t buffer_capacity = 10000;
    long learning_starts = 500;
    std::size_t batch_size = 64;
    double gamma = 0.99;
    double tau = 0.005;
    double temperature = 0.2;
    bool auto_temperature = false;  // tunes toward entropy -act_dim when set
    long total_steps = 50000;
    long eval_every = 5000;
    int eval_episodes = 5;
    std::uint64_t seed = 0;
    bool store_raw_action = false;  // default stores the post-safety action
    int hidden = 64;

    void validate() const;
};

struct AgentParams {
    Mlp actor;    // outputs [mean | log_std] per action dim
    Mlp critic1;  // over (obs, action)
    Mlp critic2;
    Mlp target1;
    Mlp target2;
    double log_temperature = 0.0;

    static AgentParams init(int obs_dim, int act_dim, int hidden, double temperature, Rng& rng);
    int obs_dim() const { return critic1.in_dim() - act_dim(); }
    int act_dim() const { return actor.out_dim() / 2; }
    double temperature() const;
};

struct PolicySample {
    std::vector<double> action;  // componentwise in (-1, 1)
    double log_prob = 0.0;
};

// Squashed-Gaussian draw: action = tanh(mean + std * z) with the tanh
// change-of-variables correction in log_prob; log_std clamped to [-20, 2].
PolicySample policy_sample(const Mlp& actor, const std::vector<double>& obs, Rng& rng);
std::vector<double> policy_mean_action(const Mlp& actor, const std::vector<double>& obs);

// Affine map from the unit square onto the power boxes, and back.
std::array<double, 2> scale_action(const std::array<double, 2>& unit, const GridParams& grid,
                                   const BatteryParams& battery);
std::array<double, 2> unscale_action(const std::array<double, 2>& kw, const GridParams& grid,
                                     const BatteryParams& battery);

// Bootstrap targets: r + gamma * (1 - done) * (min target Q - temperature * log pi).
std::vector<double> critic_targets(const ReplayBuffer::Batch& batch, const AgentParams& agent,
                                   const SacConfig& config, Rng& rng);

// target <- (1 - tau) * target + tau * online, per coordinate.
void soft_update(Mlp& target, const Mlp& online, double tau);

struct SacOptimizerState {
    AdamState actor;
    AdamState critic1;
    AdamState critic2;
    AdamState temperature;
    explicit SacOptimizerState(const AgentParams& agent);
};

struct UpdateDiag {
    double critic1_loss = 0.0;
    double critic2_loss = 0.0;
    double actor_loss = 0.0;
    double mean_log_prob = 0.0;
    double temperature = 0.0;
};

UpdateDiag update_step(AgentParams& agent, SacOptimizerState& opt, const ReplayBuffer& buffer,
                       const SacConfig& config, Rng& rng);

using EnvFactory = std::function<BessEnv(std::uint64_t seed)>;

struct EvalEpisode {
    double total_reward = 0.0;
    double total_cost_usd = 0.0;
    double min_soc = 0.0;
    double end_soc = 0.0;
    int soc_violations = 0;
};

struct EvalReport {
    double mean_reward = 0.0;
    double mean_cost_usd = 0.0;
    double mean_end_soc = 0.0;
    std::vector<EvalEpisode> episodes;
};

// Deterministic mean-action evaluation over n fresh episodes.
EvalReport evaluate(const AgentParams& agent, const EnvFactory& factory, int n_episodes, Rng& rng);

struct EvalPoint {
    long env_step = 0;
    double mean_reward = 0.0;
    double mean_cost_usd = 0.0;
    double mean_end_soc = 0.0;
};

struct AuditCounters {
    long box_violations = 0;
    long unbalanced_feasible = 0;
    long soc_violations = 0;
};

struct TrainResult {
    AgentParams agent;
    std::vector<EvalPoint> curve;
    AuditCounters audit;
};

// Off-policy training loop: random unit actions until learning_starts, one
// update per environment step afterwards, periodic mean-action evaluation.
// Deterministic for a fixed config.seed.
TrainResult train(const EnvFactory& factory, const SacConfig& config);

void save_checkpoint(const std::string& path, const AgentParams& agent, const SacConfig& config);
AgentParams load_checkpoint(const std::string& path);
void write_learning_curve_csv(const std::string& path, const std::vector<EvalPoint>& curve);

std::string sac_config_hash(const SacConfig& config);

}  // namespace bessched
