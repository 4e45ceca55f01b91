#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "amper/cartpole.hpp"
#include "amper/mlp.hpp"
#include "amper/replay.hpp"

namespace amper {

struct Experience {
    std::array<double, 4> state;
    int action;
    double reward;
    std::array<double, 4> next_state;
    bool terminal;  // true only for failure states, not the step cap
};

struct TrainConfig {
    std::size_t total_steps = 50000;
    std::size_t er_size = 2000;
    std::size_t batch = 64;
    double gamma = 0.99;
    double learning_rate = 1e-3;
    double eps_start = 1.0;
    double eps_end = 0.01;
    double eps_anneal_fraction = 0.1;  // fraction of total steps
    std::size_t target_sync_interval = 500;
    std::size_t learn_start = 500;     // min stored experiences before training
    ReplayKind replay = ReplayKind::per;
    ReplayOptions replay_opts;
    std::vector<std::size_t> hidden = {64, 64};
    uint64_t seed = 1;
    bool importance_sampling = false;  // beta-annealed PER weights, off by default
    double is_beta_start = 0.4;
};

struct CurvePoint {
    std::size_t step;
    std::size_t episode;
    double episode_return;
};

struct TrainResult {
    std::vector<CurvePoint> curve;
    double test_score = 0.0;  // average return of 10 greedy episodes
    std::string sampler;
    uint64_t seed = 0;
    bool aborted = false;     // non-finite loss
};

// per-sample TD error: delta = r + gamma * max_a' Q_target(s',a') * (1-terminal) - Q(s,a)
std::vector<double> td_error(const Mlp& qnet, const Mlp& target, const std::vector<Experience>& batch,
                             double gamma);

TrainResult train(const TrainConfig& cfg);

std::string curve_csv(const TrainResult& result);

}  // namespace amper
