#include "amper/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace amper {

std::vector<double> td_error(const Mlp& qnet, const Mlp& target,
                             const std::vector<Experience>& batch, double gamma) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    const std::size_t b = batch.size();
    const std::size_t actions = qnet.output_size();

    std::vector<double> states(b * 4), next_states(b * 4);
    for (std::size_t s = 0; s < b; ++s) {
        for (std::size_t i = 0; i < 4; ++i) {
            states[s * 4 + i] = batch[s].state[i];
            next_states[s * 4 + i] = batch[s].next_state[i];
        }
    }
    std::vector<double> q = qnet.forward_batch(states, b).output;
    std::vector<double> qn = target.forward_batch(next_states, b).output;

    std::vector<double> delta(b);
    for (std::size_t s = 0; s < b; ++s) {
        double max_next = qn[s * actions];
        for (std::size_t a = 1; a < actions; ++a) {
            max_next = std::max(max_next, qn[s * actions + a]);
        }
        double bootstrap = batch[s].terminal ? 0.0 : gamma * max_next;
        delta[s] = batch[s].reward + bootstrap -
                   q[s * actions + static_cast<std::size_t>(batch[s].action)];
    }
    return delta;
}

namespace {

int greedy_action(const Mlp& qnet, const CartPole::State& s) {
    std::vector<double> q = qnet.forward({s[0], s[1], s[2], s[3]});
    return q[1] > q[0] ? 1 : 0;
}

double evaluate(const Mlp& qnet, uint64_t seed, int episodes = 10) {
    double total = 0.0;
    std::mt19937_64 rng(seed);
    for (int e = 0; e < episodes; ++e) {
        CartPole env;
        CartPole::State s = env.reset(rng);
        double ret = 0.0;
        while (true) {
            auto res = env.step(greedy_action(qnet, s));
            ret += res.reward;
            s = res.next;
            if (res.done) break;
        }
        total += ret;
    }
    return total / episodes;
}

}  // namespace

TrainResult train(const TrainConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> widths = {4};
    widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
    widths.push_back(CartPole::kActions);
    Mlp qnet(widths, rng);
    Mlp target = qnet;

    ReplayOptions ropts = cfg.replay_opts;
    ropts.capacity = cfg.er_size;
    ropts.seed = cfg.seed + 17;
    auto replay = make_replay(cfg.replay, ropts);

    std::vector<Experience> experiences(cfg.er_size);
    std::vector<double> params = qnet.flatten();
    AdamOptimizer opt(params.size(), cfg.learning_rate);

    TrainResult result;
    result.sampler = replay_kind_name(cfg.replay);
    result.seed = cfg.seed;

    CartPole env;
    CartPole::State state = env.reset(rng);
    double episode_return = 0.0;
    std::size_t episode = 0;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> action_dist(0, CartPole::kActions - 1);
    const double anneal_steps =
        std::max(1.0, cfg.eps_anneal_fraction * static_cast<double>(cfg.total_steps));

    for (std::size_t step = 0; step < cfg.total_steps; ++step) {
        double frac = std::min(1.0, static_cast<double>(step) / anneal_steps);
        double eps = cfg.eps_start + frac * (cfg.eps_end - cfg.eps_start);
        int action = u01(rng) < eps ? action_dist(rng) : greedy_action(qnet, state);

        auto res = env.step(action);
        episode_return += res.reward;

        Experience exp{state, action, res.reward, res.next, res.done && !res.truncated};
        std::size_t slot = replay->insert();
        experiences[slot] = exp;

        state = res.next;
        if (res.done) {
            result.curve.push_back({step, episode, episode_return});
            ++episode;
            episode_return = 0.0;
            state = env.reset(rng);
        }

        if (replay->size() >= std::max(cfg.learn_start, cfg.batch)) {
            std::vector<std::size_t> slots = replay->sample(cfg.batch);
            std::vector<Experience> batch(slots.size());
            for (std::size_t j = 0; j < slots.size(); ++j) batch[j] = experiences[slots[j]];

            std::vector<double> states(batch.size() * 4);
            for (std::size_t j = 0; j < batch.size(); ++j) {
                for (std::size_t i = 0; i < 4; ++i) states[j * 4 + i] = batch[j].state[i];
            }
            std::vector<double> delta = td_error(qnet, target, batch, cfg.gamma);

            std::vector<double> weights(batch.size(), 1.0);
            if (cfg.importance_sampling && cfg.replay == ReplayKind::per) {
                // standard beta-annealed correction, normalized by max weight
                double beta = cfg.is_beta_start +
                              (1.0 - cfg.is_beta_start) *
                                  std::min(1.0, static_cast<double>(step) /
                                                    static_cast<double>(cfg.total_steps));
                double n = static_cast<double>(replay->size());
                double wmax = 0.0;
                for (std::size_t j = 0; j < batch.size(); ++j) {
                    double p = replay->probability(slots[j]);
                    if (!std::isfinite(p) || p <= 0.0) p = 1.0 / n;
                    weights[j] = std::pow(n * p, -beta);
                    wmax = std::max(wmax, weights[j]);
                }
                if (wmax > 0.0) {
                    for (double& w : weights) w /= wmax;
                }
            }

            Mlp::BatchCache cache = qnet.forward_batch(states, batch.size());
            std::vector<double> out_delta(batch.size() * qnet.output_size(), 0.0);
            bool finite = true;
            for (std::size_t j = 0; j < batch.size(); ++j) {
                if (!std::isfinite(delta[j])) finite = false;
                // dL/dQ(s,a) = -delta for loss 0.5*delta^2, averaged over batch
                out_delta[j * qnet.output_size() + static_cast<std::size_t>(batch[j].action)] =
                    -weights[j] * delta[j] / static_cast<double>(batch.size());
            }
            if (!finite) {
                result.aborted = true;
                break;
            }
            Mlp::Gradients grads = qnet.backward(cache, out_delta);
            std::vector<double> flat_grads = Mlp::flatten_gradients(grads);
            opt.step(params, flat_grads);
            qnet.unflatten(params);

            std::vector<double> new_priorities(batch.size());
            for (std::size_t j = 0; j < batch.size(); ++j) {
                new_priorities[j] = std::fabs(delta[j]) + ropts.per.epsilon_priority;
            }
            replay->update(slots, new_priorities);
        }

        if ((step + 1) % cfg.target_sync_interval == 0) target = qnet;
    }

    result.test_score = evaluate(qnet, cfg.seed + 999);
    return result;
}

std::string curve_csv(const TrainResult& result) {
    std::ostringstream out;
    out << "step,episode,return,sampler,seed\n";
    for (const auto& p : result.curve) {
        out << p.step << ',' << p.episode << ',' << p.episode_return << ',' << result.sampler
            << ',' << result.seed << '\n';
    }
    return out.str();
}

}  // namespace amper
