#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "amper/amper.hpp"
#include "amper/per.hpp"
#include "amper/tcam.hpp"

namespace amper {

// One interface for all sampling strategies so the training loop is
// identical across replays.
class ReplaySampler {
public:
    virtual ~ReplaySampler() = default;

    // new experiences get the current maximum stored priority
    virtual std::size_t insert() = 0;
    virtual std::vector<std::size_t> sample(std::size_t b) = 0;
    virtual void update(const std::vector<std::size_t>& slots,
                        const std::vector<double>& priorities) = 0;
    virtual std::size_t size() const = 0;
    virtual std::string name() const = 0;

    // sampling probability of a slot, when the strategy can state it
    // (PER: p_i/S); NaN otherwise
    virtual double probability(std::size_t /*slot*/) const { return std::nan(""); }
};

enum class ReplayKind { uniform, per, amper_k, amper_fr, amper_fr_hw };

ReplayKind replay_kind_from_name(const std::string& name);
std::string replay_kind_name(ReplayKind kind);

struct ReplayOptions {
    std::size_t capacity = 2000;
    double v_max = 2.0;
    PerConfig per;  // alpha / epsilon_priority
    // Training default uses a larger fixed-radius scaling than the
    // sampling-error sweeps: TD-error priorities cluster in the low groups,
    // where the quantized prefix radius otherwise covers ~1% of the store and
    // the narrow candidate sets destabilize late training.
    AmperConfig amper{.m = 20, .lambda = 0.3, .lambda_prime = 0.6, .v_max = 2.0};
    uint64_t seed = 1;
};

std::unique_ptr<ReplaySampler> make_replay(ReplayKind kind, const ReplayOptions& opts);

}  // namespace amper
