#include "amper/replay.hpp"

#include <cmath>
#include <stdexcept>

namespace amper {

ReplayKind replay_kind_from_name(const std::string& name) {
    if (name == "uniform") return ReplayKind::uniform;
    if (name == "per") return ReplayKind::per;
    if (name == "amper-k") return ReplayKind::amper_k;
    if (name == "amper-fr") return ReplayKind::amper_fr;
    if (name == "amper-fr-hw") return ReplayKind::amper_fr_hw;
    throw std::invalid_argument("unknown replay '" + name +
                                "'; expected one of {uniform,per,amper-k,amper-fr,amper-fr-hw}");
}

std::string replay_kind_name(ReplayKind kind) {
    switch (kind) {
        case ReplayKind::uniform: return "uniform";
        case ReplayKind::per: return "per";
        case ReplayKind::amper_k: return "amper-k";
        case ReplayKind::amper_fr: return "amper-fr";
        case ReplayKind::amper_fr_hw: return "amper-fr-hw";
    }
    return "?";
}

namespace {

// PER sum-tree replay; also covers uniform when sample() ignores priorities.
class PerSampler : public ReplaySampler {
public:
    PerSampler(const ReplayOptions& opts, bool uniform)
        : replay_(opts.capacity, opts.v_max, opts.per), rng_(opts.seed), uniform_(uniform) {}

    std::size_t insert() override { return replay_.insert_with_max_priority(); }

    std::vector<std::size_t> sample(std::size_t b) override {
        return uniform_ ? replay_.uniform_sample_batch(b, rng_)
                        : replay_.sample_batch(b, rng_);
    }

    void update(const std::vector<std::size_t>& slots,
                const std::vector<double>& priorities) override {
        replay_.update_batch(slots, priorities);
    }

    std::size_t size() const override { return replay_.store().size(); }
    std::string name() const override { return uniform_ ? "uniform" : "per"; }

    double probability(std::size_t slot) const override {
        if (uniform_) return 1.0 / static_cast<double>(replay_.store().size());
        return replay_.probability(slot);
    }

private:
    PerReplay replay_;
    std::mt19937_64 rng_;
    bool uniform_;
};

// Software AMPER (either variant) over the same store discipline as PER:
// alpha is applied at write, inserts take the current max priority.
class AmperSampler : public ReplaySampler {
public:
    AmperSampler(const ReplayOptions& opts, Variant variant)
        : store_(opts.capacity, opts.v_max), cfg_(opts.amper), per_cfg_(opts.per),
          rng_(opts.seed) {
        cfg_.variant = variant;
        cfg_.v_max = opts.v_max;
    }

    std::size_t insert() override {
        double p = store_.empty() ? 1.0 : store_.max_value();
        return store_.insert(p > 0.0 ? p : 1.0);
    }

    std::vector<std::size_t> sample(std::size_t b) override {
        cfg_.batch_size = b;
        return amper_sample(store_, cfg_, rng_).slots;
    }

    void update(const std::vector<std::size_t>& slots,
                const std::vector<double>& priorities) override {
        if (slots.size() != priorities.size()) {
            throw std::invalid_argument("slots/priorities length mismatch");
        }
        for (std::size_t j = 0; j < slots.size(); ++j) {
            store_.set(slots[j], std::pow(priorities[j], per_cfg_.alpha));
        }
    }

    std::size_t size() const override { return store_.size(); }
    std::string name() const override {
        return cfg_.variant == Variant::kNN ? "amper-k" : "amper-fr";
    }

private:
    PriorityStore store_;
    AmperConfig cfg_;
    PerConfig per_cfg_;
    std::mt19937_64 rng_;
};

// AMPER-fr routed through the TCAM simulator: a bank mirrors the store and
// sampling runs the hardware path (LFSR URNG, prefix queries, CSB).
class AmperFrHwSampler : public ReplaySampler {
public:
    explicit AmperFrHwSampler(const ReplayOptions& opts)
        : store_(opts.capacity, opts.v_max), bank_(opts.capacity), cfg_(opts.amper),
          per_cfg_(opts.per),
          lfsr_(static_cast<uint32_t>(opts.seed == 0 ? 1 : opts.seed & 0xFFFFFFFFu)) {
        cfg_.variant = Variant::frNN;
        cfg_.v_max = opts.v_max;
    }

    std::size_t insert() override {
        double p = store_.empty() ? 1.0 : store_.max_value();
        std::size_t slot = store_.insert(p > 0.0 ? p : 1.0);
        bank_.write(slot, store_.raw(slot));
        return slot;
    }

    std::vector<std::size_t> sample(std::size_t b) override {
        cfg_.batch_size = b;
        CandidateSetBuffer csb;
        return hw_amper_fr_sample(bank_, cfg_, lfsr_, csb, store_.frac_bits()).slots;
    }

    void update(const std::vector<std::size_t>& slots,
                const std::vector<double>& priorities) override {
        if (slots.size() != priorities.size()) {
            throw std::invalid_argument("slots/priorities length mismatch");
        }
        for (std::size_t j = 0; j < slots.size(); ++j) {
            store_.set(slots[j], std::pow(priorities[j], per_cfg_.alpha));
            bank_.write(slots[j], store_.raw(slots[j]));
        }
    }

    std::size_t size() const override { return store_.size(); }
    std::string name() const override { return "amper-fr-hw"; }

private:
    PriorityStore store_;
    TcamBank bank_;
    AmperConfig cfg_;
    PerConfig per_cfg_;
    Lfsr32 lfsr_;
};

}  // namespace

std::unique_ptr<ReplaySampler> make_replay(ReplayKind kind, const ReplayOptions& opts) {
    switch (kind) {
        case ReplayKind::uniform: return std::make_unique<PerSampler>(opts, true);
        case ReplayKind::per: return std::make_unique<PerSampler>(opts, false);
        case ReplayKind::amper_k: return std::make_unique<AmperSampler>(opts, Variant::kNN);
        case ReplayKind::amper_fr: return std::make_unique<AmperSampler>(opts, Variant::frNN);
        case ReplayKind::amper_fr_hw: return std::make_unique<AmperFrHwSampler>(opts);
    }
    throw std::logic_error("unreachable");
}

}  // namespace amper
