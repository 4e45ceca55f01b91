#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "amper/priority_store.hpp"
#include "amper/sum_tree.hpp"

namespace amper {

struct PerConfig {
    double alpha = 0.6;             // prioritization exponent, 0 = uniform
    double epsilon_priority = 1e-2; // offset added to |TD-error|
};

// P(i) = p_i^alpha / sum_k p_k^alpha
inline double per_probability(const std::vector<double>& priorities, double alpha,
                              std::size_t i) {
    if (priorities.empty()) throw std::domain_error("empty priority list");
    if (i >= priorities.size()) throw std::out_of_range("index out of range");
    if (alpha < 0.0) throw std::domain_error("alpha must be nonnegative");
    double denom = 0.0;
    for (double p : priorities) {
        if (p <= 0.0) throw std::domain_error("priorities must be positive");
        denom += std::pow(p, alpha);
    }
    return std::pow(priorities[i], alpha) / denom;
}

// Prioritized replay over a PriorityStore with a mirrored sum tree.
// alpha is applied at write time: the tree and the store hold p^alpha.
class PerReplay {
public:
    PerReplay(std::size_t capacity, double v_max, PerConfig cfg = {},
              unsigned frac_bits = kDefaultFracBits)
        : store_(capacity, v_max, frac_bits), tree_(capacity, frac_bits), cfg_(cfg) {}

    const PriorityStore& store() const { return store_; }
    const SumTree& tree() const { return tree_; }
    const PerConfig& config() const { return cfg_; }

    // priority is the already-shaped value to store (p^alpha happens here).
    std::size_t insert(double priority) {
        double shaped = shape(priority);
        std::size_t slot = store_.insert(shaped);
        tree_.update_raw(slot, store_.raw(slot));
        return slot;
    }

    std::size_t insert_with_max_priority() {
        double p = store_.empty() ? 1.0 : store_.max_value();
        std::size_t slot = store_.insert(p > 0.0 ? p : 1.0);
        tree_.update_raw(slot, store_.raw(slot));
        return slot;
    }

    void update(std::size_t slot, double priority) {
        store_.set(slot, shape(priority));
        tree_.update_raw(slot, store_.raw(slot));
    }

    void update_batch(const std::vector<std::size_t>& slots,
                      const std::vector<double>& priorities) {
        if (slots.size() != priorities.size()) {
            throw std::invalid_argument("slots/priorities length mismatch");
        }
        for (std::size_t j = 0; j < slots.size(); ++j) update(slots[j], priorities[j]);
    }

    template <class Rng>
    std::vector<std::size_t> sample_batch(std::size_t b, Rng& rng) const {
        if (tree_.root_raw() == 0) throw std::logic_error("sample on empty replay");
        std::vector<std::size_t> out;
        out.reserve(b);
        std::uniform_real_distribution<double> u(0.0, static_cast<double>(tree_.root_raw()));
        for (std::size_t j = 0; j < b; ++j) out.push_back(tree_.sample_raw(u(rng)));
        return out;
    }

    template <class Rng>
    std::vector<std::size_t> uniform_sample_batch(std::size_t b, Rng& rng) const {
        if (store_.empty()) throw std::logic_error("sample on empty store");
        std::vector<std::size_t> out;
        out.reserve(b);
        std::uniform_int_distribution<std::size_t> u(0, store_.size() - 1);
        for (std::size_t j = 0; j < b; ++j) out.push_back(u(rng));
        return out;
    }

    double probability(std::size_t slot) const {
        return static_cast<double>(store_.raw(slot)) / static_cast<double>(tree_.root_raw());
    }

private:
    double shape(double p) const { return std::pow(p, cfg_.alpha); }

    PriorityStore store_;
    SumTree tree_;
    PerConfig cfg_;
};

// Uniform sampling over occupied slots of a bare store.
template <class Rng>
std::vector<std::size_t> uniform_sample_batch(const PriorityStore& store, std::size_t b,
                                              Rng& rng) {
    if (store.empty()) throw std::logic_error("sample on empty store");
    std::vector<std::size_t> out;
    out.reserve(b);
    std::uniform_int_distribution<std::size_t> u(0, store.size() - 1);
    for (std::size_t j = 0; j < b; ++j) out.push_back(u(rng));
    return out;
}

}  // namespace amper
