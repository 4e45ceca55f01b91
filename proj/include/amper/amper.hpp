#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "amper/priority_store.hpp"

namespace amper {

enum class Variant { kNN, frNN };

struct AmperConfig {
    std::size_t m = 20;         // group count
    double lambda = 0.3;        // kNN subset-size scaling
    double lambda_prime = 0.15; // frNN radius scaling
    double v_max = 1.0;
    std::size_t batch_size = 64;
    Variant variant = Variant::frNN;
};

struct GroupStats {
    std::size_t index = 0;
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;       // C(g_i)
    double representative = 0.0; // V(g_i)
    std::size_t subset_size = 0; // N_i (kNN)
    uint32_t radius_raw = 0;     // Delta_i in raw fixed-point units (frNN)
};

struct CspEntry {
    std::size_t slot;
    uint32_t raw;
};

using CandidateSet = std::vector<CspEntry>;

struct SampleBatch {
    std::vector<std::size_t> slots;
    std::vector<double> values;
    bool fallback_uniform = false; // empty-CSP fallback taken
};

// V(g_i) drawn uniformly from [V_max*i/m, V_max*(i+1)/m)
template <class Rng>
double group_representative(const AmperConfig& cfg, std::size_t i, Rng& rng) {
    double lo = cfg.v_max * static_cast<double>(i) / static_cast<double>(cfg.m);
    double hi = cfg.v_max * static_cast<double>(i + 1) / static_cast<double>(cfg.m);
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

// N_i = round(lambda * V(g_i) * C(g_i)), clamped to [0, total]
std::size_t subset_size(const AmperConfig& cfg, double v_gi, std::size_t c_gi,
                        std::size_t total);

// Delta_i = round(lambda'/m * V(g_i)) in raw fixed-point units, floor 1
uint32_t radius_raw(const AmperConfig& cfg, double v_gi,
                    unsigned frac_bits = kDefaultFracBits);

// C(g_i) for every group; last group's range is closed at V_max.
std::vector<std::size_t> group_counts(const PriorityStore& store, const AmperConfig& cfg);

// k stored priorities nearest to V(g_i) in value, over the whole store.
// Ties break to the lower slot. Serial reference and OpenMP kernel.
CandidateSet knn_search_ref(const PriorityStore& store, double v_gi, std::size_t k);
CandidateSet knn_search(const PriorityStore& store, double v_gi, std::size_t k);

// All stored priorities with |p - V(g_i)| <= Delta_i (inclusive), slot order.
CandidateSet frnn_search_ref(const PriorityStore& store, double v_gi, uint32_t delta_raw);
CandidateSet frnn_search(const PriorityStore& store, double v_gi, uint32_t delta_raw);

struct CspResult {
    CandidateSet csp;
    std::vector<GroupStats> groups;
};

template <class Rng>
CspResult build_csp(const PriorityStore& store, const AmperConfig& cfg, Rng& rng,
                    bool use_parallel_kernels = true);

template <class Rng>
SampleBatch amper_sample(const PriorityStore& store, const AmperConfig& cfg, Rng& rng,
                         bool use_parallel_kernels = true);

// --- template definitions ---

template <class Rng>
CspResult build_csp(const PriorityStore& store, const AmperConfig& cfg, Rng& rng,
                    bool use_parallel_kernels) {
    if (store.empty()) throw std::logic_error("build_csp on empty store");
    CspResult result;
    std::vector<std::size_t> counts;
    if (cfg.variant == Variant::kNN) counts = group_counts(store, cfg);
    for (std::size_t i = 0; i < cfg.m; ++i) {
        GroupStats g;
        g.index = i;
        g.lo = cfg.v_max * static_cast<double>(i) / static_cast<double>(cfg.m);
        g.hi = cfg.v_max * static_cast<double>(i + 1) / static_cast<double>(cfg.m);
        g.representative = group_representative(cfg, i, rng);
        CandidateSet part;
        if (cfg.variant == Variant::kNN) {
            g.count = counts[i];
            g.subset_size = subset_size(cfg, g.representative, g.count, store.size());
            part = use_parallel_kernels ? knn_search(store, g.representative, g.subset_size)
                                        : knn_search_ref(store, g.representative, g.subset_size);
        } else {
            g.radius_raw = radius_raw(cfg, g.representative, store.frac_bits());
            part = use_parallel_kernels ? frnn_search(store, g.representative, g.radius_raw)
                                        : frnn_search_ref(store, g.representative, g.radius_raw);
        }
        result.csp.insert(result.csp.end(), part.begin(), part.end());
        result.groups.push_back(g);
    }
    return result;
}

template <class Rng>
SampleBatch amper_sample(const PriorityStore& store, const AmperConfig& cfg, Rng& rng,
                         bool use_parallel_kernels) {
    CspResult built = build_csp(store, cfg, rng, use_parallel_kernels);
    SampleBatch batch;
    batch.slots.reserve(cfg.batch_size);
    batch.values.reserve(cfg.batch_size);
    if (built.csp.empty()) {
        // fallback: one uniform draw batch over the store
        batch.fallback_uniform = true;
        std::uniform_int_distribution<std::size_t> u(0, store.size() - 1);
        for (std::size_t j = 0; j < cfg.batch_size; ++j) {
            std::size_t slot = u(rng);
            batch.slots.push_back(slot);
            batch.values.push_back(store.value(slot));
        }
        return batch;
    }
    std::uniform_int_distribution<std::size_t> u(0, built.csp.size() - 1);
    for (std::size_t j = 0; j < cfg.batch_size; ++j) {
        const CspEntry& e = built.csp[u(rng)];
        batch.slots.push_back(e.slot);
        batch.values.push_back(store.decode(e.raw));
    }
    return batch;
}

}  // namespace amper
