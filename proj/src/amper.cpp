#include "amper/amper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amper {

std::size_t subset_size(const AmperConfig& cfg, double v_gi, std::size_t c_gi,
                        std::size_t total) {
    long long n = round_half_away(cfg.lambda * v_gi * static_cast<double>(c_gi));
    if (n < 0) n = 0;
    if (static_cast<std::size_t>(n) > total) n = static_cast<long long>(total);
    return static_cast<std::size_t>(n);
}

uint32_t radius_raw(const AmperConfig& cfg, double v_gi, unsigned frac_bits) {
    double delta = cfg.lambda_prime / static_cast<double>(cfg.m) * v_gi;
    long long raw = round_half_away(delta * fixed_point_scale(frac_bits));
    if (raw < 1) raw = 1;  // never degenerate to radius 0
    if (raw > static_cast<long long>(UINT32_MAX)) raw = UINT32_MAX;
    return static_cast<uint32_t>(raw);
}

std::vector<std::size_t> group_counts(const PriorityStore& store, const AmperConfig& cfg) {
    std::vector<std::size_t> counts(cfg.m, 0);
    const double scale = static_cast<double>(cfg.m) / cfg.v_max;
    for (std::size_t s = 0; s < store.size(); ++s) {
        double v = store.value(s);
        auto g = static_cast<long long>(v * scale);
        if (g < 0) g = 0;
        if (g >= static_cast<long long>(cfg.m)) g = static_cast<long long>(cfg.m) - 1;
        ++counts[static_cast<std::size_t>(g)];
    }
    return counts;
}

namespace {

inline uint64_t raw_distance(uint32_t a, uint32_t b) {
    return a > b ? static_cast<uint64_t>(a) - b : static_cast<uint64_t>(b) - a;
}

CandidateSet knn_select(const PriorityStore& store, std::vector<std::pair<uint64_t, std::size_t>>& keyed,
                        std::size_t k) {
    if (k > keyed.size()) k = keyed.size();
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
    CandidateSet out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t slot = keyed[j].second;
        out.push_back({slot, store.raw(slot)});
    }
    return out;
}

}  // namespace

CandidateSet knn_search_ref(const PriorityStore& store, double v_gi, std::size_t k) {
    const uint32_t v_raw = store.encode(v_gi);
    std::vector<std::pair<uint64_t, std::size_t>> keyed(store.size());
    for (std::size_t s = 0; s < store.size(); ++s) {
        keyed[s] = {raw_distance(store.raw(s), v_raw), s};
    }
    return knn_select(store, keyed, k);
}

CandidateSet knn_search(const PriorityStore& store, double v_gi, std::size_t k) {
    const uint32_t v_raw = store.encode(v_gi);
    const std::size_t n = store.size();
    std::vector<std::pair<uint64_t, std::size_t>> keyed(n);
#pragma omp parallel for schedule(static)
    for (long long s = 0; s < static_cast<long long>(n); ++s) {
        keyed[static_cast<std::size_t>(s)] = {
            raw_distance(store.raw(static_cast<std::size_t>(s)), v_raw),
            static_cast<std::size_t>(s)};
    }
    return knn_select(store, keyed, k);
}

CandidateSet frnn_search_ref(const PriorityStore& store, double v_gi, uint32_t delta_raw) {
    const uint32_t v_raw = store.encode(v_gi);
    CandidateSet out;
    for (std::size_t s = 0; s < store.size(); ++s) {
        uint32_t r = store.raw(s);
        if (raw_distance(r, v_raw) <= delta_raw) out.push_back({s, r});
    }
    return out;
}

CandidateSet frnn_search(const PriorityStore& store, double v_gi, uint32_t delta_raw) {
    const uint32_t v_raw = store.encode(v_gi);
    const std::size_t n = store.size();
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::vector<CandidateSet> parts(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
#ifdef _OPENMP
        int tid = omp_get_thread_num();
#else
        int tid = 0;
#endif
        CandidateSet& local = parts[static_cast<std::size_t>(tid)];
#pragma omp for schedule(static)
        for (long long s = 0; s < static_cast<long long>(n); ++s) {
            uint32_t r = store.raw(static_cast<std::size_t>(s));
            if (raw_distance(r, v_raw) <= delta_raw) {
                local.push_back({static_cast<std::size_t>(s), r});
            }
        }
    }
    // static schedule keeps per-thread chunks contiguous, so concatenation
    // preserves slot order
    CandidateSet out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace amper
