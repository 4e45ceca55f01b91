#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amper/amper.hpp"
#include "amper/priority_store.hpp"

namespace amper {

struct EmpiricalDist {
    std::vector<uint64_t> counts;
    uint64_t total = 0;

    explicit EmpiricalDist(std::size_t support = 0) : counts(support, 0) {}
    void add(std::size_t i) {
        ++counts.at(i);
        ++total;
    }
    void add_all(const std::vector<std::size_t>& idx) {
        for (std::size_t i : idx) add(i);
    }
};

// KL(P||Q) over slot indices with add-one smoothing, scaled by P's total
// sample count ("sample-nats").
double kl_divergence(const EmpiricalDist& p, const EmpiricalDist& q);

// Sampling-error metric used by the sweep experiments: the per-slot counts
// are projected onto a histogram of sampled priority VALUES (the slot's
// stored priority picks the bin) before the smoothed, count-scaled KL.
// Slot-level KL at these sample counts is all disjoint-support noise; the
// value histogram is what the sampling distributions actually differ on.
double kl_divergence_binned(const EmpiricalDist& p, const EmpiricalDist& q,
                            const std::vector<double>& slot_values, double v_max,
                            std::size_t bins = 50);

struct KlReport {
    std::size_t store_size = 0;
    std::size_t m = 0;
    double scaling = 0.0;  // target CSP ratio
    std::size_t runs = 0;
    std::size_t batch = 0;
    uint64_t seed = 0;
    double kl_uniform = 0.0;   // KL(uniform || PER)
    double kl_amper_k = 0.0;   // KL(AMPER-k || PER)
    double kl_amper_fr = 0.0;  // KL(AMPER-fr || PER)
    double kl_per_self = 0.0;  // KL(PER seed B || PER seed A)
    double csp_ratio_fr = 0.0; // measured mean |CSP|/N, frNN
    double csp_ratio_k = 0.0;  // measured mean |CSP|/N, kNN
};

struct SamplerHistogram {
    std::string sampler;
    EmpiricalDist dist;
};

struct SamplingErrorResult {
    KlReport report;
    std::vector<SamplerHistogram> histograms;  // per-slot counts per sampler
};

// Fills a store with uniform[0,1] priorities and measures each sampler's
// empirical distribution over `runs` batches; KL of each vs PER.
// `scaling` is the target CSP ratio (frNN: lambda' = ratio, kNN: lambda =
// 2*ratio for a uniform store).
SamplingErrorResult run_sampling_error(std::size_t store_size, std::size_t m,
                                       double scaling, std::size_t runs,
                                       std::size_t batch, uint64_t seed,
                                       std::size_t kl_bins = 50);

std::vector<KlReport> sweep_grid(const std::vector<std::size_t>& m_values,
                                 const std::vector<double>& scaling_values,
                                 const std::vector<std::size_t>& sizes, std::size_t runs,
                                 std::size_t batch, uint64_t seed,
                                 std::size_t kl_bins = 50);

// CSV: store_size,m,scaling,ratio,sampler,kl_sample_nats,seed
std::string kl_csv(const std::vector<KlReport>& reports);

// histogram dump: slot_index,count per sampler
std::string histogram_csv(const std::vector<SamplerHistogram>& hists);

}  // namespace amper
