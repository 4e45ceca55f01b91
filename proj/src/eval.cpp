#include "amper/eval.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "amper/per.hpp"

namespace amper {

namespace {

double kl_counts(const std::vector<uint64_t>& pc, const std::vector<uint64_t>& qc,
                 uint64_t p_total, uint64_t q_total) {
    const std::size_t n = pc.size();
    const double p_denom = static_cast<double>(p_total) + static_cast<double>(n);
    const double q_denom = static_cast<double>(q_total) + static_cast<double>(n);
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double p = (static_cast<double>(pc[i]) + 1.0) / p_denom;
        double q = (static_cast<double>(qc[i]) + 1.0) / q_denom;
        kl += p * std::log(p / q);
    }
    if (kl < 0.0 && kl > -1e-12) kl = 0.0;  // guard tiny negative round-off
    return static_cast<double>(p_total) * kl;
}

}  // namespace

double kl_divergence(const EmpiricalDist& p, const EmpiricalDist& q) {
    if (p.counts.size() != q.counts.size()) {
        throw std::invalid_argument("mismatched supports");
    }
    return kl_counts(p.counts, q.counts, p.total, q.total);
}

double kl_divergence_binned(const EmpiricalDist& p, const EmpiricalDist& q,
                            const std::vector<double>& slot_values, double v_max,
                            std::size_t bins) {
    if (p.counts.size() != q.counts.size() || p.counts.size() != slot_values.size()) {
        throw std::invalid_argument("mismatched supports");
    }
    std::vector<uint64_t> ph(bins, 0), qh(bins, 0);
    for (std::size_t i = 0; i < slot_values.size(); ++i) {
        auto b = static_cast<std::size_t>(slot_values[i] / v_max * static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        ph[b] += p.counts[i];
        qh[b] += q.counts[i];
    }
    return kl_counts(ph, qh, p.total, q.total);
}

SamplingErrorResult run_sampling_error(std::size_t store_size, std::size_t m,
                                       double scaling, std::size_t runs,
                                       std::size_t batch, uint64_t seed,
                                       std::size_t kl_bins) {
    const double v_max = 1.0;
    PriorityStore store(store_size, v_max);
    std::mt19937_64 fill_rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::size_t i = 0; i < store_size; ++i) {
        double v = u01(fill_rng);
        store.insert(v > 0.0 ? v : 1e-9);
    }
    std::vector<double> values(store_size);
    for (std::size_t i = 0; i < store_size; ++i) values[i] = store.value(i);

    // PER over the same priorities (alpha folded into the stored values)
    SumTree tree(store_size);
    for (std::size_t i = 0; i < store_size; ++i) tree.update_raw(i, store.raw(i));

    auto per_counts = [&](uint64_t s) {
        EmpiricalDist d(store_size);
        std::mt19937_64 rng(s);
        std::uniform_real_distribution<double> u(0.0, static_cast<double>(tree.root_raw()));
        for (std::size_t r = 0; r < runs * batch; ++r) d.add(tree.sample_raw(u(rng)));
        return d;
    };

    EmpiricalDist per_a = per_counts(seed + 1);
    EmpiricalDist per_b = per_counts(seed + 2);

    EmpiricalDist uni(store_size);
    {
        std::mt19937_64 rng(seed + 3);
        std::uniform_int_distribution<std::size_t> u(0, store_size - 1);
        for (std::size_t r = 0; r < runs * batch; ++r) uni.add(u(rng));
    }

    AmperConfig fr_cfg;
    fr_cfg.m = m;
    fr_cfg.lambda_prime = scaling;
    fr_cfg.v_max = v_max;
    fr_cfg.batch_size = batch;
    fr_cfg.variant = Variant::frNN;

    AmperConfig k_cfg = fr_cfg;
    k_cfg.lambda = 2.0 * scaling;
    k_cfg.variant = Variant::kNN;

    EmpiricalDist fr(store_size), kk(store_size);
    double fr_csp = 0.0, k_csp = 0.0;
    {
        std::mt19937_64 rng(seed + 4);
        for (std::size_t r = 0; r < runs; ++r) {
            SampleBatch b = amper_sample(store, fr_cfg, rng);
            fr.add_all(b.slots);
        }
        std::mt19937_64 crng(seed + 4);
        fr_csp = static_cast<double>(build_csp(store, fr_cfg, crng).csp.size()) /
                 static_cast<double>(store_size);
    }
    {
        std::mt19937_64 rng(seed + 5);
        for (std::size_t r = 0; r < runs; ++r) {
            SampleBatch b = amper_sample(store, k_cfg, rng);
            kk.add_all(b.slots);
        }
        std::mt19937_64 crng(seed + 5);
        k_csp = static_cast<double>(build_csp(store, k_cfg, crng).csp.size()) /
                static_cast<double>(store_size);
    }

    SamplingErrorResult res;
    res.report.store_size = store_size;
    res.report.m = m;
    res.report.scaling = scaling;
    res.report.runs = runs;
    res.report.batch = batch;
    res.report.seed = seed;
    res.report.kl_uniform = kl_divergence_binned(uni, per_a, values, v_max, kl_bins);
    res.report.kl_amper_fr = kl_divergence_binned(fr, per_a, values, v_max, kl_bins);
    res.report.kl_amper_k = kl_divergence_binned(kk, per_a, values, v_max, kl_bins);
    res.report.kl_per_self = kl_divergence_binned(per_b, per_a, values, v_max, kl_bins);
    res.report.csp_ratio_fr = fr_csp;
    res.report.csp_ratio_k = k_csp;
    res.histograms.push_back({"per", std::move(per_a)});
    res.histograms.push_back({"per_b", std::move(per_b)});
    res.histograms.push_back({"uniform", std::move(uni)});
    res.histograms.push_back({"amper_fr", std::move(fr)});
    res.histograms.push_back({"amper_k", std::move(kk)});
    return res;
}

std::vector<KlReport> sweep_grid(const std::vector<std::size_t>& m_values,
                                 const std::vector<double>& scaling_values,
                                 const std::vector<std::size_t>& sizes, std::size_t runs,
                                 std::size_t batch, uint64_t seed, std::size_t kl_bins) {
    std::vector<KlReport> out;
    for (std::size_t size : sizes) {
        for (std::size_t m : m_values) {
            for (double s : scaling_values) {
                uint64_t cell_seed = seed + out.size() * 1000003ull;
                out.push_back(
                    run_sampling_error(size, m, s, runs, batch, cell_seed, kl_bins).report);
            }
        }
    }
    return out;
}

std::string kl_csv(const std::vector<KlReport>& reports) {
    std::ostringstream out;
    out << "store_size,m,scaling,ratio,sampler,kl_sample_nats,seed\n";
    for (const auto& r : reports) {
        auto row = [&](const char* sampler, double ratio, double kl) {
            out << r.store_size << ',' << r.m << ',' << r.scaling << ',' << ratio << ','
                << sampler << ',' << kl << ',' << r.seed << '\n';
        };
        row("uniform", 1.0, r.kl_uniform);
        row("amper_k", r.csp_ratio_k, r.kl_amper_k);
        row("amper_fr", r.csp_ratio_fr, r.kl_amper_fr);
        row("per_self", 1.0, r.kl_per_self);
    }
    return out.str();
}

std::string histogram_csv(const std::vector<SamplerHistogram>& hists) {
    std::ostringstream out;
    out << "sampler,slot_index,count\n";
    for (const auto& h : hists) {
        for (std::size_t i = 0; i < h.dist.counts.size(); ++i) {
            if (h.dist.counts[i] == 0) continue;
            out << h.sampler << ',' << i << ',' << h.dist.counts[i] << '\n';
        }
    }
    return out.str();
}

}  // namespace amper
