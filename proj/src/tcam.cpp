#include "amper/tcam.hpp"

#include <bit>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amper {

uint32_t prefix_mask(uint32_t delta_raw) {
    if (delta_raw == 0) throw std::domain_error("delta must be >= 1");
    unsigned p = 31u - static_cast<unsigned>(std::countl_zero(delta_raw));
    if (p == 31) return 0xFFFFFFFFu;
    return (1u << (p + 1)) - 1u;
}

TernaryWord frnn_query(uint32_t v_raw, uint32_t mask, unsigned width) {
    TernaryWord q;
    q.width = width;
    q.bits = v_raw & ~mask;
    q.care = ~mask;  // masked positions become 'x'
    return q;
}

std::string trace_to_text(const std::vector<TraceRecord>& trace) {
    static const char* names[] = {"urng", "qgen", "search", "csb_write", "csb_read"};
    std::ostringstream out;
    for (const auto& r : trace) {
        out << names[static_cast<int>(r.kind)] << ' ' << r.group << ' ' << r.arrays << '\n';
    }
    return out.str();
}

std::vector<std::size_t> TcamBank::search_exact_ref(const TernaryWord& query) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < arrays_.size(); ++a) {
        const TcamArray& arr = arrays_[a];
        for (std::size_t r = 0; r < kTcamRows; ++r) {
            std::size_t slot = a * kTcamRows + r;
            if (slot >= capacity_) break;
            if (arr.valid[r] && query.matches(arr.rows[r])) out.push_back(slot);
        }
    }
    return out;
}

std::vector<std::size_t> TcamBank::search_exact(const TernaryWord& query) const {
    const std::size_t n_arrays = arrays_.size();
    std::vector<std::vector<std::size_t>> per_array(n_arrays);
#pragma omp parallel for schedule(static)
    for (long long a = 0; a < static_cast<long long>(n_arrays); ++a) {
        const TcamArray& arr = arrays_[static_cast<std::size_t>(a)];
        auto& hits = per_array[static_cast<std::size_t>(a)];
        for (std::size_t r = 0; r < kTcamRows; ++r) {
            std::size_t slot = static_cast<std::size_t>(a) * kTcamRows + r;
            if (slot >= capacity_) break;
            if (arr.valid[r] && query.matches(arr.rows[r])) hits.push_back(slot);
        }
    }
    std::vector<std::size_t> out;
    for (auto& h : per_array) out.insert(out.end(), h.begin(), h.end());
    return out;
}

std::size_t TcamBank::search_best(uint32_t query) const {
    bool found = false;
    unsigned best_dist = kTcamDataBits + 1;
    std::size_t best_slot = 0;
    for (std::size_t a = 0; a < arrays_.size(); ++a) {
        const TcamArray& arr = arrays_[a];
        for (std::size_t r = 0; r < kTcamRows; ++r) {
            std::size_t slot = a * kTcamRows + r;
            if (slot >= capacity_) break;
            if (!arr.valid[r]) continue;
            unsigned d = static_cast<unsigned>(std::popcount(arr.rows[r] ^ query));
            if (!found || d < best_dist) {
                found = true;
                best_dist = d;
                best_slot = slot;
            }
        }
    }
    if (!found) throw std::logic_error("best-match search on empty bank");
    return best_slot;
}

namespace {

void trace_push(std::vector<TraceRecord>* trace, TraceRecord::Kind kind, long group,
                long arrays) {
    if (trace) trace->push_back({kind, group, arrays});
}

SampleBatch csb_readout(const TcamBank& bank, const AmperConfig& cfg, Lfsr32& rng,
                        const CandidateSetBuffer& csb, unsigned frac_bits,
                        std::vector<TraceRecord>* trace) {
    SampleBatch batch;
    batch.slots.reserve(cfg.batch_size);
    batch.values.reserve(cfg.batch_size);
    if (csb.empty()) {
        // empty-CSP fallback: uniform over all valid slots
        batch.fallback_uniform = true;
        std::vector<std::size_t> valid;
        for (std::size_t s = 0; s < bank.capacity(); ++s) {
            if (bank.is_valid(s)) valid.push_back(s);
        }
        if (valid.empty()) throw std::logic_error("sample on empty bank");
        for (std::size_t j = 0; j < cfg.batch_size; ++j) {
            trace_push(trace, TraceRecord::Kind::urng, -1, 0);
            std::size_t slot = valid[rng.next_integer(0, valid.size())];
            batch.slots.push_back(slot);
            batch.values.push_back(decode_priority(bank.raw(slot), frac_bits));
        }
        return batch;
    }
    for (std::size_t j = 0; j < cfg.batch_size; ++j) {
        trace_push(trace, TraceRecord::Kind::urng, -1, 0);
        std::size_t idx = static_cast<std::size_t>(rng.next_integer(0, csb.fill()));
        trace_push(trace, TraceRecord::Kind::csb_read, -1, 0);
        std::size_t slot = csb.entry(idx);
        batch.slots.push_back(slot);
        batch.values.push_back(decode_priority(bank.raw(slot), frac_bits));
    }
    return batch;
}

}  // namespace

SampleBatch hw_amper_fr_sample(const TcamBank& bank, const AmperConfig& cfg, Lfsr32& rng,
                               CandidateSetBuffer& csb, unsigned frac_bits,
                               std::vector<TraceRecord>* trace) {
    const double scale = fixed_point_scale(frac_bits);
    const long n_arrays = static_cast<long>(bank.array_count());
    for (std::size_t i = 0; i < cfg.m; ++i) {
        uint64_t lo_raw = static_cast<uint64_t>(cfg.v_max * scale * static_cast<double>(i) /
                                                static_cast<double>(cfg.m));
        uint64_t hi_raw = static_cast<uint64_t>(cfg.v_max * scale * static_cast<double>(i + 1) /
                                                static_cast<double>(cfg.m));
        if (hi_raw <= lo_raw) hi_raw = lo_raw + 1;
        trace_push(trace, TraceRecord::Kind::urng, static_cast<long>(i), 0);
        uint32_t v_raw = static_cast<uint32_t>(rng.next_integer(lo_raw, hi_raw));

        // query generator: Q-bit multiplier + mask generator + OR gates
        trace_push(trace, TraceRecord::Kind::qgen, static_cast<long>(i), 0);
        long long d = round_half_away(cfg.lambda_prime / static_cast<double>(cfg.m) *
                                      static_cast<double>(v_raw));
        uint32_t delta_raw = d < 1 ? 1u : (d > static_cast<long long>(UINT32_MAX)
                                               ? UINT32_MAX
                                               : static_cast<uint32_t>(d));
        TernaryWord query = frnn_query(v_raw, prefix_mask(delta_raw));

        trace_push(trace, TraceRecord::Kind::search, static_cast<long>(i), n_arrays);
        for (std::size_t slot : bank.search_exact(query)) {
            trace_push(trace, TraceRecord::Kind::csb_write, static_cast<long>(i), 0);
            csb.push(static_cast<uint32_t>(slot));
        }
    }
    return csb_readout(bank, cfg, rng, csb, frac_bits, trace);
}

SampleBatch hw_amper_k_sample(TcamBank& bank, const AmperConfig& cfg, Lfsr32& rng,
                              CandidateSetBuffer& csb,
                              const std::vector<std::size_t>& group_counts,
                              unsigned frac_bits, std::vector<TraceRecord>* trace) {
    if (group_counts.size() != cfg.m) {
        throw std::invalid_argument("group_counts size must equal m");
    }
    const double scale = fixed_point_scale(frac_bits);
    const long n_arrays = static_cast<long>(bank.array_count());
    std::vector<std::size_t> invalidated;
    std::size_t valid_rows = 0;
    for (std::size_t s = 0; s < bank.capacity(); ++s) {
        if (bank.is_valid(s)) ++valid_rows;
    }
    for (std::size_t i = 0; i < cfg.m; ++i) {
        uint64_t lo_raw = static_cast<uint64_t>(cfg.v_max * scale * static_cast<double>(i) /
                                                static_cast<double>(cfg.m));
        uint64_t hi_raw = static_cast<uint64_t>(cfg.v_max * scale * static_cast<double>(i + 1) /
                                                static_cast<double>(cfg.m));
        if (hi_raw <= lo_raw) hi_raw = lo_raw + 1;
        trace_push(trace, TraceRecord::Kind::urng, static_cast<long>(i), 0);
        uint32_t v_raw = static_cast<uint32_t>(rng.next_integer(lo_raw, hi_raw));

        trace_push(trace, TraceRecord::Kind::qgen, static_cast<long>(i), 0);
        std::size_t n_i = subset_size(cfg, decode_priority(v_raw, frac_bits),
                                      group_counts[i], bank.capacity());
        for (std::size_t j = 0; j < n_i; ++j) {
            if (invalidated.size() >= valid_rows) break;  // no valid rows left
            trace_push(trace, TraceRecord::Kind::search, static_cast<long>(i), n_arrays);
            std::size_t winner = bank.search_best(v_raw);
            bank.invalidate(winner);  // transient: restored after this call
            invalidated.push_back(winner);
            trace_push(trace, TraceRecord::Kind::csb_write, static_cast<long>(i), 0);
            csb.push(static_cast<uint32_t>(winner));
        }
    }
    for (std::size_t s : invalidated) bank.revalidate(s);
    return csb_readout(bank, cfg, rng, csb, frac_bits, trace);
}

}  // namespace amper
