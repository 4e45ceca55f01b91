#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "amper/amper.hpp"
#include "amper/priority_store.hpp"

namespace amper {

// --- ternary words ---

// Q-bit ternary word, bit-packed: positions with care=0 are 'x' (wildcard).
struct TernaryWord {
    uint32_t bits = 0;
    uint32_t care = 0xFFFFFFFFu;
    unsigned width = 32;

    uint32_t width_mask() const {
        return width >= 32 ? 0xFFFFFFFFu : ((1u << width) - 1u);
    }
    bool matches(uint32_t stored) const {
        return (((stored ^ bits) & care) & width_mask()) == 0;
    }
    // symbol at position i: '0', '1' or 'x'
    char symbol(unsigned i) const {
        if (!((care >> i) & 1u)) return 'x';
        return ((bits >> i) & 1u) ? '1' : '0';
    }
    static TernaryWord exact(uint32_t value, unsigned width = 32) {
        return {value, 0xFFFFFFFFu, width};
    }
    static TernaryWord all_wildcard(unsigned width = 32) { return {0, 0, width}; }
};

// prefix mask from Delta: p = msb(delta), bits p..0 set
uint32_t prefix_mask(uint32_t delta_raw);

// replace masked positions of v with 'x'
TernaryWord frnn_query(uint32_t v_raw, uint32_t mask, unsigned width = 32);

// --- URNG ---

// 32-bit Fibonacci LFSR, taps at bits 32, 22, 2, 1 (x^32+x^22+x^2+x+1).
class Lfsr32 {
public:
    explicit Lfsr32(uint32_t seed) : state_(seed) {
        if (seed == 0) throw std::invalid_argument("LFSR seed must be nonzero");
    }
    uint32_t state() const { return state_; }
    uint32_t next() {
        uint32_t fb = ((state_ >> 0) ^ (state_ >> 1) ^ (state_ >> 21) ^ (state_ >> 31)) & 1u;
        state_ = (state_ >> 1) | (fb << 31);
        return state_;
    }

    uint64_t next_integer(uint64_t lo, uint64_t hi) {  // [lo, hi), modulo bias accepted
        if (lo >= hi) throw std::invalid_argument("empty range");
        return lo + next() % (hi - lo);
    }
    double next_real(double lo, double hi) {  // [lo, hi)
        if (lo >= hi) throw std::invalid_argument("empty range");
        return lo + (static_cast<double>(next()) / 4294967296.0) * (hi - lo);
    }

private:
    uint32_t state_;
};

// --- arrays and bank ---

inline constexpr std::size_t kTcamRows = 64;
inline constexpr std::size_t kTcamCols = 64;
inline constexpr unsigned kTcamDataBits = 32;  // low columns; upper 32 always-match

struct TcamArray {
    std::array<uint32_t, kTcamRows> rows{};
    std::array<bool, kTcamRows> valid{};
};

struct TraceRecord {
    enum class Kind { urng, qgen, search, csb_write, csb_read };
    Kind kind;
    long group;    // -1 when not group-scoped
    long arrays;   // arrays touched
};

std::string trace_to_text(const std::vector<TraceRecord>& trace);

// Direct-mapped bank: store slot = array * 64 + row.
class TcamBank {
public:
    explicit TcamBank(std::size_t slot_capacity)
        : capacity_(slot_capacity), arrays_((slot_capacity + kTcamRows - 1) / kTcamRows) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t array_count() const { return arrays_.size(); }
    const TcamArray& array(std::size_t i) const { return arrays_.at(i); }

    void write(std::size_t slot, uint32_t raw) {
        check(slot);
        arrays_[slot / kTcamRows].rows[slot % kTcamRows] = raw;
        arrays_[slot / kTcamRows].valid[slot % kTcamRows] = true;
    }
    void invalidate(std::size_t slot) {
        check(slot);
        arrays_[slot / kTcamRows].valid[slot % kTcamRows] = false;
    }
    void revalidate(std::size_t slot) {
        check(slot);
        arrays_[slot / kTcamRows].valid[slot % kTcamRows] = true;
    }
    bool is_valid(std::size_t slot) const {
        check(slot);
        return arrays_[slot / kTcamRows].valid[slot % kTcamRows];
    }
    uint32_t raw(std::size_t slot) const {
        check(slot);
        return arrays_[slot / kTcamRows].rows[slot % kTcamRows];
    }

    // all valid slots matching the ternary query; serial reference and
    // array-parallel OpenMP kernel
    std::vector<std::size_t> search_exact_ref(const TernaryWord& query) const;
    std::vector<std::size_t> search_exact(const TernaryWord& query) const;

    // Hamming-nearest valid slot, ties to the lowest slot index
    std::size_t search_best(uint32_t query) const;

    // mirror an entire store (test/bring-up helper)
    static TcamBank mirror(const PriorityStore& store) {
        TcamBank bank(store.capacity());
        for (std::size_t s = 0; s < store.size(); ++s) bank.write(s, store.raw(s));
        return bank;
    }

private:
    void check(std::size_t slot) const {
        if (slot >= capacity_) throw std::out_of_range("slot out of range");
    }

    std::size_t capacity_;
    std::vector<TcamArray> arrays_;
};

// --- candidate set buffer ---

class CandidateSetBuffer {
public:
    explicit CandidateSetBuffer(std::size_t capacity = 8000) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t fill() const { return entries_.size(); }
    uint64_t overflow_count() const { return overflow_; }
    bool empty() const { return entries_.empty(); }
    uint32_t entry(std::size_t i) const { return entries_.at(i); }

    bool push(uint32_t slot) {
        if (entries_.size() >= capacity_) {
            ++overflow_;
            return false;
        }
        entries_.push_back(slot);
        return true;
    }
    void clear() { entries_.clear(); }

private:
    std::size_t capacity_;
    std::vector<uint32_t> entries_;
    uint64_t overflow_ = 0;
};

// --- hardware execution paths ---

// Incremental per-group priority counters kept in sync on every write,
// needed by the kNN path: the subset size depends on C(g_i), which must be
// available without scanning the bank.
class GroupCounters {
public:
    GroupCounters(const AmperConfig& cfg, unsigned frac_bits = kDefaultFracBits)
        : cfg_(cfg), frac_bits_(frac_bits), counts_(cfg.m, 0) {}

    void on_write(uint32_t old_raw, bool had_old, uint32_t new_raw) {
        if (had_old) --counts_[group_of(old_raw)];
        ++counts_[group_of(new_raw)];
    }
    const std::vector<std::size_t>& counts() const { return counts_; }
    std::size_t group_of(uint32_t raw) const {
        double v = decode_priority(raw, frac_bits_);
        auto g = static_cast<long long>(v * static_cast<double>(cfg_.m) / cfg_.v_max);
        if (g < 0) g = 0;
        if (g >= static_cast<long long>(cfg_.m)) g = static_cast<long long>(cfg_.m) - 1;
        return static_cast<std::size_t>(g);
    }

private:
    AmperConfig cfg_;
    unsigned frac_bits_;
    std::vector<std::size_t> counts_;
};

// AMPER-fr on the hardware path: per group, URNG representative, prefix
// query, one exact search, matches into the CSB; then b URNG readouts.
SampleBatch hw_amper_fr_sample(const TcamBank& bank, const AmperConfig& cfg, Lfsr32& rng,
                               CandidateSetBuffer& csb,
                               unsigned frac_bits = kDefaultFracBits,
                               std::vector<TraceRecord>* trace = nullptr);

// AMPER-k on the hardware path: per group, N_i successive best-match
// searches with transient winner invalidation.
SampleBatch hw_amper_k_sample(TcamBank& bank, const AmperConfig& cfg, Lfsr32& rng,
                              CandidateSetBuffer& csb,
                              const std::vector<std::size_t>& group_counts,
                              unsigned frac_bits = kDefaultFracBits,
                              std::vector<TraceRecord>* trace = nullptr);

}  // namespace amper
