#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "amper/fixed_point.hpp"

namespace amper {

// Priority side of the experience-replay memory: a ring of fixed-point
// priorities indexed by experience slot. The experience payloads themselves
// live with the training code; this class only tracks priorities.
class PriorityStore {
public:
    PriorityStore(std::size_t capacity, double v_max,
                  unsigned frac_bits = kDefaultFracBits)
        : raw_(capacity, 0), capacity_(capacity), v_max_(v_max), frac_bits_(frac_bits) {
        if (capacity == 0) throw std::invalid_argument("capacity must be positive");
        if (v_max <= 0.0) throw std::invalid_argument("v_max must be positive");
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    double v_max() const { return v_max_; }
    unsigned frac_bits() const { return frac_bits_; }
    std::size_t write_cursor() const { return cursor_; }

    uint32_t raw(std::size_t slot) const { return raw_.at(slot); }
    double value(std::size_t slot) const { return decode_priority(raw_.at(slot), frac_bits_); }
    const std::vector<uint32_t>& raw_slots() const { return raw_; }

    uint32_t encode(double v) const { return encode_priority(clamp(v), frac_bits_); }
    double decode(uint32_t r) const { return decode_priority(r, frac_bits_); }

    // Inserts at the write cursor, overwriting the oldest slot when full.
    // Returns the slot written.
    std::size_t insert(double priority) {
        std::size_t slot = cursor_;
        set(slot, priority);
        cursor_ = (cursor_ + 1) % capacity_;
        if (size_ < capacity_) ++size_;
        return slot;
    }

    void set(std::size_t slot, double priority) {
        if (slot >= capacity_) throw std::out_of_range("slot out of range");
        if (priority <= 0.0) throw std::domain_error("priority must be positive");
        raw_.at(slot) = encode(priority);
        if (raw_[slot] == 0) raw_[slot] = 1;  // keep p > 0 after quantization
    }

    double max_value() const {
        uint32_t m = 0;
        for (std::size_t i = 0; i < size_; ++i) m = raw_[i] > m ? raw_[i] : m;
        return decode(m);
    }

    // Snapshot fixture format: little-endian u32 words
    // [capacity, frac_bits, size, leaf raw values...].
    void save_snapshot(const std::string& path) const {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open snapshot file for write: " + path);
        auto put = [&](uint32_t w) {
            unsigned char b[4] = {static_cast<unsigned char>(w & 0xff),
                                  static_cast<unsigned char>((w >> 8) & 0xff),
                                  static_cast<unsigned char>((w >> 16) & 0xff),
                                  static_cast<unsigned char>((w >> 24) & 0xff)};
            std::fwrite(b, 1, 4, f);
        };
        put(static_cast<uint32_t>(capacity_));
        put(frac_bits_);
        put(static_cast<uint32_t>(size_));
        for (std::size_t i = 0; i < size_; ++i) put(raw_[i]);
        std::fclose(f);
    }

    static PriorityStore load_snapshot(const std::string& path, double v_max) {
        std::FILE* f = std::fopen(path.c_str(), "rb");
        if (!f) throw std::runtime_error("cannot open snapshot file for read: " + path);
        auto get = [&]() {
            unsigned char b[4];
            if (std::fread(b, 1, 4, f) != 4) {
                std::fclose(f);
                throw std::runtime_error("truncated snapshot");
            }
            return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
                   (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
        };
        uint32_t capacity = get();
        uint32_t frac_bits = get();
        uint32_t size = get();
        PriorityStore store(capacity, v_max, frac_bits);
        for (uint32_t i = 0; i < size; ++i) {
            store.raw_[i] = get();
        }
        store.size_ = size;
        store.cursor_ = size % capacity;
        std::fclose(f);
        return store;
    }

private:
    double clamp(double v) const { return v > v_max_ ? v_max_ : v; }

    std::vector<uint32_t> raw_;
    std::size_t capacity_;
    std::size_t size_ = 0;
    std::size_t cursor_ = 0;
    double v_max_;
    unsigned frac_bits_;
};

}  // namespace amper
