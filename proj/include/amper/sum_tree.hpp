#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "amper/fixed_point.hpp"

namespace amper {

// Binary sum tree over fixed-point priorities. Leaves hold raw u32 values
// aligned with PriorityStore slots; internal nodes hold exact u64 sums, so
// update/update-back round trips are bitwise identities.
//
// nodes_[1] is the root; leaf i lives at nodes_[leaf_count_ + i].
class SumTree {
public:
    explicit SumTree(std::size_t capacity, unsigned frac_bits = kDefaultFracBits)
        : frac_bits_(frac_bits) {
        if (capacity == 0) throw std::invalid_argument("capacity must be positive");
        leaf_count_ = 1;
        while (leaf_count_ < capacity) leaf_count_ <<= 1;
        nodes_.assign(2 * leaf_count_, 0);
    }

    std::size_t leaf_count() const { return leaf_count_; }
    unsigned frac_bits() const { return frac_bits_; }

    uint64_t root_raw() const { return nodes_[1]; }
    double total() const { return static_cast<double>(nodes_[1]) / fixed_point_scale(frac_bits_); }

    uint32_t leaf_raw(std::size_t slot) const {
        check_slot(slot);
        return static_cast<uint32_t>(nodes_[leaf_count_ + slot]);
    }
    double leaf_value(std::size_t slot) const {
        return decode_priority(leaf_raw(slot), frac_bits_);
    }

    void update_raw(std::size_t slot, uint32_t raw) {
        check_slot(slot);
        std::size_t node = leaf_count_ + slot;
        int64_t delta = static_cast<int64_t>(raw) - static_cast<int64_t>(nodes_[node]);
        for (; node >= 1; node /= 2) {
            nodes_[node] = static_cast<uint64_t>(static_cast<int64_t>(nodes_[node]) + delta);
        }
    }

    void update(std::size_t slot, double priority) {
        update_raw(slot, encode_priority(priority, frac_bits_));
    }

    // Descends to the leaf whose cumulative-sum region contains y.
    // y is a real prefix sum in raw fixed-point units, 0 <= y < root.
    std::size_t sample_raw(double y) const {
        if (nodes_[1] == 0) throw std::logic_error("sample on empty tree");
        if (y < 0.0 || y >= static_cast<double>(nodes_[1])) {
            throw std::domain_error("prefix sum out of range");
        }
        std::size_t node = 1;
        while (node < leaf_count_) {
            double left = static_cast<double>(nodes_[2 * node]);
            if (y < left) {
                node = 2 * node;
            } else {
                y -= left;
                node = 2 * node + 1;
            }
        }
        return node - leaf_count_;
    }

    // Same, with y given as a decoded real in [0, total()).
    std::size_t sample(double y) const {
        return sample_raw(y * fixed_point_scale(frac_bits_));
    }

    bool operator==(const SumTree& other) const {
        return leaf_count_ == other.leaf_count_ && frac_bits_ == other.frac_bits_ &&
               nodes_ == other.nodes_;
    }

    // Full-tree consistency scan: every internal node equals the sum of its
    // children. Test hook.
    bool consistent() const {
        for (std::size_t node = 1; node < leaf_count_; ++node) {
            if (nodes_[node] != nodes_[2 * node] + nodes_[2 * node + 1]) return false;
        }
        return true;
    }

private:
    void check_slot(std::size_t slot) const {
        if (slot >= leaf_count_) throw std::out_of_range("slot out of range");
    }

    std::size_t leaf_count_;
    unsigned frac_bits_;
    std::vector<uint64_t> nodes_;
};

}  // namespace amper
