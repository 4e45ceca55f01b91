#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "amper/sum_tree.hpp"

using namespace amper;

namespace {

SumTree make_tree(const std::vector<double>& leaves) {
    SumTree t(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) t.update(i, leaves[i]);
    return t;
}

}  // namespace

TEST_CASE("update corrects ancestor sums") {
    SumTree t = make_tree({3, 2, 5, 1});
    t.update(3, 2.0);
    CHECK(t.total() == doctest::Approx(12.0));
    CHECK(t.consistent());
}

TEST_CASE("single-leaf sum") {
    SumTree t(4);
    t.update(0, 7.0);
    CHECK(t.total() == doctest::Approx(7.0));
}

TEST_CASE("update then update back is a bitwise identity") {
    SumTree t = make_tree({3, 2, 5, 1});
    SumTree original = t;
    t.update(2, 9.25);
    CHECK_FALSE(t == original);
    t.update(2, 5.0);
    CHECK(t == original);
}

TEST_CASE("slot out of range rejected") {
    SumTree t(4);
    CHECK_THROWS_AS(t.update(4, 1.0), std::out_of_range);
}

TEST_CASE("sampling regions follow leaf widths") {
    SumTree t = make_tree({3, 2, 5, 1});
    CHECK(t.sample(0.0) == 0);
    // Fig-2 style fixture: p1=3, p2=2, sum 11, Y=4 lands in p2
    CHECK(t.sample(4.0) == 1);
    // exhaustive integer sweep reproduces the leaf values as counts
    int counts[4] = {0, 0, 0, 0};
    for (int y = 0; y <= 10; ++y) ++counts[t.sample(static_cast<double>(y))];
    CHECK(counts[0] == 3);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 5);
    CHECK(counts[3] == 1);
}

TEST_CASE("sampling domain errors") {
    SumTree t = make_tree({3, 2, 5, 1});
    CHECK_THROWS_AS(t.sample(11.0), std::domain_error);
    CHECK_THROWS_AS(t.sample(-0.5), std::domain_error);
    SumTree empty(4);
    CHECK_THROWS_AS(empty.sample(0.0), std::logic_error);
}

TEST_CASE("capacity rounds up to a power of two, spare leaves stay zero") {
    SumTree t(5);
    CHECK(t.leaf_count() == 8);
    for (std::size_t i = 5; i < 8; ++i) CHECK(t.leaf_raw(i) == 0);
}

TEST_CASE("random update fuzz against running brute-force sum") {
    std::mt19937_64 rng(42);
    const std::size_t n = 37;
    SumTree t(n);
    std::vector<uint32_t> shadow(t.leaf_count(), 0);
    std::uniform_int_distribution<std::size_t> slot_dist(0, n - 1);
    std::uniform_int_distribution<uint32_t> val_dist(0, 1u << 24);
    for (int it = 0; it < 1000; ++it) {
        std::size_t slot = slot_dist(rng);
        uint32_t raw = val_dist(rng);
        t.update_raw(slot, raw);
        shadow[slot] = raw;
        uint64_t expect = 0;
        for (uint32_t v : shadow) expect += v;
        REQUIRE(t.root_raw() == expect);
    }
    CHECK(t.consistent());
}
