#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "amper/amper.hpp"

using namespace amper;

namespace {

PriorityStore make_store(const std::vector<double>& vals, double v_max) {
    PriorityStore s(vals.size(), v_max);
    for (double v : vals) s.insert(v);
    return s;
}

PriorityStore random_store(std::size_t n, uint64_t seed, double v_max = 1.0) {
    PriorityStore s(n, v_max);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1e-6, v_max);
    for (std::size_t i = 0; i < n; ++i) s.insert(u(rng));
    return s;
}

}  // namespace

TEST_CASE("group_representative stays in range, mean converges") {
    AmperConfig cfg;
    cfg.v_max = 10.0;
    std::mt19937_64 rng(1);

    cfg.m = 1;
    for (int i = 0; i < 100; ++i) {
        double v = group_representative(cfg, 0, rng);
        CHECK(v >= 0.0);
        CHECK(v < 10.0);
    }

    cfg.m = 5;
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double v = group_representative(cfg, 2, rng);
        CHECK(v >= 4.0);
        CHECK(v < 6.0);
        sum += v;
    }
    CHECK(std::fabs(sum / 100000 - 5.0) < 0.02);
}

TEST_CASE("subset_size follows the scaled count with rounding") {
    AmperConfig cfg;
    cfg.lambda = 0.05;
    CHECK(subset_size(cfg, 10.0, 20, 1000) == 10);
    CHECK(subset_size(cfg, 10.0, 0, 1000) == 0);
    cfg.lambda = 0.25;
    CHECK(subset_size(cfg, 3.3, 7, 1000) == 6);  // round(5.775)
    // clamped to store occupancy
    cfg.lambda = 100.0;
    CHECK(subset_size(cfg, 10.0, 20, 15) == 15);
}

TEST_CASE("radius scales the representative, floored at one raw unit") {
    AmperConfig cfg;
    cfg.lambda_prime = 2.0;
    cfg.m = 10;
    CHECK(decode_priority(radius_raw(cfg, 40.0)) == doctest::Approx(8.0));
    CHECK(radius_raw(cfg, 0.0) == 1);
    cfg.lambda_prime = 1.2;
    cfg.m = 20;
    CHECK(decode_priority(radius_raw(cfg, 100.0)) == doctest::Approx(6.0));
}

TEST_CASE("knn reference examples") {
    PriorityStore s = make_store({10, 20, 30, 40, 50}, 100.0);
    CandidateSet got = knn_search_ref(s, 33.0, 2);
    REQUIRE(got.size() == 2);
    std::vector<double> vals = {s.decode(got[0].raw), s.decode(got[1].raw)};
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == doctest::Approx(30.0));
    CHECK(vals[1] == doctest::Approx(40.0));

    CHECK(knn_search_ref(s, 33.0, 0).empty());

    PriorityStore tie = make_store({30, 40}, 100.0);
    CandidateSet t = knn_search_ref(tie, 35.0, 1);
    REQUIRE(t.size() == 1);
    CHECK(t[0].slot == 0);  // equal distance, lower slot wins

    // k beyond occupancy returns everything
    CHECK(knn_search_ref(s, 33.0, 99).size() == 5);
}

TEST_CASE("frnn reference examples") {
    PriorityStore s = make_store({10, 20, 30, 40, 50}, 100.0);
    CandidateSet got = frnn_search_ref(s, 33.0, s.encode(8.0));
    REQUIRE(got.size() == 2);
    CHECK(s.decode(got[0].raw) == doctest::Approx(30.0));
    CHECK(s.decode(got[1].raw) == doctest::Approx(40.0));

    // delta 0 raw units: only exact raw matches
    CandidateSet exact = frnn_search_ref(s, 30.0, 0);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].slot == 2);

    // radius covering the whole range returns the entire store
    CHECK(frnn_search_ref(s, 33.0, s.encode(100.0)).size() == 5);
}

TEST_CASE("parallel kernels agree with serial references") {
    PriorityStore s = random_store(5000, 21);
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        double v = u(rng);
        uint32_t delta = s.encode(u(rng) * 0.05);
        CandidateSet a = frnn_search_ref(s, v, delta);
        CandidateSet b = frnn_search(s, v, delta);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].slot == b[i].slot);
            CHECK(a[i].raw == b[i].raw);
        }
        std::size_t k = static_cast<std::size_t>(u(rng) * 100);
        CandidateSet ka = knn_search_ref(s, v, k);
        CandidateSet kb = knn_search(s, v, k);
        REQUIRE(ka.size() == kb.size());
        for (std::size_t i = 0; i < ka.size(); ++i) CHECK(ka[i].slot == kb[i].slot);
    }
}

TEST_CASE("frnn matches brute-force filter on randomized stores") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n : {100ull, 1000ull, 10000ull}) {
        PriorityStore s = random_store(n, 32 + n);
        double v = u(rng);
        uint32_t delta = s.encode(0.01 + u(rng) * 0.05);
        uint32_t v_raw = s.encode(v);
        CandidateSet got = frnn_search_ref(s, v, delta);
        std::vector<std::size_t> expect;
        for (std::size_t i = 0; i < n; ++i) {
            uint32_t r = s.raw(i);
            uint64_t d = r > v_raw ? r - v_raw : v_raw - r;
            if (d <= delta) expect.push_back(i);
        }
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].slot == expect[i]);
    }
}

TEST_CASE("knn equals the first k of a brute-force distance sort") {
    PriorityStore s = random_store(2000, 41);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        double v = u(rng);
        std::size_t k = 1 + static_cast<std::size_t>(u(rng) * 50);
        uint32_t v_raw = s.encode(v);
        std::vector<std::pair<uint64_t, std::size_t>> keyed;
        for (std::size_t i = 0; i < s.size(); ++i) {
            uint32_t r = s.raw(i);
            keyed.push_back({r > v_raw ? r - v_raw : uint64_t(v_raw) - r, i});
        }
        std::sort(keyed.begin(), keyed.end());
        CandidateSet got = knn_search_ref(s, v, k);
        REQUIRE(got.size() == k);
        for (std::size_t i = 0; i < k; ++i) CHECK(got[i].slot == keyed[i].second);
    }
}

TEST_CASE("group counts conserve store occupancy") {
    PriorityStore s = random_store(3333, 51);
    for (std::size_t m : {1ull, 2ull, 7ull, 20ull}) {
        AmperConfig cfg;
        cfg.m = m;
        cfg.v_max = 1.0;
        auto counts = group_counts(s, cfg);
        std::size_t total = 0;
        for (std::size_t c : counts) total += c;
        CHECK(total == s.size());
    }
}

TEST_CASE("build_csp: frNN with full-range radius returns whole store") {
    PriorityStore s = make_store({0.1, 0.5, 0.9}, 1.0);
    AmperConfig cfg;
    cfg.m = 1;
    cfg.lambda_prime = 1000.0;  // radius >= v_max
    cfg.v_max = 1.0;
    cfg.variant = Variant::frNN;
    std::mt19937_64 rng(61);
    CspResult r = build_csp(s, cfg, rng);
    CHECK(r.csp.size() == 3);
}

TEST_CASE("build_csp: kNN with k = occupancy is a permutation of the store") {
    PriorityStore s = random_store(64, 62);
    AmperConfig cfg;
    cfg.m = 1;
    cfg.v_max = 1.0;
    cfg.variant = Variant::kNN;
    cfg.lambda = 1e9;  // N_i clamps to occupancy
    std::mt19937_64 rng(63);
    CspResult r = build_csp(s, cfg, rng);
    REQUIRE(r.csp.size() == 64);
    std::vector<std::size_t> slots;
    for (const auto& e : r.csp) slots.push_back(e.slot);
    std::sort(slots.begin(), slots.end());
    for (std::size_t i = 0; i < 64; ++i) CHECK(slots[i] == i);
}

TEST_CASE("build_csp: frNN ratio targeting on a uniform store") {
    PriorityStore s = random_store(10000, 71);
    AmperConfig cfg;
    cfg.m = 20;
    cfg.lambda_prime = 0.15;
    cfg.v_max = 1.0;
    cfg.variant = Variant::frNN;
    std::mt19937_64 rng(72);
    double avg = 0.0;
    const int reps = 50;
    for (int i = 0; i < reps; ++i) {
        avg += static_cast<double>(build_csp(s, cfg, rng).csp.size());
    }
    avg /= reps;
    CHECK(avg > 1500 * 0.8);
    CHECK(avg < 1500 * 1.2);
}

TEST_CASE("csp entries always mirror the store") {
    PriorityStore s = random_store(500, 81);
    AmperConfig cfg;
    cfg.m = 8;
    cfg.v_max = 1.0;
    std::mt19937_64 rng(82);
    for (Variant v : {Variant::kNN, Variant::frNN}) {
        cfg.variant = v;
        CspResult r = build_csp(s, cfg, rng);
        for (const auto& e : r.csp) CHECK(e.raw == s.raw(e.slot));
    }
}

TEST_CASE("amper_sample: singleton CSP repeats, whole-store CSP is uniform") {
    PriorityStore one = make_store({0.5}, 1.0);
    AmperConfig cfg;
    cfg.m = 1;
    cfg.lambda_prime = 1000.0;
    cfg.v_max = 1.0;
    cfg.batch_size = 32;
    std::mt19937_64 rng(91);
    SampleBatch b = amper_sample(one, cfg, rng);
    for (std::size_t s : b.slots) CHECK(s == 0);

    PriorityStore four = make_store({3.0 / 11, 2.0 / 11, 5.0 / 11, 1.0 / 11}, 1.0);
    cfg.batch_size = 64;
    std::vector<long> counts(4, 0);
    for (int it = 0; it < 5000; ++it) {
        for (std::size_t s : amper_sample(four, cfg, rng).slots) ++counts[s];
    }
    for (int i = 0; i < 4; ++i) {
        CHECK(std::fabs(counts[i] / (64.0 * 5000) - 0.25) < 0.01);
    }
}

TEST_CASE("monotone bias: AMPER over-represents larger priorities") {
    PriorityStore s = random_store(2000, 101);
    double uniform_mean = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) uniform_mean += s.value(i);
    uniform_mean /= static_cast<double>(s.size());

    for (Variant v : {Variant::kNN, Variant::frNN}) {
        AmperConfig cfg;
        cfg.m = 10;
        cfg.lambda = 0.3;
        cfg.lambda_prime = 0.15;
        cfg.v_max = 1.0;
        cfg.batch_size = 1000;
        cfg.variant = v;
        std::mt19937_64 rng(102);
        double mean = 0.0;
        long n = 0;
        for (int it = 0; it < 1000; ++it) {
            for (double val : amper_sample(s, cfg, rng).values) {
                mean += val;
                ++n;
            }
        }
        mean /= static_cast<double>(n);
        CHECK(mean > uniform_mean);
    }
}

TEST_CASE("empty-CSP fallback samples uniformly over the store") {
    // every group representative's subset is empty: kNN with lambda 0
    PriorityStore s = random_store(100, 111);
    AmperConfig cfg;
    cfg.m = 4;
    cfg.lambda = 0.0;
    cfg.v_max = 1.0;
    cfg.variant = Variant::kNN;
    cfg.batch_size = 16;
    std::mt19937_64 rng(112);
    SampleBatch b = amper_sample(s, cfg, rng);
    CHECK(b.fallback_uniform);
    CHECK(b.slots.size() == 16);
    CHECK_THROWS_AS(build_csp(PriorityStore(4, 1.0), cfg, rng), std::logic_error);
}
