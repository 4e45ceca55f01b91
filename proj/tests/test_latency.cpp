#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amper/latency.hpp"

using namespace amper;

TEST_CASE("frnn estimate matches the composition formula") {
    LatencyTable t;
    LatencyReport r = estimate_frnn(t, 20, 1500, 64);
    CHECK(r.total_ns == doctest::Approx(1415.56).epsilon(1e-9));
    CHECK(r.qgen_ns + r.search_ns == doctest::Approx(20 * 4.31));
    CHECK(r.csb_ns == doctest::Approx(1500 * 0.78));
    CHECK(r.readout_ns == doctest::Approx(64 * 2.49));

    CHECK(estimate_frnn(t, 0, 0, 0).total_ns == doctest::Approx(0.0));

    // affine in csp_size with slope csb_write
    double base = estimate_frnn(t, 20, 1500, 64).total_ns;
    double doubled = estimate_frnn(t, 20, 3000, 64).total_ns;
    CHECK(doubled - base == doctest::Approx(1500 * 0.78));
}

TEST_CASE("knn estimate and the ~2x gap") {
    LatencyTable t;
    LatencyReport r = estimate_knn(t, 20, 1500, 64);
    CHECK(r.total_ns == doctest::Approx(2934.96).epsilon(1e-9));

    double ratio = r.total_ns / estimate_frnn(t, 20, 1500, 64).total_ns;
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.3);
}

TEST_CASE("m-insensitivity at fixed csp") {
    LatencyTable t;
    // group-stage cost is fixed per m; at realistic CSP sizes it stays small
    for (std::size_t csp : {1500ull, 3000ull}) {
        double lo = estimate_frnn(t, 4, csp, 64).total_ns;
        double hi = estimate_frnn(t, 20, csp, 64).total_ns;
        CHECK(std::fabs(hi - lo) / lo < 0.10);
        double klo = estimate_knn(t, 4, csp, 64).total_ns;
        double khi = estimate_knn(t, 20, csp, 64).total_ns;
        CHECK(std::fabs(khi - klo) / klo < 0.10);
    }
}

TEST_CASE("frnn dominates knn everywhere on the sweep") {
    LatencyTable t;
    auto frnn = latency_sweep(t, Variant::frNN, {4, 8, 12, 16, 20},
                              {0.03, 0.06, 0.09, 0.12, 0.15}, 10000, 64);
    auto knn = latency_sweep(t, Variant::kNN, {4, 8, 12, 16, 20},
                             {0.03, 0.06, 0.09, 0.12, 0.15}, 10000, 64);
    REQUIRE(frnn.size() == knn.size());
    for (std::size_t i = 0; i < frnn.size(); ++i) {
        CHECK(frnn[i].total_ns <= knn[i].total_ns);
    }
}

TEST_CASE("sweep is affine in ratio (exact linear fit)") {
    LatencyTable t;
    auto reports = latency_sweep(t, Variant::frNN, {20}, {0.03, 0.06, 0.09, 0.12, 0.15},
                                 10000, 64);
    REQUIRE(reports.size() == 5);
    double slope = (reports[1].total_ns - reports[0].total_ns);
    for (std::size_t i = 1; i < reports.size(); ++i) {
        CHECK(reports[i].total_ns - reports[i - 1].total_ns == doctest::Approx(slope));
    }
    // store 10000, m=20, ratio 0.15
    CHECK(reports.back().total_ns == doctest::Approx(1415.56));
}

TEST_CASE("update latency is serialized writes") {
    LatencyTable t;
    CHECK(estimate_update(t, 64) == doctest::Approx(128.0));
    CHECK(estimate_update(t, 0) == doctest::Approx(0.0));
    CHECK(estimate_update(t, 1) == doctest::Approx(2.0));
}

TEST_CASE("json overrides") {
    LatencyTable t = LatencyTable::from_json_text(R"({"exact_search": 1.0})");
    CHECK(t.exact_search == doctest::Approx(1.0));
    CHECK(t.urng == doctest::Approx(1.71));  // untouched default
    LatencyReport r = estimate_frnn(t, 20, 1500, 64);
    CHECK(r.total_ns == doctest::Approx(1415.56 + 20 * 0.42));
    CHECK_THROWS(LatencyTable::from_json_text(R"({"urng": -1.0})"));
}

TEST_CASE("trace-based estimate agrees with the closed form") {
    // m=2 groups, 3 matches, batch 2
    std::vector<TraceRecord> trace;
    for (long g = 0; g < 2; ++g) {
        trace.push_back({TraceRecord::Kind::urng, g, 0});
        trace.push_back({TraceRecord::Kind::qgen, g, 0});
        trace.push_back({TraceRecord::Kind::search, g, 4});
    }
    for (int i = 0; i < 3; ++i) trace.push_back({TraceRecord::Kind::csb_write, 0, 0});
    for (int i = 0; i < 2; ++i) {
        trace.push_back({TraceRecord::Kind::urng, -1, 0});
        trace.push_back({TraceRecord::Kind::csb_read, -1, 0});
    }
    LatencyTable t;
    double got = estimate_from_trace(t, trace, Variant::frNN);
    CHECK(got == doctest::Approx(estimate_frnn(t, 2, 3, 2).total_ns));
}

TEST_CASE("csv header and row count") {
    LatencyTable t;
    auto reports = latency_sweep(t, Variant::kNN, {4, 20}, {0.03, 0.15}, 10000, 64);
    std::string csv = latency_csv(reports);
    CHECK(csv.rfind("variant,m,csp_ratio,csp_size,batch,total_ns", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
}
