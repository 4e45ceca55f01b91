#pragma once

#include <string>
#include <vector>

#include "amper/tcam.hpp"

namespace amper {

// Per-component delays in nanoseconds. Defaults follow the hardware
// characterization used by the simulator; any entry can be overridden from a
// JSON config.
struct LatencyTable {
    double exact_search = 0.58;
    double exact_write = 2.0;
    double best_search = 1.0;
    double best_write = 2.0;
    double csb_read = 0.78;
    double csb_write = 0.78;
    double urng = 1.71;
    double qg_knn = 3.57;
    double qg_frnn = 2.02;

    static LatencyTable from_json_file(const std::string& path);
    static LatencyTable from_json_text(const std::string& text);
    void validate() const;  // all delays must be positive
};

struct LatencyReport {
    std::string variant;   // "frnn" or "knn"
    std::size_t m = 0;
    double csp_ratio = 0.0;
    std::size_t csp_size = 0;
    std::size_t batch = 0;
    double qgen_ns = 0.0;    // URNG + query generation, per group
    double search_ns = 0.0;  // TCAM searches (bank-parallel per query)
    double csb_ns = 0.0;     // serialized candidate-set-buffer fills
    double readout_ns = 0.0; // final batch readout
    double total_ns = 0.0;
};

// total = m*(urng + qg_frnn + exact_search) + csp*csb_write + b*(urng + csb_read)
LatencyReport estimate_frnn(const LatencyTable& t, std::size_t m, std::size_t csp_size,
                            std::size_t b);

// total = m*(urng + qg_knn) + csp*(best_search + csb_write) + b*(urng + csb_read)
LatencyReport estimate_knn(const LatencyTable& t, std::size_t m, std::size_t csp_size,
                           std::size_t b);

// serialized direct writes
double estimate_update(const LatencyTable& t, std::size_t n_updates);

// replay a simulator trace, charging each step its component delay
double estimate_from_trace(const LatencyTable& t, const std::vector<TraceRecord>& trace,
                           Variant variant);

std::vector<LatencyReport> latency_sweep(const LatencyTable& t, Variant variant,
                                         const std::vector<std::size_t>& m_list,
                                         const std::vector<double>& ratio_list,
                                         std::size_t store_size, std::size_t b);

// CSV: variant,m,csp_ratio,csp_size,batch,total_ns,qgen_ns,search_ns,csb_ns,readout_ns
std::string latency_csv(const std::vector<LatencyReport>& reports);

}  // namespace amper
