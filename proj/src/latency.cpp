#include "amper/latency.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace amper {

void LatencyTable::validate() const {
    const double vals[] = {exact_search, exact_write, best_search, best_write,
                           csb_read,     csb_write,   urng,        qg_knn,
                           qg_frnn};
    for (double v : vals) {
        if (!(v > 0.0)) throw std::invalid_argument("latency delays must be positive");
    }
}

LatencyTable LatencyTable::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LatencyTable t;
    auto get = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    get("exact_search", t.exact_search);
    get("exact_write", t.exact_write);
    get("best_search", t.best_search);
    get("best_write", t.best_write);
    get("csb_read", t.csb_read);
    get("csb_write", t.csb_write);
    get("urng", t.urng);
    get("qg_knn", t.qg_knn);
    get("qg_frnn", t.qg_frnn);
    t.validate();
    return t;
}

LatencyTable LatencyTable::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open latency table: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

LatencyReport estimate_frnn(const LatencyTable& t, std::size_t m, std::size_t csp_size,
                            std::size_t b) {
    LatencyReport r;
    r.variant = "frnn";
    r.m = m;
    r.csp_size = csp_size;
    r.batch = b;
    r.qgen_ns = static_cast<double>(m) * (t.urng + t.qg_frnn);
    r.search_ns = static_cast<double>(m) * t.exact_search;
    r.csb_ns = static_cast<double>(csp_size) * t.csb_write;
    r.readout_ns = static_cast<double>(b) * (t.urng + t.csb_read);
    r.total_ns = r.qgen_ns + r.search_ns + r.csb_ns + r.readout_ns;
    return r;
}

LatencyReport estimate_knn(const LatencyTable& t, std::size_t m, std::size_t csp_size,
                           std::size_t b) {
    LatencyReport r;
    r.variant = "knn";
    r.m = m;
    r.csp_size = csp_size;
    r.batch = b;
    r.qgen_ns = static_cast<double>(m) * (t.urng + t.qg_knn);
    r.search_ns = static_cast<double>(csp_size) * t.best_search;
    r.csb_ns = static_cast<double>(csp_size) * t.csb_write;
    r.readout_ns = static_cast<double>(b) * (t.urng + t.csb_read);
    r.total_ns = r.qgen_ns + r.search_ns + r.csb_ns + r.readout_ns;
    return r;
}

double estimate_update(const LatencyTable& t, std::size_t n_updates) {
    return static_cast<double>(n_updates) * t.exact_write;
}

double estimate_from_trace(const LatencyTable& t, const std::vector<TraceRecord>& trace,
                           Variant variant) {
    double total = 0.0;
    for (const auto& rec : trace) {
        switch (rec.kind) {
            case TraceRecord::Kind::urng: total += t.urng; break;
            case TraceRecord::Kind::qgen:
                total += variant == Variant::kNN ? t.qg_knn : t.qg_frnn;
                break;
            case TraceRecord::Kind::search:
                // bank-parallel: one search delay per query regardless of arrays
                total += variant == Variant::kNN ? t.best_search : t.exact_search;
                break;
            case TraceRecord::Kind::csb_write: total += t.csb_write; break;
            case TraceRecord::Kind::csb_read: total += t.csb_read; break;
        }
    }
    return total;
}

std::vector<LatencyReport> latency_sweep(const LatencyTable& t, Variant variant,
                                         const std::vector<std::size_t>& m_list,
                                         const std::vector<double>& ratio_list,
                                         std::size_t store_size, std::size_t b) {
    std::vector<LatencyReport> out;
    for (std::size_t m : m_list) {
        for (double ratio : ratio_list) {
            auto csp = static_cast<std::size_t>(ratio * static_cast<double>(store_size) + 0.5);
            LatencyReport r = variant == Variant::kNN ? estimate_knn(t, m, csp, b)
                                                      : estimate_frnn(t, m, csp, b);
            r.csp_ratio = ratio;
            out.push_back(r);
        }
    }
    return out;
}

std::string latency_csv(const std::vector<LatencyReport>& reports) {
    std::ostringstream out;
    out << "variant,m,csp_ratio,csp_size,batch,total_ns,qgen_ns,search_ns,csb_ns,readout_ns\n";
    for (const auto& r : reports) {
        out << r.variant << ',' << r.m << ',' << r.csp_ratio << ',' << r.csp_size << ','
            << r.batch << ',' << r.total_ns << ',' << r.qgen_ns << ',' << r.search_ns << ','
            << r.csb_ns << ',' << r.readout_ns << '\n';
    }
    return out.str();
}

}  // namespace amper
