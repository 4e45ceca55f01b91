// Command-line driver: sampling-error sweeps, latency estimates, DQN
// training runs and sampler micro-benchmarks.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amper/dqn.hpp"
#include "amper/eval.hpp"
#include "amper/latency.hpp"
#include "amper/replay.hpp"

namespace {

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    return out;
}

// "start:stop:step" inclusive range, or comma list
std::vector<double> parse_double_list(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c, ':');
        double start = std::stod(a), stop = std::stod(b), step = std::stod(c);
        for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::string output_path(const std::string& out_flag, const char* fallback) {
    if (!out_flag.empty()) return out_flag;
    const char* dir = std::getenv("AMPER_OUT_DIR");
    return dir ? std::string(dir) + "/" + fallback : fallback;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output: " + path);
    f << content;
}

int cmd_kl_sweep(std::size_t size, const std::string& m_spec, const std::string& ratio_spec,
                 std::size_t runs, std::size_t batch, uint64_t seed, const std::string& out,
                 const std::string& hist_out) {
    auto reports = amper::sweep_grid(parse_size_list(m_spec), parse_double_list(ratio_spec),
                                     {size}, runs, batch, seed);
    std::ostringstream csv;
    csv << "# seed=" << seed << " runs=" << runs << " batch=" << batch << "\n";
    csv << amper::kl_csv(reports);
    write_file(output_path(out, "kl.csv"), csv.str());
    if (!hist_out.empty()) {
        auto res = amper::run_sampling_error(size, parse_size_list(m_spec).back(),
                                             parse_double_list(ratio_spec).back(), runs,
                                             batch, seed);
        write_file(hist_out, amper::histogram_csv(res.histograms));
    }
    std::cout << "wrote " << output_path(out, "kl.csv") << " (" << reports.size()
              << " grid cells, seed " << seed << ")\n";
    return 0;
}

int cmd_latency(const std::string& variant, std::size_t size, const std::string& m_spec,
                const std::string& ratio_spec, std::size_t batch, const std::string& table_path,
                const std::string& out, double gpu_baseline_ns) {
    amper::LatencyTable table;
    if (!table_path.empty()) table = amper::LatencyTable::from_json_file(table_path);
    amper::Variant v = variant == "knn" ? amper::Variant::kNN : amper::Variant::frNN;
    auto m_list = parse_size_list(m_spec);
    auto ratios = parse_double_list(ratio_spec);
    auto reports = amper::latency_sweep(table, v, m_list, ratios, size, batch);
    std::string csv = amper::latency_csv(reports);
    if (!out.empty()) {
        write_file(out, csv);
        std::cout << "wrote " << out << "\n";
    } else {
        std::cout << csv;
    }
    if (reports.size() == 1) {
        std::cout << "total_ns=" << reports[0].total_ns << "\n";
        if (gpu_baseline_ns > 0.0) {
            std::cout << "implied_speedup_vs_gpu=" << gpu_baseline_ns / reports[0].total_ns
                      << "\n";
        }
    }
    return 0;
}

int cmd_train(const std::string& env, const std::string& replay, std::size_t er_size,
              std::size_t steps, uint64_t seed, std::size_t m, double lambda,
              double lambda_prime, double alpha, const std::string& out) {
    if (env != "cartpole") throw CLI::ValidationError("--env", "only 'cartpole' is supported");
    amper::TrainConfig cfg;
    cfg.replay = amper::replay_kind_from_name(replay);
    cfg.er_size = er_size;
    cfg.total_steps = steps;
    cfg.seed = seed;
    cfg.replay_opts.per.alpha = alpha;
    cfg.replay_opts.amper.m = m;
    cfg.replay_opts.amper.lambda = lambda;
    cfg.replay_opts.amper.lambda_prime = lambda_prime;

    amper::TrainResult result = amper::train(cfg);
    if (result.aborted) {
        std::cerr << "training aborted: non-finite loss\n";
        return 1;
    }
    std::string path = output_path(out, "curve.csv");
    std::ostringstream csv;
    csv << "# seed=" << seed << " replay=" << replay << " er_size=" << er_size << "\n";
    csv << amper::curve_csv(result);
    write_file(path, csv.str());

    nlohmann::json summary = {{"sampler", result.sampler},
                              {"seed", result.seed},
                              {"episodes", result.curve.size()},
                              {"test_score", result.test_score}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_sample_bench(const std::string& sizes_spec, std::size_t batch, uint64_t seed,
                     bool json_out) {
    amper::LatencyTable table;
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream text;
    text << "size,sampler,wall_us_per_batch,model_ns_per_batch\n";
    for (std::size_t size : parse_size_list(sizes_spec)) {
        amper::ReplayOptions opts;
        opts.capacity = size;
        opts.v_max = 1.0;
        opts.seed = seed;
        std::mt19937_64 fill(seed);
        std::uniform_real_distribution<double> u(1e-6, 1.0);
        for (const char* name : {"uniform", "per", "amper-k", "amper-fr", "amper-fr-hw"}) {
            auto sampler = amper::make_replay(amper::replay_kind_from_name(name), opts);
            for (std::size_t i = 0; i < size; ++i) sampler->insert();
            // give the store a spread of priorities
            std::vector<std::size_t> all(size);
            std::vector<double> prio(size);
            for (std::size_t i = 0; i < size; ++i) {
                all[i] = i;
                prio[i] = u(fill);
            }
            sampler->update(all, prio);

            const int reps = 50;
            auto t0 = std::chrono::steady_clock::now();
            for (int r = 0; r < reps; ++r) (void)sampler->sample(batch);
            auto t1 = std::chrono::steady_clock::now();
            double us =
                std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;

            auto csp = static_cast<std::size_t>(0.15 * static_cast<double>(size));
            double model_ns = 0.0;
            std::string n(name);
            if (n == "amper-k") model_ns = amper::estimate_knn(table, 20, csp, batch).total_ns;
            if (n == "amper-fr" || n == "amper-fr-hw") {
                model_ns = amper::estimate_frnn(table, 20, csp, batch).total_ns;
            }
            text << size << ',' << name << ',' << us << ',' << model_ns << '\n';
            rows.push_back({{"size", size},
                            {"sampler", name},
                            {"wall_us_per_batch", us},
                            {"model_ns_per_batch", model_ns}});
        }
    }
    if (json_out) {
        std::cout << nlohmann::json{{"seed", seed}, {"batch", batch}, {"rows", rows}}.dump(2)
                  << "\n";
    } else {
        std::cout << "# seed=" << seed << "\n" << text.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"replay-sampling toolkit: PER, AMPER and the TCAM hardware path"};
    app.require_subcommand(1);

    // kl-sweep
    auto* kl = app.add_subcommand("kl-sweep", "sampling-error KL sweep over (m, ratio)");
    std::size_t kl_size = 0, kl_runs = 100, kl_batch = 64;
    std::string kl_m = "2,4,8,12", kl_ratio = "0.03:0.15:0.03", kl_out, kl_hist;
    uint64_t kl_seed = 7;
    kl->add_option("--size", kl_size, "ER store size")->required();
    kl->add_option("--m", kl_m, "group counts, comma list");
    kl->add_option("--ratio", kl_ratio, "CSP ratios, comma list or start:stop:step");
    kl->add_option("--runs", kl_runs, "sampling runs per cell");
    kl->add_option("--batch", kl_batch, "batch size");
    kl->add_option("--seed", kl_seed, "RNG seed");
    kl->add_option("--out", kl_out, "output CSV path");
    kl->add_option("--hist-out", kl_hist, "per-slot histogram dump path");

    // latency
    auto* lat = app.add_subcommand("latency", "analytical per-batch latency estimates");
    std::string lat_variant = "frnn", lat_m = "20", lat_ratio = "0.15", lat_table, lat_out;
    std::size_t lat_size = 10000, lat_batch = 64;
    double lat_gpu = 0.0;
    lat->add_option("--variant", lat_variant, "frnn or knn")
        ->check(CLI::IsMember({"frnn", "knn"}));
    lat->add_option("--size", lat_size, "ER store size");
    lat->add_option("--m", lat_m, "group counts");
    lat->add_option("--ratio", lat_ratio, "CSP ratios");
    lat->add_option("--batch", lat_batch, "batch size");
    lat->add_option("--table", lat_table, "JSON file overriding component delays");
    lat->add_option("--out", lat_out, "output CSV path (stdout if omitted)");
    lat->add_option("--gpu-baseline-ns", lat_gpu, "annotate implied speedup vs this baseline");

    // train
    auto* tr = app.add_subcommand("train", "DQN training run");
    std::string tr_env = "cartpole", tr_replay = "per", tr_out;
    std::size_t tr_er = 2000, tr_steps = 50000, tr_m = 20;
    double tr_lambda = 0.3, tr_lambda_p = 0.6, tr_alpha = 0.6;
    uint64_t tr_seed = 1;
    tr->add_option("--env", tr_env, "environment (cartpole)");
    tr->add_option("--replay", tr_replay,
                   "replay variant: uniform|per|amper-k|amper-fr|amper-fr-hw")
        ->check(CLI::IsMember({"uniform", "per", "amper-k", "amper-fr", "amper-fr-hw"}));
    tr->add_option("--er-size", tr_er, "replay capacity");
    tr->add_option("--steps", tr_steps, "total environment steps");
    tr->add_option("--seed", tr_seed, "RNG seed");
    tr->add_option("--m", tr_m, "AMPER group count");
    tr->add_option("--lambda", tr_lambda, "AMPER-k scaling");
    tr->add_option("--lambda-prime", tr_lambda_p, "AMPER-fr scaling");
    tr->add_option("--alpha", tr_alpha, "priority exponent");
    tr->add_option("--out", tr_out, "curve CSV path");

    // sample-bench
    auto* sb = app.add_subcommand("sample-bench", "per-batch wall time per sampler");
    std::string sb_sizes = "5000,10000,20000";
    std::size_t sb_batch = 64;
    uint64_t sb_seed = 3;
    bool sb_json = false;
    sb->add_option("--sizes", sb_sizes, "store sizes, comma list");
    sb->add_option("--batch", sb_batch, "batch size");
    sb->add_option("--seed", sb_seed, "RNG seed");
    sb->add_flag("--json", sb_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2
    }

    try {
        if (kl->parsed()) {
            return cmd_kl_sweep(kl_size, kl_m, kl_ratio, kl_runs, kl_batch, kl_seed, kl_out,
                                kl_hist);
        }
        if (lat->parsed()) {
            return cmd_latency(lat_variant, lat_size, lat_m, lat_ratio, lat_batch, lat_table,
                               lat_out, lat_gpu);
        }
        if (tr->parsed()) {
            return cmd_train(tr_env, tr_replay, tr_er, tr_steps, tr_seed, tr_m, tr_lambda,
                             tr_lambda_p, tr_alpha, tr_out);
        }
        if (sb->parsed()) return cmd_sample_bench(sb_sizes, sb_batch, sb_seed, sb_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
