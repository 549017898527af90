#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "aquannr/bench/csv.hpp"
#include "aquannr/bench/evaluate.hpp"
#include "aquannr/bench/optimization.hpp"
#include "aquannr/channel/trace_gen.hpp"
#include "aquannr/estimators/ar.hpp"
#include "aquannr/estimators/ema.hpp"
#include "aquannr/estimators/nnr.hpp"
#include "aquannr/estimators/running_stats.hpp"
#include "aquannr/netsim/metrics.hpp"
#include "aquannr/netsim/simulator.hpp"
#include "aquannr/version.hpp"
#include "kv.hpp"
#include "sim_config_io.hpp"

namespace fs = std::filesystem;
using namespace aquannr;
using tools::KvMap;

namespace {

double kv_double(const KvMap& kv, const std::string& key) {
    return std::stod(kv.at(key));
}

/// Runs `write` and removes the named outputs if it throws, so failed
/// runs never leave partial files behind.
template <typename Fn>
void write_outputs(const std::vector<fs::path>& outputs, Fn&& write) {
    try {
        write();
    } catch (...) {
        for (const auto& p : outputs) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
}

fs::path manifest_path(const fs::path& out) {
    fs::path p = out;
    p += ".manifest";
    return p;
}

// ---------------------------------------------------------------- gen-trace

struct GenTraceOpts {
    std::string kind = "ideal";
    std::size_t length = 1000;
    double base = 15.0;
    double amplitude = 5.0;
    std::size_t period = 50;
    double noise_sigma = 0.0;
    double jitter = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string from_manifest;
};

KvMap gen_trace_manifest(const GenTraceOpts& o) {
    KvMap kv;
    kv["subcommand"] = "gen-trace";
    kv["version"] = kVersion;
    kv["kind"] = o.kind;
    kv["length"] = std::to_string(o.length);
    kv["base_db"] = bench::format_double(o.base);
    kv["amplitude_db"] = bench::format_double(o.amplitude);
    kv["period_samples"] = std::to_string(o.period);
    kv["noise_sigma_db"] = bench::format_double(o.noise_sigma);
    kv["jitter"] = bench::format_double(o.jitter);
    kv["seed"] = std::to_string(o.seed);
    kv["out"] = o.out;
    return kv;
}

void gen_trace_from_manifest(GenTraceOpts& o, const KvMap& kv) {
    o.kind = kv.at("kind");
    o.length = std::stoull(kv.at("length"));
    o.base = kv_double(kv, "base_db");
    o.amplitude = kv_double(kv, "amplitude_db");
    o.period = std::stoull(kv.at("period_samples"));
    o.noise_sigma = kv_double(kv, "noise_sigma_db");
    o.jitter = kv_double(kv, "jitter");
    o.seed = std::stoull(kv.at("seed"));
    o.out = kv.at("out");
}

int run_gen_trace(GenTraceOpts o) {
    if (!o.from_manifest.empty()) gen_trace_from_manifest(o, tools::read_kv_file(o.from_manifest));
    if (o.out.empty()) throw std::invalid_argument("gen-trace: --out is required");

    channel::TraceSpec spec;
    spec.kind = channel::trace_kind_from_name(o.kind);
    spec.length_n = o.length;
    spec.base_db = o.base;
    spec.amplitude_db = o.amplitude;
    spec.period_samples = o.period;
    spec.noise_sigma_db = o.noise_sigma;
    spec.period_jitter_fraction = o.jitter;
    spec.seed = o.seed;

    const auto series = channel::gen_trace(spec);
    const fs::path out = o.out;
    write_outputs({out, manifest_path(out)}, [&] {
        bench::save_csv(series, out);
        tools::write_kv_file(manifest_path(out), gen_trace_manifest(o));
    });
    std::cout << "wrote " << series.size() << " samples to " << out.string() << "\n";
    return 0;
}

// ----------------------------------------------------------------- estimate

struct EstimateOpts {
    std::string input;
    std::string method;
    double alpha = 0.2;
    int order = 2;
    std::size_t fit_window = 200;
    std::size_t window_m = 3;
    std::size_t k = 3;
    int idw_q = -2;
    bool trace = false;
};

int run_estimate(const EstimateOpts& o) {
    const auto series = bench::load_csv(o.input);
    double prediction = 0.0;
    estimators::NnrTrace trace;

    if (o.method == "mean") {
        estimators::RunningStats stats;
        for (const auto& s : series.samples()) stats.update(s.snr_db);
        prediction = estimators::mean_predict(stats);
    } else if (o.method == "ema") {
        estimators::EmaState state;
        state.alpha = o.alpha;
        for (const auto& s : series.samples()) state = estimators::ema_update(state, s.snr_db);
        prediction = state.s;
    } else if (o.method == "ar") {
        const auto model = estimators::ar_fit(series, o.order, o.fit_window);
        prediction = estimators::ar_predict(model, series);
    } else if (o.method == "nnr") {
        estimators::NnrConfig cfg;
        cfg.window_m = o.window_m;
        cfg.k = o.k;
        cfg.idw_exponent_q = o.idw_q;
        prediction = estimators::nnr_predict(series, cfg, o.trace ? &trace : nullptr);
    } else {
        throw std::invalid_argument("unknown method '" + o.method +
                                    "' (valid: mean, ema, ar, nnr)");
    }

    std::cout << "prediction_db=" << bench::format_double(prediction) << "\n";
    if (o.trace && o.method == "nnr") {
        for (const auto& nb : trace.selected) {
            std::cout << "neighbor start=" << nb.start
                      << " distance_sq=" << bench::format_double(nb.distance_sq)
                      << " label_db=" << bench::format_double(nb.label) << "\n";
        }
    }
    return 0;
}

// -------------------------------------------------------------------- bench

struct BenchOpts {
    std::string mode = "accuracy";
    std::vector<std::string> kinds = {"ideal"};
    std::string sizes = "1000:10000:1000";
    std::vector<std::string> estimators = {"mean", "ema", "ar2", "ar5", "nnr"};
    std::uint64_t seed = 0;
    double base = 15.0;
    double amplitude = 5.0;
    std::size_t period = 50;
    double noise_sigma = 1.0;
    double jitter = 0.15;
    std::string input;
    std::string out;
    // optimization mode
    std::size_t limit = 10000;
    double comp_alpha = 0.2;
    int comp_idw = -2;
    std::size_t queries = 64;
    std::size_t window_m = 3;
    std::size_t k = 3;
    int idw_q = -2;
    std::string from_manifest;
};

KvMap bench_manifest(const BenchOpts& o) {
    KvMap kv;
    kv["subcommand"] = "bench";
    kv["version"] = kVersion;
    kv["mode"] = o.mode;
    kv["kinds"] = tools::join_strings(o.kinds);
    kv["sizes"] = o.sizes;
    kv["estimators"] = tools::join_strings(o.estimators);
    kv["seed"] = std::to_string(o.seed);
    kv["base_db"] = bench::format_double(o.base);
    kv["amplitude_db"] = bench::format_double(o.amplitude);
    kv["period_samples"] = std::to_string(o.period);
    kv["noise_sigma_db"] = bench::format_double(o.noise_sigma);
    kv["jitter"] = bench::format_double(o.jitter);
    kv["input"] = o.input;
    kv["out"] = o.out;
    kv["limit"] = std::to_string(o.limit);
    kv["comp_alpha"] = bench::format_double(o.comp_alpha);
    kv["comp_idw"] = std::to_string(o.comp_idw);
    kv["queries"] = std::to_string(o.queries);
    kv["nnr_window_m"] = std::to_string(o.window_m);
    kv["nnr_k"] = std::to_string(o.k);
    kv["nnr_idw_q"] = std::to_string(o.idw_q);
    return kv;
}

void bench_from_manifest(BenchOpts& o, const KvMap& kv) {
    o.mode = kv.at("mode");
    o.kinds = tools::split_csv(kv.at("kinds"));
    o.sizes = kv.at("sizes");
    o.estimators = tools::split_csv(kv.at("estimators"));
    o.seed = std::stoull(kv.at("seed"));
    o.base = kv_double(kv, "base_db");
    o.amplitude = kv_double(kv, "amplitude_db");
    o.period = std::stoull(kv.at("period_samples"));
    o.noise_sigma = kv_double(kv, "noise_sigma_db");
    o.jitter = kv_double(kv, "jitter");
    o.input = kv.at("input");
    o.out = kv.at("out");
    o.limit = std::stoull(kv.at("limit"));
    o.comp_alpha = kv_double(kv, "comp_alpha");
    o.comp_idw = std::stoi(kv.at("comp_idw"));
    o.queries = std::stoull(kv.at("queries"));
    o.window_m = std::stoull(kv.at("nnr_window_m"));
    o.k = std::stoull(kv.at("nnr_k"));
    o.idw_q = std::stoi(kv.at("nnr_idw_q"));
}

channel::TraceSpec bench_trace_spec(const BenchOpts& o, const std::string& kind_name) {
    channel::TraceSpec spec;
    spec.kind = channel::trace_kind_from_name(kind_name);
    spec.base_db = o.base;
    spec.amplitude_db = o.amplitude;
    spec.period_samples = o.period;
    spec.seed = o.seed;
    if (spec.kind != channel::TraceKind::IdealPeriod) {
        spec.noise_sigma_db = o.noise_sigma;
    }
    if (spec.kind == channel::TraceKind::RandomPeriodWithNoise) {
        spec.period_jitter_fraction = o.jitter;
    }
    return spec;
}

int run_bench(BenchOpts o) {
    if (!o.from_manifest.empty()) bench_from_manifest(o, tools::read_kv_file(o.from_manifest));
    if (o.out.empty()) throw std::invalid_argument("bench: --out is required");
    const fs::path out = o.out;

    std::vector<bench::EstimatorSpec> est_specs;
    for (const auto& name : o.estimators) {
        auto spec = bench::EstimatorSpec::parse(name);
        if (spec.kind == bench::EstimatorKind::Nnr) {
            spec.nnr.window_m = o.window_m;
            spec.nnr.k = o.k;
            spec.nnr.idw_exponent_q = o.idw_q;
        }
        est_specs.push_back(std::move(spec));
    }

    if (o.mode == "optimization") {
        estimators::NnrConfig cfg;
        cfg.window_m = o.window_m;
        cfg.k = o.k;
        cfg.idw_exponent_q = o.idw_q;
        estimators::CompressionPolicy policy;
        policy.storage_limit = o.limit;
        policy.fraction_alpha = o.comp_alpha;
        policy.idw_exponent = o.comp_idw;
        const auto rows = bench::measure_optimization(
            tools::parse_size_list(o.sizes), bench_trace_spec(o, o.kinds.at(0)), cfg, policy,
            o.queries);
        write_outputs({out, manifest_path(out)}, [&] {
            bench::write_optimization_csv(rows, out);
            tools::write_kv_file(manifest_path(out), bench_manifest(o));
        });
        std::cout << "wrote " << rows.size() << " rows to " << out.string() << "\n";
        return 0;
    }
    if (o.mode != "accuracy") {
        throw std::invalid_argument("bench: unknown mode '" + o.mode +
                                    "' (valid: accuracy, optimization)");
    }

    std::vector<bench::SweepRow> rows;
    if (!o.input.empty()) {
        const auto series = bench::load_csv(o.input);
        const auto eval = bench::evaluate(series, est_specs);
        for (const auto& r : eval.per_estimator) {
            rows.push_back(bench::SweepRow{fs::path(o.input).filename().string(),
                                           series.size(), r});
        }
    } else {
        const auto sizes = tools::parse_size_list(o.sizes);
        std::vector<channel::TraceSpec> trace_specs;
        for (const auto& kind : o.kinds) trace_specs.push_back(bench_trace_spec(o, kind));

        // Independent (spec, size) cells, run across the worker pool and
        // reassembled in deterministic order.
        struct Cell {
            std::size_t spec_idx;
            std::size_t size;
        };
        std::vector<Cell> cells;
        for (std::size_t si = 0; si < trace_specs.size(); ++si) {
            for (const auto size : sizes) cells.push_back(Cell{si, size});
        }
        std::vector<std::vector<bench::SweepRow>> cell_rows(cells.size());
        tools::parallel_cells(cells.size(), [&](std::size_t i) {
            channel::TraceSpec sized = trace_specs[cells[i].spec_idx];
            sized.length_n = cells[i].size;
            const auto series = channel::gen_trace(sized);
            const auto eval = bench::evaluate(series, est_specs);
            for (const auto& r : eval.per_estimator) {
                cell_rows[i].push_back(
                    bench::SweepRow{channel::trace_label(sized), cells[i].size, r});
            }
        });
        for (auto& group : cell_rows) {
            rows.insert(rows.end(), group.begin(), group.end());
        }
    }

    write_outputs({out, manifest_path(out)}, [&] {
        bench::write_bench_csv(rows, out);
        tools::write_kv_file(manifest_path(out), bench_manifest(o));
    });
    std::cout << "wrote " << rows.size() << " rows to " << out.string() << "\n";
    return 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateOpts {
    std::string config_file;
    std::vector<std::string> sets;
    std::string protocols;
    std::string node_counts;
    std::string seeds;
    std::string out;
    std::string from_manifest;
};

int run_simulate(const SimulateOpts& o) {
    netsim::SimConfig base;
    std::vector<std::string> protocols;
    std::vector<int> node_counts;
    std::vector<std::uint64_t> seeds;

    const auto apply_kv = [&](const KvMap& kv) {
        for (const auto& [key, value] : kv) {
            if (key == "subcommand" || key == "version" || key == "out") continue;
            if (key == "protocols") protocols = tools::split_csv(value);
            else if (key == "node_counts") node_counts = tools::parse_int_list(value);
            else if (key == "seeds") seeds = tools::parse_u64_list(value);
            else tools::sim_config_set(base, key, value);
        }
    };

    std::string out = o.out;
    if (!o.from_manifest.empty()) {
        const auto kv = tools::read_kv_file(o.from_manifest);
        apply_kv(kv);
        if (out.empty() && kv.count("out")) out = kv.at("out");
    } else {
        if (!o.config_file.empty()) apply_kv(tools::read_kv_file(o.config_file));
        for (const auto& setting : o.sets) {
            const auto eq = setting.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("--set expects key=value, got '" + setting + "'");
            }
            const std::string key = setting.substr(0, eq);
            const std::string value = setting.substr(eq + 1);
            if (key == "protocols") protocols = tools::split_csv(value);
            else if (key == "node_counts") node_counts = tools::parse_int_list(value);
            else if (key == "seeds") seeds = tools::parse_u64_list(value);
            else tools::sim_config_set(base, key, value);
        }
        if (!o.protocols.empty()) protocols = tools::split_csv(o.protocols);
        if (!o.node_counts.empty()) node_counts = tools::parse_int_list(o.node_counts);
        if (!o.seeds.empty()) seeds = tools::parse_u64_list(o.seeds);
    }
    if (out.empty()) throw std::invalid_argument("simulate: --out is required");

    if (protocols.empty()) protocols = {netsim::protocol_name(base.protocol)};
    if (node_counts.empty()) node_counts = {base.node_count};
    if (seeds.empty()) seeds = {base.seed};

    std::vector<netsim::Protocol> protos;
    for (const auto& name : protocols) protos.push_back(netsim::protocol_from_name(name));
    std::sort(protos.begin(), protos.end());
    protos.erase(std::unique(protos.begin(), protos.end()), protos.end());
    std::sort(node_counts.begin(), node_counts.end());
    node_counts.erase(std::unique(node_counts.begin(), node_counts.end()), node_counts.end());
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    struct Cell {
        netsim::Protocol protocol;
        int node_count;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (const auto p : protos) {
        for (const auto n : node_counts) {
            for (const auto s : seeds) cells.push_back(Cell{p, n, s});
        }
    }

    // Validate once up front so config errors surface before any cell runs.
    for (const auto& cell : cells) {
        netsim::SimConfig cfg = base;
        cfg.protocol = cell.protocol;
        cfg.node_count = cell.node_count;
        cfg.seed = cell.seed;
        cfg.validate();
    }

    std::vector<std::string> rows(cells.size());
    tools::parallel_cells(cells.size(), [&](std::size_t i) {
        netsim::SimConfig cfg = base;
        cfg.protocol = cells[i].protocol;
        cfg.node_count = cells[i].node_count;
        cfg.seed = cells[i].seed;
        const auto metrics = netsim::run_sim(cfg);
        rows[i] = netsim::metrics_csv_row(cfg.protocol, cfg.node_count, cfg.seed, metrics);
    });

    KvMap manifest = tools::sim_config_to_kv(base);
    manifest["subcommand"] = "simulate";
    manifest["version"] = kVersion;
    manifest["protocols"] = [&] {
        std::vector<std::string> names;
        for (const auto p : protos) names.push_back(netsim::protocol_name(p));
        return tools::join_strings(names);
    }();
    manifest["node_counts"] = tools::join_int(node_counts);
    manifest["seeds"] = tools::join_u64(seeds);
    manifest["out"] = out;

    const fs::path out_path = out;
    write_outputs({out_path, manifest_path(out_path)}, [&] {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot write '" + out_path.string() + "'");
        os << netsim::kMetricsCsvHeader << "\n";
        for (const auto& row : rows) os << row << "\n";
        if (!os) throw std::runtime_error("write failure on '" + out_path.string() + "'");
        os.close();
        tools::write_kv_file(manifest_path(out_path), manifest);
    });
    std::cout << "wrote " << rows.size() << " rows to " << out_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"underwater acoustic SNR prediction and routing simulation toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    GenTraceOpts gen;
    auto* gen_cmd = app.add_subcommand("gen-trace", "generate a synthetic SNR trace CSV");
    gen_cmd->add_option("--kind", gen.kind, "ideal | period-noise | random-period");
    gen_cmd->add_option("--length", gen.length, "number of samples");
    gen_cmd->add_option("--base", gen.base, "base SNR in dB");
    gen_cmd->add_option("--amplitude", gen.amplitude, "periodic amplitude in dB");
    gen_cmd->add_option("--period", gen.period, "period in samples");
    gen_cmd->add_option("--noise-sigma", gen.noise_sigma, "Gaussian noise sigma in dB");
    gen_cmd->add_option("--jitter", gen.jitter, "per-cycle period jitter fraction");
    gen_cmd->add_option("--seed", gen.seed, "RNG seed (default 0, never wall clock)");
    gen_cmd->add_option("--out", gen.out, "output CSV path");
    gen_cmd->add_option("--from-manifest", gen.from_manifest, "replay a recorded run");

    EstimateOpts est;
    auto* est_cmd = app.add_subcommand("estimate", "one-shot next-step prediction from a CSV");
    est_cmd->add_option("--input", est.input, "trace CSV")->required();
    est_cmd->add_option("--method", est.method, "mean | ema | ar | nnr")->required();
    est_cmd->add_option("--alpha", est.alpha, "EMA smoothing factor");
    est_cmd->add_option("--order", est.order, "AR order");
    est_cmd->add_option("--fit-window", est.fit_window, "AR fit window");
    est_cmd->add_option("--window", est.window_m, "NNR window length m");
    est_cmd->add_option("--k", est.k, "NNR neighbor count");
    est_cmd->add_option("--idw-q", est.idw_q, "NNR inverse-distance exponent");
    est_cmd->add_flag("--trace", est.trace, "print the selected NNR neighbors");

    BenchOpts bch;
    auto* bench_cmd = app.add_subcommand("bench", "estimator accuracy / optimization tables");
    bench_cmd->add_option("--mode", bch.mode, "accuracy | optimization");
    bench_cmd->add_option("--kinds", bch.kinds, "trace kinds")->delimiter(',');
    bench_cmd->add_option("--sizes", bch.sizes, "sizes, e.g. 1000:10000:1000");
    bench_cmd->add_option("--estimators", bch.estimators, "estimator names")->delimiter(',');
    bench_cmd->add_option("--seed", bch.seed, "trace seed");
    bench_cmd->add_option("--base", bch.base, "trace base dB");
    bench_cmd->add_option("--amplitude", bch.amplitude, "trace amplitude dB");
    bench_cmd->add_option("--period", bch.period, "trace period samples");
    bench_cmd->add_option("--noise-sigma", bch.noise_sigma, "trace noise sigma dB");
    bench_cmd->add_option("--jitter", bch.jitter, "trace period jitter fraction");
    bench_cmd->add_option("--input", bch.input, "evaluate a user CSV instead of generators");
    bench_cmd->add_option("--out", bch.out, "output CSV path");
    bench_cmd->add_option("--limit", bch.limit, "compression storage limit L");
    bench_cmd->add_option("--comp-alpha", bch.comp_alpha, "compression fraction alpha");
    bench_cmd->add_option("--comp-idw", bch.comp_idw, "compression IDW exponent");
    bench_cmd->add_option("--queries", bch.queries, "prediction steps measured per n");
    bench_cmd->add_option("--window", bch.window_m, "NNR window length m");
    bench_cmd->add_option("--k", bch.k, "NNR neighbor count");
    bench_cmd->add_option("--idw-q", bch.idw_q, "NNR inverse-distance exponent");
    bench_cmd->add_option("--from-manifest", bch.from_manifest, "replay a recorded run");

    SimulateOpts sim;
    auto* sim_cmd = app.add_subcommand("simulate", "run the routing-protocol grid");
    sim_cmd->add_option("--config", sim.config_file, "flat key=value config file");
    sim_cmd->add_option("--set", sim.sets, "override one config key (repeatable)");
    sim_cmd->add_option("--protocols", sim.protocols, "comma list: dbcar,dbr,carp");
    sim_cmd->add_option("--node-counts", sim.node_counts, "e.g. 100:200:10");
    sim_cmd->add_option("--seeds", sim.seeds, "e.g. 0:9");
    sim_cmd->add_option("--out", sim.out, "output metrics CSV");
    sim_cmd->add_option("--from-manifest", sim.from_manifest, "replay a recorded run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) return run_gen_trace(gen);
        if (est_cmd->parsed()) return run_estimate(est);
        if (bench_cmd->parsed()) return run_bench(bch);
        if (sim_cmd->parsed()) return run_simulate(sim);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
