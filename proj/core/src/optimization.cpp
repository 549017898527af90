#include "aquannr/bench/optimization.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "aquannr/bench/csv.hpp"
#include "aquannr/estimators/quantized_index.hpp"

namespace aquannr::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point from) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - from).count());
}

/// Streamed series with optional storage compression; the bucket index is
/// rebuilt whenever the stored prefix changes shape.
struct Stream {
    explicit Stream(bool compression_enabled, const estimators::CompressionPolicy& policy)
        : compress_on(compression_enabled), policy(policy) {}

    void append(const SnrSample& s) {
        index.insert(s.snr_db, series.size());
        series.append(s);
        if (compress_on && estimators::compression_due(series, policy)) {
            series = estimators::compress(series, policy);
            index = estimators::QuantizedIndex::build(series, index.scale());
        }
    }

    bool compress_on;
    estimators::CompressionPolicy policy;
    SnrSeries series;
    estimators::QuantizedIndex index{1000};
};

}  // namespace

std::vector<OptimizationRow> measure_optimization(const std::vector<std::size_t>& n_values,
                                                  const channel::TraceSpec& trace,
                                                  const estimators::NnrConfig& cfg,
                                                  const estimators::CompressionPolicy& policy,
                                                  std::size_t queries) {
    estimators::detail::validate_nnr_config(cfg);
    std::vector<OptimizationRow> rows;

    for (const std::size_t n : n_values) {
        channel::TraceSpec sized = trace;
        sized.length_n = n;
        const auto full = channel::gen_trace(sized);

        const std::size_t warmup = cfg.window_m + 1;
        if (n <= warmup) {
            throw std::invalid_argument("measure_optimization: n too small for the window");
        }
        const std::size_t q = std::min(queries, n - warmup);
        const std::size_t first_query = n - q;

        Stream plain(false, policy);
        Stream compressed(true, policy);

        OptimizationRow naive_row{n, "naive", 0, 0, n, 0.0};
        OptimizationRow opt_row{n, "optimized", 0, 0, 0, 0.0};
        double abs_err_plain = 0.0;
        double abs_err_compressed = 0.0;

        for (std::size_t t = 0; t < n; ++t) {
            const SnrSample& sample = full[t];
            if (t >= first_query) {
                const double actual = sample.snr_db;

                estimators::SearchCounters nc;
                auto t0 = Clock::now();
                const double p_naive = estimators::nnr_predict(plain.series, cfg, nullptr, &nc);
                naive_row.wall_ns += elapsed_ns(t0);
                naive_row.comparisons += nc.windows_compared;

                estimators::SearchCounters ic;
                t0 = Clock::now();
                const double p_indexed =
                    estimators::nnr_predict_indexed(plain.index, plain.series, cfg, nullptr, &ic);
                opt_row.wall_ns += elapsed_ns(t0);
                opt_row.comparisons += ic.windows_compared;

                const double p_compressed =
                    estimators::nnr_predict_indexed(compressed.index, compressed.series, cfg);

                abs_err_plain += std::abs(p_indexed - actual);
                abs_err_compressed += std::abs(p_compressed - actual);
                (void)p_naive;
            }
            plain.append(sample);
            compressed.append(sample);
        }

        opt_row.stored_samples = compressed.series.size();
        const double mae_plain = abs_err_plain / static_cast<double>(q);
        const double mae_compressed = abs_err_compressed / static_cast<double>(q);
        if (mae_plain > 0.0) {
            opt_row.error_delta_pct = 100.0 * std::abs(mae_compressed - mae_plain) / mae_plain;
        } else {
            opt_row.error_delta_pct = mae_compressed > 0.0 ? 100.0 : 0.0;
        }

        rows.push_back(naive_row);
        rows.push_back(opt_row);
    }
    return rows;
}

void write_optimization_csv(const std::vector<OptimizationRow>& rows,
                            const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot write '" + path.string() + "'", 0);
    out << "n,variant,wall_ns,comparisons,stored_samples,error_delta_pct\n";
    for (const auto& row : rows) {
        out << row.n << ',' << row.variant << ',' << row.wall_ns << ',' << row.comparisons
            << ',' << row.stored_samples << ',' << format_double(row.error_delta_pct) << '\n';
    }
    if (!out) throw CsvError("write failure on '" + path.string() + "'", 0);
}

}  // namespace aquannr::bench
