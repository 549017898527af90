#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aquannr/channel/trace_gen.hpp"
#include "aquannr/estimators/compression.hpp"
#include "aquannr/estimators/nnr.hpp"

namespace aquannr::bench {

/// One measurement row: `variant` is "naive" or "optimized". Comparisons
/// count window-distance evaluations over the query set; stored_samples is
/// the retained series length at end of stream (compression applies to the
/// optimized variant only). error_delta_pct is the relative difference in
/// mean absolute prediction error of the compressed pipeline against the
/// uncompressed one, in percent (zero on naive rows).
struct OptimizationRow {
    std::size_t n = 0;
    std::string variant;
    std::uint64_t wall_ns = 0;
    std::uint64_t comparisons = 0;
    std::size_t stored_samples = 0;
    double error_delta_pct = 0.0;
};

/// For each n: generates the trace, replays the last `queries` one-step
/// predictions through the naive and the index-accelerated search, and
/// replays the same predictions on a compression-enabled copy of the
/// stream to obtain storage and accuracy deltas.
std::vector<OptimizationRow> measure_optimization(const std::vector<std::size_t>& n_values,
                                                  const channel::TraceSpec& trace,
                                                  const estimators::NnrConfig& cfg,
                                                  const estimators::CompressionPolicy& policy,
                                                  std::size_t queries = 64);

/// Writes `n,variant,wall_ns,comparisons,stored_samples,error_delta_pct`.
/// wall_ns is a timing measurement and is not reproducible run to run.
void write_optimization_csv(const std::vector<OptimizationRow>& rows,
                            const std::filesystem::path& path);

}  // namespace aquannr::bench
