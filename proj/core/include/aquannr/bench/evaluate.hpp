#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aquannr/channel/trace_gen.hpp"
#include "aquannr/estimators/nnr.hpp"
#include "aquannr/snr_series.hpp"

namespace aquannr::bench {

enum class EstimatorKind { Mean, Ema, Ar, Nnr };

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::Mean;
    std::string name = "mean";
    double ema_alpha = 0.2;
    int ar_order = 2;
    std::size_t ar_fit_window = 200;
    estimators::NnrConfig nnr;

    /// Parses "mean", "ema", "ar<p>" or "nnr"; throws listing the valid
    /// names otherwise.
    static EstimatorSpec parse(const std::string& name);
};

/// One-step-ahead predictor fed the series sample by sample. predict()
/// returns nothing until the estimator has its minimum history.
class StreamingEstimator {
public:
    virtual ~StreamingEstimator() = default;
    virtual void observe(const SnrSample& sample) = 0;
    virtual std::optional<double> predict() = 0;
    virtual std::size_t min_history() const = 0;
};

std::unique_ptr<StreamingEstimator> make_estimator(const EstimatorSpec& spec);

struct EstimatorResult {
    std::string name;
    std::uint64_t best_count = 0;
    double best_rate = 0.0;
    double avg_abs_error = 0.0;
};

struct EvalResult {
    std::vector<EstimatorResult> per_estimator;
    std::uint64_t steps_evaluated = 0;
    std::uint64_t warmup_steps = 0;
};

/// Walks the series once; at each step after the common warmup every
/// estimator predicts the next sample from the identical history. Every
/// estimator attaining the minimum absolute error at a step earns a best
/// count, so best rates may sum above one.
EvalResult evaluate(const SnrSeries& series, const std::vector<EstimatorSpec>& specs);

struct SweepRow {
    std::string dataset;
    std::size_t size = 0;
    EstimatorResult result;
};

/// One evaluate() per (size, spec) pair, sizes overriding the spec length.
std::vector<SweepRow> sweep(const std::vector<std::size_t>& sizes,
                            const std::vector<channel::TraceSpec>& specs,
                            const std::vector<EstimatorSpec>& estimators);

/// Writes `dataset,size,estimator,best_rate,avg_abs_error`.
void write_bench_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace aquannr::bench
