#include "aquannr/bench/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "aquannr/bench/csv.hpp"
#include "aquannr/estimators/ar.hpp"
#include "aquannr/estimators/ema.hpp"
#include "aquannr/estimators/quantized_index.hpp"
#include "aquannr/estimators/running_stats.hpp"

namespace aquannr::bench {

namespace {

class MeanEstimator final : public StreamingEstimator {
public:
    void observe(const SnrSample& s) override { stats_.update(s.snr_db); }
    std::optional<double> predict() override {
        if (stats_.count() < 1) return std::nullopt;
        return estimators::mean_predict(stats_);
    }
    std::size_t min_history() const override { return 1; }

private:
    estimators::RunningStats stats_;
};

class EmaEstimator final : public StreamingEstimator {
public:
    explicit EmaEstimator(double alpha) { state_.alpha = alpha; }
    void observe(const SnrSample& s) override { state_ = estimators::ema_update(state_, s.snr_db); }
    std::optional<double> predict() override {
        if (!state_.initialized) return std::nullopt;
        return state_.s;
    }
    std::size_t min_history() const override { return 1; }

private:
    estimators::EmaState state_;
};

class ArEstimator final : public StreamingEstimator {
public:
    ArEstimator(int order, std::size_t fit_window)
        : order_(order), fit_window_(fit_window) {}
    void observe(const SnrSample& s) override { history_.append(s); }
    std::optional<double> predict() override {
        if (history_.size() < min_history()) return std::nullopt;
        const auto model = estimators::ar_fit(history_, order_, fit_window_);
        return estimators::ar_predict(model, history_);
    }
    std::size_t min_history() const override {
        return static_cast<std::size_t>(order_) + 2;
    }

private:
    int order_;
    std::size_t fit_window_;
    SnrSeries history_;
};

class NnrEstimator final : public StreamingEstimator {
public:
    explicit NnrEstimator(const estimators::NnrConfig& cfg) : cfg_(cfg) {}
    void observe(const SnrSample& s) override {
        index_.insert(s.snr_db, history_.size());
        history_.append(s);
    }
    std::optional<double> predict() override {
        if (history_.size() < min_history()) return std::nullopt;
        return estimators::nnr_predict_indexed(index_, history_, cfg_);
    }
    std::size_t min_history() const override { return cfg_.window_m + 1; }

private:
    estimators::NnrConfig cfg_;
    SnrSeries history_;
    estimators::QuantizedIndex index_;
};

}  // namespace

EstimatorSpec EstimatorSpec::parse(const std::string& name) {
    EstimatorSpec spec;
    spec.name = name;
    if (name == "mean") {
        spec.kind = EstimatorKind::Mean;
        return spec;
    }
    if (name == "ema") {
        spec.kind = EstimatorKind::Ema;
        return spec;
    }
    if (name == "nnr") {
        spec.kind = EstimatorKind::Nnr;
        return spec;
    }
    if (name.size() > 2 && name.compare(0, 2, "ar") == 0) {
        const std::string digits = name.substr(2);
        if (!digits.empty() &&
            std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            const int order = std::stoi(digits);
            if (order >= 1) {
                spec.kind = EstimatorKind::Ar;
                spec.ar_order = order;
                return spec;
            }
        }
    }
    throw std::invalid_argument("unknown estimator '" + name +
                                "' (valid: mean, ema, ar<p> e.g. ar2/ar5, nnr)");
}

std::unique_ptr<StreamingEstimator> make_estimator(const EstimatorSpec& spec) {
    switch (spec.kind) {
        case EstimatorKind::Mean: return std::make_unique<MeanEstimator>();
        case EstimatorKind::Ema: return std::make_unique<EmaEstimator>(spec.ema_alpha);
        case EstimatorKind::Ar: return std::make_unique<ArEstimator>(spec.ar_order, spec.ar_fit_window);
        case EstimatorKind::Nnr: return std::make_unique<NnrEstimator>(spec.nnr);
    }
    throw std::logic_error("make_estimator: unknown kind");
}

EvalResult evaluate(const SnrSeries& series, const std::vector<EstimatorSpec>& specs) {
    if (specs.empty()) throw std::invalid_argument("evaluate: no estimators given");

    std::vector<std::unique_ptr<StreamingEstimator>> estimators;
    estimators.reserve(specs.size());
    std::size_t warmup = 0;
    for (const auto& spec : specs) {
        estimators.push_back(make_estimator(spec));
        warmup = std::max(warmup, estimators.back()->min_history());
    }
    const std::size_t n = series.size();
    if (n <= warmup) {
        throw std::invalid_argument("evaluate: series shorter than the common warmup");
    }

    EvalResult result;
    result.warmup_steps = warmup;
    result.per_estimator.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        result.per_estimator[i].name = specs[i].name;
    }

    std::vector<double> abs_error_sum(specs.size(), 0.0);
    std::vector<double> errors(specs.size(), 0.0);

    for (std::size_t t = 0; t < n; ++t) {
        if (t >= warmup) {
            const double actual = series[t].snr_db;
            double min_error = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < estimators.size(); ++i) {
                const auto p = estimators[i]->predict();
                if (!p) throw std::logic_error("evaluate: estimator unready past warmup");
                errors[i] = std::abs(*p - actual);
                abs_error_sum[i] += errors[i];
                min_error = std::min(min_error, errors[i]);
            }
            for (std::size_t i = 0; i < estimators.size(); ++i) {
                if (errors[i] == min_error) ++result.per_estimator[i].best_count;
            }
            ++result.steps_evaluated;
        }
        for (auto& e : estimators) e->observe(series[t]);
    }

    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto& r = result.per_estimator[i];
        r.best_rate = static_cast<double>(r.best_count) /
                      static_cast<double>(result.steps_evaluated);
        r.avg_abs_error = abs_error_sum[i] / static_cast<double>(result.steps_evaluated);
    }
    return result;
}

std::vector<SweepRow> sweep(const std::vector<std::size_t>& sizes,
                            const std::vector<channel::TraceSpec>& specs,
                            const std::vector<EstimatorSpec>& estimators) {
    std::vector<SweepRow> rows;
    for (const auto& trace_spec : specs) {
        for (const std::size_t size : sizes) {
            channel::TraceSpec sized = trace_spec;
            sized.length_n = size;
            const auto series = channel::gen_trace(sized);
            const auto eval = evaluate(series, estimators);
            for (const auto& r : eval.per_estimator) {
                rows.push_back(SweepRow{channel::trace_label(sized), size, r});
            }
        }
    }
    return rows;
}

void write_bench_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot write '" + path.string() + "'", 0);
    out << "dataset,size,estimator,best_rate,avg_abs_error\n";
    for (const auto& row : rows) {
        out << row.dataset << ',' << row.size << ',' << row.result.name << ','
            << format_double(row.result.best_rate) << ','
            << format_double(row.result.avg_abs_error) << '\n';
    }
    if (!out) throw CsvError("write failure on '" + path.string() + "'", 0);
}

}  // namespace aquannr::bench
