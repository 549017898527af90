#include "aquannr/estimators/ar.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace aquannr::estimators {

ArModel ar_fit(const SnrSeries& series, int order, std::size_t fit_window) {
    if (order < 1) throw std::invalid_argument("ar_fit: order must be positive");
    if (fit_window < static_cast<std::size_t>(order) + 2) {
        throw std::invalid_argument("ar_fit: fit_window too small for requested order");
    }
    const std::size_t n = series.size();
    const std::size_t use = std::min(n, fit_window);
    if (use < static_cast<std::size_t>(order) + 2) {
        throw std::invalid_argument("ar_fit: insufficient samples for AR fit");
    }

    const std::size_t base = n - use;
    const std::size_t rows = use - static_cast<std::size_t>(order);
    const int cols = order + 1;

    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = base + static_cast<std::size_t>(order) + r;
        b(static_cast<Eigen::Index>(r)) = series[t].snr_db;
        a(static_cast<Eigen::Index>(r), 0) = 1.0;
        for (int i = 0; i < order; ++i) {
            a(static_cast<Eigen::Index>(r), i + 1) = series[t - 1 - static_cast<std::size_t>(i)].snr_db;
        }
    }

    ArModel model;
    model.order = order;
    model.coefficients.assign(static_cast<std::size_t>(order), 0.0);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < cols) {
        model.degenerate = true;
        model.intercept = b.mean();
        return model;
    }
    const Eigen::VectorXd beta = qr.solve(b);
    model.intercept = beta(0);
    for (int i = 0; i < order; ++i) {
        model.coefficients[static_cast<std::size_t>(i)] = beta(i + 1);
    }
    return model;
}

double ar_predict(const ArModel& model, const SnrSeries& series) {
    if (model.order < 1 ||
        model.coefficients.size() != static_cast<std::size_t>(model.order)) {
        throw std::invalid_argument("ar_predict: malformed model");
    }
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(model.order)) {
        throw std::invalid_argument("ar_predict: series shorter than model order");
    }
    double y = model.intercept;
    for (int i = 1; i <= model.order; ++i) {
        y += model.coefficients[static_cast<std::size_t>(i - 1)] *
             series[n - static_cast<std::size_t>(i)].snr_db;
    }
    return y;
}

}  // namespace aquannr::estimators
