#pragma once

#include <cmath>
#include <stdexcept>

namespace aquannr::estimators {

/// Exponential moving average state. The smoothed value doubles as the
/// next-step prediction.
struct EmaState {
    double alpha = 0.2;
    double s = 0.0;
    bool initialized = false;
};

inline EmaState ema_update(EmaState state, double y) {
    if (!(state.alpha > 0.0 && state.alpha <= 1.0)) {
        throw std::invalid_argument("ema_update: alpha must be in (0, 1]");
    }
    if (!std::isfinite(y)) {
        throw std::invalid_argument("ema_update: non-finite sample rejected");
    }
    if (!state.initialized) {
        state.s = y;
        state.initialized = true;
    } else {
        state.s = state.alpha * y + (1.0 - state.alpha) * state.s;
    }
    return state;
}

}  // namespace aquannr::estimators
