#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nlcs/states.hpp"

namespace nlcs {

struct TailCheck {
    bool ok = false;
    double log_total = 0.0; // ln of the pre-normalization weight sum
    double tail_estimate = 0.0;
};

// Weights w_n arrive as logs (-inf for exact zeros). The tail is accepted
// when every weight in the trailing window is small against the running
// total, the window decays geometrically, and the geometric extrapolation of
// everything beyond the last term is itself below tolerance.
inline TailCheck test_tail(const std::vector<double>& log_w, const TruncationPolicy& policy) {
    const int n_count = static_cast<int>(log_w.size());
    const double log_max = *std::max_element(log_w.begin(), log_w.end());
    double total = 0.0; // scaled by exp(-log_max)
    for (double lw : log_w) total += std::exp(lw - log_max);

    TailCheck result;
    result.log_total = log_max + std::log(total);
    if (n_count <= policy.window) return result;

    double worst_ratio = 0.0;
    for (int n = n_count - policy.window; n < n_count; ++n) {
        const double rel = std::exp(log_w[n] - log_max) / total;
        if (!(rel < policy.tail_tol)) return result;
        if (n > n_count - policy.window) {
            const double ratio =
                std::isinf(log_w[n]) ? 0.0 : std::exp(log_w[n] - log_w[n - 1]);
            if (!(ratio < policy.ratio_cap)) return result;
            worst_ratio = std::max(worst_ratio, ratio);
        }
    }
    const double last_rel = std::exp(log_w[n_count - 1] - log_max) / total;
    const double remainder = last_rel * worst_ratio / (1.0 - worst_ratio);
    if (!(remainder <= policy.tail_tol)) return result;
    result.ok = true;
    result.tail_estimate = remainder;
    return result;
}

} // namespace nlcs
