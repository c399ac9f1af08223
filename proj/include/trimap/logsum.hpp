#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace trimap {

// Streaming log-sum-exp: accumulates sum_i exp(v_i) as exp(max) * scaled, so
// arguments of any magnitude (log-Jacobians up to ~1e6) never overflow.
class LogSumExp {
public:
    void add(double log_value) noexcept {
        if (log_value == -std::numeric_limits<double>::infinity()) {
            ++count_;
            return;
        }
        if (log_value <= max_) {
            scaled_ += std::exp(log_value - max_);
        } else {
            scaled_ = scaled_ * std::exp(max_ - log_value) + 1.0;
            max_ = log_value;
        }
        ++count_;
    }

    // log(sum_i exp(v_i)); -inf when empty.
    double log_sum() const noexcept {
        if (scaled_ == 0.0) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(scaled_);
    }

    // log of the arithmetic mean of exp(v_i).
    double log_mean() const noexcept {
        return log_sum() - std::log(static_cast<double>(count_));
    }

    std::size_t count() const noexcept { return count_; }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double scaled_ = 0.0;
    std::size_t count_ = 0;
};

inline double log_mean_exp(std::span<const double> values) noexcept {
    LogSumExp acc;
    for (double v : values) acc.add(v);
    return acc.log_mean();
}

} // namespace trimap
