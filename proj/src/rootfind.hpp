#pragma once

#include <cmath>
#include <functional>

namespace varbesov::detail {

struct Root {
    double t;   // log of the scale at the root
    double lo;  // log-domain bracket
    double hi;
    int iterations;
};

/// Root of a strictly decreasing F in log-scale t = log(lambda). Brackets from
/// t0 with log-steps ln2, 2 ln2, 4 ln2, ... (lambda doubled, then squared-rate
/// growth; at most 64 steps each way, else OverflowError), then Illinois false
/// position with a bisection fallback.
/// Stops once the relative width of the lambda-bracket is at most tol.
Root solve_decreasing(const std::function<double(double)>& F, double t0, double tol,
                      int max_iter = 200);

/// log(sum_i exp(x_i)) over the terms produced by a callback, stable.
class LogSumExp {
public:
    void add(double x) {
        if (x == -INFINITY) return;
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
    }
    double value() const { return sum_ == 0.0 ? -INFINITY : max_ + std::log(sum_); }

private:
    double max_ = -INFINITY;
    double sum_ = 0.0;
};

}  // namespace varbesov::detail
