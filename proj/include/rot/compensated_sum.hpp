#pragma once

#include <cmath>

namespace rot {

// Neumaier-compensated accumulator. Used wherever long sums of
// mixed-magnitude terms feed a relative-1e-12 identity.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double v) : sum_(v) {}

    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    void reset(double v = 0.0) {
        sum_ = v;
        comp_ = 0.0;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace rot
