#pragma once

#include <cmath>

namespace rot {

// Natural log of a probability. Invariant: value() <= 0, with -inf
// standing for probability zero. Construction rejects NaN and positives.
class LogProb {
public:
    LogProb() = default;  // log(1)
    explicit LogProb(double v);

    double value() const { return value_; }
    double log10() const { return value_ / 2.302585092994045684; }
    // Underflows to 0 for values below roughly -745; log10() stays exact.
    double linear() const { return std::exp(value_); }

private:
    double value_ = 0.0;
};

// log Q(shape, x) where Q = 1 - G_shape(x) and G_shape is the CDF of the
// Gamma distribution with the given shape and rate 1.
// Series branch for x < shape + 1, continued fraction otherwise, both
// carried in log space. shape > 0, x >= 0.
LogProb log_gamma_upper_reg(double shape, double x);

// log(1 - I_{a,b}(x)) where I_{a,b} is the CDF of the Beta distribution
// with shape parameters (a, b). a, b > 0, x in [0, 1]. Evaluates the
// better-conditioned side of the parameter-swap identity
// 1 - I_{a,b}(x) = I_{b,a}(1-x).
LogProb log_beta_upper_reg(double a, double b, double x);

// Same survival with the abscissa given as log(x); stable when x is too
// small to represent or within one ulp of 1.
LogProb log_beta_upper_reg_logx(double a, double b, double logx);

// log(1 - exp(logv)) for logv <= 0, cancellation-free on both ends.
double log1m_exp(double logv);
LogProb log1m_exp(LogProb logv);

}  // namespace rot
