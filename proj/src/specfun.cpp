#include "rot/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094;
constexpr int kMaxIter = 200000;

[[noreturn]] void domain_fail(const char* fn, const std::string& what) {
    throw std::domain_error(std::string(fn) + ": " + what);
}

// Positive results can pick up one ulp of rounding dust; log-probabilities
// are clamped back onto their domain.
double clamp_logprob(double v) { return v < 0.0 ? v : 0.0; }

// Tail of the Stirling expansion: lgamma(z) - (z - 1/2) log z + z - log(2 pi)/2.
double stirling_tail(double z) {
    const double r = 1.0 / z;
    const double r2 = r * r;
    return r * (1.0 / 12 + r2 * (-1.0 / 360 + r2 * (1.0 / 1260 - r2 / 1680)));
}

// lgamma(a + b) - lgamma(b), accurate for b >> a where the direct
// difference loses absolute precision to the magnitude of lgamma(b).
double lgamma_ratio(double a, double b) {
    if (b < 100.0) {
        return std::lgamma(a + b) - std::lgamma(b);
    }
    const double l1p = std::log1p(a / b);
    return a * std::log(b) + ((a + b - 0.5) * l1p - a) + stirling_tail(a + b) -
           stirling_tail(b);
}

double log_beta_fn(double a, double b) {
    if (a > b) std::swap(a, b);
    return std::lgamma(a) - lgamma_ratio(a, b);
}

// log P(a, x): lower regularized incomplete gamma by series, x < a + 1.
double log_gamma_lower_series(double a, double x) {
    double ap = a;
    double term = 1.0;
    double sum = 1.0;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (term < sum * 1e-17) {
            return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
        }
    }
    domain_fail("log_gamma_upper_reg", "series failed to converge");
}

// log Q(a, x) by the Lentz continued fraction, x >= a + 1.
double log_gamma_upper_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= 4e-16) {
            // Small parts first; the -x term dominates and must not absorb
            // their cancellation error.
            const double t = a * std::log(x) - std::lgamma(a) + std::log(h);
            return t - x;
        }
    }
    domain_fail("log_gamma_upper_reg", "continued fraction failed to converge");
}

// Lentz continued fraction for the incomplete beta; same recurrence as the
// classical betacf.
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= 4e-16) return h;
    }
    domain_fail("log_beta_upper_reg", "continued fraction failed to converge");
}

// log I_{a,b}(x) with the abscissa supplied both linearly and in log form.
double log_beta_lower(double a, double b, double x, double logx, double log1mx) {
    return a * logx + b * log1mx - std::log(a) - log_beta_fn(a, b) +
           std::log(beta_cf(a, b, x));
}

// Core survival evaluation from (x, 1-x, log x, log(1-x)).
double log_beta_upper_core(double a, double b, double x, double omx, double logx,
                           double log1mx) {
    if (x <= 0.0) return 0.0;
    if (omx <= 0.0) return -kInf;
    // Swap rule: above the mean, evaluate the complement side directly.
    if (logx > std::log(a / (a + b))) {
        return clamp_logprob(log_beta_lower(b, a, omx, log1mx, logx));
    }
    return log1m_exp(clamp_logprob(log_beta_lower(a, b, x, logx, log1mx)));
}

void check_beta_shapes(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        domain_fail("log_beta_upper_reg", "shape parameters must be finite and > 0");
    }
}

}  // namespace

LogProb::LogProb(double v) : value_(v) {
    if (std::isnan(v) || v > 0.0) {
        domain_fail("LogProb", "log-probability must be <= 0, got " + std::to_string(v));
    }
}

double log1m_exp(double logv) {
    if (std::isnan(logv) || logv > 0.0) {
        domain_fail("log1m_exp", "argument must be <= 0");
    }
    if (logv == 0.0) return -kInf;
    if (logv > -kLn2) return std::log(-std::expm1(logv));
    return std::log1p(-std::exp(logv));
}

LogProb log1m_exp(LogProb logv) { return LogProb(log1m_exp(logv.value())); }

LogProb log_gamma_upper_reg(double shape, double x) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        domain_fail("log_gamma_upper_reg", "shape must be finite and > 0");
    }
    if (std::isnan(x) || x < 0.0 || x == kInf) {
        domain_fail("log_gamma_upper_reg", "x must be finite and >= 0");
    }
    if (x == 0.0) return LogProb(0.0);
    if (x < shape + 1.0) {
        return LogProb(log1m_exp(clamp_logprob(log_gamma_lower_series(shape, x))));
    }
    return LogProb(clamp_logprob(log_gamma_upper_cf(shape, x)));
}

LogProb log_beta_upper_reg(double a, double b, double x) {
    check_beta_shapes(a, b);
    if (std::isnan(x) || x < 0.0 || x > 1.0) {
        domain_fail("log_beta_upper_reg", "x must lie in [0, 1]");
    }
    if (x == 0.0) return LogProb(0.0);
    if (x == 1.0) return LogProb(-kInf);
    return LogProb(
        log_beta_upper_core(a, b, x, 1.0 - x, std::log(x), std::log1p(-x)));
}

LogProb log_beta_upper_reg_logx(double a, double b, double logx) {
    check_beta_shapes(a, b);
    if (std::isnan(logx) || logx > 0.0) {
        domain_fail("log_beta_upper_reg", "log x must be <= 0");
    }
    if (logx == -kInf) return LogProb(0.0);
    if (logx == 0.0) return LogProb(-kInf);
    const double x = std::exp(logx);
    const double omx = -std::expm1(logx);
    return LogProb(log_beta_upper_core(a, b, x, omx, logx, log1m_exp(logx)));
}

}  // namespace rot
