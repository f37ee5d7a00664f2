#pragma once

// Leading-order growth of the diagonals t(k+i, k) ~ gamma_i rho^{-k} k! / sqrt(k).

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace archruns {

/// rho = (2/3)(sqrt 2 - 1), the root of 1 - 3u - (9/4)u^2 in (0, 1).
inline double dominant_singularity() noexcept { return 2.0 / 3.0 * (std::numbers::sqrt2 - 1.0); }

inline double gamma_constant(int i) {
    if (i < -1) throw domain_error("gamma_i is defined for i >= -1");
    const double s = std::numbers::sqrt2 - 1.0;
    const double gamma0 = 0.5 * std::sqrt(3.0 / (std::numbers::sqrt2 * std::numbers::pi) * s);
    return std::pow(s, -i) * gamma0;
}

/// ln k!, summed exactly term by term for k <= 10^4.
inline double log_factorial(long k) {
    if (k < 0) throw domain_error("log_factorial of a negative number");
    if (k > 10000) return std::lgamma(static_cast<double>(k) + 1.0);
    double sum = 0.0;
    for (long j = 2; j <= k; ++j) sum += std::log(static_cast<double>(j));
    return sum;
}

/// ln(gamma_i) - k ln(rho) + ln(k!) - ln(k)/2.
inline double asymptotic_log_estimate(int i, int k) {
    if (k < 1) throw domain_error("asymptotic estimate needs k >= 1");
    return std::log(gamma_constant(i)) - k * std::log(dominant_singularity()) + log_factorial(k) -
           0.5 * std::log(static_cast<double>(k));
}

}  // namespace archruns
