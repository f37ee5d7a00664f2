#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "errors.hpp"

namespace archruns {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    if (s.empty() || s.find_first_not_of("+-0123456789") != std::string::npos) {
        throw parse_error("not a decimal integer: '" + s + "'");
    }
    if (s.front() == '+') s.erase(0, 1);
    BigInt v;
    if (v.set_str(s, 10) != 0) throw parse_error("not a decimal integer: '" + s + "'");
    return v;
}

inline std::string to_decimal(const BigInt& v) { return v.get_str(10); }

inline std::string to_decimal(const Rational& v) { return v.get_str(10); }

/// Natural log of a positive big integer without overflowing a double.
inline double log_of(const BigInt& v) {
    if (sgn(v) <= 0) throw domain_error("log_of: non-positive argument");
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

/// m!! with the convention (-1)!! = 0!! = 1!! = 1.
inline BigInt double_factorial(long m) {
    BigInt r = 1;
    if (m > 1) mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
    return r;
}

inline BigInt factorial(long m) {
    BigInt r = 1;
    if (m > 1) mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
    return r;
}

}  // namespace archruns
