#pragma once

// Exact evaluation of the double-factorial / Gamma-ratio closed form for
// t(n,k), with every sqrt(pi) tracked symbolically, and a harness that
// compares it against the recurrence.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arch_model.hpp"
#include "counting.hpp"
#include "errors.hpp"
#include "numeric.hpp"

namespace archruns {

/// q * pi^(h/2).
struct ExactConstant {
    Rational q = 0;
    int h = 0;

    [[nodiscard]] bool is_rational() const { return h == 0 || sgn(q) == 0; }

    friend ExactConstant operator*(const ExactConstant& a, const ExactConstant& b) {
        return {a.q * b.q, a.h + b.h};
    }
    friend ExactConstant operator/(const ExactConstant& a, const ExactConstant& b) {
        if (sgn(b.q) == 0) throw domain_error("ExactConstant: division by zero");
        return {a.q / b.q, a.h - b.h};
    }
    friend ExactConstant operator+(const ExactConstant& a, const ExactConstant& b) {
        if (sgn(a.q) == 0) return b;
        if (sgn(b.q) == 0) return a;
        if (a.h != b.h) throw domain_error("ExactConstant: adding terms with different powers of pi");
        return {a.q + b.q, a.h};
    }
    friend bool operator==(const ExactConstant& a, const ExactConstant& b) {
        if (sgn(a.q) == 0 || sgn(b.q) == 0) return a.q == b.q;
        return a.q == b.q && a.h == b.h;
    }
};

/// Gamma(m/2 + 1) = m!! / 2^ceil(m/2) * pi^{(m mod 2)/2}, valid for m >= -1.
inline ExactConstant gamma_half_integer(long m) {
    if (m < -1) throw domain_error("gamma_half_integer: m < -1");
    const bool odd = (m % 2) != 0;
    Rational q(double_factorial(m));
    const long halving = odd ? (m + 1) / 2 : m / 2;
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(halving));
    q.canonicalize();
    return {q, odd ? 1 : 0};
}

/// A finite sum of ExactConstants grouped by their power of pi.
class PiSum {
public:
    void add(const ExactConstant& c) {
        if (sgn(c.q) == 0) return;
        auto& slot = terms_[c.h];
        slot += c.q;
        if (sgn(slot) == 0) terms_.erase(c.h);
    }

    [[nodiscard]] const std::map<int, Rational>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
    [[nodiscard]] Rational rational_part() const {
        const auto it = terms_.find(0);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    /// Powers of pi (h in pi^(h/2)) with a non-zero coefficient, other than 0.
    [[nodiscard]] std::vector<int> residual_exponents() const {
        std::vector<int> out;
        for (const auto& [h, q] : terms_) {
            if (h != 0) out.push_back(h);
        }
        return out;
    }
    [[nodiscard]] std::optional<ExactConstant> single() const {
        if (terms_.empty()) return ExactConstant{0, 0};
        if (terms_.size() != 1) return std::nullopt;
        return ExactConstant{terms_.begin()->second, terms_.begin()->first};
    }

private:
    std::map<int, Rational> terms_;
};

/// The parity factor par(n,s).
inline ExactConstant parity_factor(int n, int s) {
    Rational q = 1;
    if (s % 2 == 0) {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(s / 2));
        return {q, 0};
    }
    if (n % 2 == 0) {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>((s + 1) / 2));
        return {q, 1};
    }
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>((s - 1) / 2));
    return {q, -1};
}

/// Evaluates the closed form term by term. The subset sum over
/// 1 <= i_1 < ... < i_s <= k is a DP over (last index, count), O(k^2) per s.
inline PiSum closed_form(int n, int k) {
    if (k <= 0 || n < 0 || k > n + 1) {
        throw domain_error("closed form needs 0 < k <= n+1, got " + to_string(Shape{n, k}));
    }
    // Factor contributed by choosing index i at step j.
    const auto step_factor = [&](int i, int j) {
        const long m = 2L * k + n - 2L * i + j;
        ExactConstant f = gamma_half_integer(m) / gamma_half_integer(m + 1);
        f.q *= (i + j + n - k - 1);
        return f;
    };

    ExactConstant outer{Rational(double_factorial(2L * k + n - 1)), 0};
    mpq_div_2exp(outer.q.get_mpq_t(), outer.q.get_mpq_t(), static_cast<mp_bitcnt_t>(k - 1));

    PiSum result;
    // by_last[i] = sum of products over sequences of the current length ending at i.
    std::vector<ExactConstant> by_last(static_cast<std::size_t>(k) + 1);
    for (int s = 0; s < k; ++s) {
        ExactConstant subset_sum;
        if (s == 0) {
            subset_sum = {1, 0};
        } else {
            std::vector<ExactConstant> next(static_cast<std::size_t>(k) + 1);
            ExactConstant prefix = s == 1 ? ExactConstant{1, 0} : ExactConstant{};
            for (int i = 1; i <= k; ++i) {
                if (sgn(prefix.q) != 0) next[static_cast<std::size_t>(i)] = prefix * step_factor(i, s);
                if (s > 1) prefix = prefix + by_last[static_cast<std::size_t>(i)];
            }
            by_last = std::move(next);
            for (int i = 1; i <= k; ++i) subset_sum = subset_sum + by_last[static_cast<std::size_t>(i)];
        }
        ExactConstant term = outer * parity_factor(n, s) * subset_sum;
        term.q *= (n + s);
        term.q /= Rational(double_factorial(n + s + 1));
        result.add(term);
    }
    return result;
}

struct ClosedFormRow {
    Shape shape;
    PiSum closed;
    BigInt recurrence;
    bool match = false;
};

struct ClosedFormReport {
    std::vector<ClosedFormRow> rows;
    std::optional<Shape> first_mismatch;
};

/// Rows for 1 <= k <= min(k_max, n+1), n <= n_max.
inline ClosedFormReport closed_form_report(int n_max, int k_max) {
    ClosedFormReport report;
    for (int n = 0; n <= n_max; ++n) {
        const int top = std::min(k_max, n + 1);
        if (top < 1) continue;
        const auto table = CountTable::build(n, top);
        for (int k = 1; k <= top; ++k) {
            ClosedFormRow row{{n, k}, closed_form(n, k), table.at(n, k), false};
            row.match = row.closed.is_rational() && row.closed.rational_part() == Rational(row.recurrence);
            if (!row.match && !report.first_mismatch) report.first_mismatch = row.shape;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace archruns
