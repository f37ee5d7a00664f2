#pragma once

// Exact truncated power series over Q in one (u) or two (z, u) variables,
// integer polynomials in (Y, z, u), and residual checks of polynomial and
// linear differential equations against truncated series.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace archruns {

/// sum_{j <= order} c_j u^j
class UniSeries {
public:
    UniSeries() = default;
    explicit UniSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {}
    static UniSeries zero(int order) { return UniSeries(std::vector<Rational>(static_cast<std::size_t>(order) + 1)); }

    [[nodiscard]] int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
    [[nodiscard]] const Rational& operator[](int j) const { return c_.at(static_cast<std::size_t>(j)); }
    Rational& operator[](int j) { return c_.at(static_cast<std::size_t>(j)); }
    [[nodiscard]] const std::vector<Rational>& coeffs() const noexcept { return c_; }

    [[nodiscard]] UniSeries truncated(int order) const {
        std::vector<Rational> c(c_.begin(), c_.begin() + std::min<std::ptrdiff_t>(order + 1, std::ssize(c_)));
        return UniSeries(std::move(c));
    }

    friend UniSeries operator+(const UniSeries& a, const UniSeries& b) {
        const int order = std::min(a.order(), b.order());
        auto out = zero(order);
        for (int j = 0; j <= order; ++j) out[j] = a[j] + b[j];
        return out;
    }
    friend UniSeries operator-(const UniSeries& a, const UniSeries& b) {
        const int order = std::min(a.order(), b.order());
        auto out = zero(order);
        for (int j = 0; j <= order; ++j) out[j] = a[j] - b[j];
        return out;
    }
    friend UniSeries operator*(const UniSeries& a, const UniSeries& b) {
        const int order = std::min(a.order(), b.order());
        auto out = zero(order);
        for (int i = 0; i <= order; ++i) {
            if (sgn(a[i]) == 0) continue;
            for (int j = 0; i + j <= order; ++j) out[i + j] += a[i] * b[j];
        }
        return out;
    }
    friend UniSeries operator*(const Rational& s, const UniSeries& a) {
        auto out = a;
        for (auto& v : out.c_) v *= s;
        return out;
    }

    /// d/du; the result has order one less.
    [[nodiscard]] UniSeries derivative() const {
        if (order() < 1) return zero(-1);
        auto out = zero(order() - 1);
        for (int j = 1; j <= order(); ++j) out[j - 1] = c_[static_cast<std::size_t>(j)] * j;
        return out;
    }

    /// 1 / this, needs a non-zero constant term.
    [[nodiscard]] UniSeries inverse() const {
        if (c_.empty() || sgn(c_[0]) == 0) throw domain_error("series inverse needs a non-zero constant term");
        auto out = zero(order());
        out[0] = 1 / c_[0];
        for (int m = 1; m <= order(); ++m) {
            Rational acc = 0;
            for (int j = 1; j <= m; ++j) acc += c_[static_cast<std::size_t>(j)] * out[m - j];
            out[m] = -acc / c_[0];
        }
        return out;
    }

    /// Partial sum at a floating point value.
    [[nodiscard]] double evaluate(double u, int terms) const {
        double sum = 0.0;
        double power = 1.0;
        for (int j = 0; j < terms && j <= order(); ++j) {
            sum += c_[static_cast<std::size_t>(j)].get_d() * power;
            power *= u;
        }
        return sum;
    }

private:
    std::vector<Rational> c_;
};

/// sum_{n <= nz, k <= nu} c_{n,k} z^n u^k
class BiSeries {
public:
    BiSeries() = default;
    BiSeries(int nz, int nu)
        : nz_(nz), nu_(nu), c_(static_cast<std::size_t>(std::max(nz + 1, 0)) * static_cast<std::size_t>(std::max(nu + 1, 0))) {}
    static BiSeries square(int order) { return {order, order}; }

    [[nodiscard]] int z_order() const noexcept { return nz_; }
    [[nodiscard]] int u_order() const noexcept { return nu_; }
    [[nodiscard]] const Rational& at(int n, int k) const { return c_.at(index(n, k)); }
    Rational& at(int n, int k) { return c_.at(index(n, k)); }

    [[nodiscard]] UniSeries z_slice(int n) const {
        auto out = UniSeries::zero(nu_);
        for (int k = 0; k <= nu_; ++k) out[k] = at(n, k);
        return out;
    }
    static BiSeries from_uni(const UniSeries& s) {
        BiSeries out(0, s.order());
        for (int k = 0; k <= s.order(); ++k) out.at(0, k) = s[k];
        return out;
    }

    [[nodiscard]] BiSeries truncated(int nz, int nu) const {
        BiSeries out(std::min(nz, nz_), std::min(nu, nu_));
        for (int n = 0; n <= out.nz_; ++n) {
            for (int k = 0; k <= out.nu_; ++k) out.at(n, k) = at(n, k);
        }
        return out;
    }

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b) {
        BiSeries out(std::min(a.nz_, b.nz_), std::min(a.nu_, b.nu_));
        for (int n = 0; n <= out.nz_; ++n) {
            for (int k = 0; k <= out.nu_; ++k) out.at(n, k) = a.at(n, k) + b.at(n, k);
        }
        return out;
    }
    friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
        BiSeries out(std::min(a.nz_, b.nz_), std::min(a.nu_, b.nu_));
        for (int n1 = 0; n1 <= out.nz_; ++n1) {
            for (int k1 = 0; k1 <= out.nu_; ++k1) {
                const auto& x = a.at(n1, k1);
                if (sgn(x) == 0) continue;
                for (int n2 = 0; n1 + n2 <= out.nz_; ++n2) {
                    for (int k2 = 0; k1 + k2 <= out.nu_; ++k2) out.at(n1 + n2, k1 + k2) += x * b.at(n2, k2);
                }
            }
        }
        return out;
    }

    [[nodiscard]] BiSeries d_du() const {
        BiSeries out(nz_, nu_ - 1);
        for (int n = 0; n <= nz_; ++n) {
            for (int k = 1; k <= nu_; ++k) out.at(n, k - 1) = at(n, k) * k;
        }
        return out;
    }
    [[nodiscard]] BiSeries d_dz() const {
        BiSeries out(nz_ - 1, nu_);
        for (int n = 1; n <= nz_; ++n) {
            for (int k = 0; k <= nu_; ++k) out.at(n - 1, k) = at(n, k) * n;
        }
        return out;
    }

    /// Lexicographically first (n, k) with a non-zero coefficient.
    [[nodiscard]] std::optional<std::pair<int, int>> first_nonzero() const {
        for (int n = 0; n <= nz_; ++n) {
            for (int k = 0; k <= nu_; ++k) {
                if (sgn(at(n, k)) != 0) return std::pair{n, k};
            }
        }
        return std::nullopt;
    }

private:
    [[nodiscard]] std::size_t index(int n, int k) const {
        if (n < 0 || n > nz_ || k < 0 || k > nu_) throw lookup_error("series coefficient outside truncation");
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(nu_ + 1) + static_cast<std::size_t>(k);
    }

    int nz_ = -1;
    int nu_ = -1;
    std::vector<Rational> c_;
};

// ---------------------------------------------------------------------------

/// Integer polynomial in Y (the unknown series), z and u.
class PolyXY {
public:
    struct Exponent {
        int y = 0;
        int z = 0;
        int u = 0;
        friend auto operator<=>(const Exponent&, const Exponent&) = default;
    };

    PolyXY() = default;
    PolyXY(long c) {  // NOLINT(google-explicit-constructor): constants in equation literals
        if (c != 0) terms_[{}] = c;
    }
    static PolyXY monomial(BigInt c, int y, int z, int u) {
        PolyXY p;
        if (sgn(c) != 0) p.terms_[{y, z, u}] = std::move(c);
        return p;
    }
    static PolyXY Y() { return monomial(1, 1, 0, 0); }
    static PolyXY z() { return monomial(1, 0, 1, 0); }
    static PolyXY u() { return monomial(1, 0, 0, 1); }

    [[nodiscard]] const std::map<Exponent, BigInt>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

    [[nodiscard]] int degree_y() const { return max_of([](const Exponent& e) { return e.y; }); }
    [[nodiscard]] int degree_z() const { return max_of([](const Exponent& e) { return e.z; }); }
    [[nodiscard]] int degree_u() const { return max_of([](const Exponent& e) { return e.u; }); }

    /// Coefficient of Y^a as a polynomial in (z, u).
    [[nodiscard]] PolyXY y_coefficient(int a) const {
        PolyXY out;
        for (const auto& [e, c] : terms_) {
            if (e.y == a) out.terms_[{0, e.z, e.u}] = c;
        }
        return out;
    }

    /// Drops every term containing z.
    [[nodiscard]] PolyXY at_z_zero() const {
        PolyXY out;
        for (const auto& [e, c] : terms_) {
            if (e.z == 0) out.terms_[e] = c;
        }
        return out;
    }

    [[nodiscard]] BigInt evaluate(const BigInt& y, const BigInt& z, const BigInt& u) const {
        BigInt sum = 0;
        for (const auto& [e, c] : terms_) {
            BigInt t = c;
            for (int i = 0; i < e.y; ++i) t *= y;
            for (int i = 0; i < e.z; ++i) t *= z;
            for (int i = 0; i < e.u; ++i) t *= u;
            sum += t;
        }
        return sum;
    }

    friend PolyXY operator+(PolyXY a, const PolyXY& b) {
        for (const auto& [e, c] : b.terms_) a.add_term(e, c);
        return a;
    }
    friend PolyXY operator-(PolyXY a, const PolyXY& b) {
        for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
        return a;
    }
    friend PolyXY operator-(const PolyXY& a) { return PolyXY{} - a; }
    friend PolyXY operator*(const PolyXY& a, const PolyXY& b) {
        PolyXY out;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) out.add_term({ea.y + eb.y, ea.z + eb.z, ea.u + eb.u}, ca * cb);
        }
        return out;
    }
    friend bool operator==(const PolyXY& a, const PolyXY& b) { return a.terms_ == b.terms_; }

    [[nodiscard]] PolyXY pow(int e) const {
        PolyXY out = 1;
        for (int i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    /// Human-readable form, e.g. "(-4 + 12*u)*Y^3 + ...".
    [[nodiscard]] std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string mono;
            const auto factor = [&](const char* name, int d) {
                if (d == 0) return;
                if (!mono.empty()) mono += "*";
                mono += name;
                if (d > 1) mono += "^" + std::to_string(d);
            };
            factor("Y", e.y);
            factor("z", e.z);
            factor("u", e.u);
            BigInt mag = abs(c);
            std::string piece = mono.empty() ? mag.get_str() : (mag == 1 ? mono : mag.get_str() + "*" + mono);
            if (out.empty()) {
                out = (sgn(c) < 0 ? "-" : "") + piece;
            } else {
                out += (sgn(c) < 0 ? " - " : " + ") + piece;
            }
        }
        return out;
    }

private:
    void add_term(const Exponent& e, const BigInt& c) {
        auto& slot = terms_[e];
        slot += c;
        if (sgn(slot) == 0) terms_.erase(e);
    }

    template <class F>
    [[nodiscard]] int max_of(F f) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, f(e));
        return d;
    }

    std::map<Exponent, BigInt> terms_;
};

/// Multiplies a series by a Y-free polynomial in (z, u), keeping the truncation.
inline BiSeries multiply(const PolyXY& p, const BiSeries& s) {
    BiSeries out(s.z_order(), s.u_order());
    for (const auto& [e, c] : p.terms()) {
        if (e.y != 0) throw domain_error("multiply: polynomial must not contain Y");
        const Rational rc(c);
        for (int n = 0; n + e.z <= s.z_order(); ++n) {
            for (int k = 0; k + e.u <= s.u_order(); ++k) out.at(n + e.z, k + e.u) += rc * s.at(n, k);
        }
    }
    return out;
}

/// P(z, u, S(z,u)) truncated to the series' rectangle. Every coefficient in
/// that rectangle is exact: polynomial coefficients only shift orders upward.
inline BiSeries substitute(const PolyXY& p, const BiSeries& s) {
    BiSeries result(s.z_order(), s.u_order());
    BiSeries power(s.z_order(), s.u_order());
    power.at(0, 0) = 1;
    for (int a = 0; a <= p.degree_y(); ++a) {
        if (a > 0) power = power * s;
        const auto coeff = p.y_coefficient(a);
        if (!coeff.is_zero()) result = result + multiply(coeff, power);
    }
    return result;
}

struct ResidualReport {
    bool clean = true;
    int z_order = 0;  ///< determined region: n <= z_order, k <= u_order
    int u_order = 0;
    std::optional<std::pair<int, int>> first_failure;  ///< (n, k); n = 0 for univariate checks
    Rational value = 0;
};

inline ResidualReport residual_report(const BiSeries& residual) {
    ResidualReport r;
    r.z_order = residual.z_order();
    r.u_order = residual.u_order();
    if (const auto at = residual.first_nonzero()) {
        r.clean = false;
        r.first_failure = at;
        r.value = residual.at(at->first, at->second);
    }
    return r;
}

inline ResidualReport poly_residual(const BiSeries& series, const PolyXY& poly) {
    if (poly.degree_y() > 3) throw domain_error("poly_residual: degree in Y above 3");
    return residual_report(substitute(poly, series));
}

inline ResidualReport poly_residual(const UniSeries& series, const PolyXY& poly) {
    if (poly.degree_z() > 0) throw domain_error("poly_residual: univariate series against a polynomial in z");
    return poly_residual(BiSeries::from_uni(series), poly);
}

/// sum_j coeff_j(u) d^j/du^j Y + inhomogeneous(u) = 0.
struct LinearOde {
    std::vector<PolyXY> coeffs;  ///< in u only, index = derivative order
    PolyXY inhomogeneous;
};

/// Residual on the orders not contaminated by truncation: the coefficient of
/// u^m uses c_{m - a + j} for each term u^a d^j, so orders up to
/// N + min(0, min(a - j)) are determined.
inline ResidualReport ode_residual(const UniSeries& series, const LinearOde& ode) {
    int shift = 0;
    for (std::size_t j = 0; j < ode.coeffs.size(); ++j) {
        for (const auto& [e, c] : ode.coeffs[j].terms()) shift = std::min(shift, e.u - static_cast<int>(j));
    }
    const int determined = series.order() + shift;
    if (determined < 0) throw domain_error("ode_residual: series too short");

    auto total = BiSeries(0, determined);
    UniSeries derivative = series;
    for (std::size_t j = 0; j < ode.coeffs.size(); ++j) {
        if (j > 0) derivative = derivative.derivative();
        // Pad so that shifted products land inside [0, determined].
        auto padded = BiSeries(0, determined);
        for (const auto& [e, c] : ode.coeffs[j].terms()) {
            const Rational rc(c);
            for (int m = e.u; m <= determined; ++m) {
                const int src = m - e.u;
                if (src <= derivative.order()) padded.at(0, m) += rc * derivative[src];
            }
        }
        total = total + padded;
    }
    for (const auto& [e, c] : ode.inhomogeneous.terms()) {
        if (e.u <= determined) total.at(0, e.u) += Rational(c);
    }
    return residual_report(total);
}

// ---------------------------------------------------------------------------
// Algebraic guessing: find P(u, Y) = sum p_{a,b} u^b Y^a with P(u, S(u)) = O(u^M).

namespace detail {

/// Basis of the right null space of a rational matrix (rows x cols).
inline std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> m, std::size_t cols) {
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && sgn(m[piv][col]) == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[row]);
        const Rational inv = 1 / m[row][col];
        for (auto& v : m[row]) v *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][col]) == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols);
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[static_cast<std::size_t>(pivot_col[r])] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace detail

struct GuessOptions {
    int margin = 5;    ///< equations beyond the unknown count used in the fit
    int holdout = 10;  ///< trailing terms kept back for verification, when available
};

/// Smallest (degree in Y, then degree in u) polynomial annihilating the
/// series, up to dY and dU. Returns a primitive integer polynomial with a
/// positive leading coefficient, re-verified on every available term, or
/// nothing.
inline std::optional<PolyXY> guess_algebraic(const UniSeries& series, int dY, int dU, GuessOptions opt = {}) {
    const int length = static_cast<int>(series.size());
    for (int dy = 1; dy <= dY; ++dy) {
        for (int du = 0; du <= dU; ++du) {
            const int unknowns = (dy + 1) * (du + 1);
            const int needed = unknowns + opt.margin;
            if (length < needed) continue;
            const int fit = std::max(needed, length - opt.holdout);

            std::vector<UniSeries> powers;
            powers.push_back(UniSeries::zero(fit - 1));
            powers[0][0] = 1;
            const auto s = series.truncated(fit - 1);
            for (int a = 1; a <= dy; ++a) powers.push_back(powers.back() * s);

            std::vector<std::vector<Rational>> m(static_cast<std::size_t>(fit),
                                                 std::vector<Rational>(static_cast<std::size_t>(unknowns)));
            for (int a = 0; a <= dy; ++a) {
                for (int b = 0; b <= du; ++b) {
                    const auto col = static_cast<std::size_t>(a * (du + 1) + b);
                    for (int order = b; order < fit; ++order) m[static_cast<std::size_t>(order)][col] = powers[a][order - b];
                }
            }
            const auto basis = detail::null_space(std::move(m), static_cast<std::size_t>(unknowns));
            if (basis.empty()) continue;

            const auto& v = basis.front();
            BigInt lcm = 1;
            for (const auto& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
            std::vector<BigInt> ints;
            BigInt g = 0;
            for (const auto& q : v) {
                BigInt x = q.get_num() * (lcm / q.get_den());
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
                ints.push_back(std::move(x));
            }
            PolyXY poly;
            for (int a = 0; a <= dy; ++a) {
                for (int b = 0; b <= du; ++b) {
                    const auto& x = ints[static_cast<std::size_t>(a * (du + 1) + b)];
                    if (sgn(x) != 0) poly = poly + PolyXY::monomial(x / g, a, 0, b);
                }
            }
            if (poly.is_zero() || poly.degree_y() < 1) continue;
            if (sgn(poly.terms().rbegin()->second) < 0) poly = -poly;
            if (!poly_residual(series, poly).clean) continue;
            return poly;
        }
    }
    return std::nullopt;
}

}  // namespace archruns
