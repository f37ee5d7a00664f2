#pragma once

// Exact run counts t(n,k) from
//     2 t(n,k) = (n+2k-1) t(n,k-1) + (n-k) t(n+1,k-1),   t(n,0) = 1,
// and the refined counts t(n,k,l) by position of x_1 (c_1 when k = n).

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arch_model.hpp"
#include "errors.hpp"
#include "numeric.hpp"

namespace archruns {

namespace detail {

// Cells of the triangle rooted at (n,k): (n + d, j) for 0 <= d <= k, 0 <= j <= k - d.
struct Triangle {
    int n = 0;
    int k = 0;

    [[nodiscard]] std::size_t row_offset(int d) const noexcept {
        const auto dd = static_cast<std::size_t>(d);
        return dd * static_cast<std::size_t>(k + 1) - dd * (dd - (dd > 0 ? 1 : 0)) / 2;
    }
    [[nodiscard]] std::size_t cell_count() const noexcept { return row_offset(k + 1); }
    [[nodiscard]] bool contains(int nn, int kk) const noexcept {
        const int d = nn - n;
        return d >= 0 && d <= k && kk >= 0 && kk <= k - d;
    }
    [[nodiscard]] std::size_t index(int nn, int kk) const noexcept {
        return row_offset(nn - n) + static_cast<std::size_t>(kk);
    }
};

// 2 * out = left_coeff * left + right_coeff * right, with an evenness check.
inline void recurrence_step(mpz_t out, long left_coeff, const mpz_t left, long right_coeff, const mpz_t right,
                            int n, int k) {
    mpz_mul_si(out, left, left_coeff);
    if (right_coeff >= 0) {
        mpz_addmul_ui(out, right, static_cast<unsigned long>(right_coeff));
    } else {
        mpz_submul_ui(out, right, static_cast<unsigned long>(-right_coeff));
    }
    if (mpz_odd_p(out)) {
        throw invariant_error("odd numerator in recurrence at " + to_string(Shape{n, k}));
    }
    mpz_tdiv_q_2exp(out, out, 1);
}

}  // namespace detail

/// Memoised t(n',k') over the triangle needed for t(n,k). Immutable once built.
class CountTable {
public:
    static CountTable build(int n, int k) {
        const Shape base{n, k};
        if (n < 0 || k < 0 || k > n + 1) {
            throw domain_error("count table " + to_string(base) + ": recurrence loses its combinatorial meaning");
        }
        const detail::Triangle tri{n, k};
        std::vector<BigInt> cells(tri.cell_count());
        for (int d = 0; d <= k; ++d) cells[tri.index(n + d, 0)] = 1;
        for (int j = 1; j <= k; ++j) {
            for (int d = 0; d <= k - j; ++d) {
                const int nn = n + d;
                detail::recurrence_step(cells[tri.index(nn, j)].get_mpz_t(), nn + 2 * j - 1,
                                        cells[tri.index(nn, j - 1)].get_mpz_t(), nn - j,
                                        cells[tri.index(nn + 1, j - 1)].get_mpz_t(), nn, j);
            }
        }
        return CountTable(base, std::move(cells));
    }

    [[nodiscard]] Shape base() const noexcept { return {tri_.n, tri_.k}; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
    [[nodiscard]] bool contains(int n, int k) const noexcept { return tri_.contains(n, k); }

    [[nodiscard]] const BigInt& at(int n, int k) const {
        if (!tri_.contains(n, k)) {
            throw lookup_error("t" + to_string(Shape{n, k}) + " not stored in table for " + to_string(base()));
        }
        return cells_[tri_.index(n, k)];
    }

    /// Visits (n', k', value) in row-major order of the triangle.
    template <class Visitor>
    void for_each(Visitor&& visit) const {
        for (int d = 0; d <= tri_.k; ++d) {
            for (int j = 0; j <= tri_.k - d; ++j) visit(tri_.n + d, j, cells_[tri_.index(tri_.n + d, j)]);
        }
    }

    /// Checks t(n',0) = 1 and the recurrence identity on every interior cell.
    /// Returns the first offending cell, if any.
    [[nodiscard]] std::optional<Shape> first_inconsistent_cell() const {
        for (int d = 0; d <= tri_.k; ++d) {
            const int nn = tri_.n + d;
            if (cells_[tri_.index(nn, 0)] != 1) return Shape{nn, 0};
            for (int j = 1; j <= tri_.k - d; ++j) {
                const BigInt lhs = 2 * cells_[tri_.index(nn, j)];
                const BigInt rhs = (nn + 2 * j - 1) * cells_[tri_.index(nn, j - 1)] +
                                   (nn - j) * cells_[tri_.index(nn + 1, j - 1)];
                if (lhs != rhs) return Shape{nn, j};
            }
        }
        return std::nullopt;
    }

    /// Builds a table from externally supplied cells; rejects anything that
    /// fails first_inconsistent_cell().
    static std::optional<CountTable> from_cells(Shape base, const std::map<std::pair<int, int>, BigInt>& source,
                                                std::string* why = nullptr) {
        if (!base.valid()) throw domain_error("count table " + to_string(base) + " outside 0 <= k <= n+1");
        const detail::Triangle tri{base.n, base.k};
        std::vector<BigInt> cells(tri.cell_count());
        for (int d = 0; d <= base.k; ++d) {
            for (int j = 0; j <= base.k - d; ++j) {
                const auto it = source.find({base.n + d, j});
                if (it == source.end()) {
                    if (why) *why = "missing cell " + to_string(Shape{base.n + d, j});
                    return std::nullopt;
                }
                cells[tri.index(base.n + d, j)] = it->second;
            }
        }
        CountTable table(base, std::move(cells));
        if (const auto bad = table.first_inconsistent_cell()) {
            if (why) *why = "cell " + to_string(*bad) + " violates the recurrence";
            return std::nullopt;
        }
        return table;
    }

private:
    CountTable(Shape base, std::vector<BigInt> cells) : tri_{base.n, base.k}, cells_(std::move(cells)) {}

    detail::Triangle tri_;
    std::vector<BigInt> cells_;
};

inline CountTable build_count_table(int n, int k) { return CountTable::build(n, k); }

inline const BigInt& runs_count(const CountTable& table, int n, int k) { return table.at(n, k); }

/// Convenience: t(n,k) without keeping the table.
inline BigInt runs_count(int n, int k) { return CountTable::build(n, k).at(n, k); }

/// The recurrence continued past k = n+1 over the rationals.
inline Rational runs_count_extended(int n, int k) {
    if (n < 0 || k < 0) throw domain_error("runs_count_extended needs n, k >= 0");
    const detail::Triangle tri{n, k};
    std::vector<Rational> cells(tri.cell_count());
    for (int d = 0; d <= k; ++d) cells[tri.index(n + d, 0)] = 1;
    for (int j = 1; j <= k; ++j) {
        for (int d = 0; d <= k - j; ++d) {
            const int nn = n + d;
            Rational v = Rational(nn + 2 * j - 1) * cells[tri.index(nn, j - 1)] +
                         Rational(nn - j) * cells[tri.index(nn + 1, j - 1)];
            v /= 2;
            cells[tri.index(nn, j)] = std::move(v);
        }
    }
    return cells[tri.index(n, k)];
}

// ---------------------------------------------------------------------------

inline void require_bounds_domain(int n, int k) {
    if (n < 0 || k < 0 || k >= n + 1) throw domain_error("bounds need 0 <= k < n+1, got " + to_string(Shape{n, k}));
}

/// n! / (n-k)!
inline BigInt lower_bound(int n, int k) {
    require_bounds_domain(n, k);
    BigInt r = 1;
    for (int i = n - k + 1; i <= n; ++i) r *= i;
    return r;
}

/// (n+2k-1)! / (n+k-1)!
inline BigInt upper_bound(int n, int k) {
    require_bounds_domain(n, k);
    BigInt r = 1;
    for (int i = n + k; i <= n + 2 * k - 1; ++i) r *= i;
    return r;
}

// ---------------------------------------------------------------------------

/// t(n',k',l): runs whose x_1 (c_1 at the k = n root) sits at 1-based position l.
/// Non-zero only for l in [k'+1, 2k'+1] (l = 1 when k' = 0).
class PositionTable {
public:
    static PositionTable build(int n, int k) {
        if (k < 0 || n < 0) throw domain_error("position table needs n, k >= 0");
        if (k > n) throw domain_error("position table " + to_string(Shape{n, k}) + ": only k <= n is supported");
        PositionTable out({n, k});
        const auto& tri = out.tri_;
        out.offsets_.resize(tri.cell_count() + 1);
        std::size_t total = 0;
        for (int d = 0; d <= k; ++d) {
            for (int j = 0; j <= k - d; ++j) {
                out.offsets_[tri.index(n + d, j)] = total;
                total += static_cast<std::size_t>(j == 0 ? 1 : j + 1);
            }
        }
        out.offsets_.back() = total;
        out.values_.resize(total);

        for (int d = 0; d <= k; ++d) out.slot(n + d, 0, 1) = 1;
        for (int j = 1; j <= k; ++j) {
            for (int d = 0; d <= k - j; ++d) {
                const int nn = n + d;
                for (int l = j + 1; l <= 2 * j + 1; ++l) {
                    BigInt v = (l - 2) * out.at(nn, j - 1, l - 2) + (nn - j) * out.at(nn + 1, j - 1, l - 1);
                    out.slot(nn, j, l) = std::move(v);
                }
            }
        }
        return out;
    }

    [[nodiscard]] Shape base() const noexcept { return {tri_.n, tri_.k}; }
    [[nodiscard]] bool contains(int n, int k) const noexcept { return tri_.contains(n, k); }

    [[nodiscard]] static int first_position(int k) noexcept { return k == 0 ? 1 : k + 1; }
    [[nodiscard]] static int last_position(int k) noexcept { return k == 0 ? 1 : 2 * k + 1; }

    /// Zero outside the support; throws lookup_error if (n,k) is not stored.
    [[nodiscard]] const BigInt& at(int n, int k, int l) const {
        if (!tri_.contains(n, k)) {
            throw lookup_error("t" + to_string(Shape{n, k}) + ",l not stored in position table for " +
                               to_string(base()));
        }
        if (l < first_position(k) || l > last_position(k)) return zero();
        return values_[offsets_[tri_.index(n, k)] + static_cast<std::size_t>(l - first_position(k))];
    }

    [[nodiscard]] BigInt total(int n, int k) const {
        BigInt sum = 0;
        for (int l = first_position(k); l <= last_position(k); ++l) sum += at(n, k, l);
        return sum;
    }

private:
    explicit PositionTable(Shape base) : tri_{base.n, base.k} {}

    BigInt& slot(int n, int k, int l) {
        return values_[offsets_[tri_.index(n, k)] + static_cast<std::size_t>(l - first_position(k))];
    }
    static const BigInt& zero() {
        static const BigInt z = 0;
        return z;
    }

    detail::Triangle tri_;
    std::vector<std::size_t> offsets_;
    std::vector<BigInt> values_;
};

inline PositionTable build_position_table(int n, int k) { return PositionTable::build(n, k); }

// ---------------------------------------------------------------------------
// On-disk memo cache: one "n k value" line per cell.

inline void save_cache(const CountTable& table, std::ostream& os) {
    table.for_each([&](int n, int k, const BigInt& v) { os << n << ' ' << k << ' ' << v.get_str(10) << '\n'; });
}

/// Loads and validates a cache for `base`. Any parse error, missing cell or
/// recurrence violation rejects the whole file.
inline std::optional<CountTable> load_cache(std::istream& is, Shape base, std::string* why = nullptr) {
    std::map<std::pair<int, int>, BigInt> cells;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int n = 0;
        int k = 0;
        std::string value;
        std::string extra;
        if (!(ls >> n >> k >> value) || (ls >> extra)) {
            if (why) *why = "malformed line " + std::to_string(line_no);
            return std::nullopt;
        }
        try {
            cells[{n, k}] = parse_bigint(value);
        } catch (const parse_error&) {
            if (why) *why = "bad integer on line " + std::to_string(line_no);
            return std::nullopt;
        }
    }
    return CountTable::from_cells(base, cells, why);
}

}  // namespace archruns
