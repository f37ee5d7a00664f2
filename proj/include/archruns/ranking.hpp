#pragma once

// Unranking / ranking of runs of A(n,k), k <= n, in the order induced by
//   1. the position l of x_1 (of c_1 at a k = n root),
//   2. runs with b_1 before x_1 (built from A(n,k-1)) before runs with b_1
//      after x_1 (built from A(n+1,k-1)),
//   3. slot p_b, then the rank of the parent run.

#include <cstdint>
#include <span>
#include <vector>

#include "arch_model.hpp"
#include "counting.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "run_edits.hpp"

namespace archruns {

namespace detail {

inline void require_ranking_shape(const PositionTable& ptable, const CountTable& table, Shape s) {
    require_valid(s);
    if (s.k > s.n) throw domain_error("ranking " + to_string(s) + ": only k <= n is supported");
    if (!ptable.contains(s.n, s.k)) throw lookup_error("position table does not cover " + to_string(s));
    if (!table.contains(s.n, s.k)) throw lookup_error("count table does not cover " + to_string(s));
}

struct ConsStep {
    Route route;
    std::int64_t p_b;
};

}  // namespace detail

/// The r-th run of A(n,k), 0 <= r < t(n,k).
inline Run unrank(const PositionTable& ptable, const CountTable& table, Shape s, const BigInt& r) {
    detail::require_ranking_shape(ptable, table, s);
    if (sgn(r) < 0 || r >= table.at(s.n, s.k)) {
        throw rank_error("rank " + to_decimal(r) + " outside [0, " + to_decimal(table.at(s.n, s.k)) + ")");
    }
    if (s.k == 0) return RunBuilder::trunk(s.n).finish();

    // Least l whose prefix sum exceeds r.
    BigInt rest = r;
    int l = PositionTable::first_position(s.k);
    for (; l <= PositionTable::last_position(s.k); ++l) {
        const BigInt& here = ptable.at(s.n, s.k, l);
        if (rest < here) break;
        rest -= here;
    }
    if (l > PositionTable::last_position(s.k)) throw invariant_error("position table marginal below t(n,k)");

    std::vector<detail::ConsStep> steps;
    steps.reserve(static_cast<std::size_t>(s.k));
    int n = s.n;
    int k = s.k;
    while (k > 0) {
        const BigInt& before = ptable.at(n, k - 1, l - 2);
        const BigInt before_block = (l - 2) * before;
        if (rest < before_block) {
            const BigInt slot = rest / before;
            rest -= slot * before;
            steps.push_back({Route::new_first_arch, 1 + slot.get_si()});
            l -= 2;
        } else {
            rest -= before_block;
            const BigInt& after = ptable.at(n + 1, k - 1, l - 1);
            if (sgn(after) == 0) throw invariant_error("unrank: empty sub-class");
            const BigInt slot = rest / after;
            rest -= slot * after;
            steps.push_back({Route::trunk_split, 2 + slot.get_si()});
            l -= 1;
            ++n;
        }
        --k;
    }

    auto builder = RunBuilder::trunk(n);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) builder.apply(it->route, it->p_b);
    return builder.finish();
}

/// Inverse of unrank().
inline BigInt rank(const PositionTable& ptable, const CountTable& table, Shape s, std::span<const Action> run) {
    detail::require_ranking_shape(ptable, table, s);
    if (!validate_run(s, run)) throw domain_error("not a run of " + to_string(s));
    if (s.k == 0) return 0;

    const auto marker = s.k == s.n ? Action::c(1) : Action::x(1);
    int l = static_cast<int>(detail::position_of(run, marker));
    BigInt r = 0;
    for (int ll = PositionTable::first_position(s.k); ll < l; ++ll) r += ptable.at(s.n, s.k, ll);

    Run current(run.begin(), run.end());
    int n = s.n;
    int k = s.k;
    while (k > 0) {
        const Shape here{n, k};
        if (auto peeled = peel_new_first_arch(here, current)) {
            r += (peeled->p_b - 1) * ptable.at(n, k - 1, l - 2);
            current = std::move(peeled->parent);
            l -= 2;
        } else if (auto split = peel_trunk_split(here, current)) {
            r += (l - 2) * ptable.at(n, k - 1, l - 2);
            r += (split->p_b - 2) * ptable.at(n + 1, k - 1, l - 1);
            current = std::move(split->parent);
            l -= 1;
            ++n;
        } else {
            throw invariant_error("rank: run of " + to_string(here) + " has no decomposition");
        }
        --k;
    }
    return r;
}

}  // namespace archruns
