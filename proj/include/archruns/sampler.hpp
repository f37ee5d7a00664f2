#pragma once

// Uniform sampling of runs of A(n,k), k <= n, by the recursive method over
//     D_{n,k} + D^1_{n,k} = Dbar_{n,k} + Dbar^2_{n,k}.
// One draw r in [0, 2 t(n,k)) per level selects either an insertion slot in a
// run of A(n,k-1) (resolved into new_first_arch / new_last_arch depending on
// where x_1 sits) or a split slot of the trunk of a run of A(n+1,k-1).
// Every run is produced by exactly two (slot, parent) pairs.

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "arch_model.hpp"
#include "counting.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "random_source.hpp"
#include "run_edits.hpp"

namespace archruns {

/// One level of a sampling descent, recorded top-down.
struct SampleDraw {
    Shape shape;        ///< (n', k') at this level
    bool trunk_split;   ///< r fell in the Dbar^2 block
    std::int64_t p_b;   ///< insertion slot / split index
};

namespace detail {

inline void require_sampling_shape(const CountTable& table, Shape s) {
    require_valid(s);
    if (s.k > s.n) throw domain_error("sampling " + to_string(s) + ": only k <= n is supported");
    if (!table.contains(s.n, s.k)) throw lookup_error("count table does not cover " + to_string(s));
}

}  // namespace detail

/// Draws the k random choices of one sample. The random stream is consumed
/// exactly as by sample(); this is all visited_cells needs.
template <BigUniformSource Source>
std::vector<SampleDraw> sample_draws(const CountTable& table, Shape s, Source& source) {
    detail::require_sampling_shape(table, s);
    std::vector<SampleDraw> draws;
    draws.reserve(static_cast<std::size_t>(s.k));
    int n = s.n;
    int k = s.k;
    while (k > 0) {
        const BigInt& total = table.at(n, k);
        const BigInt r = source.uniform_below(2 * total);
        const BigInt& same_n = table.at(n, k - 1);
        const BigInt insert_block = (n + 2 * k - 1) * same_n;
        if (r < insert_block) {
            const BigInt slot = r / same_n;
            draws.push_back({{n, k}, false, 1 + slot.get_si()});
            --k;
        } else {
            const BigInt& next_n = table.at(n + 1, k - 1);
            const BigInt slot = (r - insert_block) / next_n;
            draws.push_back({{n, k}, true, 2 + slot.get_si()});
            ++n;
            --k;
        }
    }
    return draws;
}

/// Replays recorded draws bottom-up into a run.
inline Run build_from_draws(Shape s, std::span<const SampleDraw> draws) {
    int base_n = s.n;
    for (const auto& d : draws) base_n += d.trunk_split ? 1 : 0;
    auto builder = RunBuilder::trunk(base_n);
    for (auto it = draws.rbegin(); it != draws.rend(); ++it) {
        if (it->trunk_split) {
            builder.apply(Route::trunk_split, it->p_b);
        } else {
            const auto x1 = static_cast<std::int64_t>(builder.first_x_position());
            builder.apply(it->p_b > x1 ? Route::new_last_arch : Route::new_first_arch, it->p_b);
        }
    }
    return builder.finish();
}

/// A uniformly random run of A(n,k), 0 <= k <= n.
template <BigUniformSource Source>
Run sample(const CountTable& table, Shape s, Source& source) {
    const auto draws = sample_draws(table, s, source);
    return build_from_draws(s, draws);
}

/// Distinct table cells (k', n') reached by the recursion over `count` samples,
/// including the k' = 0 leaf of each descent, sorted.
template <BigUniformSource Source>
std::vector<std::pair<int, int>> visited_cells(const CountTable& table, Shape s, Source& source,
                                               std::uint64_t count) {
    detail::require_sampling_shape(table, s);
    std::set<std::pair<int, int>> cells;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto draws = sample_draws(table, s, source);
        int leaf_n = s.n;
        for (const auto& d : draws) {
            cells.emplace(d.shape.k, d.shape.n);
            leaf_n += d.trunk_split ? 1 : 0;
        }
        cells.emplace(0, leaf_n);
    }
    return {cells.begin(), cells.end()};
}

// ---------------------------------------------------------------------------
// Exact output distribution, by walking derivations backwards.

struct Derivation {
    Route route;
    std::int64_t p_b;
    Shape parent_shape;
    Run parent;
    BigInt block;  ///< number of r values selecting this (route, p_b)
};

/// Every (route, p_b, parent) that sample() could turn into `run`. Each
/// candidate is confirmed by re-applying the forward edit.
inline std::vector<Derivation> derivations(const CountTable& table, Shape s, std::span<const Action> run) {
    detail::require_sampling_shape(table, s);
    if (!validate_run(s, run)) throw domain_error("not a run of " + to_string(s));
    std::vector<Derivation> out;
    if (s.k == 0) return out;

    const auto try_route = [&](Route route, std::optional<Peeled> peeled) {
        if (!peeled) return;
        const auto ps = parent_shape(route, s);
        if (!validate_run(ps, peeled->parent)) return;
        // new_first_arch / new_last_arch are distinguished by the slot versus
        // the parent's x_1, exactly as in build_from_draws.
        if (route != Route::trunk_split) {
            const auto x1 = static_cast<std::int64_t>(RunBuilder::from_run(peeled->parent).first_x_position());
            const bool last = peeled->p_b > x1;
            if (last != (route == Route::new_last_arch)) return;
        }
        if (apply_edit(route, peeled->parent, peeled->p_b) != Run(run.begin(), run.end())) return;
        BigInt block = route == Route::trunk_split ? table.at(s.n + 1, s.k - 1) : table.at(s.n, s.k - 1);
        out.push_back({route, peeled->p_b, ps, std::move(peeled->parent), std::move(block)});
    };
    try_route(Route::new_last_arch, peel_new_last_arch(s, run));
    try_route(Route::new_first_arch, peel_new_first_arch(s, run));
    try_route(Route::trunk_split, peel_trunk_split(s, run));
    return out;
}

/// Exact probability that sample() returns `run`.
inline Rational sample_probability(const CountTable& table, Shape s, std::span<const Action> run) {
    detail::require_sampling_shape(table, s);
    if (!validate_run(s, run)) throw domain_error("not a run of " + to_string(s));
    if (s.k == 0) return 1;
    const Rational two_total(2 * table.at(s.n, s.k));
    Rational p = 0;
    for (const auto& d : derivations(table, s, run)) {
        p += Rational(d.block) / two_total * sample_probability(table, d.parent_shape, d.parent);
    }
    return p;
}

}  // namespace archruns
