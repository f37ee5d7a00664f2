#pragma once

// The (n,k)-arch process: a trunk a_1..a_k, x_1..x_{n-k}, c_1..c_k plus k
// arches a_i -> b_i -> c_i.  For k = n+1 the nodes a_k and c_1 coincide and
// are represented by the single action M.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace archruns {

struct Shape {
    int n = 0;
    int k = 0;

    friend constexpr bool operator==(const Shape&, const Shape&) = default;

    /// 0 <= k <= n+1.
    [[nodiscard]] constexpr bool valid() const noexcept { return n >= 0 && k >= 0 && k <= n + 1; }
    [[nodiscard]] constexpr bool merged() const noexcept { return k == n + 1; }
    [[nodiscard]] constexpr int trunk_gap() const noexcept { return merged() ? 0 : n - k; }
    [[nodiscard]] constexpr int action_count() const noexcept { return merged() ? 3 * k - 1 : n + 2 * k; }
};

inline std::string to_string(Shape s) {
    return "(" + std::to_string(s.n) + "," + std::to_string(s.k) + ")";
}

inline void require_valid(Shape s) {
    if (!s.valid()) {
        throw domain_error("arch process " + to_string(s) + " outside 0 <= k <= n+1");
    }
}

enum class ActionKind : std::uint8_t { A, X, M, C, B };

struct Action {
    ActionKind kind = ActionKind::X;
    std::uint32_t index = 0;  ///< 1-based; 0 for the merged node

    friend constexpr auto operator<=>(const Action&, const Action&) = default;

    static constexpr Action a(std::uint32_t i) { return {ActionKind::A, i}; }
    static constexpr Action b(std::uint32_t i) { return {ActionKind::B, i}; }
    static constexpr Action c(std::uint32_t i) { return {ActionKind::C, i}; }
    static constexpr Action x(std::uint32_t i) { return {ActionKind::X, i}; }
    static constexpr Action m() { return {ActionKind::M, 0}; }
};

using Run = std::vector<Action>;

namespace detail {

// Where a_i / c_i live when k = n+1 (a_k and c_1 are M).
inline Action trunk_a(Shape s, std::uint32_t i) {
    return s.merged() && i == static_cast<std::uint32_t>(s.k) ? Action::m() : Action::a(i);
}
inline Action trunk_c(Shape s, std::uint32_t i) {
    return s.merged() && i == 1 ? Action::m() : Action::c(i);
}

}  // namespace detail

/// Canonical order: a's, x's (or M), c's, then b's.
inline std::vector<Action> action_set(Shape s) {
    require_valid(s);
    std::vector<Action> out;
    out.reserve(static_cast<std::size_t>(s.action_count()));
    const auto k = static_cast<std::uint32_t>(s.k);
    if (s.merged()) {
        for (std::uint32_t i = 1; i < k; ++i) out.push_back(Action::a(i));
        out.push_back(Action::m());
        for (std::uint32_t i = 2; i <= k; ++i) out.push_back(Action::c(i));
    } else {
        for (std::uint32_t i = 1; i <= k; ++i) out.push_back(Action::a(i));
        for (std::uint32_t j = 1; j <= static_cast<std::uint32_t>(s.n - s.k); ++j) out.push_back(Action::x(j));
        for (std::uint32_t i = 1; i <= k; ++i) out.push_back(Action::c(i));
    }
    for (std::uint32_t i = 1; i <= k; ++i) out.push_back(Action::b(i));
    return out;
}

/// Covering relation of the DAG: trunk chain edges, then a_i->b_i, b_i->c_i.
inline std::vector<std::pair<Action, Action>> precedence_pairs(Shape s) {
    require_valid(s);
    const auto actions = action_set(s);
    const auto trunk_len = actions.size() - static_cast<std::size_t>(s.k);
    std::vector<std::pair<Action, Action>> out;
    for (std::size_t i = 0; i + 1 < trunk_len; ++i) out.emplace_back(actions[i], actions[i + 1]);
    for (std::uint32_t i = 1; i <= static_cast<std::uint32_t>(s.k); ++i) {
        out.emplace_back(detail::trunk_a(s, i), Action::b(i));
        out.emplace_back(Action::b(i), detail::trunk_c(s, i));
    }
    return out;
}

namespace detail {

/// Dense view of the DAG: actions in canonical order, predecessor lists by ordinal.
struct DenseDag {
    std::vector<Action> actions;
    std::vector<std::vector<std::size_t>> preds;
    std::vector<std::vector<std::size_t>> succs;

    explicit DenseDag(Shape s) : actions(action_set(s)), preds(actions.size()), succs(actions.size()) {
        for (const auto& [u, v] : precedence_pairs(s)) {
            const auto iu = ordinal(u);
            const auto iv = ordinal(v);
            preds[iv].push_back(iu);
            succs[iu].push_back(iv);
        }
    }

    [[nodiscard]] std::size_t ordinal(Action a) const {
        const auto it = std::find(actions.begin(), actions.end(), a);
        return static_cast<std::size_t>(it - actions.begin());
    }
};

}  // namespace detail

/// True iff `run` is a permutation of action_set(s) respecting every cover.
inline bool validate_run(Shape s, std::span<const Action> run) {
    if (!s.valid()) return false;
    const auto actions = action_set(s);
    if (run.size() != actions.size()) return false;

    std::vector<Action> sorted_run(run.begin(), run.end());
    std::vector<Action> sorted_set = actions;
    std::sort(sorted_run.begin(), sorted_run.end());
    std::sort(sorted_set.begin(), sorted_set.end());
    if (sorted_run != sorted_set) return false;

    std::unordered_map<std::uint64_t, std::size_t> position;
    const auto key = [](Action a) {
        return (static_cast<std::uint64_t>(a.kind) << 32) | a.index;
    };
    for (std::size_t i = 0; i < run.size(); ++i) position.emplace(key(run[i]), i);
    for (const auto& [u, v] : precedence_pairs(s)) {
        if (position.at(key(u)) >= position.at(key(v))) return false;
    }
    return true;
}

/// All linear extensions, by backtracking over minimal actions in canonical
/// order. Output is lexicographically increasing w.r.t. that order.
inline std::vector<Run> enumerate_runs(Shape s, std::uint64_t cap) {
    require_valid(s);
    const detail::DenseDag dag(s);
    const auto size = dag.actions.size();

    std::vector<std::size_t> pending(size);
    for (std::size_t i = 0; i < size; ++i) pending[i] = dag.preds[i].size();
    std::vector<bool> used(size, false);
    std::vector<std::size_t> prefix;
    prefix.reserve(size);
    std::vector<Run> out;

    auto recurse = [&](auto&& self) -> void {
        if (prefix.size() == size) {
            if (out.size() >= cap) {
                throw overflow_error("enumerate_runs: more than " + std::to_string(cap) + " runs for " +
                                     to_string(s));
            }
            Run run;
            run.reserve(size);
            for (auto i : prefix) run.push_back(dag.actions[i]);
            out.push_back(std::move(run));
            return;
        }
        for (std::size_t i = 0; i < size; ++i) {
            if (used[i] || pending[i] != 0) continue;
            used[i] = true;
            prefix.push_back(i);
            for (auto j : dag.succs[i]) --pending[j];
            self(self);
            for (auto j : dag.succs[i]) ++pending[j];
            prefix.pop_back();
            used[i] = false;
        }
    };
    recurse(recurse);
    return out;
}

/// Number of linear extensions, counted over the lattice of down-sets
/// (independent of the t(n,k) recurrence). Throws if the count exceeds cap.
inline BigInt count_runs_brute(Shape s, std::uint64_t cap) {
    require_valid(s);
    const detail::DenseDag dag(s);
    const auto size = dag.actions.size();
    if (size > 63) throw domain_error("count_runs_brute: too many actions for " + to_string(s));

    std::vector<std::uint64_t> pred_mask(size, 0);
    for (std::size_t i = 0; i < size; ++i) {
        for (auto p : dag.preds[i]) pred_mask[i] |= std::uint64_t{1} << p;
    }
    const std::uint64_t full = size == 0 ? 0 : (std::uint64_t{1} << size) - 1;
    constexpr auto saturated = std::numeric_limits<std::uint64_t>::max();

    // extensions(D) = number of ways to finish a run whose prefix is the down-set D.
    std::unordered_map<std::uint64_t, std::uint64_t> memo;
    auto extensions = [&](auto&& self, std::uint64_t done) -> std::uint64_t {
        if (done == full) return 1;
        if (const auto it = memo.find(done); it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < size; ++i) {
            const auto bit = std::uint64_t{1} << i;
            if ((done & bit) != 0 || (pred_mask[i] & ~done) != 0) continue;
            const auto sub = self(self, done | bit);
            total = (saturated - total < sub) ? saturated : total + sub;
        }
        memo.emplace(done, total);
        return total;
    };
    const auto count = extensions(extensions, 0);
    if (count > cap) {
        throw overflow_error("count_runs_brute: more than " + std::to_string(cap) + " runs for " + to_string(s));
    }
    return BigInt(static_cast<unsigned long>(count));
}

// ---------------------------------------------------------------------------
// Text form: lowercase tokens separated by whitespace and/or commas.

inline std::string to_string(Action a) {
    switch (a.kind) {
        case ActionKind::A: return "a" + std::to_string(a.index);
        case ActionKind::B: return "b" + std::to_string(a.index);
        case ActionKind::C: return "c" + std::to_string(a.index);
        case ActionKind::X: return "x" + std::to_string(a.index);
        case ActionKind::M: return "m";
    }
    return "?";
}

inline Action parse_action(std::string_view token) {
    if (token.empty()) throw parse_error("empty action token");
    const char head = static_cast<char>(token.front() | 0x20);
    if (head == 'm') {
        if (token.size() != 1) throw parse_error("bad action token '" + std::string(token) + "'");
        return Action::m();
    }
    ActionKind kind{};
    switch (head) {
        case 'a': kind = ActionKind::A; break;
        case 'b': kind = ActionKind::B; break;
        case 'c': kind = ActionKind::C; break;
        case 'x': kind = ActionKind::X; break;
        default: throw parse_error("bad action token '" + std::string(token) + "'");
    }
    const auto digits = token.substr(1);
    if (digits.empty() || digits.size() > 9 || digits.find_first_not_of("0123456789") != std::string_view::npos) {
        throw parse_error("bad action token '" + std::string(token) + "'");
    }
    const auto index = static_cast<std::uint32_t>(std::stoul(std::string(digits)));
    if (index == 0) throw parse_error("action index must be >= 1 in '" + std::string(token) + "'");
    return {kind, index};
}

inline std::string format_run(std::span<const Action> run) {
    std::string out;
    for (std::size_t i = 0; i < run.size(); ++i) {
        if (i != 0) out += ' ';
        out += to_string(run[i]);
    }
    return out;
}

inline Run parse_run(std::string_view text) {
    Run run;
    std::size_t i = 0;
    const auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (i < text.size()) {
        while (i < text.size() && is_sep(text[i])) ++i;
        auto j = i;
        while (j < text.size() && !is_sep(text[j])) ++j;
        if (j > i) run.push_back(parse_action(text.substr(i, j - i)));
        i = j;
    }
    return run;
}

}  // namespace archruns
