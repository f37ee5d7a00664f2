#pragma once

// The three ways a run of A(n,k) is assembled from a smaller run, shared by
// the sampler and the unranker, together with their inverses.
//
//   new_first_arch  parent A(n,k-1):   shift arch indices up, last x -> c_1,
//                                      b_1 inserted at position p_b (before x_1),
//                                      a_1 prepended.
//   new_last_arch   parent A(n,k-1):   x_1 -> a_k, x_i -> x_{i-1},
//                                      b_k inserted at position p_b (after a_k),
//                                      c_k appended.
//   trunk_split     parent A(n+1,k-1): shift arch indices up, x_{p_b} -> b_1,
//                                      last x -> c_1, later x's shift down,
//                                      a_1 prepended.
//
// "Insert at position p" means the element ends up at 1-based position p
// before the prepend/append of the same step.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arch_model.hpp"
#include "errors.hpp"

namespace archruns {

enum class Route : std::uint8_t { new_first_arch, new_last_arch, trunk_split };

inline const char* to_string(Route r) {
    switch (r) {
        case Route::new_first_arch: return "new_first_arch";
        case Route::new_last_arch: return "new_last_arch";
        case Route::trunk_split: return "trunk_split";
    }
    return "?";
}

/// Shape of the run a route starts from, for a target shape (n,k).
inline Shape parent_shape(Route r, Shape target) {
    return r == Route::trunk_split ? Shape{target.n + 1, target.k - 1} : Shape{target.n, target.k - 1};
}

/// Builds runs bottom-up. Actions are kept as (kind, arch id) nodes and only
/// numbered in finish(), so index shifts cost nothing.
class RunBuilder {
public:
    /// The single run of A(n,0).
    static RunBuilder trunk(int n) {
        RunBuilder b;
        b.nodes_.assign(static_cast<std::size_t>(n), Node{ActionKind::X, 0});
        return b;
    }

    /// Starts from an existing run of a shape with k <= n.
    static RunBuilder from_run(std::span<const Action> run) {
        RunBuilder b;
        b.nodes_.reserve(run.size() + 3);
        for (const auto& a : run) {
            if (a.kind == ActionKind::M) throw domain_error("RunBuilder: merged node not supported");
            b.nodes_.push_back({a.kind, a.kind == ActionKind::X ? 0u : a.index});
            if (a.kind != ActionKind::X && a.index >= b.next_arch_) b.next_arch_ = a.index + 1;
        }
        return b;
    }

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    /// 1-based position of the first trunk x, 0 if there is none.
    [[nodiscard]] std::size_t first_x_position() const noexcept {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].kind == ActionKind::X) return i + 1;
        }
        return 0;
    }

    /// Applies one step. `p_b` is 1-based; its admissible range depends on the route.
    void apply(Route route, std::int64_t p_b) {
        const auto arch = next_arch_++;
        switch (route) {
            case Route::new_first_arch: {
                nth_x(x_count()) = {ActionKind::C, arch};
                insert_at(p_b, {ActionKind::B, arch});
                nodes_.insert(nodes_.begin(), Node{ActionKind::A, arch});
                break;
            }
            case Route::new_last_arch: {
                auto& x1 = nth_x(1);
                x1 = {ActionKind::A, arch};
                insert_at(p_b, {ActionKind::B, arch});
                nodes_.push_back({ActionKind::C, arch});
                break;
            }
            case Route::trunk_split: {
                const auto xs = x_count();
                if (p_b < 2 || static_cast<std::size_t>(p_b) >= xs) {
                    throw invariant_error("trunk_split: p_b out of range");
                }
                // Resolve both targets before relabelling either.
                auto& split = nth_x(static_cast<std::size_t>(p_b));
                auto& last = nth_x(xs);
                split = {ActionKind::B, arch};
                last = {ActionKind::C, arch};
                nodes_.insert(nodes_.begin(), Node{ActionKind::A, arch});
                break;
            }
        }
    }

    /// Numbers a's, c's, x's by order and b's by their arch.
    [[nodiscard]] Run finish() const {
        std::vector<std::uint32_t> arch_rank(next_arch_, 0);
        std::uint32_t a_seen = 0;
        for (const auto& node : nodes_) {
            if (node.kind == ActionKind::A) arch_rank[node.arch] = ++a_seen;
        }
        Run run;
        run.reserve(nodes_.size());
        std::uint32_t x_seen = 0;
        for (const auto& node : nodes_) {
            if (node.kind == ActionKind::X) {
                run.push_back(Action::x(++x_seen));
            } else {
                run.push_back({node.kind, arch_rank[node.arch]});
            }
        }
        return run;
    }

private:
    struct Node {
        ActionKind kind;
        std::uint32_t arch;  ///< meaningless for X
    };

    RunBuilder() = default;

    [[nodiscard]] std::size_t x_count() const noexcept {
        std::size_t c = 0;
        for (const auto& node : nodes_) c += node.kind == ActionKind::X ? 1 : 0;
        return c;
    }

    Node& nth_x(std::size_t which) {
        std::size_t seen = 0;
        for (auto& node : nodes_) {
            if (node.kind == ActionKind::X && ++seen == which) return node;
        }
        throw invariant_error("run has fewer than " + std::to_string(which) + " trunk actions");
    }

    void insert_at(std::int64_t p, Node node) {
        if (p < 1 || static_cast<std::size_t>(p) > nodes_.size() + 1) {
            throw invariant_error("insert position " + std::to_string(p) + " out of range");
        }
        nodes_.insert(nodes_.begin() + (p - 1), node);
    }

    std::vector<Node> nodes_;
    std::uint32_t next_arch_ = 1;
};

/// One-shot forward edit on a concrete run.
inline Run apply_edit(Route route, std::span<const Action> parent, std::int64_t p_b) {
    auto b = RunBuilder::from_run(parent);
    b.apply(route, p_b);
    return b.finish();
}

// ---------------------------------------------------------------------------
// Inverse edits on concrete runs of A(n,k), k >= 1, k <= n.

struct Peeled {
    std::int64_t p_b = 0;
    Run parent;
};

namespace detail {

inline std::size_t position_of(std::span<const Action> run, Action a) {
    for (std::size_t i = 0; i < run.size(); ++i) {
        if (run[i] == a) return i + 1;
    }
    return 0;
}

}  // namespace detail

/// Inverse of new_first_arch, if `run` starts with a_1 and b_1 precedes the
/// action that becomes the parent's x_1 (x_1 itself, or c_1 when k = n).
inline std::optional<Peeled> peel_new_first_arch(Shape s, std::span<const Action> run) {
    if (s.k < 1 || s.k > s.n || run.empty() || run.front() != Action::a(1)) return std::nullopt;
    const auto parent_x1 = s.k == s.n ? Action::c(1) : Action::x(1);
    const auto pos_b1 = detail::position_of(run, Action::b(1));
    const auto pos_x1 = detail::position_of(run, parent_x1);
    if (pos_b1 == 0 || pos_x1 == 0 || pos_b1 > pos_x1) return std::nullopt;

    Peeled out;
    out.p_b = static_cast<std::int64_t>(pos_b1) - 1;
    const auto last_x = static_cast<std::uint32_t>(s.n - s.k + 1);
    out.parent.reserve(run.size() - 2);
    for (std::size_t i = 1; i < run.size(); ++i) {
        const auto a = run[i];
        if (a == Action::b(1)) continue;
        if (a == Action::c(1)) {
            out.parent.push_back(Action::x(last_x));
        } else if (a.kind == ActionKind::X) {
            out.parent.push_back(a);
        } else {
            out.parent.push_back({a.kind, a.index - 1});
        }
    }
    return out;
}

/// Inverse of new_last_arch: drop the final c_k and b_k, a_k becomes x_1.
inline std::optional<Peeled> peel_new_last_arch(Shape s, std::span<const Action> run) {
    if (s.k < 1 || s.k > s.n || run.empty()) return std::nullopt;
    const auto k = static_cast<std::uint32_t>(s.k);
    if (run.back() != Action::c(k)) return std::nullopt;
    const auto pos_bk = detail::position_of(run, Action::b(k));
    const auto pos_ak = detail::position_of(run, Action::a(k));
    if (pos_bk == 0 || pos_ak == 0 || pos_bk < pos_ak) return std::nullopt;

    Peeled out;
    out.p_b = static_cast<std::int64_t>(pos_bk);
    out.parent.reserve(run.size() - 2);
    for (std::size_t i = 0; i + 1 < run.size(); ++i) {
        const auto a = run[i];
        if (a == Action::b(k)) continue;
        if (a == Action::a(k)) {
            out.parent.push_back(Action::x(1));
        } else if (a.kind == ActionKind::X) {
            out.parent.push_back(Action::x(a.index + 1));
        } else {
            out.parent.push_back(a);
        }
    }
    return out;
}

/// Inverse of trunk_split, if b_1 lies strictly between x_1 and c_1 (k < n).
inline std::optional<Peeled> peel_trunk_split(Shape s, std::span<const Action> run) {
    if (s.k < 1 || s.k >= s.n || run.empty() || run.front() != Action::a(1)) return std::nullopt;
    const auto pos_b1 = detail::position_of(run, Action::b(1));
    const auto pos_x1 = detail::position_of(run, Action::x(1));
    if (pos_b1 == 0 || pos_x1 == 0 || pos_b1 < pos_x1) return std::nullopt;

    std::uint32_t xs_before = 0;
    for (std::size_t i = 0; i + 1 < pos_b1; ++i) xs_before += run[i].kind == ActionKind::X ? 1 : 0;

    Peeled out;
    out.p_b = static_cast<std::int64_t>(xs_before) + 1;
    const auto split = static_cast<std::uint32_t>(out.p_b);
    const auto last_x = static_cast<std::uint32_t>(s.n - s.k + 2);
    out.parent.reserve(run.size() - 1);
    for (std::size_t i = 1; i < run.size(); ++i) {
        const auto a = run[i];
        if (a == Action::b(1)) {
            out.parent.push_back(Action::x(split));
        } else if (a == Action::c(1)) {
            out.parent.push_back(Action::x(last_x));
        } else if (a.kind == ActionKind::X) {
            out.parent.push_back(a.index >= split ? Action::x(a.index + 1) : a);
        } else {
            out.parent.push_back({a.kind, a.index - 1});
        }
    }
    return out;
}

}  // namespace archruns
