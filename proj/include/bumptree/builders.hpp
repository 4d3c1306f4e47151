#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bumptree/errors.hpp"
#include "bumptree/random.hpp"
#include "bumptree/tree.hpp"
#include "bumptree/weights.hpp"

namespace bumptree {

enum class BuilderKind { simple_random, treap, weight_balanced, splay };

constexpr std::string_view builder_name(BuilderKind k) noexcept {
    switch (k) {
    case BuilderKind::simple_random: return "simple";
    case BuilderKind::treap: return "treap";
    case BuilderKind::weight_balanced: return "wb";
    case BuilderKind::splay: return "splay";
    }
    return "?";
}

inline std::optional<BuilderKind> parse_builder(std::string_view name) noexcept {
    for (auto k : {BuilderKind::simple_random, BuilderKind::treap, BuilderKind::weight_balanced, BuilderKind::splay}) {
        if (builder_name(k) == name) return k;
    }
    return std::nullopt;
}

namespace detail {

inline void require_nonempty(const WeightProfile& p, const char* who) {
    if (p.size() == 0) throw argument_error(std::string(who) + ": empty profile");
    if (p.size() >= nil) throw argument_error(std::string(who) + ": profile too large");
}

/// Plain BST insertion of keys in the given order, no rebalancing.
inline WeightedTree insert_in_order(const WeightProfile& p, std::span<const NodeId> order) {
    WeightedTree t(p.probs);
    t.set_root(order.front());
    for (std::size_t i = 1; i < order.size(); ++i) {
        const NodeId key = order[i];
        NodeId at = t.root();
        for (;;) {
            const Side s = key < at ? Side::left : Side::right;
            const NodeId next = t.child(at, s);
            if (next == nil) {
                t.link(at, key, s);
                break;
            }
            at = next;
        }
    }
    t.refresh_subtree_weights();
    return t;
}

/// Moves x to the root with zig, zig-zig and zig-zag steps.
inline void splay_to_root(WeightedTree& t, NodeId x) {
    while (!t.is_root(x)) {
        const NodeId p = t.parent(x);
        if (t.is_root(p)) {
            t.bump(x);
        } else if (t.side_of(x) == t.side_of(p)) {
            t.bump(p);
            t.bump(x);
        } else {
            t.bump(x);
            t.bump(x);
        }
    }
}

} // namespace detail

/// Keys inserted in a seeded uniformly random order.
inline WeightedTree build_simple_random(const WeightProfile& p, std::uint64_t seed) {
    detail::require_nonempty(p, "build_simple_random");
    std::vector<NodeId> order(p.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    Rng rng(seed);
    shuffle(std::span<NodeId>(order), rng);
    return detail::insert_in_order(p, order);
}

/// The BST obtained by inserting keys in descending probability order (ties
/// by ascending key), i.e. a treap with priority = probability. Built as a
/// Cartesian tree in O(n) rather than by n insertions.
inline WeightedTree build_treap(const WeightProfile& p) {
    detail::require_nonempty(p, "build_treap");
    const auto& pr = p.probs;
    // a is inserted before b.
    auto precedes = [&](NodeId a, NodeId b) { return pr[a] > pr[b] || (pr[a] == pr[b] && a < b); };

    WeightedTree t(p.probs);
    std::vector<NodeId> spine; // right spine, root first
    for (NodeId k = 0; k < p.size(); ++k) {
        NodeId last = nil;
        while (!spine.empty() && precedes(k, spine.back())) {
            last = spine.back();
            spine.pop_back();
        }
        t.link(k, last, Side::left);
        if (spine.empty()) {
            t.set_root(k);
        } else {
            t.link(spine.back(), k, Side::right);
        }
        spine.push_back(k);
    }
    t.refresh_subtree_weights();
    return t;
}

/// Each key range is rooted at the key that minimizes |p̄(left) − p̄(right)|,
/// leftmost on ties. The split is found by binary search over prefix sums.
inline WeightedTree build_weight_balanced(const WeightProfile& p) {
    detail::require_nonempty(p, "build_weight_balanced");
    const std::size_t n = p.size();
    std::vector<double> prefix(n + 1, 0.0);
    std::partial_sum(p.probs.begin(), p.probs.end(), prefix.begin() + 1);

    // left(r) - right(r) over [lo, hi]; nondecreasing in r.
    auto imbalance = [&](std::size_t lo, std::size_t hi, std::size_t r) {
        return (prefix[r] - prefix[lo]) - (prefix[hi + 1] - prefix[r + 1]);
    };

    WeightedTree t(p.probs);
    struct Range {
        std::size_t lo, hi;
        NodeId parent;
        Side side;
    };
    std::vector<Range> work{{0, n - 1, nil, Side::left}};
    while (!work.empty()) {
        const Range rg = work.back();
        work.pop_back();
        // First r with imbalance >= 0; the minimizer is r or r-1.
        std::size_t a = rg.lo, b = rg.hi;
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            if (imbalance(rg.lo, rg.hi, mid) >= 0.0) b = mid; else a = mid + 1;
        }
        std::size_t root = a;
        if (root > rg.lo && std::abs(imbalance(rg.lo, rg.hi, root - 1)) <= std::abs(imbalance(rg.lo, rg.hi, root))) {
            root = root - 1;
        }
        const auto r = static_cast<NodeId>(root);
        if (rg.parent == nil) t.set_root(r); else t.link(rg.parent, r, rg.side);
        if (root > rg.lo) work.push_back({rg.lo, root - 1, r, Side::left});
        if (root < rg.hi) work.push_back({root + 1, rg.hi, r, Side::right});
    }
    t.refresh_subtree_weights();
    return t;
}

/// Simple random tree warmed up by 3n sampled lookups, each splayed to the root.
inline WeightedTree build_splay(const WeightProfile& p, std::uint64_t seed) {
    WeightedTree t = build_simple_random(p, seed);
    QuerySampler queries(p, derive_seed(seed, 0x5b1a7));
    const std::size_t count = 3 * p.size();
    for (std::size_t i = 0; i < count; ++i) detail::splay_to_root(t, queries());
    return t;
}

inline WeightedTree build(BuilderKind kind, const WeightProfile& p, std::uint64_t seed) {
    switch (kind) {
    case BuilderKind::simple_random: return build_simple_random(p, seed);
    case BuilderKind::treap: return build_treap(p);
    case BuilderKind::weight_balanced: return build_weight_balanced(p);
    case BuilderKind::splay: return build_splay(p, seed);
    }
    throw argument_error("build: unknown builder");
}

} // namespace bumptree
