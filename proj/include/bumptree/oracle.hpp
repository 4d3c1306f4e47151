#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "bumptree/errors.hpp"
#include "bumptree/tree.hpp"
#include "bumptree/weights.hpp"

// Brute-force reference computations for small instances. Nothing here calls
// into the optimizer, builders or DP.

namespace bumptree::oracle {

inline constexpr std::size_t max_exhaustive_keys = 12;
inline constexpr std::size_t max_merit_recompute_keys = 256;

/// c(T) from depths found by a breadth-first walk; ignores cached subtree weights.
inline double recompute_cost(const WeightedTree& t) {
    if (t.root() == nil) return 0.0;
    double total = 0.0;
    std::size_t level = 1;
    std::vector<NodeId> frontier{t.root()}, next;
    while (!frontier.empty()) {
        double level_mass = 0.0;
        for (NodeId x : frontier) {
            level_mass += t.weight(x);
            if (t.left(x) != nil) next.push_back(t.left(x));
            if (t.right(x) != nil) next.push_back(t.right(x));
        }
        total += static_cast<double>(level) * level_mass;
        frontier.swap(next);
        next.clear();
        ++level;
    }
    return total;
}

/// C(T) − C(T^x) for every x, by literally bumping a copy and recosting it.
inline std::vector<double> recompute_merits(const WeightedTree& t) {
    if (t.size() > max_merit_recompute_keys) throw resource_error("recompute_merits: tree larger than 256 nodes");
    const double base = recompute_cost(t);
    std::vector<double> out(t.size(), 0.0);
    for (NodeId x = 0; x < t.size(); ++x) {
        if (t.is_root(x)) continue;
        WeightedTree copy = t;
        copy.bump(x);
        out[x] = base - recompute_cost(copy);
    }
    return out;
}

/// A BST shape on keys lo..hi given as the root of every subrange, recorded
/// as parent/side assignments that can be replayed into a WeightedTree.
class ShapeEnumerator {
public:
    struct Edge {
        NodeId child;
        NodeId parent; // nil for the root
        Side side;
    };

    explicit ShapeEnumerator(std::size_t n) : n_(n) {}

    /// Calls visit(edges) once for every BST shape on n keys.
    void for_each(const std::function<void(const std::vector<Edge>&)>& visit) {
        if (n_ == 0) return;
        std::vector<Edge> edges;
        std::vector<Pending> pending{{0, n_ - 1, nil, Side::left}};
        expand(pending, edges, visit);
    }

    static WeightedTree materialize(const std::vector<Edge>& edges, const std::vector<double>& weights) {
        WeightedTree t(weights);
        for (const Edge& e : edges) {
            if (e.parent == nil) t.set_root(e.child); else t.link(e.parent, e.child, e.side);
        }
        t.refresh_subtree_weights();
        return t;
    }

private:
    struct Pending {
        std::size_t lo, hi;
        NodeId parent;
        Side side;
    };

    // Picks a root for the last pending range, queues its two halves, recurses.
    void expand(std::vector<Pending>& pending, std::vector<Edge>& edges,
                const std::function<void(const std::vector<Edge>&)>& visit) {
        if (pending.empty()) {
            visit(edges);
            return;
        }
        const Pending rg = pending.back();
        pending.pop_back();
        for (std::size_t r = rg.lo; r <= rg.hi; ++r) {
            const std::size_t mark = pending.size();
            edges.push_back({static_cast<NodeId>(r), rg.parent, rg.side});
            if (r > rg.lo) pending.push_back({rg.lo, r - 1, static_cast<NodeId>(r), Side::left});
            if (r < rg.hi) pending.push_back({r + 1, rg.hi, static_cast<NodeId>(r), Side::right});
            expand(pending, edges, visit);
            pending.resize(mark);
            edges.pop_back();
        }
        pending.push_back(rg);
    }

    std::size_t n_;
};

struct ExhaustiveResult {
    double cost;
    std::size_t shapes;
};

namespace detail {

// Costs of every shape on lo..hi. A shape's cost is the sum over its nodes of
// the mass of the subtree hanging there (each key is counted once per
// ancestor-or-self), with subtree masses taken as prefix-sum differences.
inline std::vector<double> all_shape_costs(const std::vector<double>& prefix, std::size_t lo, std::size_t hi) {
    if (lo > hi) return {0.0};
    const double mass = prefix[hi + 1] - prefix[lo];
    std::vector<double> out;
    for (std::size_t r = lo; r <= hi; ++r) {
        const auto left = r > lo ? all_shape_costs(prefix, lo, r - 1) : std::vector<double>{0.0};
        const auto right = all_shape_costs(prefix, r + 1, hi);
        for (double a : left) {
            for (double b : right) out.push_back((a + b) + mass);
        }
    }
    return out;
}

} // namespace detail

/// Minimum c(T) over every BST on the profile's keys, with the number of
/// shapes examined (the Catalan number of n).
inline ExhaustiveResult exhaustive_optimal(const WeightProfile& p) {
    if (p.size() == 0) throw argument_error("exhaustive_optimal: empty profile");
    if (p.size() > max_exhaustive_keys) throw resource_error("exhaustive_optimal: more than 12 keys");
    std::vector<double> prefix(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) prefix[k + 1] = prefix[k] + p.probs[k];
    const auto costs = detail::all_shape_costs(prefix, 0, p.size() - 1);
    return {*std::min_element(costs.begin(), costs.end()), costs.size()};
}

/// Minimum recompute_cost over materialized shapes. Slower; used to
/// double-check exhaustive_optimal on tiny inputs.
inline ExhaustiveResult exhaustive_optimal_by_traversal(const WeightProfile& p) {
    if (p.size() == 0) throw argument_error("exhaustive_optimal_by_traversal: empty profile");
    if (p.size() > max_exhaustive_keys) throw resource_error("exhaustive_optimal_by_traversal: more than 12 keys");
    ExhaustiveResult best{std::numeric_limits<double>::infinity(), 0};
    ShapeEnumerator(p.size()).for_each([&](const std::vector<ShapeEnumerator::Edge>& edges) {
        best.cost = std::min(best.cost, recompute_cost(ShapeEnumerator::materialize(edges, p.probs)));
        ++best.shapes;
    });
    return best;
}

inline std::size_t catalan(std::size_t n) {
    std::size_t c = 1;
    for (std::size_t k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

} // namespace bumptree::oracle
