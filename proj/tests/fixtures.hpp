#pragma once

#include <cstdint>
#include <vector>

#include "bumptree/bumptree.hpp"

namespace bumptree::testing {

// Keys of the five-node rotation example in in-order: c < b < d < a < e.
struct FigureKeys {
    static constexpr NodeId c = 0, b = 1, d = 2, a = 3, e = 4;
};

/// Root a; a's children b, e; b's children c, d. Equal weights.
inline WeightedTree left_heavy_figure() {
    using K = FigureKeys;
    WeightedTree t(std::vector<double>(5, 0.2));
    t.set_root(K::a);
    t.link(K::a, K::b, Side::left);
    t.link(K::a, K::e, Side::right);
    t.link(K::b, K::c, Side::left);
    t.link(K::b, K::d, Side::right);
    t.refresh_subtree_weights();
    return t;
}

/// Root b; b's children c, a; a's children d, e. Equal weights.
inline WeightedTree right_heavy_figure() {
    using K = FigureKeys;
    WeightedTree t(std::vector<double>(5, 0.2));
    t.set_root(K::b);
    t.link(K::b, K::c, Side::left);
    t.link(K::b, K::a, Side::right);
    t.link(K::a, K::d, Side::left);
    t.link(K::a, K::e, Side::right);
    t.refresh_subtree_weights();
    return t;
}

/// Light root (0.02) over two heavy leaves (0.49 each).
inline WeightedTree local_optimum_fixture() {
    WeightedTree t({0.49, 0.02, 0.49});
    t.set_root(1);
    t.link(1, 0, Side::left);
    t.link(1, 2, Side::right);
    t.refresh_subtree_weights();
    return t;
}

/// Left chain 2 -> 1 -> 0 (root 2) carrying the n = 3 Zipf weights on keys 0, 1, 2.
inline WeightedTree zipf3_left_chain() {
    WeightedTree t({6.0 / 11, 3.0 / 11, 2.0 / 11});
    t.set_root(2);
    t.link(2, 1, Side::left);
    t.link(1, 0, Side::left);
    t.refresh_subtree_weights();
    return t;
}

/// Random shape (random insertion order) with random positive normalized weights.
inline WeightedTree random_tree(std::size_t n, Rng& rng) {
    std::vector<double> ws(n);
    for (double& w : ws) w = 0.01 + uniform_unit(rng);
    const WeightProfile p = profile_from_weights(ws);
    return build_simple_random(p, rng());
}

} // namespace bumptree::testing
