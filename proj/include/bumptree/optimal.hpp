#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bumptree/errors.hpp"
#include "bumptree/tree.hpp"
#include "bumptree/weights.hpp"

namespace bumptree {

inline constexpr std::size_t default_optimal_cap = 20000;

/// Upper-triangular n×n table stored row by row: entry (i, j) for i <= j.
template <typename T>
class TriangularTable {
public:
    explicit TriangularTable(std::size_t n) : n_(n), cells_(n * (n + 1) / 2) {}

    T& operator()(std::size_t i, std::size_t j) noexcept { return cells_[offset(i) + (j - i)]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return cells_[offset(i) + (j - i)]; }

    std::size_t size() const noexcept { return n_; }

private:
    // Row i starts after rows 0..i-1 of lengths n, n-1, ..., n-i+1.
    std::size_t offset(std::size_t i) const noexcept { return i * n_ - i * (i - 1) / 2; }

    std::size_t n_;
    std::vector<T> cells_;
};

/// Filled optimal-BST tables: cost(i, j) is the least c(T) over BSTs on keys
/// i..j (depth counted from that subtree's root), root(i, j) its smallest
/// optimal root.
struct DpTables {
    TriangularTable<double> cost;
    TriangularTable<std::uint32_t> root;
    std::vector<double> prefix;
};

namespace detail {

inline void check_optimal_request(const WeightProfile& p, std::size_t cap) {
    if (p.size() == 0) throw argument_error("optimal tree: empty profile");
    if (p.size() > cap) {
        throw resource_error("optimal tree: n = " + std::to_string(p.size()) + " exceeds the cap of " +
                             std::to_string(cap) + " keys (O(n^2) memory)");
    }
}

/// Knuth's O(n^2) fill. Rows run from the bottom up so that root(i, j-1) and
/// root(i+1, j) are known before (i, j). RootStore decides how much of the
/// root table is kept through `root_at(i, j)` and `set_root(i, j, r)`.
template <typename RootStore>
double fill_optimal(const std::vector<double>& prefix, TriangularTable<double>& cost, RootStore& roots) {
    const std::size_t n = cost.size();
    for (std::size_t i = n; i-- > 0;) {
        cost(i, i) = prefix[i + 1] - prefix[i];
        roots.set_root(i, i, static_cast<std::uint32_t>(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t lo = roots.root_at(i, j - 1);
            const std::size_t hi = roots.root_at(i + 1, j);
            if (lo > hi) throw contract_error("optimal tree: root monotonicity violated at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            double best = 0.0;
            std::size_t best_root = lo;
            for (std::size_t r = lo; r <= hi; ++r) {
                const double left = r > i ? cost(i, r - 1) : 0.0;
                const double right = r < j ? cost(r + 1, j) : 0.0;
                const double c = left + right;
                if (r == lo || c < best) {
                    best = c;
                    best_root = r;
                }
            }
            cost(i, j) = best + (prefix[j + 1] - prefix[i]);
            roots.set_root(i, j, static_cast<std::uint32_t>(best_root));
        }
    }
    return cost(0, n - 1);
}

struct FullRoots {
    TriangularTable<std::uint32_t>& table;
    std::uint32_t root_at(std::size_t i, std::size_t j) const { return table(i, j); }
    void set_root(std::size_t i, std::size_t j, std::uint32_t r) { table(i, j) = r; }
};

/// Keeps only the row being filled and the row below it.
struct TwoRowRoots {
    std::size_t n;
    std::vector<std::uint32_t> current, below;
    std::size_t current_row = static_cast<std::size_t>(-1);

    explicit TwoRowRoots(std::size_t size) : n(size), current(size), below(size) {}

    std::uint32_t root_at(std::size_t i, std::size_t j) const { return i == current_row ? current[j] : below[j]; }
    void set_root(std::size_t i, std::size_t j, std::uint32_t r) {
        if (i != current_row) {
            std::swap(current, below);
            current_row = i;
        }
        current[j] = r;
    }
};

inline std::vector<double> prefix_sums(const WeightProfile& p) {
    std::vector<double> prefix(p.size() + 1, 0.0);
    std::partial_sum(p.probs.begin(), p.probs.end(), prefix.begin() + 1);
    return prefix;
}

} // namespace detail

inline DpTables optimal_tables(const WeightProfile& p, std::size_t cap = default_optimal_cap) {
    detail::check_optimal_request(p, cap);
    DpTables dp{TriangularTable<double>(p.size()), TriangularTable<std::uint32_t>(p.size()), detail::prefix_sums(p)};
    detail::FullRoots roots{dp.root};
    detail::fill_optimal(dp.prefix, dp.cost, roots);
    return dp;
}

struct OptimalResult {
    WeightedTree tree;
    double cost;
};

/// Minimum-cost BST on keys 0..n-1 and its cost.
inline OptimalResult optimal_tree(const WeightProfile& p, std::size_t cap = default_optimal_cap) {
    const DpTables dp = optimal_tables(p, cap);
    const std::size_t n = p.size();
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
        const std::size_t root = dp.root(rg.lo, rg.hi);
        const auto r = static_cast<NodeId>(root);
        if (rg.parent == nil) t.set_root(r); else t.link(rg.parent, r, rg.side);
        if (root > rg.lo) work.push_back({rg.lo, root - 1, r, Side::left});
        if (root < rg.hi) work.push_back({root + 1, rg.hi, r, Side::right});
    }
    t.refresh_subtree_weights();
    return {std::move(t), dp.cost(0, n - 1)};
}

/// Same recurrence as optimal_tree, without keeping the root table.
inline double optimal_cost_only(const WeightProfile& p, std::size_t cap = default_optimal_cap) {
    detail::check_optimal_request(p, cap);
    const auto prefix = detail::prefix_sums(p);
    TriangularTable<double> cost(p.size());
    detail::TwoRowRoots roots(p.size());
    return detail::fill_optimal(prefix, cost, roots);
}

} // namespace bumptree
