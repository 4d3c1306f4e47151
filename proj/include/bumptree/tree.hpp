#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bumptree/errors.hpp"

namespace bumptree {

/// Arena slot index. A node's id is also its key rank, so in-order traversal
/// visits ids in increasing order.
using NodeId = std::uint32_t;

inline constexpr NodeId nil = std::numeric_limits<NodeId>::max();

enum class Side : std::uint8_t { left, right };

struct Node {
    NodeId parent = nil;
    NodeId left = nil;
    NodeId right = nil;
    double weight = 0.0;
    double subtree_weight = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
};

/// Binary search tree over keys 0..n-1 stored as an arena of nodes with
/// parent links. Each node carries its access probability and the total
/// probability of its subtree; rotations keep the latter current.
class WeightedTree {
public:
    WeightedTree() = default;

    /// n detached nodes with the given weights and no root. Link them with
    /// link()/set_root(), then call refresh_subtree_weights().
    explicit WeightedTree(std::vector<double> weights) : nodes_(weights.size()) {
        for (std::size_t i = 0; i < weights.size(); ++i) {
            nodes_[i].weight = weights[i];
            nodes_[i].subtree_weight = weights[i];
        }
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    NodeId root() const noexcept { return root_; }

    bool contains(NodeId x) const noexcept { return x < nodes_.size(); }

    const Node& node(NodeId x) const { return nodes_.at(x); }
    std::span<const Node> nodes() const noexcept { return nodes_; }

    NodeId parent(NodeId x) const { return nodes_[x].parent; }
    NodeId left(NodeId x) const { return nodes_[x].left; }
    NodeId right(NodeId x) const { return nodes_[x].right; }
    NodeId child(NodeId x, Side s) const { return s == Side::left ? nodes_[x].left : nodes_[x].right; }
    double weight(NodeId x) const { return nodes_[x].weight; }

    /// p̄(x); zero for nil.
    double subtree_weight(NodeId x) const { return x == nil ? 0.0 : nodes_[x].subtree_weight; }

    double total_weight() const { return subtree_weight(root_); }

    bool is_root(NodeId x) const { return nodes_[x].parent == nil; }

    /// Side of x under its parent. x must not be the root.
    Side side_of(NodeId x) const {
        const NodeId p = nodes_[x].parent;
        return nodes_[p].left == x ? Side::left : Side::right;
    }

    void set_root(NodeId x) {
        root_ = x;
        if (x != nil) nodes_[x].parent = nil;
    }

    /// Hangs child (may be nil) under parent on the given side.
    void link(NodeId parent, NodeId child, Side s) {
        (s == Side::left ? nodes_[parent].left : nodes_[parent].right) = child;
        if (child != nil) nodes_[child].parent = parent;
    }

    /// Recomputes every p̄ from the leaves up, O(n).
    void refresh_subtree_weights() {
        if (root_ == nil) return;
        // Reverse preorder visits children before parents.
        std::vector<NodeId> order;
        order.reserve(nodes_.size());
        std::vector<NodeId> stack{root_};
        while (!stack.empty()) {
            const NodeId x = stack.back();
            stack.pop_back();
            order.push_back(x);
            if (nodes_[x].left != nil) stack.push_back(nodes_[x].left);
            if (nodes_[x].right != nil) stack.push_back(nodes_[x].right);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) recompute_subtree_weight(*it);
    }

    /// Rotation rooted at x. A right rotation lifts x's left child into x's
    /// place; a left rotation lifts the right child. In-order is unchanged and
    /// only x gets a new subtree weight; the lifted child inherits x's.
    void rotate(NodeId x, Side direction) {
        if (!contains(x)) throw contract_error("rotate: invalid node " + std::to_string(x));
        const Side up = direction == Side::right ? Side::left : Side::right;
        const Side down = direction;
        const NodeId y = child(x, up);
        if (y == nil) {
            throw contract_error("rotate: node " + std::to_string(x) + " has no " +
                                 (up == Side::left ? "left" : "right") + " child");
        }
        const NodeId inner = child(y, down);
        const NodeId g = nodes_[x].parent;
        const double top = nodes_[x].subtree_weight;

        link(x, inner, up);
        link(y, x, down);
        if (g == nil) {
            set_root(y);
        } else {
            link(g, y, nodes_[g].left == x ? Side::left : Side::right);
        }
        recompute_subtree_weight(x);
        nodes_[y].subtree_weight = top;
    }

    /// Lifts x one level by rotating at its parent. No-op on the root.
    void bump(NodeId x) {
        if (!contains(x)) throw contract_error("bump: invalid node " + std::to_string(x));
        const NodeId p = nodes_[x].parent;
        if (p == nil) return;
        rotate(p, side_of(x) == Side::left ? Side::right : Side::left);
    }

    /// Direct slot access for loaders and corruption tests. Bypasses every invariant.
    Node& unchecked_node(NodeId x) { return nodes_[x]; }

    friend bool operator==(const WeightedTree&, const WeightedTree&) = default;

private:
    void recompute_subtree_weight(NodeId x) {
        Node& n = nodes_[x];
        n.subtree_weight = n.weight + subtree_weight(n.left) + subtree_weight(n.right);
    }

    std::vector<Node> nodes_;
    NodeId root_ = nil;
};

/// σ(x): the other child of x's parent, possibly nil.
inline NodeId sibling(const WeightedTree& t, NodeId x) {
    if (!t.contains(x)) throw contract_error("sibling: invalid node " + std::to_string(x));
    if (t.is_root(x)) throw contract_error("sibling: node " + std::to_string(x) + " is the root");
    const NodeId p = t.parent(x);
    return t.left(p) == x ? t.right(p) : t.left(p);
}

/// λ(x): the child of x on the same side that x hangs from its parent.
inline NodeId like_minded_child(const WeightedTree& t, NodeId x) {
    if (!t.contains(x)) throw contract_error("like_minded_child: invalid node " + std::to_string(x));
    if (t.is_root(x)) throw contract_error("like_minded_child: node " + std::to_string(x) + " is the root");
    return t.child(x, t.side_of(x));
}

/// Root has depth 1, nil has depth 0.
inline std::size_t depth(const WeightedTree& t, NodeId x) {
    std::size_t d = 0;
    for (; x != nil; x = t.parent(x)) ++d;
    return d;
}

/// Expected comparisons per successful lookup: Σ depth(x)·weight(x).
inline double cost(const WeightedTree& t) {
    if (t.root() == nil) return 0.0;
    double total = 0.0;
    std::vector<std::pair<NodeId, std::size_t>> stack{{t.root(), 1}};
    while (!stack.empty()) {
        const auto [x, d] = stack.back();
        stack.pop_back();
        total += static_cast<double>(d) * t.weight(x);
        if (t.left(x) != nil) stack.emplace_back(t.left(x), d + 1);
        if (t.right(x) != nil) stack.emplace_back(t.right(x), d + 1);
    }
    return total;
}

inline constexpr double weight_tolerance = 1e-9;

/// Throws validation_error on the first broken invariant: link symmetry,
/// single root, reachability, in-order key order, subtree weights, total weight.
inline void validate(const WeightedTree& t) {
    const std::size_t n = t.size();
    if (n == 0) throw validation_error(nil, "empty tree");
    const NodeId r = t.root();
    if (!t.contains(r)) throw validation_error(r, "root is not a valid node");
    if (t.parent(r) != nil) throw validation_error(r, "root has a parent");

    auto check_ref = [&](NodeId x, NodeId ref, const char* what) {
        if (ref != nil && !t.contains(ref)) throw validation_error(x, std::string(what) + " out of range");
    };
    for (NodeId x = 0; x < n; ++x) {
        const Node& nd = t.node(x);
        check_ref(x, nd.parent, "parent");
        check_ref(x, nd.left, "left child");
        check_ref(x, nd.right, "right child");
        if (nd.left != nil && t.parent(nd.left) != x) throw validation_error(nd.left, "parent link does not match left child link");
        if (nd.right != nil && t.parent(nd.right) != x) throw validation_error(nd.right, "parent link does not match right child link");
        if (nd.left != nil && nd.left == nd.right) throw validation_error(x, "same node on both sides");
        if (nd.parent != nil && t.left(nd.parent) != x && t.right(nd.parent) != x) {
            throw validation_error(x, "parent does not list it as a child");
        }
        if (x != r && nd.parent == nil) throw validation_error(x, "second root");
        if (!(nd.weight >= 0.0 && nd.weight <= 1.0)) throw validation_error(x, "weight outside [0,1]");
    }

    // In-order walk must visit 0..n-1 in sequence; a cycle or unreachable
    // node breaks the sequence or overruns n.
    NodeId expected = 0;
    std::vector<NodeId> stack;
    NodeId cur = r;
    while (cur != nil || !stack.empty()) {
        while (cur != nil) {
            if (stack.size() > n) throw validation_error(cur, "cycle detected");
            stack.push_back(cur);
            cur = t.left(cur);
        }
        cur = stack.back();
        stack.pop_back();
        if (cur != expected) throw validation_error(cur, "in-order position " + std::to_string(expected) + " out of key order");
        ++expected;
        cur = t.right(cur);
        if (expected > n) throw validation_error(cur, "cycle detected");
    }
    if (expected != n) throw validation_error(expected, "not reachable from root");

    for (NodeId x = 0; x < n; ++x) {
        const double want = t.weight(x) + t.subtree_weight(t.left(x)) + t.subtree_weight(t.right(x));
        if (std::abs(want - t.node(x).subtree_weight) > weight_tolerance) {
            throw validation_error(x, "subtree weight incoherent");
        }
    }
    if (std::abs(t.total_weight() - 1.0) > weight_tolerance) throw validation_error(r, "total weight differs from 1");
}

// Dump format: one node per line, "id parent side weight", parent "-" for the root.

inline void write_dump(std::ostream& out, const WeightedTree& t) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (NodeId x = 0; x < t.size(); ++x) {
        line.str({});
        line << x << ' ';
        if (t.is_root(x)) {
            line << "- root ";
        } else {
            line << t.parent(x) << (t.side_of(x) == Side::left ? " L " : " R ");
        }
        line << t.weight(x) << '\n';
        out << line.str();
    }
}

/// Parses and validates a dump. Blank lines and lines starting with '#' are skipped.
inline WeightedTree read_dump(std::istream& in) {
    struct Row {
        NodeId parent;
        Side side;
        bool root;
        double weight;
        std::size_t line;
    };
    std::vector<std::pair<NodeId, Row>> rows;
    std::string text;
    std::size_t lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos || text[first] == '#') continue;
        std::istringstream ls(text);
        long long id = -1;
        std::string parent, side, weight;
        if (!(ls >> id >> parent >> side >> weight)) throw parse_error(lineno, "expected 'id parent side weight'");
        std::string extra;
        if (ls >> extra) throw parse_error(lineno, "trailing field '" + extra + "'");
        if (id < 0 || id >= static_cast<long long>(nil)) throw parse_error(lineno, "bad node id");
        Row row{nil, Side::left, false, 0.0, lineno};
        try {
            std::size_t used = 0;
            row.weight = std::stod(weight, &used);
            if (used != weight.size()) throw std::invalid_argument(weight);
        } catch (const std::exception&) {
            throw parse_error(lineno, "bad weight '" + weight + "'");
        }
        if (side == "root") {
            if (parent != "-" && parent != "-1") throw parse_error(lineno, "root must have parent '-'");
            row.root = true;
        } else if (side == "L" || side == "R") {
            row.side = side == "L" ? Side::left : Side::right;
            try {
                std::size_t used = 0;
                const unsigned long long p = std::stoull(parent, &used);
                if (used != parent.size() || p >= nil) throw std::invalid_argument(parent);
                row.parent = static_cast<NodeId>(p);
            } catch (const std::exception&) {
                throw parse_error(lineno, "bad parent '" + parent + "'");
            }
        } else {
            throw parse_error(lineno, "side must be L, R or root");
        }
        rows.emplace_back(static_cast<NodeId>(id), row);
    }

    const std::size_t n = rows.size();
    if (n == 0) throw parse_error(lineno, "no nodes");
    std::vector<double> weights(n);
    std::vector<bool> seen(n, false);
    for (const auto& [id, row] : rows) {
        if (id >= n) throw parse_error(row.line, "node id " + std::to_string(id) + " outside 0.." + std::to_string(n - 1));
        if (seen[id]) throw parse_error(row.line, "duplicate node id " + std::to_string(id));
        seen[id] = true;
        weights[id] = row.weight;
    }
    WeightedTree t(std::move(weights));
    bool have_root = false;
    for (const auto& [id, row] : rows) {
        if (row.root) {
            if (have_root) throw parse_error(row.line, "second root");
            have_root = true;
            t.set_root(id);
            continue;
        }
        if (row.parent >= n) throw parse_error(row.line, "parent out of range");
        if (t.child(row.parent, row.side) != nil) throw parse_error(row.line, "parent slot already taken");
        t.link(row.parent, id, row.side);
    }
    if (!have_root) throw parse_error(lineno, "no root");
    t.refresh_subtree_weights();
    validate(t);
    return t;
}

} // namespace bumptree
