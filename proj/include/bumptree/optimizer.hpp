#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "bumptree/errors.hpp"
#include "bumptree/tree.hpp"

namespace bumptree {

/// Exact cost decrease from bumping x:
///   μ(x) = p(x) + p̄(λ(x)) − p(π(x)) − p̄(σ(x)).
/// Zero for the root.
inline double merit(const WeightedTree& t, NodeId x) {
    const NodeId p = t.parent(x);
    if (p == nil) return 0.0;
    const bool is_left = t.left(p) == x;
    const NodeId like_minded = is_left ? t.left(x) : t.right(x);
    const NodeId sib = is_left ? t.right(p) : t.left(p);
    return t.weight(x) + t.subtree_weight(like_minded) - t.weight(p) - t.subtree_weight(sib);
}

/// Merits of every node from the cached subtree weights, O(n).
inline std::vector<double> merit_all(const WeightedTree& t) {
    std::vector<double> out(t.size());
    for (NodeId x = 0; x < t.size(); ++x) out[x] = merit(t, x);
    return out;
}

/// Max-merit priority queue with lazy deletion. Each node has a stamp that
/// advances whenever its merit is recomputed; heap entries carrying an older
/// stamp are stale and dropped when they surface.
class MeritQueue {
public:
    struct Entry {
        double merit;
        NodeId node;
        std::uint32_t stamp;
    };

    MeritQueue(const WeightedTree& t, double epsilon)
        : epsilon_(epsilon), merits_(merit_all(t)), stamps_(t.size(), 0) {
        for (NodeId x = 0; x < t.size(); ++x) {
            if (merits_[x] > epsilon_) heap_.push_back({merits_[x], x, 0});
        }
        std::make_heap(heap_.begin(), heap_.end(), lower_priority);
    }

    double epsilon() const noexcept { return epsilon_; }

    /// Last merit computed for x.
    double cached_merit(NodeId x) const { return merits_[x]; }

    /// Recomputes x's merit, invalidating its old entries, and queues it if positive.
    void refresh(const WeightedTree& t, NodeId x) {
        merits_[x] = merit(t, x);
        ++stamps_[x];
        if (merits_[x] > epsilon_) push({merits_[x], x, stamps_[x]});
    }

    /// Highest valid entry without removing it; drops stale entries on the way.
    std::optional<Entry> top() {
        discard_stale();
        if (heap_.empty()) return std::nullopt;
        return heap_.front();
    }

    std::optional<Entry> pop() {
        discard_stale();
        if (heap_.empty()) return std::nullopt;
        std::pop_heap(heap_.begin(), heap_.end(), lower_priority);
        const Entry e = heap_.back();
        heap_.pop_back();
        ++stamps_[e.node];
        return e;
    }

    bool has_valid_entry(NodeId x) const {
        return std::any_of(heap_.begin(), heap_.end(), [&](const Entry& e) { return e.node == x && is_valid(e); });
    }

    /// Heap size including stale entries.
    std::size_t raw_size() const noexcept { return heap_.size(); }

private:
    // Higher merit first; among equal merits the lower id.
    static bool lower_priority(const Entry& a, const Entry& b) {
        if (a.merit != b.merit) return a.merit < b.merit;
        return a.node > b.node;
    }

    bool is_valid(const Entry& e) const { return e.stamp == stamps_[e.node]; }

    void push(const Entry& e) {
        heap_.push_back(e);
        std::push_heap(heap_.begin(), heap_.end(), lower_priority);
    }

    void discard_stale() {
        while (!heap_.empty() && !is_valid(heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), lower_priority);
            heap_.pop_back();
        }
    }

    double epsilon_;
    std::vector<double> merits_;
    std::vector<std::uint32_t> stamps_;
    std::vector<Entry> heap_;
};

/// Optional veto on individual bumps (e.g. a depth limit). A vetoed node
/// leaves the queue until one of its neighbours is bumped.
using BumpFilter = std::function<bool(const WeightedTree&, NodeId)>;

struct OptimizerConfig {
    double epsilon = 1e-12;
    std::optional<std::size_t> max_bumps;
    bool record_trace = false;
    BumpFilter admit;
};

enum class Termination { quiescent, budget_exhausted };

constexpr std::string_view termination_name(Termination t) noexcept {
    return t == Termination::quiescent ? "quiescent" : "budget_exhausted";
}

struct OptimizeReport {
    std::size_t bumps_performed = 0;
    double cost_before = 0.0;
    double cost_after = 0.0;
    Termination terminated = Termination::quiescent;
    std::vector<NodeId> bumped_nodes;
};

/// Bumps x and refreshes the five nodes whose merit can change: x, its former
/// parent, and the roots of the three subtrees that move (the like-minded
/// child, the inner child that changes parent, and the former sibling).
inline void bump_and_refresh(WeightedTree& t, MeritQueue& q, NodeId x) {
    const NodeId p = t.parent(x);
    if (p == nil) return;
    const bool is_left = t.left(p) == x;
    const std::array<NodeId, 5> touched{
        x, p, is_left ? t.left(x) : t.right(x), is_left ? t.right(x) : t.left(x), is_left ? t.right(p) : t.left(p)};
    t.bump(x);
    for (NodeId y : touched) {
        if (y != nil) q.refresh(t, y);
    }
}

/// One hill-climbing step: bumps the admissible node of greatest merit if
/// that merit exceeds epsilon. Returns the bumped node.
inline std::optional<NodeId> optimize_step(WeightedTree& t, MeritQueue& q, double epsilon,
                                           const BumpFilter& admit = {}) {
    while (auto e = q.pop()) {
        if (!(e->merit > epsilon)) return std::nullopt;
        if (admit && !admit(t, e->node)) continue;
        bump_and_refresh(t, q, e->node);
        return e->node;
    }
    return std::nullopt;
}

/// Bumps maximal-merit nodes until none has merit above epsilon or the bump
/// budget runs out.
inline OptimizeReport optimize(WeightedTree& t, const OptimizerConfig& cfg = {}) {
    if (!(cfg.epsilon >= 0.0)) throw argument_error("optimize: epsilon must be non-negative");
    OptimizeReport report;
    report.cost_before = cost(t);
    MeritQueue q(t, cfg.epsilon);
    for (;;) {
        if (cfg.max_bumps && report.bumps_performed >= *cfg.max_bumps) {
            const auto next = q.top();
            report.terminated = next && next->merit > cfg.epsilon ? Termination::budget_exhausted : Termination::quiescent;
            break;
        }
        const auto bumped = optimize_step(t, q, cfg.epsilon, cfg.admit);
        if (!bumped) {
            report.terminated = Termination::quiescent;
            break;
        }
        ++report.bumps_performed;
        if (cfg.record_trace) report.bumped_nodes.push_back(*bumped);
    }
    report.cost_after = cost(t);
    return report;
}

} // namespace bumptree
