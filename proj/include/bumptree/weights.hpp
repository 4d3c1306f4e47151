#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bumptree/errors.hpp"
#include "bumptree/random.hpp"
#include "bumptree/tree.hpp"

namespace bumptree {

/// Access probability per key rank, summing to one.
struct WeightProfile {
    std::vector<double> probs;
    std::uint64_t seed = 0;
    double alpha = 0.0;

    std::size_t size() const noexcept { return probs.size(); }
};

namespace detail {

// Neumaier summation; keeps normalized profiles within 1e-12 of unit mass at large n.
inline double accurate_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

inline void normalize(std::vector<double>& ws) {
    const double total = accurate_sum(ws);
    for (double& w : ws) w /= total;
}

} // namespace detail

/// Zipf weights: popularity rank r (1-based) gets r^-alpha. Ranks land on keys
/// through a uniform random permutation drawn from seed.
inline WeightProfile zipf_profile(std::size_t n, double alpha, std::uint64_t seed) {
    if (n == 0) throw argument_error("zipf_profile: n must be positive");
    if (!(alpha > 0.0)) throw argument_error("zipf_profile: alpha must be positive");
    std::vector<double> by_rank(n);
    for (std::size_t r = 0; r < n; ++r) by_rank[r] = std::pow(static_cast<double>(r + 1), -alpha);

    std::vector<NodeId> key_of_rank(n);
    std::iota(key_of_rank.begin(), key_of_rank.end(), NodeId{0});
    Rng rng(seed);
    shuffle(std::span<NodeId>(key_of_rank), rng);

    WeightProfile p{std::vector<double>(n), seed, alpha};
    for (std::size_t r = 0; r < n; ++r) p.probs[key_of_rank[r]] = by_rank[r];
    detail::normalize(p.probs);
    return p;
}

/// Zipf weights with rank r on key r-1 (no shuffling). Mostly for fixtures.
inline WeightProfile zipf_profile_sorted(std::size_t n, double alpha) {
    if (n == 0) throw argument_error("zipf_profile_sorted: n must be positive");
    if (!(alpha > 0.0)) throw argument_error("zipf_profile_sorted: alpha must be positive");
    WeightProfile p{std::vector<double>(n), 0, alpha};
    for (std::size_t r = 0; r < n; ++r) p.probs[r] = std::pow(static_cast<double>(r + 1), -alpha);
    detail::normalize(p.probs);
    return p;
}

inline WeightProfile uniform_profile(std::size_t n) {
    if (n == 0) throw argument_error("uniform_profile: n must be positive");
    return WeightProfile{std::vector<double>(n, 1.0 / static_cast<double>(n)), 0, 0.0};
}

/// Normalizes arbitrary positive weights into a profile.
inline WeightProfile profile_from_weights(std::vector<double> ws) {
    if (ws.empty()) throw argument_error("profile_from_weights: no weights");
    for (double w : ws) {
        if (!(w > 0.0) || !std::isfinite(w)) throw argument_error("profile_from_weights: weights must be positive and finite");
    }
    detail::normalize(ws);
    return WeightProfile{std::move(ws), 0, 0.0};
}

/// Shannon entropy in bits.
inline double entropy(const WeightProfile& p) {
    double h = 0.0;
    for (double q : p.probs) {
        if (q > 0.0) h -= q * std::log2(q);
    }
    return h;
}

struct CostBounds {
    double lower;
    double upper;
};

/// Entropy bounds on the cost of weight-balanced and optimal trees. Past
/// H = 14.5 the sharper lower bound H + H·log H − (H+1)·log(H+1) is used
/// when it is larger.
inline CostBounds mehlhorn_bounds(double h) {
    if (!(h >= 0.0)) throw argument_error("mehlhorn_bounds: entropy must be non-negative");
    double lower = h / std::log2(3.0);
    const double upper = 2.0 + h / (1.0 - std::log2(std::sqrt(5.0) - 1.0));
    if (h >= 14.5) {
        const double refined = h + h * std::log2(h) - (h + 1.0) * std::log2(h + 1.0);
        lower = std::max(lower, refined);
    }
    return {lower, upper};
}

/// Draws keys with probability proportional to a profile by inverse CDF.
class QuerySampler {
public:
    QuerySampler(const WeightProfile& p, std::uint64_t seed) : cumulative_(p.size()), rng_(seed) {
        if (p.size() == 0) throw argument_error("QuerySampler: empty profile");
        std::partial_sum(p.probs.begin(), p.probs.end(), cumulative_.begin());
    }

    NodeId operator()() {
        const double u = uniform_unit(rng_) * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const auto k = static_cast<std::size_t>(it - cumulative_.begin());
        return static_cast<NodeId>(std::min(k, cumulative_.size() - 1));
    }

    std::span<const double> cumulative() const noexcept { return cumulative_; }

private:
    std::vector<double> cumulative_;
    Rng rng_;
};

inline NodeId sample_query(QuerySampler& s) { return s(); }

// Profile dump: "key probability" per line.

inline void write_profile(std::ostream& out, const WeightProfile& p) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (std::size_t k = 0; k < p.size(); ++k) {
        line.str({});
        line << k << ' ' << p.probs[k] << '\n';
        out << line.str();
    }
}

/// Reads a profile dump. Keys must cover 0..n-1 exactly once; probabilities
/// are renormalized if they drift from one by more than 1e-12.
inline WeightProfile read_profile(std::istream& in) {
    std::vector<std::pair<long long, double>> rows;
    std::vector<std::size_t> lines;
    std::string text;
    std::size_t lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos || text[first] == '#') continue;
        std::istringstream ls(text);
        long long key = -1;
        double prob = 0.0;
        std::string extra;
        if (!(ls >> key >> prob) || (ls >> extra)) throw parse_error(lineno, "expected 'key probability'");
        if (!(prob > 0.0) || !std::isfinite(prob)) throw parse_error(lineno, "probability must be positive");
        rows.emplace_back(key, prob);
        lines.push_back(lineno);
    }
    if (rows.empty()) throw parse_error(lineno, "no keys");
    std::vector<double> probs(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [key, prob] = rows[i];
        if (key < 0 || static_cast<std::size_t>(key) >= rows.size()) throw parse_error(lines[i], "key out of range");
        if (probs[key] != 0.0) throw parse_error(lines[i], "duplicate key");
        probs[key] = prob;
    }
    if (std::abs(detail::accurate_sum(probs) - 1.0) > 1e-12) detail::normalize(probs);
    return WeightProfile{std::move(probs), 0, 0.0};
}

} // namespace bumptree
