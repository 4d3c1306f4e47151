#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "bumptree/builders.hpp"
#include "bumptree/errors.hpp"
#include "bumptree/optimal.hpp"
#include "bumptree/optimizer.hpp"
#include "bumptree/oracle.hpp"
#include "bumptree/random.hpp"
#include "bumptree/tree.hpp"
#include "bumptree/weights.hpp"

namespace bumptree::bench {

// Figure tags. One measurement per (builder, n, sample) is written under
// every tag whose figure uses it.
inline constexpr std::string_view tag_baseline = "baseline";
inline constexpr std::string_view tag_unbalanced = "unbalanced";
inline constexpr std::string_view tag_comparative = "comparative";
inline constexpr std::string_view tag_bumps = "bumps";
inline constexpr std::string_view tag_limit = "limit";

inline constexpr std::string_view optimal_builder = "optimal";

struct ExperimentConfig {
    std::vector<std::size_t> sizes{100, 1000, 10000, 100000};
    std::size_t samples_per_size = 50;
    std::vector<BuilderKind> builders{BuilderKind::simple_random, BuilderKind::splay, BuilderKind::treap,
                                      BuilderKind::weight_balanced};
    bool include_optimal = true;
    double alpha = 1.0;
    std::uint64_t master_seed = 42;
    std::optional<std::size_t> max_bumps;
    std::size_t optimal_cap = 10000;
    double epsilon = 1e-12;
    /// Budget of the capped run in limited_bump_comparison.
    std::size_t limited_bumps = 1000;
    std::size_t threads = 1;
    /// wall_ms is left empty unless set, so reruns stay byte-identical.
    bool record_time = false;
};

struct ExperimentRow {
    std::string figure_tag;
    std::string builder;
    std::size_t n = 0;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
    double cost_before = 0.0;
    double cost_after = 0.0;
    std::size_t bumps = 0;
    std::optional<double> optimal_cost;
    std::optional<double> wall_ms;
};

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.sizes.empty()) throw argument_error("bench: no sizes given");
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        if (cfg.sizes[i] == 0) throw argument_error("bench: sizes must be positive");
        if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1]) throw argument_error("bench: sizes must be strictly ascending");
    }
    if (cfg.samples_per_size == 0) throw argument_error("bench: samples must be at least 1");
    if (cfg.builders.empty() && !cfg.include_optimal) throw argument_error("bench: no builders selected");
    if (!(cfg.alpha > 0.0)) throw argument_error("bench: alpha must be positive");
    if (!(cfg.epsilon >= 0.0)) throw argument_error("bench: epsilon must be non-negative");
    if (cfg.threads == 0) throw argument_error("bench: threads must be at least 1");
}

/// Seed of one (size, sample) cell; independent of which other cells run.
inline std::uint64_t cell_seed(std::uint64_t master, std::size_t n, std::size_t sample) {
    return derive_seed(derive_seed(master, n), sample);
}

namespace detail {

// Profile draws from the cell seed itself; builders from this stream.
inline std::uint64_t builder_seed(std::uint64_t cell) { return derive_seed(cell, 0xb1d); }

inline bool audited(std::size_t sample) { return sample % 100 == 0; }

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

inline void audit(const WeightedTree& t, const ExperimentRow& row) {
    if (audited(row.sample)) {
        validate(t);
        const double check = oracle::recompute_cost(t);
        if (std::abs(check - row.cost_after) > 1e-9) {
            throw contract_error("bench audit: cost_after " + std::to_string(row.cost_after) + " disagrees with recomputed " +
                                 std::to_string(check) + " for " + row.builder + " n=" + std::to_string(row.n));
        }
    }
    if (row.optimal_cost && row.cost_after < *row.optimal_cost * (1.0 - 1e-9)) {
        throw contract_error("bench audit: " + row.builder + " beat the optimal cost at n=" + std::to_string(row.n));
    }
}

inline ExperimentRow optimize_and_record(WeightedTree& t, ExperimentRow row, const ExperimentConfig& cfg,
                                         std::optional<std::size_t> budget, Clock::time_point started) {
    OptimizerConfig oc;
    oc.epsilon = cfg.epsilon;
    oc.max_bumps = budget;
    const OptimizeReport rep = optimize(t, oc);
    row.cost_before = rep.cost_before;
    row.cost_after = rep.cost_after;
    row.bumps = rep.bumps_performed;
    if (cfg.record_time) row.wall_ms = elapsed_ms(started);
    audit(t, row);
    return row;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

inline bool row_less(const ExperimentRow& a, const ExperimentRow& b) {
    return std::tie(a.figure_tag, a.builder, a.n, a.sample) < std::tie(b.figure_tag, b.builder, b.n, b.sample);
}

inline std::vector<ExperimentRow> flatten_sorted(std::vector<std::vector<ExperimentRow>>& per_cell) {
    std::vector<ExperimentRow> rows;
    for (auto& cell : per_cell) {
        for (auto& r : cell) rows.push_back(std::move(r));
    }
    std::stable_sort(rows.begin(), rows.end(), row_less);
    return rows;
}

// Tags each builder's measurement feeds.
inline std::vector<std::string_view> tags_for(std::string_view builder) {
    std::vector<std::string_view> tags{tag_baseline, tag_unbalanced};
    if (builder == builder_name(BuilderKind::treap) || builder == builder_name(BuilderKind::weight_balanced) ||
        builder == optimal_builder) {
        tags.push_back(tag_comparative);
    }
    if (builder == builder_name(BuilderKind::treap)) tags.push_back(tag_bumps);
    return tags;
}

inline std::vector<ExperimentRow> run_cell(const ExperimentConfig& cfg, std::size_t n, std::size_t sample) {
    const std::uint64_t seed = cell_seed(cfg.master_seed, n, sample);
    const WeightProfile profile = zipf_profile(n, cfg.alpha, seed);
    const std::uint64_t bseed = builder_seed(seed);
    const bool with_optimal = n <= cfg.optimal_cap;

    ExperimentRow base;
    base.n = n;
    base.sample = sample;
    base.seed = seed;

    std::vector<ExperimentRow> measured;
    if (with_optimal) {
        if (cfg.include_optimal) {
            const auto started = Clock::now();
            OptimalResult opt = optimal_tree(profile, cfg.optimal_cap);
            base.optimal_cost = opt.cost;
            ExperimentRow row = base;
            row.builder = optimal_builder;
            measured.push_back(optimize_and_record(opt.tree, row, cfg, cfg.max_bumps, started));
        } else {
            base.optimal_cost = optimal_cost_only(profile, cfg.optimal_cap);
        }
    }
    for (BuilderKind kind : cfg.builders) {
        const auto started = Clock::now();
        WeightedTree t = build(kind, profile, bseed);
        ExperimentRow row = base;
        row.builder = builder_name(kind);
        measured.push_back(optimize_and_record(t, row, cfg, cfg.max_bumps, started));
    }

    std::vector<ExperimentRow> out;
    for (const auto& m : measured) {
        for (auto tag : tags_for(m.builder)) {
            out.push_back(m);
            out.back().figure_tag = tag;
        }
    }
    return out;
}

} // namespace detail

/// Runs the full (size × sample × builder) matrix. Rows come back sorted by
/// (figure_tag, builder, n, sample) whatever the thread count.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const std::size_t cells = cfg.sizes.size() * cfg.samples_per_size;
    std::vector<std::vector<ExperimentRow>> per_cell(cells);
    detail::parallel_for(cells, cfg.threads, [&](std::size_t i) {
        per_cell[i] = detail::run_cell(cfg, cfg.sizes[i / cfg.samples_per_size], i % cfg.samples_per_size);
    });
    return detail::flatten_sorted(per_cell);
}

inline std::string limited_builder_name(std::size_t budget) {
    return std::string(builder_name(BuilderKind::treap)) + "_max" + std::to_string(budget);
}

/// Optimizes each sample's treap twice, to quiescence and with at most
/// cfg.limited_bumps bumps, under the "limit" tag.
inline std::vector<ExperimentRow> limited_bump_comparison(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (std::find(cfg.builders.begin(), cfg.builders.end(), BuilderKind::treap) == cfg.builders.end()) {
        throw argument_error("limited_bump_comparison: treap builder not selected");
    }
    const std::size_t cells = cfg.sizes.size() * cfg.samples_per_size;
    std::vector<std::vector<ExperimentRow>> per_cell(cells);
    detail::parallel_for(cells, cfg.threads, [&](std::size_t i) {
        const std::size_t n = cfg.sizes[i / cfg.samples_per_size];
        const std::size_t sample = i % cfg.samples_per_size;
        ExperimentRow base;
        base.figure_tag = tag_limit;
        base.n = n;
        base.sample = sample;
        base.seed = cell_seed(cfg.master_seed, n, sample);
        const WeightProfile profile = zipf_profile(n, cfg.alpha, base.seed);
        if (n <= cfg.optimal_cap) base.optimal_cost = optimal_cost_only(profile, cfg.optimal_cap);

        for (const std::optional<std::size_t> budget : {std::optional<std::size_t>{}, std::optional{cfg.limited_bumps}}) {
            const auto started = detail::Clock::now();
            WeightedTree t = build_treap(profile);
            ExperimentRow row = base;
            row.builder = budget ? limited_builder_name(*budget) : std::string(builder_name(BuilderKind::treap));
            per_cell[i].push_back(detail::optimize_and_record(t, row, cfg, budget, started));
        }
    });
    return detail::flatten_sorted(per_cell);
}

// CSV

inline constexpr std::string_view csv_header = "figure_tag,builder,n,sample,seed,cost_before,cost_after,bumps,optimal_cost,wall_ms";

/// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << r.figure_tag << ',' << r.builder << ',' << r.n << ',' << r.sample << ',' << r.seed << ','
            << format_real(r.cost_before) << ',' << format_real(r.cost_after) << ',' << r.bumps << ','
            << (r.optimal_cost ? format_real(*r.optimal_cost) : "") << ','
            << (r.wall_ms ? format_real(*r.wall_ms) : "") << '\n';
    }
}

struct Stat {
    double mean = 0.0, min = 0.0, max = 0.0;
};

struct SummaryRow {
    std::string figure_tag;
    std::string builder;
    std::size_t n = 0;
    std::size_t samples = 0;
    Stat cost_before, cost_after, bumps_per_n;
    std::optional<double> optimal_mean;
};

/// Per (figure_tag, builder, n) mean/min/max of the costs and of bumps/n.
inline std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows) {
    if (rows.empty()) throw argument_error("summarize: no rows");
    struct Acc {
        std::vector<double> before, after, ratio, optimal;
    };
    std::map<std::tuple<std::string, std::string, std::size_t>, Acc> groups;
    for (const auto& r : rows) {
        Acc& a = groups[{r.figure_tag, r.builder, r.n}];
        a.before.push_back(r.cost_before);
        a.after.push_back(r.cost_after);
        a.ratio.push_back(static_cast<double>(r.bumps) / static_cast<double>(r.n));
        if (r.optimal_cost) a.optimal.push_back(*r.optimal_cost);
    }
    auto stat = [](const std::vector<double>& xs) {
        Stat s;
        s.min = *std::min_element(xs.begin(), xs.end());
        s.max = *std::max_element(xs.begin(), xs.end());
        double sum = 0.0;
        for (double x : xs) sum += x;
        s.mean = sum / static_cast<double>(xs.size());
        return s;
    };
    std::vector<SummaryRow> out;
    for (const auto& [key, a] : groups) {
        SummaryRow s;
        std::tie(s.figure_tag, s.builder, s.n) = key;
        s.samples = a.before.size();
        s.cost_before = stat(a.before);
        s.cost_after = stat(a.after);
        s.bumps_per_n = stat(a.ratio);
        if (a.optimal.size() == a.before.size()) s.optimal_mean = stat(a.optimal).mean;
        out.push_back(std::move(s));
    }
    return out;
}

inline constexpr std::string_view summary_header =
    "figure_tag,builder,n,samples,cost_before_mean,cost_before_min,cost_before_max,"
    "cost_after_mean,cost_after_min,cost_after_max,bumps_per_n_mean,bumps_per_n_min,bumps_per_n_max,optimal_cost_mean";

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << summary_header << '\n';
    auto put = [&](const Stat& s) { out << ',' << format_real(s.mean) << ',' << format_real(s.min) << ',' << format_real(s.max); };
    for (const auto& s : rows) {
        out << s.figure_tag << ',' << s.builder << ',' << s.n << ',' << s.samples;
        put(s.cost_before);
        put(s.cost_after);
        put(s.bumps_per_n);
        out << ',' << (s.optimal_mean ? format_real(*s.optimal_mean) : "") << '\n';
    }
}

/// Looks up one group of a summary; nullptr when absent.
inline const SummaryRow* find_summary(const std::vector<SummaryRow>& rows, std::string_view tag, std::string_view builder,
                                      std::size_t n) {
    for (const auto& s : rows) {
        if (s.figure_tag == tag && s.builder == builder && s.n == n) return &s;
    }
    return nullptr;
}

} // namespace bumptree::bench
