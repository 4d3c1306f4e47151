// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <bumptree/bumptree.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

using namespace bumptree;

namespace {

namespace tol {
constexpr double merit_identity = 1e-12;
constexpr double merit_runtime_s = 10.0;
constexpr std::size_t rotation_sequences = 10000;
constexpr std::size_t rotation_max_n = 256;
constexpr std::size_t bumps_per_sequence = 24;
constexpr double rotation_runtime_s = 30.0;
constexpr std::size_t dp_max_n = 9;
constexpr std::size_t dp_profiles = 50;
constexpr double dp_runtime_s = 60.0;
constexpr double fixture_abs = 1e-12;
constexpr double treap_over_optimal_max = 1.03;
constexpr double wb_over_optimal_min = 1.04;
constexpr double bumps_mean_lo = 0.15;
constexpr double bumps_mean_hi = 0.27;
constexpr double bumps_max = 0.5;
constexpr double wb_improvement_max = 0.02;
constexpr double big_treap_runtime_s = 60.0;
constexpr double time_ratio_max = 15.0;
constexpr std::size_t timing_repeats = 5;
} // namespace tol

const std::vector<std::size_t> bench_sizes{1000, 10000};
constexpr std::size_t bench_samples = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(const char* name, const Outcome& o) {
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome merit_identity() {
    const auto t0 = Clock::now();
    Rng rng(20240601);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto t = testing::random_tree(2 + uniform_below(rng, 63), rng);
        const double base = oracle::recompute_cost(t);
        for (NodeId x = 0; x < t.size(); ++x) {
            auto bumped = t;
            bumped.bump(x);
            worst = std::max(worst, std::abs(merit(t, x) - (base - oracle::recompute_cost(bumped))));
        }
    }
    const double s = seconds_since(t0);
    return {worst <= tol::merit_identity && s < tol::merit_runtime_s,
            fmt("max |merit - cost delta| = %.3g (tol %.0e), %.2f s", worst, tol::merit_identity, s)};
}

Outcome rotation_soundness() {
    const auto t0 = Clock::now();
    Rng rng(777);
    std::size_t mutations = 0;
    try {
        for (std::size_t s = 0; s < tol::rotation_sequences; ++s) {
            auto t = testing::random_tree(1 + uniform_below(rng, tol::rotation_max_n), rng);
            for (std::size_t k = 0; k < tol::bumps_per_sequence; ++k) {
                t.bump(static_cast<NodeId>(uniform_below(rng, t.size())));
                validate(t);
                ++mutations;
            }
        }
    } catch (const std::exception& e) {
        return {false, std::string("validate failed: ") + e.what()};
    }
    const double s = seconds_since(t0);
    return {s < tol::rotation_runtime_s, fmt("%zu sequences, %zu validated bumps, %.2f s", tol::rotation_sequences, mutations, s)};
}

bool roots_monotone(const DpTables& tables) {
    const std::size_t n = tables.root.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (tables.root(i, j - 1) > tables.root(i, j) || tables.root(i, j) > tables.root(i + 1, j)) return false;
        }
    }
    return true;
}

Outcome dp_matches_exhaustive() {
    const auto t0 = Clock::now();
    std::size_t mismatches = 0, checked = 0;
    bool monotone = true;
    try {
        for (std::size_t n = 1; n <= tol::dp_max_n; ++n) {
            for (std::size_t k = 0; k < tol::dp_profiles; ++k) {
                const auto p = zipf_profile(n, 1.0, derive_seed(n, k));
                const auto tables = optimal_tables(p);
                monotone = monotone && roots_monotone(tables);
                const double dp = tables.cost(0, n - 1);
                const auto best = optimal_tree(p);
                if (dp != oracle::exhaustive_optimal(p).cost || best.cost != dp || cost(best.tree) > dp + 1e-12) ++mismatches;
                ++checked;
            }
        }
    } catch (const contract_error& e) {
        return {false, std::string("monotonicity assertion fired: ") + e.what()};
    }
    const double s = seconds_since(t0);
    return {mismatches == 0 && monotone && s < tol::dp_runtime_s,
            fmt("%zu profiles, %zu mismatches, roots monotone: %s, %.2f s", checked, mismatches, monotone ? "yes" : "no", s)};
}

Outcome local_optimum_fixture() {
    auto t = testing::local_optimum_fixture();
    const auto rep = optimize(t);
    const double best = oracle::exhaustive_optimal(profile_from_weights({0.49, 0.02, 0.49})).cost;
    const bool ok = rep.bumps_performed == 0 && std::abs(rep.cost_after - 1.98) <= tol::fixture_abs &&
                    std::abs(best - 1.53) <= tol::fixture_abs;
    return {ok, fmt("bumps %zu, cost %.15g, exhaustive optimum %.15g", rep.bumps_performed, rep.cost_after, best)};
}

const bench::SummaryRow& group(const std::vector<bench::SummaryRow>& s, std::string_view tag, std::string_view builder,
                               std::size_t n) {
    const auto* row = bench::find_summary(s, tag, builder, n);
    if (!row) throw std::runtime_error("missing summary group");
    return *row;
}

Outcome baseline_ordering(const std::vector<bench::SummaryRow>& s) {
    bool ok = true;
    std::string detail;
    for (std::size_t n : bench_sizes) {
        const double simple = group(s, bench::tag_baseline, "simple", n).cost_before.mean;
        const double splay = group(s, bench::tag_baseline, "splay", n).cost_before.mean;
        const double treap = group(s, bench::tag_baseline, "treap", n).cost_before.mean;
        const double wb = group(s, bench::tag_baseline, "wb", n).cost_before.mean;
        ok = ok && simple > splay && splay > treap && treap > wb;
        detail += fmt("n=%zu simple %.4f splay %.4f treap %.4f wb %.4f; ", n, simple, splay, treap, wb);
    }
    return {ok, detail};
}

Outcome near_optimality(const std::vector<bench::SummaryRow>& s) {
    bool ok = true;
    std::string detail;
    for (std::size_t n : bench_sizes) {
        const auto& treap = group(s, bench::tag_comparative, "treap", n);
        const auto& wb = group(s, bench::tag_comparative, "wb", n);
        const double opt = group(s, bench::tag_comparative, bench::optimal_builder, n).cost_before.mean;
        const double tr = treap.cost_after.mean / opt;
        const double wr = wb.cost_before.mean / opt;
        ok = ok && tr <= tol::treap_over_optimal_max && wr >= tol::wb_over_optimal_min;
        detail += fmt("n=%zu treap*/opt %.4f (<= %.2f) wb/opt %.4f (>= %.2f); ", n, tr, tol::treap_over_optimal_max, wr,
                      tol::wb_over_optimal_min);
    }
    return {ok, detail};
}

Outcome bump_scaling(const std::vector<bench::SummaryRow>& s) {
    const auto& b = group(s, bench::tag_bumps, "treap", 10000);
    const bool ok = b.bumps_per_n.mean >= tol::bumps_mean_lo && b.bumps_per_n.mean <= tol::bumps_mean_hi &&
                    b.bumps_per_n.max <= tol::bumps_max;
    return {ok, fmt("n=10000 bumps/n mean %.4f in [%.2f, %.2f], max %.4f (<= %.1f)", b.bumps_per_n.mean, tol::bumps_mean_lo,
                    tol::bumps_mean_hi, b.bumps_per_n.max, tol::bumps_max)};
}

double mean_relative_improvement(const std::vector<bench::ExperimentRow>& rows, std::string_view builder, std::size_t n) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows) {
        if (r.figure_tag == bench::tag_unbalanced && r.builder == builder && r.n == n) {
            sum += (r.cost_before - r.cost_after) / r.cost_before;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

Outcome wb_inertness(const std::vector<bench::ExperimentRow>& rows) {
    const double wb = mean_relative_improvement(rows, "wb", 10000);
    const double splay = mean_relative_improvement(rows, "splay", 10000);
    return {wb < tol::wb_improvement_max && splay > wb,
            fmt("n=10000 improvement wb %.4f (< %.2f), splay %.4f", wb, tol::wb_improvement_max, splay)};
}

double time_treap(std::size_t n) {
    const auto p = zipf_profile(n, 1.0, 99);
    std::vector<double> runs;
    for (std::size_t i = 0; i < tol::timing_repeats; ++i) {
        const auto t0 = Clock::now();
        auto t = build_treap(p);
        optimize(t);
        runs.push_back(seconds_since(t0));
    }
    std::sort(runs.begin(), runs.end());
    return runs[runs.size() / 2];
}

Outcome complexity() {
    const double small = time_treap(100000);
    const double big = time_treap(1000000);
    const double ratio = big / small;
    return {big < tol::big_treap_runtime_s && ratio < tol::time_ratio_max,
            fmt("n=1e6 %.3f s (< %.0f), n=1e5 %.4f s, ratio %.2f (< %.0f)", big, tol::big_treap_runtime_s, small, ratio,
                tol::time_ratio_max)};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
    bench::ExperimentConfig cfg;
    cfg.sizes = {64, 500, 2000};
    cfg.samples_per_size = 6;
    cfg.optimal_cap = 500;
    cfg.master_seed = 11;
    cfg.threads = 1;
    std::ostringstream one, four;
    bench::write_csv(one, bench::run_experiment(cfg));
    cfg.threads = 4;
    bench::write_csv(four, bench::run_experiment(cfg));
    const bool library_same = one.str() == four.str();

    const auto dir = std::filesystem::temp_directory_path() / "bumptree_acceptance";
    std::filesystem::create_directories(dir);
    std::vector<std::string> outputs;
    bool cli_ok = true;
    for (int threads : {1, 3}) {
        const auto out = dir / ("bench_t" + std::to_string(threads) + ".csv");
        const std::string cmd = std::string("\"") + BUMPTREE_CLI_PATH +
                                "\" bench --sizes 64,500 --samples 5 --seed 11 --optimal-cap 500 --threads " +
                                std::to_string(threads) + " --out \"" + out.string() + "\" > /dev/null 2>&1";
        cli_ok = cli_ok && std::system(cmd.c_str()) == 0;
        outputs.push_back(slurp(out));
    }
    const bool cli_same = cli_ok && !outputs[0].empty() && outputs[0] == outputs[1];
    return {library_same && cli_same, fmt("library 1 vs 4 threads identical: %s; CLI 1 vs 3 threads identical: %s (%zu bytes)",
                                          library_same ? "yes" : "no", cli_same ? "yes" : "no", outputs[0].size())};
}

void run(const char* name, const std::function<Outcome()>& check) {
    try {
        report(name, check());
    } catch (const std::exception& e) {
        report(name, {false, std::string("exception: ") + e.what()});
    }
}

} // namespace

int main() {
    run("merit identity", merit_identity);
    run("rotation soundness", rotation_soundness);
    run("optimal DP equals exhaustive search", dp_matches_exhaustive);
    run("local-optimum fixture", local_optimum_fixture);

    bench::ExperimentConfig cfg;
    cfg.sizes = bench_sizes;
    cfg.samples_per_size = bench_samples;
    cfg.optimal_cap = 10000;
    cfg.master_seed = 42;
    std::vector<bench::ExperimentRow> rows;
    std::vector<bench::SummaryRow> summary;
    const auto t0 = Clock::now();
    try {
        rows = bench::run_experiment(cfg);
        summary = bench::summarize(rows);
        std::printf("(benchmark matrix: %zu rows in %.1f s)\n", rows.size(), seconds_since(t0));
    } catch (const std::exception& e) {
        std::printf("(benchmark matrix failed: %s)\n", e.what());
    }
    run("baseline ordering", [&] { return baseline_ordering(summary); });
    run("near-optimality of optimized treaps", [&] { return near_optimality(summary); });
    run("bump-count scaling", [&] { return bump_scaling(summary); });
    run("weight-balanced trees nearly inert", [&] { return wb_inertness(rows); });

    run("complexity", complexity);
    run("determinism across thread counts", determinism);

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
