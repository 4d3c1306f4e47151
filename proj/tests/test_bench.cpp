#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"

namespace bumptree {
namespace {

using bench::ExperimentConfig;
using bench::ExperimentRow;

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.sizes = {50, 200};
    cfg.samples_per_size = 4;
    cfg.optimal_cap = 100;
    cfg.master_seed = 7;
    return cfg;
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream out;
    bench::write_csv(out, rows);
    return out.str();
}

TEST(RunExperiment, RowsCoverMatrixAndAreSorted) {
    const auto cfg = small_config();
    const auto rows = bench::run_experiment(cfg);
    // baseline + unbalanced for 5 builders, comparative for 3, bumps for 1:
    // 14 rows per cell where optimal runs (n=50), 11 otherwise.
    EXPECT_EQ(rows.size(), 4u * 14 + 4u * 11);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), bench::detail::row_less));
    for (const auto& r : rows) {
        EXPECT_LE(r.cost_after, r.cost_before);
        EXPECT_EQ(r.optimal_cost.has_value(), r.n <= cfg.optimal_cap);
        EXPECT_FALSE(r.wall_ms.has_value());
        if (r.optimal_cost) {
            EXPECT_GE(r.cost_after, *r.optimal_cost * (1 - 1e-9));
        }
        if (r.builder == "optimal") {
            EXPECT_EQ(r.bumps, 0u);
        }
    }
}

TEST(RunExperiment, RowsMatchDirectComputation) {
    const auto cfg = small_config();
    const auto rows = bench::run_experiment(cfg);
    const auto seed = bench::cell_seed(cfg.master_seed, 200, 3);
    const auto p = zipf_profile(200, cfg.alpha, seed);
    auto t = build_splay(p, bench::detail::builder_seed(seed));
    const auto rep = optimize(t);
    const auto it = std::find_if(rows.begin(), rows.end(), [](const ExperimentRow& r) {
        return r.figure_tag == "unbalanced" && r.builder == "splay" && r.n == 200 && r.sample == 3;
    });
    ASSERT_NE(it, rows.end());
    EXPECT_EQ(it->seed, seed);
    EXPECT_EQ(it->cost_before, rep.cost_before);
    EXPECT_EQ(it->cost_after, rep.cost_after);
    EXPECT_EQ(it->bumps, rep.bumps_performed);
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
    auto cfg = small_config();
    cfg.threads = 1;
    const auto one = to_csv(bench::run_experiment(cfg));
    cfg.threads = 3;
    EXPECT_EQ(one, to_csv(bench::run_experiment(cfg)));
}

TEST(RunExperiment, SubsetReproducesRows) {
    auto cfg = small_config();
    const auto full = bench::run_experiment(cfg);
    cfg.sizes = {200};
    const auto subset = bench::run_experiment(cfg);
    for (const auto& r : subset) {
        const auto it = std::find_if(full.begin(), full.end(), [&](const ExperimentRow& f) {
            return f.figure_tag == r.figure_tag && f.builder == r.builder && f.n == r.n && f.sample == r.sample;
        });
        ASSERT_NE(it, full.end());
        EXPECT_EQ(it->cost_after, r.cost_after);
    }
}

TEST(RunExperiment, RejectsBadConfig) {
    auto cfg = small_config();
    cfg.sizes = {200, 50};
    EXPECT_THROW(bench::run_experiment(cfg), argument_error);
    cfg = small_config();
    cfg.samples_per_size = 0;
    EXPECT_THROW(bench::run_experiment(cfg), argument_error);
    cfg = small_config();
    cfg.sizes = {};
    EXPECT_THROW(bench::run_experiment(cfg), argument_error);
    cfg = small_config();
    cfg.alpha = 0;
    EXPECT_THROW(bench::run_experiment(cfg), argument_error);
}

TEST(RunExperiment, TimingIsOptIn) {
    auto cfg = small_config();
    cfg.sizes = {50};
    cfg.record_time = true;
    for (const auto& r : bench::run_experiment(cfg)) ASSERT_TRUE(r.wall_ms.has_value());
}

TEST(Csv, HeaderAndEmptyOptionalFields) {
    ExperimentRow r;
    r.figure_tag = "baseline";
    r.builder = "treap";
    r.n = 3;
    r.sample = 0;
    r.seed = 9;
    r.cost_before = 0.5;
    r.cost_after = 0.25;
    r.bumps = 1;
    EXPECT_EQ(to_csv({r}),
              "figure_tag,builder,n,sample,seed,cost_before,cost_after,bumps,optimal_cost,wall_ms\n"
              "baseline,treap,3,0,9,0.5,0.25,1,,\n");
    r.optimal_cost = 0.125;
    EXPECT_NE(to_csv({r}).find(",1,0.125,\n"), std::string::npos);
}

TEST(Summarize, MeansOfHandFixture) {
    std::vector<ExperimentRow> rows(3);
    const double before[] = {3.0, 4.0, 8.0};
    const double after[] = {2.0, 3.0, 4.0};
    const std::size_t bumps[] = {10, 20, 60};
    for (int i = 0; i < 3; ++i) {
        rows[i].figure_tag = "bumps";
        rows[i].builder = "treap";
        rows[i].n = 100;
        rows[i].sample = i;
        rows[i].cost_before = before[i];
        rows[i].cost_after = after[i];
        rows[i].bumps = bumps[i];
    }
    const auto s = bench::summarize(rows);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].samples, 3u);
    EXPECT_DOUBLE_EQ(s[0].cost_before.mean, 5.0);
    EXPECT_DOUBLE_EQ(s[0].cost_before.min, 3.0);
    EXPECT_DOUBLE_EQ(s[0].cost_before.max, 8.0);
    EXPECT_DOUBLE_EQ(s[0].cost_after.mean, 3.0);
    EXPECT_DOUBLE_EQ(s[0].bumps_per_n.mean, 0.3);
    EXPECT_DOUBLE_EQ(s[0].bumps_per_n.max, 0.6);
    EXPECT_FALSE(s[0].optimal_mean.has_value());
    EXPECT_THROW(bench::summarize({}), argument_error);
}

TEST(LimitedBumps, BudgetBindsOnlyOnLargeTrees) {
    ExperimentConfig cfg;
    cfg.sizes = {300, 20000};
    cfg.samples_per_size = 2;
    cfg.optimal_cap = 0;
    cfg.limited_bumps = 1000;
    const auto rows = bench::limited_bump_comparison(cfg);
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.figure_tag, "limit");
        if (r.builder == bench::limited_builder_name(1000)) {
            EXPECT_LE(r.bumps, 1000u);
        }
    }
    auto find = [&](const std::string& b, std::size_t n, std::size_t s) {
        return *std::find_if(rows.begin(), rows.end(),
                             [&](const ExperimentRow& r) { return r.builder == b && r.n == n && r.sample == s; });
    };
    for (std::size_t s = 0; s < 2; ++s) {
        EXPECT_EQ(find("treap", 300, s).cost_after, find("treap_max1000", 300, s).cost_after);
        EXPECT_GT(find("treap_max1000", 20000, s).cost_after, find("treap", 20000, s).cost_after);
    }
}

TEST(LimitedBumps, RequiresTreap) {
    ExperimentConfig cfg;
    cfg.sizes = {10};
    cfg.builders = {BuilderKind::splay};
    EXPECT_THROW(bench::limited_bump_comparison(cfg), argument_error);
}

} // namespace
} // namespace bumptree
