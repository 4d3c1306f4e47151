// Command-line front end: build trees, optimize dumps, run the oracle and the
// benchmark matrix.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bumptree/bumptree.hpp"

namespace bt = bumptree;

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::string fmt(double v) { return bt::bench::format_real(v); }

// ---- build / profile --------------------------------------------------------

struct ProfileArgs {
    std::size_t n = 100;
    double alpha = 1.0;
    std::uint64_t seed = 42;
    std::string profile_in;
};

void add_profile_options(CLI::App* cmd, ProfileArgs& a) {
    cmd->add_option("--n", a.n, "Number of keys")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", a.alpha, "Zipf exponent");
    cmd->add_option("--seed", a.seed, "Seed for rank placement and builders");
    cmd->add_option("--profile", a.profile_in, "Read weights from a profile dump instead of generating them");
}

bt::WeightProfile make_profile(const ProfileArgs& a) {
    if (!a.profile_in.empty()) {
        auto in = open_in(a.profile_in);
        return bt::read_profile(in);
    }
    return bt::zipf_profile(a.n, a.alpha, a.seed);
}

int run_build(const ProfileArgs& pa, const std::string& builder, const std::string& output, std::size_t cap) {
    const auto profile = make_profile(pa);
    bt::WeightedTree t;
    if (builder == "optimal") {
        t = bt::optimal_tree(profile, cap).tree;
    } else if (auto kind = bt::parse_builder(builder)) {
        t = bt::build(*kind, profile, pa.seed);
    } else {
        throw bt::argument_error("unknown builder '" + builder + "' (simple, treap, wb, splay, optimal)");
    }
    auto out = open_out(output);
    bt::write_dump(out, t);
    std::cout << "cost," << fmt(bt::cost(t)) << '\n';
    return 0;
}

// ---- optimize ---------------------------------------------------------------

int run_optimize(const std::string& input, const std::string& output, std::optional<std::size_t> max_bumps,
                 double epsilon, bool header) {
    auto in = open_in(input);
    bt::WeightedTree t = bt::read_dump(in);
    bt::OptimizerConfig cfg;
    cfg.epsilon = epsilon;
    cfg.max_bumps = max_bumps;
    const auto rep = bt::optimize(t, cfg);
    bt::validate(t);
    auto out = open_out(output);
    bt::write_dump(out, t);
    if (header) std::cout << "n,bumps,cost_before,cost_after,terminated\n";
    std::cout << t.size() << ',' << rep.bumps_performed << ',' << fmt(rep.cost_before) << ',' << fmt(rep.cost_after)
              << ',' << bt::termination_name(rep.terminated) << '\n';
    return 0;
}

// ---- oracle -----------------------------------------------------------------

int run_oracle(std::size_t n, std::uint64_t seed, double alpha) {
    const auto profile = bt::zipf_profile(n, alpha, seed);
    const auto exhaustive = bt::oracle::exhaustive_optimal(profile);
    const auto dp = bt::optimal_tree(profile);
    std::cout << "kind,cost,cost_after_optimize,bumps\n";
    std::cout << "exhaustive," << fmt(exhaustive.cost) << ",," << exhaustive.shapes << '\n';
    std::cout << "optimal," << fmt(dp.cost) << ",,\n";
    for (auto kind : {bt::BuilderKind::simple_random, bt::BuilderKind::splay, bt::BuilderKind::treap,
                      bt::BuilderKind::weight_balanced}) {
        bt::WeightedTree t = bt::build(kind, profile, seed);
        const auto rep = bt::optimize(t);
        std::cout << bt::builder_name(kind) << ',' << fmt(rep.cost_before) << ',' << fmt(rep.cost_after) << ','
                  << rep.bumps_performed << '\n';
    }
    return 0;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
    std::vector<std::size_t> sizes{100, 1000, 10000, 100000};
    std::size_t samples = 50;
    double alpha = 1.0;
    std::uint64_t seed = 42;
    std::string out = "results.csv";
    std::string summary;
    std::size_t optimal_cap = 10000;
    std::optional<std::size_t> max_bumps;
    std::vector<std::string> builders{"simple", "splay", "treap", "wb", "optimal"};
    std::size_t threads = 1;
    double epsilon = 1e-12;
    bool limit = false;
    std::size_t limit_bumps = 1000;
    bool timing = false;
    std::string config;
};

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& v) {
    T out{};
    if (!CLI::detail::lexical_conversion<T, T>({v}, out)) throw bt::argument_error("config: bad value for " + key + ": " + v);
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw bt::argument_error("config: bad boolean for " + key + ": " + v);
}

/// Applies `key = value` lines from a config file to every setting whose flag
/// was not given on the command line.
void apply_config(CLI::App* cmd, BenchArgs& a) {
    auto in = open_in(a.config);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw bt::parse_error(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        CLI::Option* opt = nullptr;
        try {
            opt = cmd->get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw bt::parse_error(lineno, "unknown setting '" + key + "'");
        }
        if (opt->count() > 0) continue;
        if (key == "sizes") {
            a.sizes.clear();
            for (const auto& s : split_list(value)) a.sizes.push_back(parse_value<std::size_t>(key, s));
        } else if (key == "samples") a.samples = parse_value<std::size_t>(key, value);
        else if (key == "alpha") a.alpha = parse_value<double>(key, value);
        else if (key == "seed") a.seed = parse_value<std::uint64_t>(key, value);
        else if (key == "out") a.out = value;
        else if (key == "summary") a.summary = value;
        else if (key == "optimal-cap") a.optimal_cap = parse_value<std::size_t>(key, value);
        else if (key == "max-bumps") a.max_bumps = parse_value<std::size_t>(key, value);
        else if (key == "builders") a.builders = split_list(value);
        else if (key == "threads") a.threads = parse_value<std::size_t>(key, value);
        else if (key == "epsilon") a.epsilon = parse_value<double>(key, value);
        else if (key == "limit") a.limit = parse_bool(key, value);
        else if (key == "limit-bumps") a.limit_bumps = parse_value<std::size_t>(key, value);
        else if (key == "timing") a.timing = parse_bool(key, value);
        else throw bt::parse_error(lineno, "setting '" + key + "' cannot come from a config file");
    }
}

bt::bench::ExperimentConfig to_experiment(const BenchArgs& a) {
    bt::bench::ExperimentConfig cfg;
    cfg.sizes = a.sizes;
    cfg.samples_per_size = a.samples;
    cfg.alpha = a.alpha;
    cfg.master_seed = a.seed;
    cfg.optimal_cap = a.optimal_cap;
    cfg.max_bumps = a.max_bumps;
    cfg.threads = a.threads;
    cfg.epsilon = a.epsilon;
    cfg.limited_bumps = a.limit_bumps;
    cfg.record_time = a.timing;
    cfg.include_optimal = false;
    cfg.builders.clear();
    for (const auto& name : a.builders) {
        if (name == "optimal") {
            cfg.include_optimal = true;
        } else if (auto kind = bt::parse_builder(name)) {
            cfg.builders.push_back(*kind);
        } else {
            throw bt::argument_error("unknown builder '" + name + "'");
        }
    }
    return cfg;
}

int run_bench(const BenchArgs& a) {
    const auto cfg = to_experiment(a);
    auto rows = bt::bench::run_experiment(cfg);
    if (a.limit) {
        auto limited = bt::bench::limited_bump_comparison(cfg);
        rows.insert(rows.end(), limited.begin(), limited.end());
    }
    {
        auto out = open_out(a.out);
        bt::bench::write_csv(out, rows);
    }
    if (!a.summary.empty()) {
        auto out = open_out(a.summary);
        bt::bench::write_summary_csv(out, bt::bench::summarize(rows));
    }
    std::cerr << "wrote " << rows.size() << " rows to " << a.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted binary search trees: baselines, exact optima and bump hill climbing"};
    app.require_subcommand(1);

    ProfileArgs profile_args;
    std::string output;

    auto* profile = app.add_subcommand("profile", "Write a Zipf weight profile");
    add_profile_options(profile, profile_args);
    profile->add_option("--output", output, "Profile dump path")->required();

    auto* build = app.add_subcommand("build", "Build a tree and write it as a dump");
    std::string builder = "treap";
    std::size_t cap = bt::default_optimal_cap;
    add_profile_options(build, profile_args);
    build->add_option("--builder", builder, "simple, treap, wb, splay or optimal");
    build->add_option("--optimal-cap", cap, "Largest n accepted by the optimal builder");
    build->add_option("--output", output, "Tree dump path")->required();

    auto* optimize = app.add_subcommand("optimize", "Bump a dumped tree to quiescence or a budget");
    std::string input;
    std::optional<std::size_t> max_bumps;
    double epsilon = 1e-12;
    bool header = false;
    optimize->add_option("--input", input, "Tree dump to read")->required();
    optimize->add_option("--output", output, "Tree dump to write")->required();
    optimize->add_option("--max-bumps", max_bumps, "Stop after this many bumps");
    optimize->add_option("--epsilon", epsilon, "Smallest merit worth a bump")->check(CLI::NonNegativeNumber);
    optimize->add_flag("--header", header, "Print a CSV header before the report row");

    auto* oracle = app.add_subcommand("oracle", "Compare every builder with exhaustive and DP optima");
    std::size_t oracle_n = 8;
    std::uint64_t oracle_seed = 42;
    double oracle_alpha = 1.0;
    oracle->add_option("--n", oracle_n, "Number of keys (at most 12)")->check(CLI::Range(1, 12));
    oracle->add_option("--seed", oracle_seed);
    oracle->add_option("--alpha", oracle_alpha);

    auto* bench = app.add_subcommand("bench", "Run the seeded experiment matrix and write CSV");
    BenchArgs ba;
    ba.threads = std::max(1u, std::thread::hardware_concurrency());
    bench->add_option("--sizes", ba.sizes, "Tree sizes, ascending")->delimiter(',');
    bench->add_option("--samples", ba.samples, "Samples per size");
    bench->add_option("--alpha", ba.alpha, "Zipf exponent");
    bench->add_option("--seed", ba.seed, "Master seed");
    bench->add_option("--out", ba.out, "Row CSV path");
    bench->add_option("--summary", ba.summary, "Also write per-group summary CSV here");
    bench->add_option("--optimal-cap", ba.optimal_cap, "Compute optimal cost up to this n");
    bench->add_option("--max-bumps", ba.max_bumps, "Bump budget for every optimization");
    bench->add_option("--builders", ba.builders, "Subset of simple,splay,treap,wb,optimal")->delimiter(',');
    bench->add_option("--threads", ba.threads, "Worker threads");
    bench->add_option("--epsilon", ba.epsilon, "Smallest merit worth a bump");
    bench->add_flag("--limit", ba.limit, "Also run the limited-bump treap comparison");
    bench->add_option("--limit-bumps", ba.limit_bumps, "Budget of the limited run");
    bench->add_flag("--timing", ba.timing, "Fill wall_ms (output is then no longer reproducible)");
    bench->add_option("--config", ba.config, "key = value file; command-line flags win");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*profile) {
            const auto p = make_profile(profile_args);
            auto out = open_out(output);
            bt::write_profile(out, p);
            std::cout << "entropy," << fmt(bt::entropy(p)) << '\n';
            return 0;
        }
        if (*build) return run_build(profile_args, builder, output, cap);
        if (*optimize) return run_optimize(input, output, max_bumps, epsilon, header);
        if (*oracle) return run_oracle(oracle_n, oracle_seed, oracle_alpha);
        if (*bench) {
            if (!ba.config.empty()) apply_config(bench, ba);
            return run_bench(ba);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
