// Copyright 2026 The ofalqon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// ofalqon command-line front end: ensemble generation, benchmark runs,
// summaries, significance tables and single FALQON traces.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ofalqon/bench.hpp"
#include "ofalqon/error.hpp"

namespace {

using namespace ofq;

/// Output to a file, or stdout for "-" or an empty path.
class Sink {
  public:
    explicit Sink(const std::string &path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw InvalidArgument("cannot write " + path);
            }
        }
    }
    std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::string json_to_arg(const nlohmann::json &value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_array()) {
        std::string out;
        for (const auto &v : value) {
            out += (out.empty() ? "" : ",") + json_to_arg(v);
        }
        return out;
    }
    return value.dump();
}

/**
 * Expands `--config <file>` into the flags it mirrors, placed ahead of the
 * user's own flags so that those take precedence.
 */
std::vector<std::string> expand_config(int argc, char **argv) {
    std::vector<std::string> args(argv, argv + argc);
    for (std::size_t i = 1; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") {
            continue;
        }
        std::ifstream in(args[i + 1]);
        if (!in) {
            throw InvalidArgument("cannot read config file " + args[i + 1]);
        }
        nlohmann::json config;
        try {
            in >> config;
        } catch (const nlohmann::json::exception &e) {
            throw ParseError(args[i + 1] + ": " + e.what());
        }
        if (!config.is_object()) {
            throw ParseError(args[i + 1] + ": expected a JSON object");
        }
        std::vector<std::string> injected;
        for (const auto &[key, value] : config.items()) {
            if (value.is_boolean()) {
                if (value.get<bool>()) {
                    injected.push_back("--" + key);
                }
                continue;
            }
            injected.push_back("--" + key);
            injected.push_back(json_to_arg(value));
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        // Right after the subcommand name.
        std::size_t at = 1;
        while (at < args.size() && args[at].starts_with("-")) {
            ++at;
        }
        at = std::min(at + 1, args.size());
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(),
                    injected.end());
        break;
    }
    return args;
}

struct RunOptions {
    std::string graphs = "builtin";
    std::string instances;
    std::string methods = "all";
    std::string depths = "1..10";
    std::uint64_t shots = 8192;
    bool exact_cost = false;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out;
    bool resume = false;
    bool retry_failed = false;
    double lr = default_learning_rate;
    double fd_step = default_fd_step;
    int qaoa_max_iter = 20;
    int falqon_max_iter = 20;
    std::uint64_t falqon_max_evals = 0;
    bool quiet = false;
};

int cmd_generate(int n, bool connected_only, const std::string &graphs, const std::string &out,
                 const std::string &graph6_out) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Graph> ensemble;
    if (!graphs.empty()) {
        ensemble = load_ensemble(graphs);
    } else {
        ensemble = enumerate_cubic_graphs(
            n, connected_only ? Connectivity::connected_only : Connectivity::any);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Sink sink(out);
    sink.stream() << ensemble_manifest(ensemble);
    if (!graph6_out.empty()) {
        Sink g6(graph6_out);
        for (const auto &g : ensemble) {
            g6.stream() << emit_graph6(g) << '\n';
        }
    }
    std::fprintf(stderr, "%zu graphs in %.2f s\n", ensemble.size(), secs);
    return 0;
}

int cmd_run(const RunOptions &o) {
    if (o.out.empty()) {
        throw InvalidArgument("--out is required");
    }
    BenchmarkPlan plan;
    plan.graphs = o.graphs;
    if (!o.instances.empty()) {
        plan.instances = parse_int_list(o.instances);
    }
    plan.methods = parse_method_list(o.methods);
    plan.depths = parse_int_list(o.depths);
    plan.shots = o.shots;
    plan.exact_cost = o.exact_cost;
    plan.base_seed = o.seed;
    plan.workers = o.workers;
    plan.out_dir = o.out;
    plan.resume = o.resume;
    plan.retry_failed = o.retry_failed;
    plan.settings.gradient.learning_rate = o.lr;
    plan.settings.gradient.fd_step = o.fd_step;
    plan.settings.qaoa_max_iterations = o.qaoa_max_iter;
    plan.settings.falqon_layer_budget.max_iterations = o.falqon_max_iter;
    plan.settings.falqon_layer_budget.max_evaluations = o.falqon_max_evals;

    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_plan(plan, [&](const RunProgress &p) {
        if (o.quiet) {
            return;
        }
        const auto &r = *p.record;
        if (r.ok()) {
            std::fprintf(stderr, "[%zu/%zu] %s instance %llu depth %d  P=%.4g  evals=%llu  %.2fs\n",
                         p.done, p.total, r.method_id.c_str(),
                         static_cast<unsigned long long>(r.instance_id), r.depth, r.p_success,
                         static_cast<unsigned long long>(r.n_evals), r.wall_time);
        } else {
            std::fprintf(stderr, "[%zu/%zu] %s instance %llu depth %d  FAILED: %s\n", p.done,
                         p.total, r.method_id.c_str(),
                         static_cast<unsigned long long>(r.instance_id), r.depth,
                         r.error.c_str());
        }
    });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "computed %zu cells (%zu failed), skipped %zu, %.1f s\n",
                 report.scheduled, report.failed, report.skipped, secs);
    return report.failed == 0 ? 0 : 3;
}

int cmd_summarize(const std::string &store_dir, const std::string &csv, const std::string &tidy,
                  bool per_depth) {
    const auto store = load_store(store_dir);
    const auto rows = summarize(store);
    if (!csv.empty()) {
        Sink sink(csv);
        write_summary_csv(sink.stream(), rows);
    }
    if (!tidy.empty()) {
        Sink sink(tidy);
        write_tidy_csv(sink.stream(), store);
    }
    if (csv != "-" && tidy != "-") {
        write_summary_text(std::cout, rows);
        if (per_depth) {
            std::cout << '\n';
            std::vector<SummaryRow> depth_rows;
            for (const auto &r : rows) {
                if (r.depth != 0) {
                    depth_rows.push_back(r);
                }
            }
            write_summary_csv(std::cout, depth_rows);
        }
    }
    return 0;
}

int cmd_significance(const std::string &store_dir, double alpha, const std::string &pairs,
                     const std::string &depths, const std::string &out) {
    const auto store = load_store(store_dir);
    SignificanceOptions opts;
    opts.alpha = alpha;
    if (!depths.empty()) {
        opts.depths = parse_int_list(depths);
    }
    std::stringstream list(pairs);
    std::string item;
    while (std::getline(list, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ParseError("pair '" + item + "' must look like method_a:method_b");
        }
        opts.pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    }
    const auto results = significance_report(store, opts);
    Sink sink(out);
    write_test_results_csv(sink.stream(), results);
    return 0;
}

int cmd_trace(const std::string &graphs, int instance, const std::string &order,
              const std::string &mode, int depth, std::uint64_t shots, bool exact_cost,
              std::uint64_t seed, const std::string &out) {
    const auto ensemble = load_ensemble(graphs);
    if (instance < 0 || static_cast<std::size_t>(instance) >= ensemble.size()) {
        throw InvalidArgument("instance outside the ensemble");
    }
    const FeedbackOrder fo = order == "so" ? FeedbackOrder::second : FeedbackOrder::first;
    const bool optimal = mode == "optimal";
    const FalqonConfig config =
        optimal ? FalqonConfig::optimal(fo, depth) : FalqonConfig::standard(fo, depth);
    const IsingProblem problem(ensemble[static_cast<std::size_t>(instance)]);
    const auto trace = run_falqon(problem, config, shot_policy(shots, exact_cost), seed);
    Sink sink(out);
    write_trace_jsonl(sink.stream(), trace);
    std::fprintf(stderr, "final cost %.6f, P_success %.6f, %llu evaluations\n",
                 trace.final_cost(),
                 success_probability(trace.final_state, problem.solution().optimal_bitstrings),
                 static_cast<unsigned long long>(trace.n_evals()));
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Feedback-based and variational MaxCut benchmark toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // generate-ensemble
    int gen_n = 12;
    bool gen_connected = false;
    std::string gen_graphs;
    std::string gen_out;
    std::string gen_g6;
    auto *gen = app.add_subcommand("generate-ensemble",
                                   "Enumerate cubic graphs and print their MaxCut manifest");
    gen->add_option("-n,--vertices", gen_n, "Vertex count")->capture_default_str();
    gen->add_flag("--connected-only", gen_connected, "Drop disconnected graphs");
    gen->add_option("--graphs", gen_graphs, "Describe a graph6 file instead of enumerating");
    gen->add_option("-o,--out", gen_out, "JSON output path (default stdout)");
    gen->add_option("--graph6", gen_g6, "Also write the graphs as graph6 lines");

    // run
    RunOptions ro;
    auto *run = app.add_subcommand("run", "Execute a benchmark plan into a result store");
    run->add_option("--config", "JSON file whose keys mirror these flags");
    run->add_option("--graphs", ro.graphs, "builtin, builtin:<n> or a graph6 file")
        ->capture_default_str();
    run->add_option("--instances", ro.instances, "Ensemble indices, e.g. 0..19 (default all)");
    run->add_option("--methods", ro.methods, "Method ids or groups: all, falqon, qaoa, warm")
        ->capture_default_str();
    run->add_option("--depths", ro.depths, "Depth list, e.g. 1..10 or 1,3,5")
        ->capture_default_str();
    run->add_option("--shots", ro.shots, "Shots per evaluation; 0 for exact")
        ->capture_default_str();
    run->add_flag("--exact-cost", ro.exact_cost,
                  "Exact expectations for the optimizers; shots only for P_success");
    run->add_option("--seed", ro.seed, "Base seed")->capture_default_str();
    run->add_option("--workers", ro.workers, "Worker threads")->capture_default_str();
    run->add_option("--out", ro.out, "Result store directory")->required();
    run->add_flag("--resume", ro.resume, "Continue an existing store");
    run->add_flag("--retry-failed", ro.retry_failed, "On resume, recompute failed cells");
    run->add_option("--lr", ro.lr, "Gradient-descent learning rate")->capture_default_str();
    run->add_option("--fd-step", ro.fd_step, "Finite-difference step")->capture_default_str();
    run->add_option("--qaoa-max-iter", ro.qaoa_max_iter, "QAOA optimizer iterations")
        ->capture_default_str();
    run->add_option("--falqon-max-iter", ro.falqon_max_iter,
                    "Optimal FALQON outer iterations per layer")
        ->capture_default_str();
    run->add_option("--falqon-max-evals", ro.falqon_max_evals,
                    "Optimal FALQON evaluation cap per layer; 0 for none")
        ->capture_default_str();
    run->add_flag("-q,--quiet", ro.quiet, "No per-cell progress lines");

    // summarize
    std::string sum_store;
    std::string sum_csv;
    std::string sum_tidy;
    bool sum_per_depth = false;
    auto *sum = app.add_subcommand("summarize", "Median table of a result store");
    sum->add_option("store", sum_store, "Result store directory")->required();
    sum->add_option("--csv", sum_csv, "Write the summary CSV here ('-' for stdout)");
    sum->add_option("--tidy", sum_tidy, "Write long-format CSV here ('-' for stdout)");
    sum->add_flag("--per-depth", sum_per_depth, "Also print per-depth medians");

    // significance
    std::string sig_store;
    double sig_alpha = 0.05;
    std::string sig_pairs;
    std::string sig_depths;
    std::string sig_out;
    auto *sig = app.add_subcommand("significance", "Paired Wilcoxon tests with Holm correction");
    sig->add_option("store", sig_store, "Result store directory")->required();
    sig->add_option("--alpha", sig_alpha, "Family-wise error level")->capture_default_str();
    sig->add_option("--pairs", sig_pairs, "a:b,c:d (default every pair)");
    sig->add_option("--depths", sig_depths, "Depths to test (default all)");
    sig->add_option("-o,--out", sig_out, "CSV output path (default stdout)");

    // trace
    std::string tr_graphs = "builtin";
    int tr_instance = 0;
    std::string tr_order = "fo";
    std::string tr_mode = "standard";
    int tr_depth = 10;
    std::uint64_t tr_shots = 0;
    bool tr_exact_cost = false;
    std::uint64_t tr_seed = 0;
    std::string tr_out;
    auto *tr = app.add_subcommand("trace", "Dump one FALQON run as JSON lines");
    tr->add_option("--graphs", tr_graphs, "builtin, builtin:<n> or a graph6 file")
        ->capture_default_str();
    tr->add_option("--instance", tr_instance, "Ensemble index")->capture_default_str();
    tr->add_option("--order", tr_order, "fo or so")
        ->check(CLI::IsMember({"fo", "so"}))
        ->capture_default_str();
    tr->add_option("--mode", tr_mode, "standard or optimal")
        ->check(CLI::IsMember({"standard", "optimal"}))
        ->capture_default_str();
    tr->add_option("--depth", tr_depth, "Layer count")->capture_default_str();
    tr->add_option("--shots", tr_shots, "Shots; 0 for exact")->capture_default_str();
    tr->add_flag("--exact-cost", tr_exact_cost, "Exact expectations even with shots");
    tr->add_option("--seed", tr_seed, "Seed")->capture_default_str();
    tr->add_option("-o,--out", tr_out, "Output path (default stdout)");

    try {
        auto args = expand_config(argc, argv);
        std::vector<char *> raw;
        for (auto &a : args) {
            raw.push_back(a.data());
        }
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        if (*gen) {
            return cmd_generate(gen_n, gen_connected, gen_graphs, gen_out, gen_g6);
        }
        if (*run) {
            return cmd_run(ro);
        }
        if (*sum) {
            return cmd_summarize(sum_store, sum_csv, sum_tidy, sum_per_depth);
        }
        if (*sig) {
            return cmd_significance(sig_store, sig_alpha, sig_pairs, sig_depths, sig_out);
        }
        if (*tr) {
            return cmd_trace(tr_graphs, tr_instance, tr_order, tr_mode, tr_depth, tr_shots,
                             tr_exact_cost, tr_seed, tr_out);
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
