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
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ofalqon/falqon.hpp"
#include "ofalqon/qaoa.hpp"
#include "ofalqon/stats.hpp"

namespace ofq {

// Methods --------------------------------------------------------------------

enum class MethodFamily { falqon, qaoa };

/**
 * @brief One benchmarked algorithm.
 *
 * Ids follow a small grammar:
 *   falqon-fo | falqon-so | opt-falqon-fo | opt-falqon-so
 *   qaoa-gd | qaoa-powell | qaoa-ma-gd | qaoa-ma-powell
 *   ws-<falqon id>-<qaoa id>   (QAOA started from that FALQON run's angles)
 */
struct MethodSpec {
    std::string id;
    std::string label; ///< human-readable name
    MethodFamily family = MethodFamily::falqon;
    FeedbackOrder order = FeedbackOrder::first; ///< FALQON rows
    FalqonMode mode = FalqonMode::standard;     ///< FALQON rows
    AnsatzVariant variant = AnsatzVariant::standard;
    OptimizerKind optimizer = OptimizerKind::gradient_descent;
    WarmStartSource warm_start; ///< fixed for plain QAOA rows

    bool operator==(const MethodSpec &) const = default;
};

/// Raises ParseError for ids outside the grammar.
[[nodiscard]] MethodSpec parse_method(std::string_view id);

/// The 24 rows of the benchmark table, in table order.
[[nodiscard]] std::vector<MethodSpec> table_methods();

/**
 * Comma-separated ids or group names: all (the 24 table rows), falqon (4),
 * qaoa (the 4 fixed-init rows), warm (the 16 warm-start rows). Duplicates are
 * dropped, first occurrence wins.
 */
[[nodiscard]] std::vector<MethodSpec> parse_method_list(std::string_view text);

/// "1..10", "1,3,5", "0..19,40" and so on; ascending, duplicates removed.
[[nodiscard]] std::vector<int> parse_int_list(std::string_view text);

/// Hyperparameters shared by every cell of a plan.
struct MethodSettings {
    GradientSettings gradient;
    int qaoa_max_iterations = 20;
    double fixed_init = 0.5;
    OptimizerBudget falqon_layer_budget = FalqonConfig::default_layer_budget();
};

/// Shot handling of a plan: 0 shots means exact everywhere; with
/// exact_cost the optimizers see exact expectations and only the success
/// probability is sampled.
[[nodiscard]] ShotPolicy shot_policy(std::uint64_t shots, bool exact_cost);

/**
 * Runs one (method, instance, depth) cell. Evaluation counts of a warm start
 * include the FALQON run that produced the initial angles. Sub-seeds for the
 * FALQON run, the QAOA optimizer and the success sampling are derived from
 * `seed`. Errors propagate.
 */
[[nodiscard]] RunRecord run_cell(const MethodSpec &method, const IsingProblem &problem,
                                 std::uint64_t instance_id, int depth,
                                 const ShotPolicy &shots, const MethodSettings &settings,
                                 std::uint64_t seed);

// Plans and stores ----------------------------------------------------------

/// "builtin" (12 vertices), "builtin:<n>", or a graph6 file kept in file order.
[[nodiscard]] std::vector<Graph> load_ensemble(const std::string &source);

/// JSON array of {index, graph6, max_cut_value, n_optimal} objects.
[[nodiscard]] std::string ensemble_manifest(const std::vector<Graph> &graphs);

struct BenchmarkPlan {
    std::string graphs = "builtin";
    std::vector<int> instances; ///< ensemble indices; empty selects all
    std::vector<MethodSpec> methods;
    std::vector<int> depths;
    std::uint64_t shots = 8192;
    bool exact_cost = false;
    std::uint64_t base_seed = 0;
    int workers = 1;
    std::filesystem::path out_dir;
    bool resume = false;
    bool retry_failed = false; ///< on resume, recompute cells whose record holds an error
    MethodSettings settings;
};

struct RunProgress {
    std::size_t done = 0;  ///< cells finished in this call
    std::size_t total = 0; ///< cells scheduled in this call
    const RunRecord *record = nullptr;
};

struct RunReport {
    std::size_t scheduled = 0;
    std::size_t skipped = 0; ///< cells already present in the store
    std::size_t failed = 0;  ///< failures among the scheduled cells
};

/**
 * @brief Executes every cell of the plan into `plan.out_dir`.
 *
 * Layout: manifest.json, records/<method id>.jsonl and timing.jsonl.
 * Records are appended as cells finish and rewritten in (instance, depth)
 * order at the end, so the manifest and records/ are byte-identical for the
 * same plan and seed regardless of worker count or interruption. Wall-clock
 * times live only in timing.jsonl.
 *
 * Without `resume` the directory must not already hold a store. With it the
 * stored manifest must match the plan, and cells with records are skipped.
 * Cell failures are recorded with their message and do not stop the run.
 */
RunReport run_plan(const BenchmarkPlan &plan,
                   const std::function<void(const RunProgress &)> &progress = {});

/// Canonical manifest text of a plan (the worker count is not part of it).
[[nodiscard]] std::string plan_manifest(const BenchmarkPlan &plan);

struct ResultStore {
    std::vector<MethodSpec> methods; ///< manifest order
    std::vector<int> depths;
    std::vector<int> instances;
    std::vector<RunRecord> records; ///< method order, then instance, then depth
};

/**
 * Reads a store. A truncated final line in a record file (an interrupted
 * append) is ignored; any other malformed line raises ParseError.
 */
[[nodiscard]] ResultStore load_store(const std::filesystem::path &dir);

// Reporting -------------------------------------------------------------------

struct SummaryRow {
    std::string method_id;
    std::string label;
    int depth = 0; ///< 0 for the aggregate over every depth
    std::size_t n_cells = 0;
    std::size_t n_failed = 0;
    double median_p_success = 0.0;
    double median_e1 = 0.0;
    double median_e2 = 0.0;
};

/// Aggregate row then per-depth rows for each method with successful records.
/// Raises InvalidArgument on a store without successful records.
[[nodiscard]] std::vector<SummaryRow> summarize(const ResultStore &store);

void write_summary_csv(std::ostream &out, std::span<const SummaryRow> rows);
/// Aligned table of the aggregate rows.
void write_summary_text(std::ostream &out, std::span<const SummaryRow> rows);

inline constexpr std::string_view metric_names[] = {"p_success", "e1", "e2"};

struct SignificanceOptions {
    double alpha = 0.05;
    /// Method id pairs to compare; empty compares every pair in manifest order.
    std::vector<std::pair<std::string, std::string>> pairs;
    /// Depths to test; empty tests every manifest depth.
    std::vector<int> depths;
};

/**
 * Paired signed-rank test per (metric, depth, pair) over instances, Holm
 * adjusted within each metric. Pairs whose differences are all zero are kept
 * as rows marked degenerate and excluded from the adjustment. Raises
 * PairingError naming the cells that lack a successful record.
 */
[[nodiscard]] std::vector<TestResult> significance_report(const ResultStore &store,
                                                          const SignificanceOptions &options = {});

/// Long format: method, depth, instance, metric, value.
void write_tidy_csv(std::ostream &out, const ResultStore &store);

} // namespace ofq
