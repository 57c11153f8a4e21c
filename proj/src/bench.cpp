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
#include "ofalqon/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "ofalqon/error.hpp"
#include "ofalqon/random.hpp"

namespace ofq {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view store_format = "ofalqon-store/1";
constexpr std::uint64_t falqon_stream = 0x66616c71;
constexpr std::uint64_t qaoa_stream = 0x71616f61;
constexpr std::uint64_t success_stream = 0x73756363;

struct FalqonRow {
    std::string_view id;
    std::string_view label;
    FeedbackOrder order;
    FalqonMode mode;
};

constexpr FalqonRow falqon_rows[] = {
    {"falqon-fo", "FALQON FO", FeedbackOrder::first, FalqonMode::standard},
    {"opt-falqon-fo", "Optimal FALQON FO", FeedbackOrder::first, FalqonMode::optimal},
    {"falqon-so", "FALQON SO", FeedbackOrder::second, FalqonMode::standard},
    {"opt-falqon-so", "Optimal FALQON SO", FeedbackOrder::second, FalqonMode::optimal},
};

struct QaoaRow {
    std::string_view id;
    std::string_view label;
    AnsatzVariant variant;
    OptimizerKind optimizer;
};

constexpr QaoaRow qaoa_rows[] = {
    {"qaoa-gd", "QAOA (GD)", AnsatzVariant::standard, OptimizerKind::gradient_descent},
    {"qaoa-powell", "QAOA (Powell)", AnsatzVariant::standard, OptimizerKind::powell},
    {"qaoa-ma-gd", "QAOA-MA (GD)", AnsatzVariant::multi_angle, OptimizerKind::gradient_descent},
    {"qaoa-ma-powell", "QAOA-MA (Powell)", AnsatzVariant::multi_angle, OptimizerKind::powell},
};

MethodSpec falqon_method(const FalqonRow &row) {
    MethodSpec m;
    m.id = row.id;
    m.label = row.label;
    m.family = MethodFamily::falqon;
    m.order = row.order;
    m.mode = row.mode;
    return m;
}

MethodSpec qaoa_method(const QaoaRow &row, const FalqonRow *source) {
    MethodSpec m;
    m.family = MethodFamily::qaoa;
    m.variant = row.variant;
    m.optimizer = row.optimizer;
    if (source == nullptr) {
        m.id = row.id;
        m.label = row.label;
        return m;
    }
    m.id = "ws-" + std::string(source->id) + "-" + std::string(row.id);
    m.label = "Warm-Start " + std::string(source->label) + " -> " + std::string(row.label);
    m.warm_start.kind = source->mode == FalqonMode::optimal ? WarmStartKind::falqon_optimal
                                                            : WarmStartKind::falqon_standard;
    m.warm_start.falqon_order = source->order;
    return m;
}

const QaoaRow *find_qaoa_row(std::string_view id) {
    for (const auto &row : qaoa_rows) {
        if (row.id == id) {
            return &row;
        }
    }
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

int parse_int(std::string_view s, std::string_view context) {
    int value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("invalid integer '" + std::string(s) + "' in " + std::string(context));
    }
    return value;
}

// Record (de)serialization -----------------------------------------------------

std::string record_line(const RunRecord &r) {
    ordered_json j;
    j["method"] = r.method_id;
    j["instance"] = r.instance_id;
    j["depth"] = r.depth;
    j["seed"] = r.seed;
    if (r.ok()) {
        j["p_success"] = r.p_success;
        j["n_evals"] = r.n_evals;
        j["e1"] = r.e1;
        j["e2"] = r.e2;
    } else {
        j["error"] = r.error;
    }
    return j.dump();
}

RunRecord parse_record(const std::string &line) {
    const auto j = ordered_json::parse(line);
    RunRecord r;
    r.method_id = j.at("method").get<std::string>();
    r.instance_id = j.at("instance").get<std::uint64_t>();
    r.depth = j.at("depth").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("error")) {
        r.error = j.at("error").get<std::string>();
        if (r.error.empty()) {
            throw ParseError("empty error text");
        }
        return r;
    }
    r.p_success = j.at("p_success").get<double>();
    r.n_evals = j.at("n_evals").get<std::uint64_t>();
    r.e1 = j.at("e1").get<double>();
    r.e2 = j.at("e2").get<double>();
    return r;
}

/// Reads a record file, ignoring a truncated final line.
std::vector<RunRecord> read_record_file(const fs::path &path) {
    std::vector<RunRecord> out;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return out;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        ++line_no;
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            break; // interrupted append
        }
        const std::string line = text.substr(start, nl - start);
        start = nl + 1;
        if (line.empty()) {
            continue;
        }
        try {
            out.push_back(parse_record(line));
        } catch (const nlohmann::json::exception &e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ParseError &e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

using CellKey = std::pair<std::uint64_t, int>; // (instance, depth)

void sort_records(std::vector<RunRecord> &records) {
    std::sort(records.begin(), records.end(), [](const RunRecord &a, const RunRecord &b) {
        return std::tie(a.instance_id, a.depth) < std::tie(b.instance_id, b.depth);
    });
}

void write_file_atomically(const fs::path &path, const std::string &content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InvalidArgument("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw InvalidArgument("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

void write_record_file(const fs::path &path, std::vector<RunRecord> records) {
    sort_records(records);
    std::string content;
    for (const auto &r : records) {
        content += record_line(r);
        content += '\n';
    }
    write_file_atomically(path, content);
}

std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string manifest_text(const BenchmarkPlan &plan, const std::vector<Graph> &ensemble,
                          const std::vector<int> &instances) {
    ordered_json j;
    j["format"] = store_format;
    j["graphs"] = plan.graphs;
    ordered_json inst = ordered_json::array();
    for (int i : instances) {
        inst.push_back({{"index", i}, {"graph6", emit_graph6(ensemble[static_cast<std::size_t>(i)])}});
    }
    j["instances"] = inst;
    ordered_json methods = ordered_json::array();
    for (const auto &m : plan.methods) {
        methods.push_back({{"id", m.id}, {"label", m.label}});
    }
    j["methods"] = methods;
    j["depths"] = plan.depths;
    j["shots"] = plan.shots;
    j["exact_cost"] = plan.exact_cost;
    j["base_seed"] = plan.base_seed;
    const auto &s = plan.settings;
    j["settings"] = {
        {"learning_rate", s.gradient.learning_rate},
        {"fd_step", s.gradient.fd_step},
        {"qaoa_max_iterations", s.qaoa_max_iterations},
        {"fixed_init", s.fixed_init},
        {"falqon_layer_budget",
         {{"max_iterations", s.falqon_layer_budget.max_iterations},
          {"max_evaluations", s.falqon_layer_budget.max_evaluations},
          {"line_search_tolerance", s.falqon_layer_budget.line_search_tolerance}}},
    };
    j["flattening"] = "layer-major, gammas before betas";
    j["evaluation_accounting"] =
        "FALQON: 1 (FO) or 3 (SO) feedback evaluations per layer plus optimizer calls; "
        "QAOA: every cost call, plus the warm-start FALQON run";
    return j.dump(2) + "\n";
}

std::vector<int> select_instances(const BenchmarkPlan &plan, std::size_t ensemble_size) {
    std::vector<int> out = plan.instances;
    if (out.empty()) {
        out.resize(ensemble_size);
        for (std::size_t i = 0; i < ensemble_size; ++i) {
            out[i] = static_cast<int>(i);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (int i : out) {
        if (i < 0 || static_cast<std::size_t>(i) >= ensemble_size) {
            throw InvalidArgument("instance " + std::to_string(i) + " outside an ensemble of " +
                                  std::to_string(ensemble_size));
        }
    }
    return out;
}

void validate_plan(const BenchmarkPlan &plan) {
    if (plan.methods.empty()) {
        throw InvalidArgument("plan has no methods");
    }
    if (plan.depths.empty()) {
        throw InvalidArgument("plan has no depths");
    }
    for (int d : plan.depths) {
        if (d < 1) {
            throw InvalidArgument("depths must be at least 1");
        }
    }
    if (plan.workers < 1) {
        throw InvalidArgument("worker count must be at least 1");
    }
    if (plan.out_dir.empty()) {
        throw InvalidArgument("output directory not set");
    }
    std::set<std::string> ids;
    for (const auto &m : plan.methods) {
        if (parse_method(m.id) != m) {
            throw InvalidArgument("method spec does not match its id: " + m.id);
        }
        if (!ids.insert(m.id).second) {
            throw InvalidArgument("duplicate method " + m.id);
        }
    }
    if (plan.settings.qaoa_max_iterations < 0) {
        throw InvalidArgument("QAOA iteration budget must be nonnegative");
    }
}

std::string error_text(const std::exception &e) {
    const std::string what = e.what();
    return what.empty() ? "unknown error" : what;
}

} // namespace

// Methods ---------------------------------------------------------------------

MethodSpec parse_method(std::string_view id) {
    for (const auto &row : falqon_rows) {
        if (row.id == id) {
            return falqon_method(row);
        }
    }
    if (const QaoaRow *row = find_qaoa_row(id)) {
        return qaoa_method(*row, nullptr);
    }
    if (id.starts_with("ws-")) {
        const std::string_view rest = id.substr(3);
        for (const auto &source : falqon_rows) {
            if (rest.size() > source.id.size() + 1 && rest.starts_with(source.id) &&
                rest[source.id.size()] == '-') {
                if (const QaoaRow *row = find_qaoa_row(rest.substr(source.id.size() + 1))) {
                    return qaoa_method(*row, &source);
                }
            }
        }
    }
    throw ParseError("unknown method id '" + std::string(id) + "'");
}

std::vector<MethodSpec> table_methods() {
    std::vector<MethodSpec> out;
    for (const auto &row : falqon_rows) {
        out.push_back(falqon_method(row));
    }
    auto warm_rows = [&](const QaoaRow &row) {
        for (const auto &source : falqon_rows) {
            out.push_back(qaoa_method(row, &source));
        }
    };
    // Each variant lists its fixed-init rows, then warm starts per optimizer.
    for (std::size_t v = 0; v < 4; v += 2) {
        out.push_back(qaoa_method(qaoa_rows[v], nullptr));
        out.push_back(qaoa_method(qaoa_rows[v + 1], nullptr));
        warm_rows(qaoa_rows[v]);
        warm_rows(qaoa_rows[v + 1]);
    }
    return out;
}

std::vector<MethodSpec> parse_method_list(std::string_view text) {
    std::vector<MethodSpec> out;
    std::set<std::string> seen;
    auto add = [&](const MethodSpec &m) {
        if (seen.insert(m.id).second) {
            out.push_back(m);
        }
    };
    for (std::string_view token : split(text, ',')) {
        if (token.empty()) {
            continue;
        }
        if (token == "all" || token == "falqon" || token == "qaoa" || token == "warm") {
            for (const auto &m : table_methods()) {
                const bool warm = m.family == MethodFamily::qaoa &&
                                  m.warm_start.kind != WarmStartKind::fixed;
                const bool keep = token == "all" ||
                                  (token == "falqon" && m.family == MethodFamily::falqon) ||
                                  (token == "qaoa" && m.family == MethodFamily::qaoa && !warm) ||
                                  (token == "warm" && warm);
                if (keep) {
                    add(m);
                }
            }
            continue;
        }
        add(parse_method(token));
    }
    if (out.empty()) {
        throw ParseError("empty method list");
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::set<int> values;
    for (std::string_view token : split(text, ',')) {
        if (token.empty()) {
            continue;
        }
        if (const auto dots = token.find(".."); dots != std::string_view::npos) {
            const int lo = parse_int(trim(token.substr(0, dots)), text);
            const int hi = parse_int(trim(token.substr(dots + 2)), text);
            if (hi < lo) {
                throw ParseError("descending range '" + std::string(token) + "'");
            }
            for (int v = lo; v <= hi; ++v) {
                values.insert(v);
            }
        } else {
            values.insert(parse_int(token, text));
        }
    }
    if (values.empty()) {
        throw ParseError("empty integer list");
    }
    return {values.begin(), values.end()};
}

ShotPolicy shot_policy(std::uint64_t shots, bool exact_cost) {
    ShotPolicy p = ShotPolicy::sampled(shots);
    if (exact_cost) {
        p.cost_shots = 0;
        p.feedback_shots = 0;
    }
    return p;
}

RunRecord run_cell(const MethodSpec &method, const IsingProblem &problem,
                   std::uint64_t instance_id, int depth, const ShotPolicy &shots,
                   const MethodSettings &settings, std::uint64_t seed) {
    if (depth < 1) {
        throw InvalidArgument("depth must be at least 1");
    }
    const auto &optimal = problem.solution().optimal_bitstrings;
    auto measure = [&](const Statevector &state) {
        if (shots.success_shots == 0) {
            return success_probability(state, optimal);
        }
        Rng rng(mix64(seed ^ success_stream));
        return success_probability(sample_bitstrings(state, shots.success_shots, rng), optimal);
    };
    auto falqon = [&](FeedbackOrder order, FalqonMode mode) {
        FalqonConfig config = mode == FalqonMode::optimal ? FalqonConfig::optimal(order, depth)
                                                          : FalqonConfig::standard(order, depth);
        config.optimizer_budget = settings.falqon_layer_budget;
        return run_falqon(problem, config, shots, mix64(seed ^ falqon_stream));
    };

    if (method.family == MethodFamily::falqon) {
        const FalqonTrace trace = falqon(method.order, method.mode);
        return RunRecord::make(method.id, instance_id, depth, measure(trace.final_state),
                               trace.n_evals(), seed);
    }

    std::uint64_t n_evals = 0;
    WarmStartSource source = method.warm_start;
    QaoaParams init;
    if (source.kind == WarmStartKind::fixed) {
        source.fixed_value = settings.fixed_init;
        init = warm_start_params(source, nullptr, method.variant, depth, problem.graph());
    } else {
        const FalqonMode mode = source.kind == WarmStartKind::falqon_optimal
                                    ? FalqonMode::optimal
                                    : FalqonMode::standard;
        const FalqonTrace trace = falqon(source.falqon_order, mode);
        n_evals += trace.n_evals();
        init = warm_start_params(source, &trace, method.variant, depth, problem.graph());
    }
    OptimizerBudget budget;
    budget.max_iterations = settings.qaoa_max_iterations;
    const auto opt = optimize_qaoa(problem, init, method.optimizer, budget, shots,
                                   mix64(seed ^ qaoa_stream), settings.gradient);
    n_evals += opt.result.n_evals;
    return RunRecord::make(method.id, instance_id, depth,
                           measure(prepare_qaoa_state(problem, opt.params)), n_evals, seed);
}

// Plans and stores --------------------------------------------------------------

std::vector<Graph> load_ensemble(const std::string &source) {
    if (source == "builtin") {
        return enumerate_cubic_graphs(12);
    }
    if (source.starts_with("builtin:")) {
        return enumerate_cubic_graphs(parse_int(std::string_view(source).substr(8), source));
    }
    if (!fs::exists(source)) {
        throw InvalidArgument("graph file not found: " + source);
    }
    auto graphs = read_graph6_file(source);
    if (graphs.empty()) {
        throw InvalidArgument("graph file holds no graphs: " + source);
    }
    return graphs;
}

std::string ensemble_manifest(const std::vector<Graph> &graphs) {
    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto solution = exact_maxcut(graphs[i]);
        ordered_json entry;
        entry["index"] = i;
        entry["graph6"] = emit_graph6(graphs[i]);
        entry["max_cut_value"] = solution.max_cut_value;
        entry["n_optimal"] = solution.optimal_bitstrings.size();
        out.push_back(std::move(entry));
    }
    return out.dump(2) + "\n";
}

std::string plan_manifest(const BenchmarkPlan &plan) {
    validate_plan(plan);
    const auto ensemble = load_ensemble(plan.graphs);
    return manifest_text(plan, ensemble, select_instances(plan, ensemble.size()));
}

RunReport run_plan(const BenchmarkPlan &plan,
                   const std::function<void(const RunProgress &)> &progress) {
    validate_plan(plan);
    const auto ensemble = load_ensemble(plan.graphs);
    const auto instances = select_instances(plan, ensemble.size());
    const std::string manifest = manifest_text(plan, ensemble, instances);

    const fs::path dir = plan.out_dir;
    const fs::path manifest_path = dir / "manifest.json";
    const fs::path records_dir = dir / "records";
    if (fs::exists(manifest_path)) {
        if (!plan.resume) {
            throw InvalidArgument(dir.string() + " already holds a result store; resume it or "
                                                 "choose another directory");
        }
        if (read_text(manifest_path) != manifest) {
            throw InvalidArgument("the plan differs from the manifest stored in " + dir.string());
        }
    } else if (fs::exists(records_dir) && !fs::is_empty(records_dir)) {
        throw InvalidArgument(records_dir.string() + " holds records without a manifest");
    }
    fs::create_directories(records_dir);
    write_file_atomically(manifest_path, manifest);

    // Existing records, with truncated lines removed before anything is appended.
    std::map<std::string, std::vector<RunRecord>> kept;
    std::map<std::string, std::set<CellKey>> done;
    RunReport report;
    for (const auto &m : plan.methods) {
        const fs::path path = records_dir / (m.id + ".jsonl");
        auto records = read_record_file(path);
        if (plan.retry_failed) {
            std::erase_if(records, [](const RunRecord &r) { return !r.ok(); });
        }
        for (const auto &r : records) {
            if (r.method_id != m.id) {
                throw ParseError(path.string() + " holds a record of method " + r.method_id);
            }
            done[m.id].insert({r.instance_id, r.depth});
        }
        write_record_file(path, records);
        kept[m.id] = std::move(records);
    }

    struct Cell {
        const MethodSpec *method;
        int instance;
        int depth;
    };
    std::vector<Cell> cells;
    std::vector<int> depths_desc = plan.depths;
    std::sort(depths_desc.rbegin(), depths_desc.rend());
    depths_desc.erase(std::unique(depths_desc.begin(), depths_desc.end()), depths_desc.end());
    for (int depth : depths_desc) {
        for (const auto &m : plan.methods) {
            for (int inst : instances) {
                if (done[m.id].contains({static_cast<std::uint64_t>(inst), depth})) {
                    ++report.skipped;
                } else {
                    cells.push_back({&m, inst, depth});
                }
            }
        }
    }
    report.scheduled = cells.size();

    std::map<int, IsingProblem> problems;
    for (int inst : instances) {
        problems.emplace(inst, IsingProblem(ensemble[static_cast<std::size_t>(inst)]));
    }
    const ShotPolicy shots = shot_policy(plan.shots, plan.exact_cost);

    std::map<std::string, std::ofstream> sinks;
    for (const auto &m : plan.methods) {
        sinks[m.id].open(records_dir / (m.id + ".jsonl"), std::ios::binary | std::ios::app);
    }
    std::ofstream timing(dir / "timing.jsonl", std::ios::binary | std::ios::app);
    std::map<std::string, std::vector<RunRecord>> fresh;

    std::mutex writer;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr callback_error;
    std::size_t finished = 0;

    auto worker = [&] {
        while (!stop.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            const Cell &cell = cells[i];
            const auto instance = static_cast<std::uint64_t>(cell.instance);
            const std::uint64_t seed =
                derive_seed(plan.base_seed, cell.method->id, instance, cell.depth);
            const auto t0 = std::chrono::steady_clock::now();
            RunRecord record;
            try {
                record = run_cell(*cell.method, problems.at(cell.instance), instance, cell.depth,
                                  shots, plan.settings, seed);
            } catch (const std::exception &e) {
                record = RunRecord::failed(cell.method->id, instance, cell.depth, seed,
                                           error_text(e));
            }
            record.wall_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            const std::lock_guard lock(writer);
            auto &sink = sinks[record.method_id];
            sink << record_line(record) << '\n';
            sink.flush();
            ordered_json t;
            t["method"] = record.method_id;
            t["instance"] = record.instance_id;
            t["depth"] = record.depth;
            t["wall_time"] = record.wall_time;
            timing << t.dump() << '\n';
            timing.flush();
            if (!record.ok()) {
                ++report.failed;
            }
            ++finished;
            fresh[record.method_id].push_back(record);
            if (progress) {
                try {
                    progress(RunProgress{finished, cells.size(), &fresh[record.method_id].back()});
                } catch (...) {
                    callback_error = std::current_exception();
                    stop = true;
                }
            }
        }
    };

    const int n_threads =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(plan.workers),
                                               std::max<std::size_t>(cells.size(), 1)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    sinks.clear();

    for (const auto &m : plan.methods) {
        auto records = std::move(kept[m.id]);
        for (auto r : fresh[m.id]) {
            r.wall_time = 0.0;
            records.push_back(std::move(r));
        }
        write_record_file(records_dir / (m.id + ".jsonl"), std::move(records));
    }
    if (callback_error) {
        std::rethrow_exception(callback_error);
    }
    return report;
}

ResultStore load_store(const fs::path &dir) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path)) {
        throw InvalidArgument("no manifest.json in " + dir.string());
    }
    ResultStore store;
    try {
        const auto j = ordered_json::parse(read_text(manifest_path));
        if (j.at("format").get<std::string>() != store_format) {
            throw ParseError("unsupported store format in " + manifest_path.string());
        }
        for (const auto &m : j.at("methods")) {
            store.methods.push_back(parse_method(m.at("id").get<std::string>()));
        }
        store.depths = j.at("depths").get<std::vector<int>>();
        for (const auto &inst : j.at("instances")) {
            store.instances.push_back(inst.at("index").get<int>());
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(manifest_path.string() + ": " + e.what());
    }
    for (const auto &m : store.methods) {
        auto records = read_record_file(dir / "records" / (m.id + ".jsonl"));
        sort_records(records);
        for (auto &r : records) {
            store.records.push_back(std::move(r));
        }
    }
    return store;
}

// Reporting ---------------------------------------------------------------------

std::vector<SummaryRow> summarize(const ResultStore &store) {
    std::vector<SummaryRow> rows;
    auto make_row = [](const MethodSpec &m, int depth, const std::vector<const RunRecord *> &cells) {
        SummaryRow row;
        row.method_id = m.id;
        row.label = m.label;
        row.depth = depth;
        std::vector<double> p;
        std::vector<double> e1;
        std::vector<double> e2;
        for (const RunRecord *r : cells) {
            if (!r->ok()) {
                ++row.n_failed;
                continue;
            }
            p.push_back(r->p_success);
            e1.push_back(r->e1);
            e2.push_back(r->e2);
        }
        row.n_cells = p.size();
        if (!p.empty()) {
            row.median_p_success = median(std::move(p));
            row.median_e1 = median(std::move(e1));
            row.median_e2 = median(std::move(e2));
        }
        return row;
    };
    for (const auto &m : store.methods) {
        std::vector<const RunRecord *> all;
        std::map<int, std::vector<const RunRecord *>> by_depth;
        for (const auto &r : store.records) {
            if (r.method_id == m.id) {
                all.push_back(&r);
                by_depth[r.depth].push_back(&r);
            }
        }
        SummaryRow aggregate = make_row(m, 0, all);
        if (aggregate.n_cells == 0) {
            continue;
        }
        rows.push_back(std::move(aggregate));
        for (const auto &[depth, cells] : by_depth) {
            SummaryRow row = make_row(m, depth, cells);
            if (row.n_cells > 0) {
                rows.push_back(std::move(row));
            }
        }
    }
    if (rows.empty()) {
        throw InvalidArgument("the store holds no successful records");
    }
    return rows;
}

void write_summary_csv(std::ostream &out, std::span<const SummaryRow> rows) {
    out << "method,label,depth,n_cells,n_failed,median_p_success,median_e1,median_e2\n";
    for (const auto &r : rows) {
        out << r.method_id << ",\"" << r.label << "\"," << (r.depth == 0 ? "all" : std::to_string(r.depth))
            << ',' << r.n_cells << ',' << r.n_failed << ',' << format_number(r.median_p_success)
            << ',' << format_number(r.median_e1) << ',' << format_number(r.median_e2) << '\n';
    }
}

void write_summary_text(std::ostream &out, std::span<const SummaryRow> rows) {
    std::size_t width = std::string_view("Method").size();
    for (const auto &r : rows) {
        if (r.depth == 0) {
            width = std::max(width, r.label.size());
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-*s  %12s  %12s  %12s  %6s\n", static_cast<int>(width),
                  "Method", "Med P_succ", "Med E1", "Med E2", "Cells");
    out << buf;
    out << std::string(width + 52, '-') << '\n';
    for (const auto &r : rows) {
        if (r.depth != 0) {
            continue;
        }
        std::snprintf(buf, sizeof buf, "%-*s  %12.3e  %12.3e  %12.3e  %6zu\n",
                      static_cast<int>(width), r.label.c_str(), r.median_p_success, r.median_e1,
                      r.median_e2, r.n_cells);
        out << buf;
    }
}

std::vector<TestResult> significance_report(const ResultStore &store,
                                            const SignificanceOptions &options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    std::vector<std::pair<std::string, std::string>> pairs = options.pairs;
    if (pairs.empty()) {
        for (std::size_t i = 0; i < store.methods.size(); ++i) {
            for (std::size_t j = i + 1; j < store.methods.size(); ++j) {
                pairs.emplace_back(store.methods[i].id, store.methods[j].id);
            }
        }
    }
    for (const auto &[a, b] : pairs) {
        for (const auto &id : {a, b}) {
            const bool known = std::any_of(store.methods.begin(), store.methods.end(),
                                           [&](const MethodSpec &m) { return m.id == id; });
            if (!known) {
                throw InvalidArgument("method " + id + " is not in the store");
            }
        }
    }
    const std::vector<int> depths = options.depths.empty() ? store.depths : options.depths;

    std::map<std::tuple<std::string, std::uint64_t, int>, const RunRecord *> index;
    for (const auto &r : store.records) {
        if (r.ok()) {
            index[{r.method_id, r.instance_id, r.depth}] = &r;
        }
    }
    std::set<std::string> missing;
    for (const auto &[a, b] : pairs) {
        for (int depth : depths) {
            for (int inst : store.instances) {
                for (const auto &id : {a, b}) {
                    if (!index.contains({id, static_cast<std::uint64_t>(inst), depth})) {
                        missing.insert(id + " instance " + std::to_string(inst) + " depth " +
                                       std::to_string(depth));
                    }
                }
            }
        }
    }
    if (!missing.empty()) {
        std::string msg = std::to_string(missing.size()) + " unpaired cells: ";
        std::size_t shown = 0;
        for (const auto &cell : missing) {
            if (shown == 10) {
                msg += ", ...";
                break;
            }
            msg += (shown++ ? ", " : "") + cell;
        }
        throw PairingError(msg);
    }

    auto metric_value = [](const RunRecord &r, std::string_view metric) {
        return metric == "p_success" ? r.p_success : metric == "e1" ? r.e1 : r.e2;
    };
    std::vector<TestResult> results;
    for (std::string_view metric : metric_names) {
        const std::size_t family_start = results.size();
        for (int depth : depths) {
            for (const auto &[a, b] : pairs) {
                std::vector<double> xa;
                std::vector<double> xb;
                std::vector<double> diff;
                for (int inst : store.instances) {
                    const auto key = static_cast<std::uint64_t>(inst);
                    xa.push_back(metric_value(*index.at({a, key, depth}), metric));
                    xb.push_back(metric_value(*index.at({b, key, depth}), metric));
                    diff.push_back(xa.back() - xb.back());
                }
                TestResult t;
                t.metric = metric;
                t.depth = depth;
                t.method_a = a;
                t.method_b = b;
                t.n_pairs = xa.size();
                const double med = median(diff);
                t.direction = (med > 0) - (med < 0);
                try {
                    const auto w = wilcoxon_signed_rank(xa, xb);
                    t.statistic = w.statistic;
                    t.p_raw = w.p_value;
                } catch (const DegenerateSampleError &) {
                    t.degenerate = true;
                    t.statistic = std::numeric_limits<double>::quiet_NaN();
                    t.p_raw = std::numeric_limits<double>::quiet_NaN();
                    t.p_adj = std::numeric_limits<double>::quiet_NaN();
                }
                results.push_back(std::move(t));
            }
        }
        std::vector<double> p;
        std::vector<std::size_t> where;
        for (std::size_t i = family_start; i < results.size(); ++i) {
            if (!results[i].degenerate) {
                p.push_back(results[i].p_raw);
                where.push_back(i);
            }
        }
        const auto adjusted = holm_adjust(p);
        for (std::size_t k = 0; k < where.size(); ++k) {
            results[where[k]].p_adj = adjusted[k];
            results[where[k]].significant = adjusted[k] < options.alpha;
        }
    }
    return results;
}

void write_tidy_csv(std::ostream &out, const ResultStore &store) {
    out << "method,depth,instance,metric,value\n";
    for (const auto &r : store.records) {
        if (!r.ok()) {
            continue;
        }
        const double values[] = {r.p_success, r.e1, r.e2};
        for (std::size_t k = 0; k < 3; ++k) {
            out << r.method_id << ',' << r.depth << ',' << r.instance_id << ',' << metric_names[k]
                << ',' << format_number(values[k]) << '\n';
        }
    }
}

} // namespace ofq
