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
// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance [--work DIR] [--workers N] [--known-failures 6,...] [--only 1,2,...]
//
// The exit status is 0 when every criterion passes or every failing one is
// listed in --known-failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ofalqon/bench.hpp"
#include "ofalqon/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ofq;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct Context {
    fs::path work;
    int workers = 1;
};

// 1 ---------------------------------------------------------------------------

Outcome ensemble_count(const Context &) {
    const auto t0 = Clock::now();
    const auto graphs = enumerate_cubic_graphs(12);
    const double gen_secs = seconds_since(t0);
    bool ok = graphs.size() == 94;
    for (const auto &g : graphs) {
        ok = ok && g.n_vertices() == 12 && g.n_edges() == 18 && g.is_regular(3);
    }
    std::size_t iso_pairs = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        for (std::size_t j = i + 1; j < graphs.size(); ++j) {
            iso_pairs += are_isomorphic(graphs[i], graphs[j]) ? 1 : 0;
        }
    }
    ok = ok && iso_pairs == 0 && gen_secs < 60.0;
    return {ok, fmt("%zu graphs, all 3-regular with 18 edges: %s, isomorphic pairs: %zu, "
                    "generation %.2f s (limit 60 s)",
                    graphs.size(), ok ? "yes" : "no", iso_pairs, gen_secs)};
}

// 2 ---------------------------------------------------------------------------

Outcome oracle_correctness(const Context &) {
    const auto g4 = enumerate_cubic_graphs(4);
    const auto g6 = enumerate_cubic_graphs(6);
    const bool counts = g4.size() == 1 && g6.size() == 2 &&
                        oracle::brute_force_cubic_classes(4).size() == 1 &&
                        oracle::brute_force_cubic_classes(6).size() == 2;
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    std::vector<Graph> all = g4;
    all.insert(all.end(), g6.begin(), g6.end());
    const auto g12 = enumerate_cubic_graphs(12);
    all.insert(all.end(), g12.begin(), g12.end());
    for (const auto &g : all) {
        const auto sol = exact_maxcut(g);
        const int naive = oracle::naive_min_energy(g);
        ++checked;
        bool same = sol.min_energy == naive &&
                    sol.max_cut_value == (static_cast<int>(g.n_edges()) - naive) / 2;
        // Every reported optimum attains the naive minimum.
        for (Bitstring x : sol.optimal_bitstrings) {
            int e = 0;
            for (const auto &edge : g.edges()) {
                e += ((x >> edge.u) & 1U) == ((x >> edge.v) & 1U) ? 1 : -1;
            }
            same = same && e == naive;
        }
        mismatches += same ? 0 : 1;
    }
    return {counts && mismatches == 0,
            fmt("n=4: %zu graph, n=6: %zu graphs; exact MaxCut vs naive scan on %zu instances "
                "(n=4, 6, 12): %zu mismatches",
                g4.size(), g6.size(), checked, mismatches)};
}

// 3 ---------------------------------------------------------------------------

Outcome simulator_equivalence(const Context &) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    double worst_state = 0.0;
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 25; ++rep) {
            const Graph g = test_util::random_graph(n, rng);
            auto state = plus_state(n);
            std::vector<cplx> dense(state.amplitudes().begin(), state.amplitudes().end());
            const auto energies = ising_energies(g);
            const bool multi = rep % 2 == 1 && g.n_edges() > 0;
            for (int layer = 0; layer < 4; ++layer) {
                LayerParams params;
                if (multi) {
                    for (std::size_t e = 0; e < g.n_edges(); ++e) {
                        params.gamma.push_back(angle(rng));
                    }
                    for (int q = 0; q < n; ++q) {
                        params.beta.push_back(angle(rng));
                    }
                } else {
                    params.gamma = {angle(rng)};
                    params.beta = {angle(rng)};
                }
                apply_layer(state, g, energies, params);
                oracle::Dense up = oracle::Dense::identity(1 << n);
                if (multi) {
                    for (std::size_t e = 0; e < g.n_edges(); ++e) {
                        up = oracle::problem_unitary(Graph(n, {g.edges()[e]}), params.gamma[e]) * up;
                    }
                } else {
                    up = oracle::problem_unitary(g, params.gamma[0]);
                }
                const std::vector<double> betas =
                    multi ? params.beta : std::vector<double>(static_cast<std::size_t>(n), params.beta[0]);
                dense = oracle::apply(oracle::driver_unitary(n, betas), oracle::apply(up, dense));
            }
            worst_state = std::max(worst_state,
                                   test_util::max_abs_diff_up_to_phase(state.amplitudes(), dense));
        }
    }

    double worst_abc = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + rep % 3;
        const Graph g = test_util::random_graph(n, rng);
        const auto state = test_util::random_state(n, rng());
        const auto fb = commutator_expectations(IsingProblem(g), DriverOperator(n), state);
        const std::vector<cplx> psi(state.amplitudes().begin(), state.amplitudes().end());
        const oracle::Dense hp = oracle::problem_hamiltonian(g);
        const oracle::Dense hd = oracle::driver_hamiltonian(n);
        const oracle::Dense k = hd * hp - hp * hd;
        const double a = oracle::braket(psi, oracle::scaled(k, cplx(0.0, 1.0))).real();
        const double b = oracle::braket(psi, oracle::scaled(k * hd - hd * k, 0.5)).real();
        const double c = oracle::braket(psi, k * hp - hp * k).real();
        worst_abc = std::max({worst_abc, std::abs(fb.a - a), std::abs(fb.b - b), std::abs(fb.c - c)});
    }
    const double secs = seconds_since(t0);
    return {worst_state < 1e-8 && worst_abc < 1e-9 && secs < 10.0,
            fmt("layered evolution max deviation %.2e (limit 1e-8) on 100 circuits N<=4; "
                "A/B/C max deviation %.2e (limit 1e-9) on 100 random states; %.2f s (limit 10 s)",
                worst_state, worst_abc, secs)};
}

// 4 ---------------------------------------------------------------------------

Outcome analytic_anchor(const Context &) {
    const auto graphs = enumerate_cubic_graphs(12);
    const DriverOperator driver(12);
    double worst_a = 0.0;
    double worst_beta = 0.0;
    std::size_t runs = 0;
    for (const auto &g : graphs) {
        const IsingProblem problem(g);
        worst_a = std::max(worst_a, std::abs(commutator_expectations(problem, driver, plus_state(12)).a));
        for (auto order : {FeedbackOrder::first, FeedbackOrder::second}) {
            for (const auto &config : {FalqonConfig::standard(order, 1), FalqonConfig::optimal(order, 1)}) {
                const auto trace = run_falqon(problem, config, ShotPolicy::exact(), 0);
                worst_beta = std::max(worst_beta, std::abs(trace.layers.at(0).beta));
                ++runs;
            }
        }
    }
    return {worst_a < 1e-10 && worst_beta < 1e-10,
            fmt("max |A_0| on |+>^12 over %zu instances: %.2e (limit 1e-10); max |beta_1| over %zu "
                "FALQON runs (FO/SO, standard/optimal): %.2e",
                graphs.size(), worst_a, runs, worst_beta)};
}

// 5, 6, 7: shared subset store --------------------------------------------------

struct SubsetResult {
    std::map<std::string, SummaryRow> overall;
    double cpu_seconds = 0.0;
    double elapsed = 0.0;
    std::string error;
};

double timing_seconds(const fs::path &store, const std::function<bool(const nlohmann::json &)> &keep) {
    std::ifstream in(store / "timing.jsonl");
    std::string line;
    // Latest entry per cell, so resumed and retried cells count once.
    std::map<std::tuple<std::string, std::uint64_t, int>, double> per_cell;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            if (keep(j)) {
                per_cell[{j.at("method").get<std::string>(), j.at("instance").get<std::uint64_t>(),
                          j.at("depth").get<int>()}] = j.at("wall_time").get<double>();
            }
        } catch (const nlohmann::json::exception &) {
        }
    }
    double total = 0.0;
    for (const auto &[key, t] : per_cell) {
        total += t;
    }
    return total;
}

const SubsetResult &subset_run(const Context &ctx) {
    static SubsetResult result;
    static bool done = false;
    if (done) {
        return result;
    }
    done = true;
    BenchmarkPlan plan;
    plan.graphs = "builtin";
    plan.instances = parse_int_list("0..19");
    plan.methods = parse_method_list("falqon-fo,opt-falqon-fo,qaoa-gd,ws-opt-falqon-fo-qaoa-gd");
    plan.depths = {1, 3, 5, 8, 10};
    plan.shots = 8192;
    plan.exact_cost = true;
    plan.base_seed = 2024;
    plan.workers = ctx.workers;
    plan.out_dir = ctx.work / "subset";
    plan.resume = true;
    try {
        const auto t0 = Clock::now();
        run_plan(plan);
        result.elapsed = seconds_since(t0);
        for (const auto &row : summarize(load_store(plan.out_dir))) {
            if (row.depth == 0) {
                result.overall[row.method_id] = row;
            }
        }
        result.cpu_seconds = timing_seconds(plan.out_dir, [](const nlohmann::json &) { return true; });
    } catch (const std::exception &e) {
        result.error = e.what();
    }
    return result;
}

Outcome table_reproduction(const Context &ctx) {
    const auto &r = subset_run(ctx);
    if (!r.error.empty()) {
        return {false, "subset run failed: " + r.error};
    }
    const double std_p = r.overall.at("falqon-fo").median_p_success;
    const double opt_p = r.overall.at("opt-falqon-fo").median_p_success;
    const bool ok = opt_p >= 0.10 && opt_p >= 10.0 * std_p && r.cpu_seconds < 1800.0;
    return {ok, fmt("median P_success Optimal FALQON FO %.4f (floor 0.10) vs FALQON FO %.5f: "
                    "ratio %.1fx (floor 10x); 20 graphs x depths {1,3,5,8,10}; compute %.0f s "
                    "(limit 1800 s)",
                    opt_p, std_p, opt_p / std_p, r.cpu_seconds)};
}

Outcome efficiency_ordering(const Context &ctx) {
    const auto &r = subset_run(ctx);
    if (!r.error.empty()) {
        return {false, "subset run failed: " + r.error};
    }
    const auto &s = r.overall.at("falqon-fo");
    const auto &o = r.overall.at("opt-falqon-fo");
    const double k1 = o.median_e1 / s.median_e1;
    const double k2 = o.median_e2 / s.median_e2;
    return {k1 >= 3.0 && k2 >= 3.0,
            fmt("median E1 Optimal %.3e vs standard %.3e (ratio %.3f, floor 3); median E2 "
                "Optimal %.3e vs standard %.3e (ratio %.3f, floor 3)",
                o.median_e1, s.median_e1, k1, o.median_e2, s.median_e2, k2)};
}

Outcome warm_start_effect(const Context &ctx) {
    const auto &r = subset_run(ctx);
    if (!r.error.empty()) {
        return {false, "subset run failed: " + r.error};
    }
    const double fixed = r.overall.at("qaoa-gd").median_p_success;
    const double warm = r.overall.at("ws-opt-falqon-fo-qaoa-gd").median_p_success;
    return {warm >= 3.0 * fixed,
            fmt("median P_success QAOA (GD) warm-started from Optimal FALQON FO %.4f vs fixed "
                "init %.5f: ratio %.1fx (floor 3x)",
                warm, fixed, warm / fixed)};
}

// 8 ---------------------------------------------------------------------------

Outcome significance_replication(const Context &ctx) {
    BenchmarkPlan plan;
    plan.graphs = "builtin";
    plan.methods = parse_method_list("falqon");
    plan.depths = parse_int_list("1..10");
    plan.shots = 8192;
    plan.exact_cost = true;
    plan.base_seed = 94;
    plan.workers = ctx.workers;
    plan.out_dir = ctx.work / "full-falqon";
    plan.resume = true;
    try {
        run_plan(plan);
        const auto store = load_store(plan.out_dir);
        const auto results = significance_report(store);
        bool depth5 = false;
        double depth5_p = 1.0;
        int indistinct = 0;
        int depths = 0;
        for (const auto &t : results) {
            if (t.metric != "p_success") {
                continue;
            }
            if (t.depth == 5 && t.method_a == "falqon-fo" && t.method_b == "opt-falqon-fo") {
                depth5_p = t.p_adj;
                depth5 = t.significant && t.direction < 0;
            }
            if (t.method_a == "opt-falqon-fo" && t.method_b == "opt-falqon-so") {
                ++depths;
                indistinct += (t.degenerate || t.p_adj > 0.05) ? 1 : 0;
            }
        }
        const double slice = timing_seconds(plan.out_dir, [](const nlohmann::json &j) {
            return j.at("depth").get<int>() == 5;
        });
        const bool ok = depth5 && 2 * indistinct > depths && slice < 3600.0;
        return {ok, fmt("94 instances, 4 FALQON methods, depths 1..10, Holm family of %zu tests "
                        "per metric; depth 5 Optimal vs standard FO p_adj %.2e (need < 0.05, "
                        "Optimal higher); Optimal FO vs SO p_adj > 0.05 at %d of %d depths (need "
                        "majority); depth-5 slice compute %.0f s (limit 3600 s)",
                        results.size() / 3, depth5_p, indistinct, depths, slice)};
    } catch (const std::exception &e) {
        return {false, std::string("full run failed: ") + e.what()};
    }
}

// 9 ---------------------------------------------------------------------------

double enumerated_wilcoxon_p(const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> mags;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            mags.push_back(std::abs(a[i] - b[i]));
            positive.push_back(a[i] > b[i]);
        }
    }
    const std::size_t n = mags.size();
    std::vector<double> rank(n);
    double total = 0.0;
    double plus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double below = 0.0;
        double equal = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            below += mags[j] < mags[i];
            equal += mags[j] == mags[i];
        }
        rank[i] = below + (equal + 1.0) / 2.0;
        total += rank[i];
        plus += positive[i] ? rank[i] : 0.0;
    }
    const double observed = std::min(plus, total - plus);
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += (mask >> i & 1U) ? rank[i] : 0.0;
        }
        hits += std::min(s, total - s) <= observed + 1e-9 ? 1 : 0;
    }
    return static_cast<double>(hits) / std::ldexp(1.0, static_cast<int>(n));
}

Outcome statistics_suite(const Context &) {
    std::mt19937_64 rng(909);
    double worst_p = 0.0;
    int cases = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + rep % 12;
        std::vector<double> a(n);
        std::vector<double> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng() % 9);
            b[i] = static_cast<double>(rng() % 9);
        }
        if (a == b) {
            continue;
        }
        ++cases;
        worst_p = std::max(worst_p, std::abs(wilcoxon_signed_rank(a, b).p_value -
                                             enumerated_wilcoxon_p(a, b)));
    }
    const auto holm = holm_adjust(std::vector<double>{0.01, 0.04, 0.03});
    const bool holm_ok = std::abs(holm[0] - 0.03) < 1e-15 && std::abs(holm[1] - 0.06) < 1e-15 &&
                         std::abs(holm[2] - 0.06) < 1e-15 &&
                         holm_adjust(std::vector<double>{0.5, 0.6}) == std::vector<double>{1.0, 1.0};
    std::size_t identity_failures = 0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double p = u(rng);
        const std::uint64_t n = 1 + rng() % 100000;
        const int depth = 1 + static_cast<int>(rng() % 10);
        const auto r = RunRecord::make("m", 0, depth, p, n, 0);
        const bool exact = r.e1 == p / static_cast<double>(n) && r.e2 == r.e1 / depth;
        const bool products = std::abs(r.e2 * depth - r.e1) <= 1e-15 * r.e1 &&
                              std::abs(r.e1 * static_cast<double>(n) - p) <= 1e-15 * p;
        identity_failures += exact && products ? 0 : 1;
    }
    return {worst_p < 1e-12 && holm_ok && identity_failures == 0,
            fmt("Wilcoxon vs sign enumeration on %d samples (n<=12, ties and zeros): max |dp| "
                "%.1e; Holm (0.01,0.04,0.03)->(%.2f,%.2f,%.2f); RunRecord identity failures: "
                "%zu of 10000",
                cases, worst_p, holm[0], holm[1], holm[2], identity_failures)};
}

// 10 --------------------------------------------------------------------------

std::map<std::string, std::string> store_bytes(const fs::path &dir) {
    std::map<std::string, std::string> out;
    auto slurp = [](const fs::path &p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    out["manifest.json"] = slurp(dir / "manifest.json");
    for (const auto &entry : fs::directory_iterator(dir / "records")) {
        out["records/" + entry.path().filename().string()] = slurp(entry.path());
    }
    return out;
}

Outcome determinism(const Context &ctx) {
    std::vector<std::string> notes;
    bool ok = true;
    for (const bool sampled : {false, true}) {
        BenchmarkPlan plan;
        plan.graphs = "builtin";
        plan.instances = {0, 1};
        plan.methods = parse_method_list("falqon-so,opt-falqon-fo,qaoa-gd,ws-opt-falqon-so-qaoa-ma-gd");
        plan.depths = {1, 2};
        plan.shots = sampled ? 8192 : 0;
        plan.base_seed = 77;
        const fs::path a = ctx.work / (sampled ? "det-shots-a" : "det-exact-a");
        const fs::path b = ctx.work / (sampled ? "det-shots-b" : "det-exact-b");
        fs::remove_all(a);
        fs::remove_all(b);
        plan.out_dir = a;
        plan.workers = 1;
        run_plan(plan);
        plan.out_dir = b;
        plan.workers = std::max(2, ctx.workers);
        run_plan(plan);
        const auto ba = store_bytes(a);
        const bool same = ba == store_bytes(b);
        std::size_t bytes = 0;
        for (const auto &[k, v] : ba) {
            bytes += v.size();
        }
        ok = ok && same;
        notes.push_back(fmt("%s mode %s (%zu files, %zu bytes)", sampled ? "shot" : "exact",
                            same ? "byte-identical" : "DIFFERENT", ba.size(), bytes));
    }
    return {ok, "two runs, 1 worker vs several: " + notes[0] + "; " + notes[1]};
}

} // namespace

int main(int argc, char **argv) {
    Context ctx;
    ctx.work = fs::current_path() / "acceptance_work";
    ctx.workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    std::set<int> known;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const bool has_value = i + 1 < argc;
        if (arg == "--work" && has_value) {
            ctx.work = argv[++i];
        } else if (arg == "--workers" && has_value) {
            ctx.workers = std::max(1, std::stoi(argv[++i]));
        } else if (arg == "--known-failures" && has_value) {
            for (int k : parse_int_list(argv[++i])) {
                known.insert(k);
            }
        } else if (arg == "--only" && has_value) {
            for (int k : parse_int_list(argv[++i])) {
                only.insert(k);
            }
        } else {
            std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
            return 2;
        }
    }
    fs::create_directories(ctx.work);

    const std::vector<std::pair<std::string, std::function<Outcome(const Context &)>>> criteria = {
        {"ensemble count", ensemble_count},
        {"oracle correctness", oracle_correctness},
        {"simulator equivalence", simulator_equivalence},
        {"analytic anchor", analytic_anchor},
        {"scaled median table", table_reproduction},
        {"efficiency ordering", efficiency_ordering},
        {"warm-start effect", warm_start_effect},
        {"significance replication", significance_replication},
        {"statistics suite", statistics_suite},
        {"determinism", determinism},
    };
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.contains(id)) {
            continue;
        }
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = criteria[i].second(ctx);
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const bool tolerated = !out.pass && known.contains(id);
        unexpected += (!out.pass && !tolerated) ? 1 : 0;
        std::printf("%s criterion %d (%s): %s [%.1f s]%s\n", out.pass ? "PASS" : "FAIL", id,
                    criteria[i].first.c_str(), out.detail.c_str(), seconds_since(t0),
                    tolerated ? " (known failure)" : "");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
