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
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ofalqon/error.hpp"
#include "ofalqon/falqon.hpp"

using namespace ofq;

namespace {

double success(const IsingProblem &p, const Statevector &s) {
    double acc = 0.0;
    for (Bitstring x : p.solution().optimal_bitstrings) {
        acc += std::norm(s.amplitudes()[x]);
    }
    return acc;
}

// Cost after one candidate layer applied to `entering`.
double candidate_cost(const IsingProblem &p, const Statevector &entering, FeedbackOrder order,
                      const FalqonLayer &fb, double delta, double m) {
    auto s = entering;
    apply_problem_layer(s, p.energies(), delta);
    apply_driver_layer(s, beta_from_feedback(order, fb.a_prev, fb.b_prev, fb.c_prev, delta, m));
    return diagonal_expectation(s, p.energies());
}

void check_trace_contract(const FalqonTrace &t, const FalqonConfig &cfg) {
    REQUIRE(t.layers.size() == static_cast<std::size_t>(cfg.n_layers));
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < t.layers.size(); ++i) {
        const auto &l = t.layers[i];
        CHECK(l.k == static_cast<int>(i) + 1);
        CHECK(l.gamma == l.delta);
        CHECK(l.evals_this_layer >= feedback_evaluations(cfg.order));
        if (cfg.mode == FalqonMode::standard) {
            CHECK(l.evals_this_layer == feedback_evaluations(cfg.order));
            CHECK(l.delta == cfg.delta_init);
            CHECK(l.m == cfg.m_init);
        }
        total += l.evals_this_layer;
    }
    CHECK(t.n_evals() == total);
}

} // namespace

TEST_CASE("beta_from_feedback") {
    for (double m : {0.5, 1.0, 3.0}) {
        for (double d : {0.03, -0.2, 1.0}) {
            CHECK(beta_from_feedback(FeedbackOrder::first, 0.0, 1.0, 1.0, d, m) == 0.0);
        }
    }
    CHECK(beta_from_feedback(FeedbackOrder::first, 2.0, 0.0, 0.0, 0.03, 1.0) ==
          doctest::Approx(-0.06));
    // |B| below the threshold falls back to first order.
    CHECK(beta_from_feedback(FeedbackOrder::second, 2.0, 1e-13, 5.0, 0.03, 1.0) ==
          beta_from_feedback(FeedbackOrder::first, 2.0, 1e-13, 5.0, 0.03, 1.0));
    // delta = 0 triggers the same fallback through |B delta|.
    CHECK(beta_from_feedback(FeedbackOrder::second, 2.0, 1.0, 5.0, 0.0, 1.0) == 0.0);
    // -m |(A + C d) / (2 B d)| d
    CHECK(beta_from_feedback(FeedbackOrder::second, 1.0, 2.0, 3.0, 0.5, 2.0) ==
          doctest::Approx(-2.0 * std::abs((1.0 + 1.5) / 2.0) * 0.5));
    CHECK_THROWS_AS((void)beta_from_feedback(FeedbackOrder::first, 1, 1, 1, NAN, 1),
                    InvalidArgument);
}

TEST_CASE("standard FALQON contract") {
    const auto graphs = enumerate_cubic_graphs(8);
    const IsingProblem p(graphs[2]);
    for (auto order : {FeedbackOrder::first, FeedbackOrder::second}) {
        const auto cfg = FalqonConfig::standard(order, 10);
        const auto t = run_standard_falqon(p, cfg, ShotPolicy::exact(), 1);
        check_trace_contract(t, cfg);
        CHECK(t.layers[0].a_prev == doctest::Approx(0.0));
        CHECK(t.layers[0].beta == 0.0);
        CHECK(t.n_evals() == 10 * feedback_evaluations(order));
        CHECK(t.final_cost() == doctest::Approx(diagonal_expectation(t.final_state, p.energies())));
    }
    CHECK(FalqonConfig::standard(FeedbackOrder::first, 1).delta_init == 0.03);
    CHECK(FalqonConfig::standard(FeedbackOrder::second, 1).delta_init == 0.05);
    CHECK_THROWS_AS((void)run_standard_falqon(p, FalqonConfig::optimal(FeedbackOrder::first, 1),
                                              ShotPolicy::exact(), 1),
                    InvalidArgument);
}

TEST_CASE("zero layers leave the uniform state") {
    for (const auto &g : enumerate_cubic_graphs(10)) {
        const IsingProblem p(g);
        const auto t = run_falqon(p, FalqonConfig::standard(FeedbackOrder::first, 0),
                                  ShotPolicy::exact(), 1);
        CHECK(t.layers.empty());
        CHECK(t.n_evals() == 0);
        CHECK(success(p, t.final_state) ==
              doctest::Approx(static_cast<double>(p.solution().optimal_bitstrings.size()) / 1024.0)
                  .epsilon(1e-12));
    }
}

TEST_CASE("small steps decrease the cost monotonically") {
    for (const auto &g : enumerate_cubic_graphs(6)) {
        const IsingProblem p(g);
        auto cfg = FalqonConfig::standard(FeedbackOrder::first, 50);
        cfg.delta_init = 0.001;
        const auto t = run_standard_falqon(p, cfg, ShotPolicy::exact(), 1);
        double prev = 0.0;
        for (const auto &l : t.layers) {
            CHECK(l.cost_after_layer <= prev + 1e-9);
            prev = l.cost_after_layer;
        }
        CHECK(t.final_cost() < 0.0);
    }
}

TEST_CASE("second order with a forced fallback reproduces first order") {
    const IsingProblem p(enumerate_cubic_graphs(8)[0]);
    auto fo = FalqonConfig::standard(FeedbackOrder::first, 8);
    auto so = FalqonConfig::standard(FeedbackOrder::second, 8);
    so.delta_init = fo.delta_init;
    so.so_fallback_threshold = 1e300;
    const auto a = run_standard_falqon(p, fo, ShotPolicy::exact(), 1);
    const auto b = run_standard_falqon(p, so, ShotPolicy::exact(), 1);
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        CHECK(a.layers[i].beta == b.layers[i].beta);
        CHECK(a.layers[i].cost_after_layer == b.layers[i].cost_after_layer);
    }
}

TEST_CASE("optimal FALQON contract and per-layer dominance") {
    for (const auto &g : enumerate_cubic_graphs(6)) {
        const IsingProblem p(g);
        for (auto order : {FeedbackOrder::first, FeedbackOrder::second}) {
            const auto cfg = FalqonConfig::optimal(order, 5);
            const auto t = run_optimal_falqon(p, cfg, ShotPolicy::exact(), 3);
            check_trace_contract(t, cfg);
            CHECK(t.layers[0].beta == 0.0);

            // Replay the committed layers and compare each against the
            // standard step (0.03, 1.0) from the same entering state.
            auto entering = plus_state(6);
            for (const auto &l : t.layers) {
                const double committed = candidate_cost(p, entering, order, l, l.delta, l.m);
                CHECK(committed == doctest::Approx(l.cost_after_layer).epsilon(1e-12));
                CHECK(committed <= candidate_cost(p, entering, order, l, 0.03, 1.0) + 1e-4);
                apply_problem_layer(entering, p.energies(), l.delta);
                apply_driver_layer(entering, l.beta);
            }
        }
    }
}

TEST_CASE("optimal layer 1 is flat in the gain") {
    const IsingProblem p(enumerate_cubic_graphs(8)[1]);
    const auto t = run_optimal_falqon(p, FalqonConfig::optimal(FeedbackOrder::first, 1),
                                      ShotPolicy::exact(), 1);
    const auto &l = t.layers[0];
    const auto plus = plus_state(8);
    for (double m : {-3.0, 0.0, 1.0, 7.5}) {
        CHECK(candidate_cost(p, plus, FeedbackOrder::first, l, 0.4, m) ==
              candidate_cost(p, plus, FeedbackOrder::first, l, 0.4, 1.0));
    }
}

TEST_CASE("optimal single edge matches a grid search over the step") {
    const IsingProblem p(Graph(2, {{0, 1}}));
    const auto t = run_optimal_falqon(p, FalqonConfig::optimal(FeedbackOrder::first, 1),
                                      ShotPolicy::exact(), 1);
    double grid_min = 1e300;
    for (int i = -2000; i <= 2000; ++i) {
        auto s = plus_state(2);
        apply_problem_layer(s, p.energies(), i * 1e-3);
        grid_min = std::min(grid_min, diagonal_expectation(s, p.energies()));
    }
    CHECK(std::abs(t.final_cost() - grid_min) < 1e-3);
}

TEST_CASE("determinism and shot mode") {
    const IsingProblem p(enumerate_cubic_graphs(8)[3]);
    const auto cfg = FalqonConfig::optimal(FeedbackOrder::second, 3);
    CHECK(trace_to_jsonl(run_falqon(p, cfg, ShotPolicy::exact(), 1)) ==
          trace_to_jsonl(run_falqon(p, cfg, ShotPolicy::exact(), 2)));
    const auto shots = ShotPolicy::sampled(8192);
    const auto a = trace_to_jsonl(run_falqon(p, cfg, shots, 11));
    CHECK(a == trace_to_jsonl(run_falqon(p, cfg, shots, 11)));
    CHECK(a != trace_to_jsonl(run_falqon(p, cfg, shots, 12)));
}

TEST_CASE("trace export") {
    const IsingProblem p(enumerate_cubic_graphs(6)[0]);
    const auto t = run_falqon(p, FalqonConfig::standard(FeedbackOrder::second, 4),
                              ShotPolicy::exact(), 1);
    std::istringstream in(trace_to_jsonl(t));
    std::string line;
    int count = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.at("k").get<int>() == ++count);
        CHECK(j.at("order") == "SO");
        CHECK(j.at("mode") == "standard");
        CHECK(j.at("gamma_k").get<double>() == j.at("delta_k").get<double>());
        CHECK(j.at("beta_k").get<double>() == t.layers[count - 1].beta);
        CHECK(j.at("evals_this_layer").get<int>() == 3);
    }
    CHECK(count == 4);
}
