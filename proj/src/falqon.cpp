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
#include "ofalqon/falqon.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "ofalqon/error.hpp"

namespace ofq {

namespace {

struct Feedback {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Feedback quantities of the current state, with optional Gaussian shot
// noise on the observables the order actually uses.
Feedback measure_feedback(const IsingProblem &problem, const DriverOperator &driver,
                          const Statevector &state, FeedbackOrder order,
                          std::uint64_t shots, Rng &rng) {
    const auto exact = commutator_expectations(problem, driver, state);
    Feedback fb{exact.a, exact.b, exact.c};
    if (shots != 0) {
        fb.a = noisy_expectation(exact.a, exact.var_a, shots, rng);
        if (order == FeedbackOrder::second) {
            fb.b = noisy_expectation(exact.b, exact.var_b, shots, rng);
            fb.c = noisy_expectation(exact.c, exact.var_c, shots, rng);
        }
    }
    return fb;
}

void validate(const IsingProblem &problem, const FalqonConfig &config) {
    if (config.n_layers < 0) {
        throw InvalidArgument("layer count must be non-negative");
    }
    if (!(config.so_fallback_threshold > 0.0)) {
        throw InvalidArgument("second-order fallback threshold must be positive");
    }
    if (!std::isfinite(config.delta_init) || !std::isfinite(config.m_init)) {
        throw InvalidArgument("FALQON step and gain must be finite");
    }
    if (problem.n_qubits() > max_qubits) {
        throw SizeError("problem exceeds the simulator qubit limit");
    }
}

FalqonLayer make_layer(int k, double delta, double m, double beta, const Feedback &fb) {
    FalqonLayer layer;
    layer.k = k;
    layer.delta = delta;
    layer.m = m;
    layer.gamma = delta;
    layer.beta = beta;
    layer.a_prev = fb.a;
    layer.b_prev = fb.b;
    layer.c_prev = fb.c;
    return layer;
}

} // namespace

std::string_view to_string(FeedbackOrder order) {
    return order == FeedbackOrder::first ? "FO" : "SO";
}

std::string_view to_string(FalqonMode mode) {
    return mode == FalqonMode::standard ? "standard" : "optimal";
}

OptimizerBudget FalqonConfig::default_layer_budget() {
    OptimizerBudget budget;
    budget.max_iterations = 20;
    return budget;
}

FalqonConfig FalqonConfig::standard(FeedbackOrder order, int n_layers) {
    FalqonConfig cfg;
    cfg.order = order;
    cfg.mode = FalqonMode::standard;
    cfg.delta_init = order == FeedbackOrder::first ? 0.03 : 0.05;
    cfg.m_init = 1.0;
    cfg.n_layers = n_layers;
    return cfg;
}

FalqonConfig FalqonConfig::optimal(FeedbackOrder order, int n_layers) {
    FalqonConfig cfg;
    cfg.order = order;
    cfg.mode = FalqonMode::optimal;
    cfg.delta_init = 0.5;
    cfg.m_init = 1.0;
    cfg.n_layers = n_layers;
    return cfg;
}

std::uint64_t FalqonTrace::n_evals() const {
    std::uint64_t total = 0;
    for (const auto &layer : layers) {
        total += layer.evals_this_layer;
    }
    return total;
}

double FalqonTrace::final_cost() const {
    return layers.empty() ? 0.0 : layers.back().cost_after_layer;
}

double beta_from_feedback(FeedbackOrder order, double a, double b, double c,
                          double delta, double m, double threshold) {
    if (!std::isfinite(delta)) {
        throw InvalidArgument("feedback step must be finite");
    }
    if (!(threshold > 0.0)) {
        throw InvalidArgument("fallback threshold must be positive");
    }
    const double first = -m * a * delta;
    if (order == FeedbackOrder::first) {
        return first;
    }
    const double denom = 2.0 * b * delta;
    if (std::abs(b) < threshold || std::abs(b * delta) < threshold) {
        return first;
    }
    return -m * std::abs((a + c * delta) / denom) * delta;
}

FalqonTrace run_standard_falqon(const IsingProblem &problem, const FalqonConfig &config,
                                const ShotPolicy &shots, std::uint64_t seed) {
    validate(problem, config);
    if (config.mode != FalqonMode::standard) {
        throw InvalidArgument("run_standard_falqon needs a standard-mode config");
    }
    const int n = problem.n_qubits();
    const DriverOperator driver(n);
    Rng rng(seed);
    FalqonTrace trace;
    trace.order = config.order;
    trace.mode = config.mode;
    trace.final_state = plus_state(n);
    auto &state = trace.final_state;

    for (int k = 1; k <= config.n_layers; ++k) {
        const Feedback fb =
            measure_feedback(problem, driver, state, config.order, shots.feedback_shots, rng);
        const double beta = beta_from_feedback(config.order, fb.a, fb.b, fb.c,
                                               config.delta_init, config.m_init,
                                               config.so_fallback_threshold);
        apply_problem_layer(state, problem.energies(), config.delta_init);
        apply_driver_layer(state, beta);
        FalqonLayer layer = make_layer(k, config.delta_init, config.m_init, beta, fb);
        layer.cost_after_layer = diagonal_expectation(state, problem.energies());
        layer.evals_this_layer = feedback_evaluations(config.order);
        trace.layers.push_back(layer);
    }
    return trace;
}

FalqonTrace run_optimal_falqon(const IsingProblem &problem, const FalqonConfig &config,
                               const ShotPolicy &shots, std::uint64_t seed) {
    validate(problem, config);
    if (config.mode != FalqonMode::optimal) {
        throw InvalidArgument("run_optimal_falqon needs an optimal-mode config");
    }
    const int n = problem.n_qubits();
    const DriverOperator driver(n);
    Rng rng(seed);
    FalqonTrace trace;
    trace.order = config.order;
    trace.mode = config.mode;
    trace.final_state = plus_state(n);
    auto &state = trace.final_state;

    Statevector candidate;
    for (int k = 1; k <= config.n_layers; ++k) {
        const Feedback fb =
            measure_feedback(problem, driver, state, config.order, shots.feedback_shots, rng);
        const auto layer_cost = [&](std::span<const double> x) {
            const double beta = beta_from_feedback(config.order, fb.a, fb.b, fb.c, x[0],
                                                   x[1], config.so_fallback_threshold);
            candidate = state;
            apply_problem_layer(candidate, problem.energies(), x[0]);
            apply_driver_layer(candidate, beta);
            return estimate_cost(problem, candidate, shots.cost_shots, rng);
        };
        const std::array<double, 2> start{config.delta_init, config.m_init};
        OptResult best;
        try {
            best = powell_minimize(layer_cost, start, config.optimizer_budget);
        } catch (const OptimizerError &e) {
            throw OptimizerError("layer " + std::to_string(k) + ": " + e.what());
        }
        const double delta = best.best_params[0];
        const double m = best.best_params[1];
        const double beta = beta_from_feedback(config.order, fb.a, fb.b, fb.c, delta, m,
                                               config.so_fallback_threshold);
        apply_problem_layer(state, problem.energies(), delta);
        apply_driver_layer(state, beta);
        FalqonLayer layer = make_layer(k, delta, m, beta, fb);
        layer.cost_after_layer = diagonal_expectation(state, problem.energies());
        layer.evals_this_layer = feedback_evaluations(config.order) + best.n_evals;
        trace.layers.push_back(layer);
    }
    return trace;
}

FalqonTrace run_falqon(const IsingProblem &problem, const FalqonConfig &config,
                       const ShotPolicy &shots, std::uint64_t seed) {
    return config.mode == FalqonMode::standard
               ? run_standard_falqon(problem, config, shots, seed)
               : run_optimal_falqon(problem, config, shots, seed);
}

void write_trace_jsonl(std::ostream &out, const FalqonTrace &trace) {
    for (const auto &layer : trace.layers) {
        nlohmann::ordered_json j;
        j["order"] = std::string(to_string(trace.order));
        j["mode"] = std::string(to_string(trace.mode));
        j["k"] = layer.k;
        j["delta_k"] = layer.delta;
        j["m_k"] = layer.m;
        j["gamma_k"] = layer.gamma;
        j["beta_k"] = layer.beta;
        j["A_prev"] = layer.a_prev;
        j["B_prev"] = layer.b_prev;
        j["C_prev"] = layer.c_prev;
        j["cost_after_layer"] = layer.cost_after_layer;
        j["evals_this_layer"] = layer.evals_this_layer;
        out << j.dump() << '\n';
    }
}

std::string trace_to_jsonl(const FalqonTrace &trace) {
    std::ostringstream out;
    write_trace_jsonl(out, trace);
    return out.str();
}

} // namespace ofq
