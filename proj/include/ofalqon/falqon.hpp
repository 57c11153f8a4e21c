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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ofalqon/hamiltonian.hpp"
#include "ofalqon/optimizer.hpp"
#include "ofalqon/statevector.hpp"

namespace ofq {

enum class FeedbackOrder { first, second };
enum class FalqonMode { standard, optimal };

[[nodiscard]] std::string_view to_string(FeedbackOrder order);
[[nodiscard]] std::string_view to_string(FalqonMode mode);

/// Feedback-law evaluations charged per layer: A only, or A, B and C.
[[nodiscard]] constexpr std::uint64_t feedback_evaluations(FeedbackOrder order) {
    return order == FeedbackOrder::first ? 1 : 3;
}

struct FalqonConfig {
    FeedbackOrder order = FeedbackOrder::first;
    FalqonMode mode = FalqonMode::standard;
    /// Fixed step (standard) or optimizer start (optimal).
    double delta_init = 0.03;
    /// Fixed gain w (standard) or optimizer start for M (optimal).
    double m_init = 1.0;
    int n_layers = 1;
    double so_fallback_threshold = 1e-12;
    OptimizerBudget optimizer_budget = default_layer_budget();

    /// Per-layer search budget of the optimal mode: 20 outer Powell iterations.
    [[nodiscard]] static OptimizerBudget default_layer_budget();
    /// delta = 0.03 (first order) or 0.05 (second order), w = 1.
    [[nodiscard]] static FalqonConfig standard(FeedbackOrder order, int n_layers);
    /// Search from (delta, M) = (0.5, 1.0).
    [[nodiscard]] static FalqonConfig optimal(FeedbackOrder order, int n_layers);
};

struct FalqonLayer {
    int k = 0; ///< 1-based layer index
    double delta = 0.0;
    double m = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double a_prev = 0.0; ///< feedback quantities of the entering state
    double b_prev = 0.0;
    double c_prev = 0.0;
    double cost_after_layer = 0.0; ///< exact <H_p> of the committed state
    std::uint64_t evals_this_layer = 0;
};

struct FalqonTrace {
    FeedbackOrder order = FeedbackOrder::first;
    FalqonMode mode = FalqonMode::standard;
    std::vector<FalqonLayer> layers;
    Statevector final_state;

    [[nodiscard]] std::uint64_t n_evals() const;
    /// Exact <H_p> of the final state; the initial cost 0 when there are no layers.
    [[nodiscard]] double final_cost() const;
};

/// Driver angle from the feedback law.
/// first:  -m A delta
/// second: -m |(A + C delta) / (2 B delta)| delta, or the first-order value
///         when |B| or |B delta| is below the threshold.
[[nodiscard]] double beta_from_feedback(FeedbackOrder order, double a, double b,
                                        double c, double delta, double m,
                                        double threshold = 1e-12);

/// Fixed delta and gain at every layer.
[[nodiscard]] FalqonTrace run_standard_falqon(const IsingProblem &problem,
                                              const FalqonConfig &config,
                                              const ShotPolicy &shots,
                                              std::uint64_t seed);

/// Per-layer Powell search over (delta, M) with the feedback quantities
/// frozen at their entering-state values.
[[nodiscard]] FalqonTrace run_optimal_falqon(const IsingProblem &problem,
                                             const FalqonConfig &config,
                                             const ShotPolicy &shots,
                                             std::uint64_t seed);

/// Dispatches on config.mode.
[[nodiscard]] FalqonTrace run_falqon(const IsingProblem &problem,
                                     const FalqonConfig &config,
                                     const ShotPolicy &shots, std::uint64_t seed);

/// One JSON object per layer, newline-terminated.
void write_trace_jsonl(std::ostream &out, const FalqonTrace &trace);
[[nodiscard]] std::string trace_to_jsonl(const FalqonTrace &trace);

} // namespace ofq
