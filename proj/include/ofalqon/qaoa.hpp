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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofalqon/falqon.hpp"
#include "ofalqon/hamiltonian.hpp"
#include "ofalqon/optimizer.hpp"

namespace ofq {

enum class AnsatzVariant { standard, multi_angle };

[[nodiscard]] std::string_view to_string(AnsatzVariant variant);

/**
 * @brief Angles of an L-layer ansatz.
 *
 * Row k holds layer k+1. Standard rows have one entry; multi-angle rows hold
 * one gamma per edge (in Graph::edges() order) and one beta per qubit.
 * The flat form is layer-major with the gammas of a layer before its betas.
 */
struct QaoaParams {
    AnsatzVariant variant = AnsatzVariant::standard;
    std::vector<std::vector<double>> gammas;
    std::vector<std::vector<double>> betas;

    [[nodiscard]] int n_layers() const noexcept { return static_cast<int>(gammas.size()); }

    /// Raises DimensionError unless the shape matches the variant and graph.
    void validate(const Graph &g) const;

    [[nodiscard]] std::vector<double> flatten() const;
    [[nodiscard]] static QaoaParams unflatten(AnsatzVariant variant, int n_layers,
                                              const Graph &g, std::span<const double> flat);
    /// Every angle set to `value`.
    [[nodiscard]] static QaoaParams filled(AnsatzVariant variant, int n_layers,
                                           const Graph &g, double value);

    bool operator==(const QaoaParams &) const = default;
};

/// Number of angles per layer for the variant.
[[nodiscard]] std::size_t angles_per_layer(AnsatzVariant variant, const Graph &g);

/// |+>^N followed by L (problem, driver) layers.
[[nodiscard]] Statevector prepare_qaoa_state(const IsingProblem &problem,
                                             const QaoaParams &params);

/// Exact <H_p> of the prepared state.
[[nodiscard]] double qaoa_cost(const IsingProblem &problem, const QaoaParams &params);
/// <H_p> from `shots` samples, or exact when shots == 0.
[[nodiscard]] double qaoa_cost(const IsingProblem &problem, const QaoaParams &params,
                               std::uint64_t shots, Rng &rng);

enum class WarmStartKind { fixed, falqon_standard, falqon_optimal };

struct WarmStartSource {
    WarmStartKind kind = WarmStartKind::fixed;
    FeedbackOrder falqon_order = FeedbackOrder::first;
    double fixed_value = 0.5;

    bool operator==(const WarmStartSource &) const = default;
};

/// Initial angles: a constant, or the first L (gamma_k, beta_k) of a FALQON
/// trace, broadcast across each row for the multi-angle variant.
/// Raises InsufficientTraceError when the trace is missing or too short.
[[nodiscard]] QaoaParams warm_start_params(const WarmStartSource &source,
                                           const FalqonTrace *trace, AnsatzVariant variant,
                                           int n_layers, const Graph &g);

enum class OptimizerKind { powell, gradient_descent };

[[nodiscard]] std::string_view to_string(OptimizerKind kind);

struct GradientSettings {
    double learning_rate = default_learning_rate;
    double fd_step = default_fd_step;
};

struct QaoaOptimization {
    QaoaParams params;
    OptResult result; ///< best_value is always set; n_evals counts every cost call
};

/**
 * Minimizes the cost over the flattened angles. Gradient descent ends with
 * one counted evaluation at its final iterate; a zero iteration budget
 * evaluates the start once and returns it unchanged.
 */
[[nodiscard]] QaoaOptimization optimize_qaoa(const IsingProblem &problem,
                                             const QaoaParams &init, OptimizerKind optimizer,
                                             const OptimizerBudget &budget,
                                             const ShotPolicy &shots, std::uint64_t seed,
                                             const GradientSettings &gradient = {});

/// JSON document with the variant, layer count, flattening order and angles.
[[nodiscard]] std::string params_to_json(const QaoaParams &params);
/// Raises ParseError on malformed documents.
[[nodiscard]] QaoaParams params_from_json(std::string_view text);

} // namespace ofq
