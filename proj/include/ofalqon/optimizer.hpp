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
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ofq {

using Objective = std::function<double(std::span<const double>)>;

inline constexpr double default_learning_rate = 0.003;
inline constexpr double default_fd_step = 1e-3;

/// Stopping rules shared by both optimizers.
struct OptimizerBudget {
    int max_iterations = 20;            ///< outer iterations
    double line_search_tolerance = 1e-4;
    double parameter_tolerance = 1e-8;  ///< relative decrease per outer iteration
    /// Hard cap on objective calls; 0 means no cap. When hit, the incumbent
    /// is returned with converged = false.
    std::uint64_t max_evaluations = 0;
    double bracket_step = 1.0;
    double bracket_expansion = 2.0;
    int max_bracket_probes = 50;
};

struct OptResult {
    std::vector<double> best_params;
    /// Objective at best_params as last evaluated. Gradient descent never
    /// evaluates its iterate directly and leaves this empty.
    std::optional<double> best_value;
    std::uint64_t n_evals = 0;
    bool converged = false;
    int iterations = 0;
};

/// Powell's conjugate-direction method. Deterministic; every objective call
/// is counted exactly once.
[[nodiscard]] OptResult powell_minimize(const Objective &objective,
                                        std::span<const double> x0,
                                        const OptimizerBudget &budget);

/// Fixed-step descent with central finite-difference gradients:
/// exactly 2 * dim objective calls per iteration.
[[nodiscard]] OptResult gradient_descent_minimize(const Objective &objective,
                                                  std::span<const double> x0,
                                                  const OptimizerBudget &budget,
                                                  double learning_rate = default_learning_rate,
                                                  double fd_step = default_fd_step);

} // namespace ofq
