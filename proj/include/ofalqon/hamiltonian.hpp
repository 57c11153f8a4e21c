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
#include <vector>

#include "ofalqon/graph.hpp"
#include "ofalqon/random.hpp"
#include "ofalqon/statevector.hpp"

namespace ofq {

/**
 * @brief MaxCut problem Hamiltonian H_p = sum_{(i,j) in E} Z_i Z_j.
 *
 * Diagonal in the computational basis; the integer energy of every basis
 * state and the exhaustive MaxCut solution are computed once at
 * construction.
 */
class IsingProblem final : public LinearOperator {
  public:
    explicit IsingProblem(Graph g);

    [[nodiscard]] const Graph &graph() const noexcept { return graph_; }
    [[nodiscard]] int n_qubits() const override { return graph_.n_vertices(); }
    [[nodiscard]] std::span<const int> energies() const noexcept {
        return energies_;
    }
    [[nodiscard]] const MaxCutSolution &solution() const noexcept {
        return solution_;
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override;

  private:
    Graph graph_;
    std::vector<int> energies_;
    MaxCutSolution solution_;
};

/// Transverse-field driver H_d = sum_j X_j; |+>^N is its top eigenstate.
class DriverOperator final : public LinearOperator {
  public:
    explicit DriverOperator(int n_qubits) : n_(n_qubits) {}

    [[nodiscard]] int n_qubits() const override { return n_; }
    void apply(std::span<const cplx> in, std::span<cplx> out) const override;

  private:
    int n_;
};

/// H_p |psi>, unnormalized.
[[nodiscard]] std::vector<cplx> apply_hp(const IsingProblem &problem,
                                         const Statevector &state);
/// H_d |psi>, unnormalized.
[[nodiscard]] std::vector<cplx> apply_hd(const DriverOperator &driver,
                                         const Statevector &state);

/// Feedback quantities of one state, with the variance of each observable
/// (used as the shot-noise proxy).
struct CommutatorExpectations {
    double a = 0.0; ///< <i[H_d, H_p]>
    double b = 0.0; ///< <1/2 [[H_d, H_p], H_d]>
    double c = 0.0; ///< <[[H_d, H_p], H_p]>
    double var_a = 0.0;
    double var_b = 0.0;
    double var_c = 0.0;
};

/// Exact evaluation by nested operator applications. Raises
/// ConsistencyError if any imaginary residual exceeds hermitian_tolerance.
[[nodiscard]] CommutatorExpectations
commutator_expectations(const IsingProblem &problem,
                        const DriverOperator &driver, const Statevector &state);

/// exact + N(0, variance_proxy / shots). shots == 0 disables the noise.
[[nodiscard]] double noisy_expectation(double exact, double variance_proxy,
                                       std::uint64_t shots, Rng &rng);
[[nodiscard]] double noisy_expectation(double exact, double variance_proxy,
                                       std::uint64_t shots, std::uint64_t seed);

/// How expectation values are obtained. A shot count of 0 means exact.
struct ShotPolicy {
    std::uint64_t cost_shots = 0;     ///< multinomial samples per <H_p> estimate
    std::uint64_t feedback_shots = 0; ///< Gaussian proxy for A, B, C
    std::uint64_t success_shots = 0;  ///< samples for the success probability

    [[nodiscard]] static ShotPolicy exact() { return {}; }
    [[nodiscard]] static ShotPolicy sampled(std::uint64_t shots) {
        return {shots, shots, shots};
    }
};

/// <H_p>, exact when shots == 0, otherwise a multinomial estimate.
[[nodiscard]] double estimate_cost(const IsingProblem &problem,
                                   const Statevector &state,
                                   std::uint64_t shots, Rng &rng);

} // namespace ofq
