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

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ofalqon/graph.hpp"
#include "ofalqon/random.hpp"

namespace ofq {

using cplx = std::complex<double>;

inline constexpr int max_qubits = 24;

/// Norm drift beyond this raises ConsistencyError; nothing renormalizes.
inline constexpr double norm_tolerance = 1e-8;

/// Largest imaginary part tolerated in an expectation value.
inline constexpr double hermitian_tolerance = 1e-9;

/**
 * @brief Pure state of n qubits in the computational basis.
 *
 * Qubit j is bit j of the amplitude index. The global phase is not tracked.
 */
class Statevector {
  public:
    Statevector() = default;

    static Statevector plus_state(int n_qubits);
    static Statevector basis_state(int n_qubits, Bitstring x);
    /// Length must be a power of two and the norm 1 within norm_tolerance.
    static Statevector from_amplitudes(std::vector<cplx> amplitudes);

    [[nodiscard]] int n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }

    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] std::vector<double> probabilities() const;

    /// Throws ConsistencyError if |norm^2 - 1| > norm_tolerance.
    void check_norm() const;

  private:
    Statevector(int n, std::vector<cplx> amps) : n_(n), amps_(std::move(amps)) {}

    int n_ = 0;
    std::vector<cplx> amps_;
};

[[nodiscard]] inline Statevector plus_state(int n_qubits) {
    return Statevector::plus_state(n_qubits);
}

/// Angles for one (problem, driver) layer. A single entry is the scalar
/// form; multi-angle layers carry one gamma per edge and one beta per qubit.
struct LayerParams {
    std::vector<double> gamma;
    std::vector<double> beta;
};

// Problem unitary exp(-i gamma H_p), H_p = sum_{(a,b)} Z_a Z_b ---------------

void apply_problem_layer(Statevector &state, const Graph &g, double gamma);
/// Multi-angle form: exp(-i sum_e gamma_e Z_a Z_b), one angle per edge in
/// g.edges() order.
void apply_problem_layer(Statevector &state, const Graph &g,
                         std::span<const double> edge_gammas);
/// Fast path over precomputed diagonal energies (see ising_energies).
void apply_problem_layer(Statevector &state, std::span<const int> energies,
                         double gamma);

// Driver unitary exp(-i beta_j X_j) on every qubit ---------------------------

void apply_driver_layer(Statevector &state, double beta);
void apply_driver_layer(Statevector &state, std::span<const double> qubit_betas);

/// Problem layer then driver layer. energies must match g.
void apply_layer(Statevector &state, const Graph &g,
                 std::span<const int> energies, const LayerParams &params);

// Observables ----------------------------------------------------------------

/// Hermitian operator acting on raw amplitude vectors.
class LinearOperator {
  public:
    virtual ~LinearOperator() = default;
    [[nodiscard]] virtual int n_qubits() const = 0;
    /// out = Op * in; both spans have length 2^n_qubits.
    virtual void apply(std::span<const cplx> in, std::span<cplx> out) const = 0;
};

class IdentityOperator final : public LinearOperator {
  public:
    explicit IdentityOperator(int n_qubits) : n_(n_qubits) {}
    [[nodiscard]] int n_qubits() const override { return n_; }
    void apply(std::span<const cplx> in, std::span<cplx> out) const override;

  private:
    int n_;
};

/// <a|b>, conjugating a.
[[nodiscard]] cplx inner_product(std::span<const cplx> a,
                                 std::span<const cplx> b);

/// <psi|op|psi>; raises ConsistencyError when the imaginary residual exceeds
/// hermitian_tolerance.
[[nodiscard]] double expectation(const Statevector &state,
                                 const LinearOperator &op);

/// sum_x |psi_x|^2 d_x for a diagonal observable.
[[nodiscard]] double diagonal_expectation(const Statevector &state,
                                          std::span<const int> diagonal);

// Measurement ----------------------------------------------------------------

using Histogram = std::map<Bitstring, std::uint64_t>;

/// Multinomial draw of `shots` outcomes from |amplitude|^2.
[[nodiscard]] Histogram sample_bitstrings(const Statevector &state,
                                          std::uint64_t shots, Rng &rng);
[[nodiscard]] Histogram sample_bitstrings(const Statevector &state,
                                          std::uint64_t shots,
                                          std::uint64_t seed);

/// Mean of a diagonal observable over a sampled histogram.
[[nodiscard]] double histogram_mean(const Histogram &counts,
                                    std::span<const int> diagonal);

/// Shot estimate of a diagonal observable. Draws the same outcomes as
/// sample_bitstrings with the same stream, without building the histogram.
[[nodiscard]] double sampled_expectation(const Statevector &state,
                                         std::span<const int> diagonal,
                                         std::uint64_t shots, Rng &rng);

} // namespace ofq
