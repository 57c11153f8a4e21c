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
#include "ofalqon/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "ofalqon/error.hpp"

namespace ofq {

namespace {

void check_qubit_count(int n) {
    if (n < 1) {
        throw InvalidArgument("qubit count must be positive, got " +
                              std::to_string(n));
    }
    if (n > max_qubits) {
        throw SizeError("statevector simulation is limited to " +
                        std::to_string(max_qubits) + " qubits, got " +
                        std::to_string(n));
    }
}

void check_graph_matches(const Statevector &state, const Graph &g) {
    if (g.n_vertices() != state.n_qubits()) {
        throw DimensionError("graph has " + std::to_string(g.n_vertices()) +
                             " vertices but the state has " +
                             std::to_string(state.n_qubits()) + " qubits");
    }
}

// Inclusive prefix sums of outcome probabilities.
std::vector<double> cumulative(const Statevector &state) {
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t x = 0; x < cdf.size(); ++x) {
        acc += std::norm(amps[x]);
        cdf[x] = acc;
    }
    return cdf;
}

std::size_t draw(const std::vector<double> &cdf, Rng &rng) {
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

} // namespace

Statevector Statevector::plus_state(int n_qubits) {
    check_qubit_count(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    return Statevector(n_qubits, std::vector<cplx>(dim, cplx(a, 0.0)));
}

Statevector Statevector::basis_state(int n_qubits, Bitstring x) {
    check_qubit_count(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (x >= dim) {
        throw InvalidArgument("basis index out of range");
    }
    std::vector<cplx> amps(dim);
    amps[x] = 1.0;
    return Statevector(n_qubits, std::move(amps));
}

Statevector Statevector::from_amplitudes(std::vector<cplx> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw DimensionError("amplitude count must be a power of two >= 2, got " +
                             std::to_string(dim));
    }
    const int n = std::countr_zero(dim);
    check_qubit_count(n);
    Statevector s(n, std::move(amplitudes));
    s.check_norm();
    return s;
}

double Statevector::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(),
                   [](const cplx &a) { return std::norm(a); });
    return p;
}

void Statevector::check_norm() const {
    const double drift = std::abs(norm_squared() - 1.0);
    if (drift > norm_tolerance) {
        std::ostringstream msg;
        msg << "statevector norm drifted by " << drift
            << " (tolerance " << norm_tolerance << ")";
        throw ConsistencyError(msg.str());
    }
}

void apply_problem_layer(Statevector &state, std::span<const int> energies,
                         double gamma) {
    if (energies.size() != state.dim()) {
        throw DimensionError("energy table length does not match the state");
    }
    const int lo = *std::min_element(energies.begin(), energies.end());
    const int hi = *std::max_element(energies.begin(), energies.end());
    // Energies are small integers: tabulate the phases once.
    std::vector<cplx> phase(static_cast<std::size_t>(hi - lo + 1));
    for (int e = lo; e <= hi; ++e) {
        phase[static_cast<std::size_t>(e - lo)] =
            std::polar(1.0, -gamma * static_cast<double>(e));
    }
    auto amps = state.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        amps[x] *= phase[static_cast<std::size_t>(energies[x] - lo)];
    }
    state.check_norm();
}

void apply_problem_layer(Statevector &state, const Graph &g, double gamma) {
    check_graph_matches(state, g);
    apply_problem_layer(state, ising_energies(g), gamma);
}

void apply_problem_layer(Statevector &state, const Graph &g,
                         std::span<const double> edge_gammas) {
    check_graph_matches(state, g);
    if (edge_gammas.size() != g.n_edges()) {
        throw DimensionError("multi-angle problem layer needs " +
                             std::to_string(g.n_edges()) +
                             " edge angles, got " +
                             std::to_string(edge_gammas.size()));
    }
    auto amps = state.amplitudes();
    std::vector<double> angle(amps.size(), 0.0);
    const auto &edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Bitstring mask =
            (Bitstring{1} << edges[k].u) | (Bitstring{1} << edges[k].v);
        const double gk = edge_gammas[k];
        for (std::size_t x = 0; x < angle.size(); ++x) {
            angle[x] += (std::popcount(x & mask) & 1) ? gk : -gk;
        }
    }
    for (std::size_t x = 0; x < amps.size(); ++x) {
        amps[x] *= std::polar(1.0, angle[x]);
    }
    state.check_norm();
}

namespace {

void rotate_x(std::span<cplx> amps, int qubit, double beta) {
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a = amps[i];
            const cplx b = amps[i + stride];
            // (a, b) -> (a cos - i b sin, -i a sin + b cos)
            amps[i] = cplx(c * a.real() + s * b.imag(), c * a.imag() - s * b.real());
            amps[i + stride] =
                cplx(s * a.imag() + c * b.real(), -s * a.real() + c * b.imag());
        }
    }
}

} // namespace

void apply_driver_layer(Statevector &state, double beta) {
    auto amps = state.amplitudes();
    for (int j = 0; j < state.n_qubits(); ++j) {
        rotate_x(amps, j, beta);
    }
    state.check_norm();
}

void apply_driver_layer(Statevector &state, std::span<const double> qubit_betas) {
    if (qubit_betas.size() != static_cast<std::size_t>(state.n_qubits())) {
        throw DimensionError("multi-angle driver layer needs " +
                             std::to_string(state.n_qubits()) +
                             " qubit angles, got " +
                             std::to_string(qubit_betas.size()));
    }
    auto amps = state.amplitudes();
    for (int j = 0; j < state.n_qubits(); ++j) {
        rotate_x(amps, j, qubit_betas[static_cast<std::size_t>(j)]);
    }
    state.check_norm();
}

void apply_layer(Statevector &state, const Graph &g,
                 std::span<const int> energies, const LayerParams &params) {
    if (params.gamma.size() == 1) {
        apply_problem_layer(state, energies, params.gamma.front());
    } else {
        apply_problem_layer(state, g, params.gamma);
    }
    if (params.beta.size() == 1) {
        apply_driver_layer(state, params.beta.front());
    } else {
        apply_driver_layer(state, params.beta);
    }
}

void IdentityOperator::apply(std::span<const cplx> in,
                             std::span<cplx> out) const {
    std::copy(in.begin(), in.end(), out.begin());
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw DimensionError("inner product of vectors with different lengths");
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // conj(a) * b
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double expectation(const Statevector &state, const LinearOperator &op) {
    if (op.n_qubits() != state.n_qubits()) {
        throw DimensionError("operator and state act on different qubit counts");
    }
    std::vector<cplx> out(state.dim());
    op.apply(state.amplitudes(), out);
    const cplx value = inner_product(state.amplitudes(), out);
    if (std::abs(value.imag()) > hermitian_tolerance) {
        std::ostringstream msg;
        msg << "non-Hermitian evaluation: imaginary residual " << value.imag();
        throw ConsistencyError(msg.str());
    }
    return value.real();
}

double diagonal_expectation(const Statevector &state,
                            std::span<const int> diagonal) {
    if (diagonal.size() != state.dim()) {
        throw DimensionError("diagonal length does not match the state");
    }
    const auto amps = state.amplitudes();
    double acc = 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        acc += std::norm(amps[x]) * static_cast<double>(diagonal[x]);
    }
    return acc;
}

Histogram sample_bitstrings(const Statevector &state, std::uint64_t shots,
                            Rng &rng) {
    if (shots == 0) {
        throw InvalidArgument("shot count must be positive");
    }
    const auto cdf = cumulative(state);
    Histogram counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++counts[draw(cdf, rng)];
    }
    return counts;
}

Histogram sample_bitstrings(const Statevector &state, std::uint64_t shots,
                            std::uint64_t seed) {
    Rng rng(seed);
    return sample_bitstrings(state, shots, rng);
}

double histogram_mean(const Histogram &counts, std::span<const int> diagonal) {
    double acc = 0.0;
    std::uint64_t total = 0;
    for (const auto &[x, c] : counts) {
        acc += static_cast<double>(diagonal[x]) * static_cast<double>(c);
        total += c;
    }
    if (total == 0) {
        throw InvalidArgument("empty histogram");
    }
    return acc / static_cast<double>(total);
}

double sampled_expectation(const Statevector &state,
                           std::span<const int> diagonal, std::uint64_t shots,
                           Rng &rng) {
    if (shots == 0) {
        throw InvalidArgument("shot count must be positive");
    }
    if (diagonal.size() != state.dim()) {
        throw DimensionError("diagonal length does not match the state");
    }
    const auto cdf = cumulative(state);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        acc += static_cast<double>(diagonal[draw(cdf, rng)]);
    }
    return acc / static_cast<double>(shots);
}

} // namespace ofq
