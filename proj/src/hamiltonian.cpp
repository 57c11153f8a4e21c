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
#include "ofalqon/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ofalqon/error.hpp"

namespace ofq {

namespace {

using Vec = std::vector<cplx>;

void check_dims(const LinearOperator &op, std::span<const cplx> in,
                std::span<cplx> out) {
    const std::size_t dim = std::size_t{1} << op.n_qubits();
    if (in.size() != dim || out.size() != dim) {
        throw DimensionError("operator on " + std::to_string(op.n_qubits()) +
                             " qubits applied to a vector of length " +
                             std::to_string(in.size()));
    }
}

Vec apply_op(const LinearOperator &op, const Vec &v) {
    Vec out(v.size());
    op.apply(v, out);
    return out;
}

// Real part of <psi|v> after asserting the imaginary part vanishes.
double real_overlap(std::span<const cplx> psi, const Vec &v, const char *what) {
    const cplx z = inner_product(psi, v);
    if (std::abs(z.imag()) > hermitian_tolerance) {
        std::ostringstream msg;
        msg << "commutator expectation " << what << " has imaginary residual "
            << z.imag();
        throw ConsistencyError(msg.str());
    }
    return z.real();
}

double norm2(const Vec &v) {
    double acc = 0.0;
    for (const auto &x : v) {
        acc += std::norm(x);
    }
    return acc;
}

} // namespace

IsingProblem::IsingProblem(Graph g)
    : graph_(std::move(g)), energies_(ising_energies(graph_)) {
    solution_.min_energy = *std::min_element(energies_.begin(), energies_.end());
    solution_.max_cut_value =
        (static_cast<int>(graph_.n_edges()) - solution_.min_energy) / 2;
    for (std::size_t x = 0; x < energies_.size(); ++x) {
        if (energies_[x] == solution_.min_energy) {
            solution_.optimal_bitstrings.push_back(x);
        }
    }
}

void IsingProblem::apply(std::span<const cplx> in, std::span<cplx> out) const {
    check_dims(*this, in, out);
    for (std::size_t x = 0; x < in.size(); ++x) {
        out[x] = in[x] * static_cast<double>(energies_[x]);
    }
}

void DriverOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
    check_dims(*this, in, out);
    std::fill(out.begin(), out.end(), cplx{});
    for (int j = 0; j < n_; ++j) {
        const std::size_t flip = std::size_t{1} << j;
        for (std::size_t x = 0; x < in.size(); ++x) {
            out[x] += in[x ^ flip];
        }
    }
}

std::vector<cplx> apply_hp(const IsingProblem &problem,
                           const Statevector &state) {
    Vec out(state.dim());
    problem.apply(state.amplitudes(), out);
    return out;
}

std::vector<cplx> apply_hd(const DriverOperator &driver,
                           const Statevector &state) {
    Vec out(state.dim());
    driver.apply(state.amplitudes(), out);
    return out;
}

CommutatorExpectations commutator_expectations(const IsingProblem &problem,
                                               const DriverOperator &driver,
                                               const Statevector &state) {
    if (problem.n_qubits() != state.n_qubits() ||
        driver.n_qubits() != state.n_qubits()) {
        throw DimensionError("commutator operands act on different qubit counts");
    }
    const auto psi = state.amplitudes();
    const Vec p = apply_hp(problem, state);  // H_p psi
    const Vec d = apply_hd(driver, state);   // H_d psi
    const Vec dp = apply_op(driver, p);      // H_d H_p psi
    const Vec pd = apply_op(problem, d);     // H_p H_d psi
    const Vec dd = apply_op(driver, d);      // H_d H_d psi
    const Vec pp = apply_op(problem, p);     // H_p H_p psi
    const Vec dpd = apply_op(driver, pd);    // H_d H_p H_d psi
    const Vec dpp = apply_op(driver, pp);    // H_d H_p H_p psi
    const Vec pdd = apply_op(problem, dd);   // H_p H_d H_d psi
    const Vec pdp = apply_op(problem, dp);   // H_p H_d H_p psi
    const Vec ppd = apply_op(problem, pd);   // H_p H_p H_d psi

    const std::size_t dim = psi.size();
    Vec va(dim);
    Vec vb(dim);
    Vec vc(dim);
    const cplx i_unit(0.0, 1.0);
    for (std::size_t x = 0; x < dim; ++x) {
        // i [H_d, H_p]
        va[x] = i_unit * (dp[x] - pd[x]);
        // 1/2 [[H_d, H_p], H_d] = 1/2 (2 H_d H_p H_d - H_p H_d H_d - H_d H_d H_p)
        vb[x] = 0.5 * (2.0 * dpd[x] - pdd[x]);
        // [[H_d, H_p], H_p] = H_d H_p H_p - 2 H_p H_d H_p + H_p H_p H_d
        vc[x] = dpp[x] - 2.0 * pdp[x] + ppd[x];
    }
    // H_d H_d H_p psi term of B.
    const Vec ddp = apply_op(driver, dp);
    for (std::size_t x = 0; x < dim; ++x) {
        vb[x] -= 0.5 * ddp[x];
    }

    CommutatorExpectations out;
    out.a = real_overlap(psi, va, "A");
    out.b = real_overlap(psi, vb, "B");
    out.c = real_overlap(psi, vc, "C");
    out.var_a = std::max(0.0, norm2(va) - out.a * out.a);
    out.var_b = std::max(0.0, norm2(vb) - out.b * out.b);
    out.var_c = std::max(0.0, norm2(vc) - out.c * out.c);
    return out;
}

double noisy_expectation(double exact, double variance_proxy,
                         std::uint64_t shots, Rng &rng) {
    if (variance_proxy < 0.0) {
        throw InvalidArgument("variance proxy must be non-negative");
    }
    if (shots == 0) {
        return exact;
    }
    return exact +
           rng.normal() * std::sqrt(variance_proxy / static_cast<double>(shots));
}

double noisy_expectation(double exact, double variance_proxy,
                         std::uint64_t shots, std::uint64_t seed) {
    Rng rng(seed);
    return noisy_expectation(exact, variance_proxy, shots, rng);
}

double estimate_cost(const IsingProblem &problem, const Statevector &state,
                     std::uint64_t shots, Rng &rng) {
    if (shots == 0) {
        return diagonal_expectation(state, problem.energies());
    }
    return sampled_expectation(state, problem.energies(), shots, rng);
}

} // namespace ofq
