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
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ofalqon/error.hpp"
#include "ofalqon/hamiltonian.hpp"
#include "ofalqon/statevector.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ofq;
using oracle::cplx;

TEST_CASE("plus_state") {
    const auto s1 = plus_state(1);
    CHECK(s1.amplitudes()[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s1.amplitudes()[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    const auto s2 = plus_state(2);
    for (const auto &a : s2.amplitudes()) {
        CHECK(a.real() == doctest::Approx(0.5));
    }
    for (double p : plus_state(12).probabilities()) {
        CHECK(p == doctest::Approx(1.0 / 4096.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)plus_state(25), SizeError);
    CHECK_THROWS_AS((void)plus_state(0), InvalidArgument);
}

TEST_CASE("from_amplitudes validates") {
    CHECK_THROWS_AS((void)Statevector::from_amplitudes({1.0, 0.0, 0.0}),
                    DimensionError);
    CHECK_THROWS_AS((void)Statevector::from_amplitudes({1.0, 1.0}),
                    ConsistencyError);
    CHECK_NOTHROW((void)Statevector::from_amplitudes({0.6, cplx(0.0, 0.8)}));
}

TEST_CASE("problem layer") {
    const Graph edge(2, {{0, 1}});
    SUBCASE("gamma = 0 is the identity") {
        auto s = test_util::random_state(2, 5);
        const auto before = s;
        apply_problem_layer(s, edge, 0.0);
        CHECK(test_util::max_abs_diff(s.amplitudes(), before.amplitudes()) == 0.0);
    }
    SUBCASE("single edge, gamma = pi/2 on |00>") {
        auto s = Statevector::basis_state(2, 0);
        apply_problem_layer(s, edge, std::numbers::pi / 2);
        // exp(-i pi/2 * (+1)) = -i
        CHECK(s.amplitudes()[0].real() == doctest::Approx(0.0));
        CHECK(s.amplitudes()[0].imag() == doctest::Approx(-1.0));
        const auto dense = oracle::apply(oracle::problem_unitary(edge, std::numbers::pi / 2),
                                         {1.0, 0.0, 0.0, 0.0});
        CHECK(test_util::max_abs_diff(s.amplitudes(), dense) < 1e-12);
    }
    SUBCASE("probabilities unchanged") {
        const Graph k4 = complete_graph(4);
        auto s = test_util::random_state(4, 9);
        const auto p0 = s.probabilities();
        apply_problem_layer(s, k4, 0.731);
        const auto p1 = s.probabilities();
        for (std::size_t x = 0; x < p0.size(); ++x) {
            CHECK(p1[x] == doctest::Approx(p0[x]).epsilon(1e-12));
        }
    }
    SUBCASE("multi-angle length mismatch") {
        auto s = plus_state(2);
        const std::vector<double> g{0.1, 0.2};
        CHECK_THROWS_AS(apply_problem_layer(s, edge, g), DimensionError);
    }
}

TEST_CASE("driver layer") {
    SUBCASE("beta = 0 is the identity") {
        auto s = test_util::random_state(3, 1);
        const auto before = s;
        apply_driver_layer(s, 0.0);
        CHECK(test_util::max_abs_diff(s.amplitudes(), before.amplitudes()) == 0.0);
    }
    SUBCASE("n=1, |0>, beta = pi/2") {
        auto s = Statevector::basis_state(1, 0);
        apply_driver_layer(s, std::numbers::pi / 2);
        CHECK(std::abs(s.amplitudes()[0]) < 1e-15);
        CHECK(s.amplitudes()[1].imag() == doctest::Approx(-1.0));
        CHECK(s.probabilities()[1] == doctest::Approx(1.0));
    }
    SUBCASE("norm preserved for random beta vectors") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        auto s = test_util::random_state(6, 2);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> b(6);
            for (auto &x : b) {
                x = u(rng);
            }
            apply_driver_layer(s, b);
            CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
        }
    }
    SUBCASE("beta = pi/2 maps p(x) to p(x xor 1...1); beta = pi keeps p") {
        auto s = test_util::random_state(4, 8);
        const auto p0 = s.probabilities();
        auto flipped = s;
        apply_driver_layer(flipped, std::numbers::pi / 2);
        auto full = s;
        apply_driver_layer(full, std::numbers::pi);
        const auto pf = flipped.probabilities();
        const auto pp = full.probabilities();
        for (std::size_t x = 0; x < 16; ++x) {
            CHECK(pf[x ^ 15] == doctest::Approx(p0[x]).epsilon(1e-12));
            CHECK(pp[x] == doctest::Approx(p0[x]).epsilon(1e-12));
        }
    }
    SUBCASE("multi-angle length mismatch") {
        auto s = plus_state(3);
        const std::vector<double> b{0.1, 0.2};
        CHECK_THROWS_AS(apply_driver_layer(s, b), DimensionError);
    }
}

TEST_CASE("layered evolution matches dense matrix exponentials (N <= 4)") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            const Graph g = test_util::random_graph(n, rng);
            auto state = plus_state(n);
            std::vector<cplx> dense(state.amplitudes().begin(), state.amplitudes().end());
            const auto energies = ising_energies(g);
            for (int layer = 0; layer < 3; ++layer) {
                const bool multi = (rep % 2 == 1) && g.n_edges() > 0;
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
                        const Graph single(n, {g.edges()[e]});
                        up = oracle::problem_unitary(single, params.gamma[e]) * up;
                    }
                } else {
                    up = oracle::problem_unitary(g, params.gamma[0]);
                }
                const std::vector<double> betas =
                    multi ? params.beta : std::vector<double>(n, params.beta[0]);
                dense = oracle::apply(oracle::driver_unitary(n, betas),
                                      oracle::apply(up, dense));
            }
            CAPTURE(n);
            CHECK(test_util::max_abs_diff_up_to_phase(state.amplitudes(), dense) < 1e-8);
        }
    }
}

TEST_CASE("permutation covariance of expectations") {
    std::mt19937_64 rng(99);
    const Graph g = test_util::random_graph(5, rng);
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Graph h = g.relabeled(perm);

    auto sg = plus_state(5);
    auto sh = plus_state(5);
    const IsingProblem pg(g);
    const IsingProblem ph(h);
    for (double gamma : {0.3, -0.7}) {
        apply_problem_layer(sg, pg.energies(), gamma);
        apply_problem_layer(sh, ph.energies(), gamma);
        apply_driver_layer(sg, 0.4);
        apply_driver_layer(sh, 0.4);
    }
    CHECK(expectation(sg, pg) == doctest::Approx(expectation(sh, ph)).epsilon(1e-12));
}

TEST_CASE("expectation") {
    const Graph k4 = complete_graph(4);
    const IsingProblem problem(k4);
    CHECK(std::abs(expectation(plus_state(4), problem)) < 1e-12);
    const auto dense_h = oracle::problem_hamiltonian(k4);
    const auto plus = plus_state(4);
    const std::vector<cplx> plus_vec(plus.amplitudes().begin(), plus.amplitudes().end());
    CHECK(std::abs(oracle::braket(plus_vec, dense_h)) < 1e-12);

    for (Bitstring x = 0; x < 16; ++x) {
        const auto s = Statevector::basis_state(4, x);
        CHECK(expectation(s, problem) == doctest::Approx(problem.energies()[x]));
    }
    CHECK(expectation(test_util::random_state(3, 1), IdentityOperator(3)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    struct TimesI final : LinearOperator {
        int n_qubits() const override { return 2; }
        void apply(std::span<const cplx> in, std::span<cplx> out) const override {
            for (std::size_t i = 0; i < in.size(); ++i) {
                out[i] = cplx(0.0, 1.0) * in[i];
            }
        }
    };
    CHECK_THROWS_AS((void)expectation(plus_state(2), TimesI{}), ConsistencyError);
}

TEST_CASE("sample_bitstrings") {
    SUBCASE("basis state") {
        const auto h = sample_bitstrings(Statevector::basis_state(5, 19), 1000, 1);
        REQUIRE(h.size() == 1);
        CHECK(h.at(19) == 1000);
    }
    SUBCASE("|+> within 5 sigma") {
        const auto h = sample_bitstrings(plus_state(1), 8192, 12345);
        const double sigma = std::sqrt(8192 * 0.25);
        CHECK(std::abs(static_cast<double>(h.at(0)) - 4096.0) < 5 * sigma);
        CHECK(h.at(0) + h.at(1) == 8192);
    }
    SUBCASE("determinism") {
        const auto s = test_util::random_state(6, 3);
        CHECK(sample_bitstrings(s, 5000, 77) == sample_bitstrings(s, 5000, 77));
        CHECK(sample_bitstrings(s, 5000, 77) != sample_bitstrings(s, 5000, 78));
    }
    SUBCASE("sampled_expectation draws the same outcomes") {
        const IsingProblem p(complete_graph(4));
        const auto s = test_util::random_state(4, 6);
        Rng a(5);
        Rng b(5);
        const auto h = sample_bitstrings(s, 4096, a);
        CHECK(sampled_expectation(s, p.energies(), 4096, b) ==
              doctest::Approx(histogram_mean(h, p.energies())).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)sample_bitstrings(plus_state(1), 0, 1), InvalidArgument);
}
