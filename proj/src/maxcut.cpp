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
#include <algorithm>
#include <bit>

#include "ofalqon/error.hpp"
#include "ofalqon/graph.hpp"

namespace ofq {

std::vector<int> ising_energies(const Graph &g) {
    const int n = g.n_vertices();
    if (n > max_exhaustive_vertices) {
        throw SizeError("exhaustive search is limited to " +
                        std::to_string(max_exhaustive_vertices) +
                        " vertices, got " + std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    const int m = static_cast<int>(g.n_edges());
    std::vector<Bitstring> masks;
    masks.reserve(g.n_edges());
    for (const auto &e : g.edges()) {
        masks.push_back((Bitstring{1} << e.u) | (Bitstring{1} << e.v));
    }
    // z_u z_v = -1 exactly when the edge is cut, so E(x) = |E| - 2 cut(x).
    std::vector<int> energy(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        int cut = 0;
        for (Bitstring mask : masks) {
            cut += std::popcount(x & mask) & 1;
        }
        energy[x] = m - 2 * cut;
    }
    return energy;
}

MaxCutSolution exact_maxcut(const Graph &g) {
    const auto energy = ising_energies(g);
    MaxCutSolution sol;
    sol.min_energy = *std::min_element(energy.begin(), energy.end());
    sol.max_cut_value = (static_cast<int>(g.n_edges()) - sol.min_energy) / 2;
    for (std::size_t x = 0; x < energy.size(); ++x) {
        if (energy[x] == sol.min_energy) {
            sol.optimal_bitstrings.push_back(x);
        }
    }
    return sol;
}

} // namespace ofq
