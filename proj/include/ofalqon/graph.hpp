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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ofq {

/// Basis-state label. Bit j holds the value of vertex/qubit j (little-endian).
using Bitstring = std::uint64_t;

struct Edge {
    int u;
    int v;
    auto operator<=>(const Edge &) const = default;
};

/**
 * @brief Undirected simple graph on vertices 0..n-1.
 *
 * Edges are stored normalized (u < v) and sorted, so two Graph values compare
 * equal exactly when they are the same labeled graph.
 */
class Graph {
  public:
    Graph() = default;

    /// Throws InvalidArgument on self-loops, duplicates or out-of-range ends.
    Graph(int n_vertices, std::vector<Edge> edges);

    [[nodiscard]] int n_vertices() const noexcept { return n_; }
    [[nodiscard]] std::size_t n_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<Edge> &edges() const noexcept {
        return edges_;
    }

    [[nodiscard]] std::vector<int> degrees() const;
    [[nodiscard]] std::vector<std::vector<int>> adjacency_lists() const;
    [[nodiscard]] bool has_edge(int a, int b) const;
    [[nodiscard]] bool is_regular(int degree) const;

    /// Vertex v of this graph becomes vertex new_label[v] of the result.
    [[nodiscard]] Graph relabeled(std::span<const int> new_label) const;

    bool operator==(const Graph &) const = default;

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

[[nodiscard]] Graph complete_graph(int n);
[[nodiscard]] Graph cycle_graph(int n);
[[nodiscard]] Graph disjoint_union(const Graph &a, const Graph &b);
[[nodiscard]] bool is_connected(const Graph &g);

// graph6 interchange format --------------------------------------------------

/// Decode one graph6 record. Trailing newline and an optional ">>graph6<<"
/// header are accepted; anything else malformed raises ParseError.
[[nodiscard]] Graph parse_graph6(std::string_view record);
[[nodiscard]] std::string emit_graph6(const Graph &g);

/// Reads one record per line; blank lines and lines starting with '#' are
/// skipped. Errors carry the line number.
[[nodiscard]] std::vector<Graph> read_graph6_stream(std::istream &in);
[[nodiscard]] std::vector<Graph> read_graph6_file(const std::string &path);

// Isomorphism ---------------------------------------------------------------

/// Exact isomorphism test by invariant-seeded backtracking.
[[nodiscard]] bool are_isomorphic(const Graph &a, const Graph &b);

/// Canonical relabeling via individualization-refinement; isomorphic inputs
/// give identical outputs. Supports up to 64 vertices.
[[nodiscard]] Graph canonical_form(const Graph &g);
[[nodiscard]] std::string canonical_graph6(const Graph &g);

// Cubic ensemble ------------------------------------------------------------

enum class Connectivity { any, connected_only };

inline constexpr int max_enumeration_vertices = 14;

/// One representative per isomorphism class of 3-regular simple graphs on
/// n_vertices, each in canonical labeling, ordered by graph6 string.
[[nodiscard]] std::vector<Graph>
enumerate_cubic_graphs(int n_vertices,
                       Connectivity connectivity = Connectivity::any);

// MaxCut ground truth -------------------------------------------------------

inline constexpr int max_exhaustive_vertices = 24;

struct MaxCutSolution {
    int max_cut_value = 0;
    std::vector<Bitstring> optimal_bitstrings; ///< ascending
    int min_energy = 0;                        ///< = |E| - 2 max_cut_value
};

/// Ising energy sum_{(i,j)} z_i z_j of every basis state, z = +1 for bit 0.
[[nodiscard]] std::vector<int> ising_energies(const Graph &g);

[[nodiscard]] MaxCutSolution exact_maxcut(const Graph &g);

/// Character i of the result is bit i (vertex 0 first).
[[nodiscard]] std::string bitstring_to_string(Bitstring x, int n_bits);

} // namespace ofq
