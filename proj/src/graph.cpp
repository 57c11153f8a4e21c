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
#include "ofalqon/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>

#include "ofalqon/error.hpp"

namespace ofq {

Graph::Graph(int n_vertices, std::vector<Edge> edges) : n_(n_vertices) {
    if (n_vertices < 0) {
        throw InvalidArgument("graph vertex count must be non-negative");
    }
    for (auto &e : edges) {
        if (e.u == e.v) {
            throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        if (e.u < 0 || e.v >= n_vertices) {
            throw InvalidArgument("edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") out of range");
        }
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) {
        throw InvalidArgument("duplicate edge (" + std::to_string(dup->u) +
                              ", " + std::to_string(dup->v) + ")");
    }
    edges_ = std::move(edges);
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const auto &e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::vector<std::vector<int>> Graph::adjacency_lists() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
    for (const auto &e : edges_) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto &row : adj) {
        std::sort(row.begin(), row.end());
    }
    return adj;
}

bool Graph::has_edge(int a, int b) const {
    if (a > b) {
        std::swap(a, b);
    }
    return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

bool Graph::is_regular(int degree) const {
    const auto deg = degrees();
    return std::all_of(deg.begin(), deg.end(),
                       [degree](int d) { return d == degree; });
}

Graph Graph::relabeled(std::span<const int> new_label) const {
    if (new_label.size() != static_cast<std::size_t>(n_)) {
        throw DimensionError("relabeling has " +
                             std::to_string(new_label.size()) +
                             " entries for " + std::to_string(n_) +
                             " vertices");
    }
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto &e : edges_) {
        out.push_back({new_label[e.u], new_label[e.v]});
    }
    return Graph(n_, std::move(out));
}

Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            edges.push_back({i, j});
        }
    }
    return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
    if (n < 3) {
        throw InvalidArgument("a simple cycle needs at least 3 vertices");
    }
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        edges.push_back({i, (i + 1) % n});
    }
    return Graph(n, std::move(edges));
}

Graph disjoint_union(const Graph &a, const Graph &b) {
    std::vector<Edge> edges = a.edges();
    const int shift = a.n_vertices();
    for (const auto &e : b.edges()) {
        edges.push_back({e.u + shift, e.v + shift});
    }
    return Graph(a.n_vertices() + b.n_vertices(), std::move(edges));
}

bool is_connected(const Graph &g) {
    const int n = g.n_vertices();
    if (n <= 1) {
        return true;
    }
    const auto adj = g.adjacency_lists();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

// graph6 ---------------------------------------------------------------------

namespace {

constexpr int g6_bias = 63;
constexpr std::uint64_t g6_max_vertices = (std::uint64_t{1} << 31) - 1;

std::string_view strip_record(std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

Graph parse_graph6(std::string_view record) {
    record = strip_record(record);
    std::size_t pos = 0;
    constexpr std::string_view header = ">>graph6<<";
    if (record.starts_with(header)) {
        pos = header.size();
    }

    auto byte_at = [&](std::size_t i) -> int {
        if (i >= record.size()) {
            throw ParseError("graph6 record truncated", i);
        }
        const int c = static_cast<unsigned char>(record[i]);
        if (c < g6_bias || c > 126) {
            throw ParseError("invalid graph6 byte " + std::to_string(c), i);
        }
        return c - g6_bias;
    };

    std::uint64_t n = 0;
    const int first = byte_at(pos);
    if (first < 63) {
        n = static_cast<std::uint64_t>(first);
        pos += 1;
    } else if (byte_at(pos + 1) < 63) {
        for (std::size_t i = 1; i <= 3; ++i) {
            n = (n << 6) | static_cast<std::uint64_t>(byte_at(pos + i));
        }
        pos += 4;
    } else {
        for (std::size_t i = 2; i <= 7; ++i) {
            n = (n << 6) | static_cast<std::uint64_t>(byte_at(pos + i));
        }
        pos += 8;
    }
    if (n > g6_max_vertices) {
        throw SizeError("graph6 vertex count " + std::to_string(n) +
                        " exceeds the supported 31-bit range");
    }

    const std::uint64_t n_bits = n * (n - (n > 0 ? 1 : 0)) / 2;
    const std::uint64_t n_bytes = (n_bits + 5) / 6;
    const std::uint64_t available = record.size() - pos;
    if (available < n_bytes) {
        throw ParseError("graph6 record truncated: expected " +
                             std::to_string(n_bytes) + " adjacency bytes",
                         record.size());
    }
    if (available > n_bytes) {
        throw ParseError("trailing bytes after graph6 record",
                         pos + static_cast<std::size_t>(n_bytes));
    }

    std::vector<Edge> edges;
    std::uint64_t bit = 0;
    const auto nv = static_cast<int>(n);
    for (int j = 1; j < nv; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            const std::size_t at = pos + static_cast<std::size_t>(bit / 6);
            const int value = byte_at(at);
            if ((value >> (5 - bit % 6)) & 1) {
                edges.push_back({i, j});
            }
        }
    }
    for (; bit < n_bytes * 6; ++bit) {
        const std::size_t at = pos + static_cast<std::size_t>(bit / 6);
        if ((byte_at(at) >> (5 - bit % 6)) & 1) {
            throw ParseError("non-zero padding bit in graph6 record", at);
        }
    }
    return Graph(nv, std::move(edges));
}

std::string emit_graph6(const Graph &g) {
    const auto n = static_cast<std::uint64_t>(g.n_vertices());
    std::string out;
    if (n < 63) {
        out.push_back(static_cast<char>(n + g6_bias));
    } else if (n <= 258047) {
        out.push_back(126);
        for (int shift = 12; shift >= 0; shift -= 6) {
            out.push_back(static_cast<char>(((n >> shift) & 63) + g6_bias));
        }
    } else {
        out.push_back(126);
        out.push_back(126);
        for (int shift = 30; shift >= 0; shift -= 6) {
            out.push_back(static_cast<char>(((n >> shift) & 63) + g6_bias));
        }
    }

    const auto nv = g.n_vertices();
    int acc = 0;
    int filled = 0;
    // graph6 walks the upper triangle column by column: (0,1),(0,2),(1,2),...
    const auto adj = g.adjacency_lists();
    for (int j = 1; j < nv; ++j) {
        const auto &row = adj[j];
        for (int i = 0; i < j; ++i) {
            const bool set = std::binary_search(row.begin(), row.end(), i);
            acc = (acc << 1) | (set ? 1 : 0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(acc + g6_bias));
                acc = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0) {
        acc <<= (6 - filled);
        out.push_back(static_cast<char>(acc + g6_bias));
    }
    return out;
}

std::vector<Graph> read_graph6_stream(std::istream &in) {
    std::vector<Graph> graphs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto rec = strip_record(line);
        if (rec.empty() || rec.front() == '#') {
            continue;
        }
        try {
            graphs.push_back(parse_graph6(rec));
        } catch (const ParseError &e) {
            throw ParseError("line " + std::to_string(line_no) + ": " +
                                 e.what(),
                             e.offset());
        }
    }
    return graphs;
}

std::vector<Graph> read_graph6_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open graph6 file '" + path + "'");
    }
    return read_graph6_stream(in);
}

std::string bitstring_to_string(Bitstring x, int n_bits) {
    std::string s(static_cast<std::size_t>(n_bits), '0');
    for (int i = 0; i < n_bits; ++i) {
        if ((x >> i) & 1U) {
            s[static_cast<std::size_t>(i)] = '1';
        }
    }
    return s;
}

} // namespace ofq
