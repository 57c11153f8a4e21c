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
#include <cstdint>
#include <map>
#include <numeric>

#include "ofalqon/error.hpp"
#include "ofalqon/graph.hpp"

namespace ofq {

namespace {

// Vertex invariants used to seed the backtracking search: degree, number of
// triangles through the vertex, and the sorted degrees of its neighbours.
std::vector<std::vector<int>>
vertex_keys(const std::vector<std::vector<int>> &adj,
            const std::vector<char> &matrix, int n) {
    std::vector<std::vector<int>> keys(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const auto &nb = adj[v];
        int triangles = 0;
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                triangles += matrix[static_cast<std::size_t>(nb[a]) * n +
                                    nb[b]];
            }
        }
        auto &key = keys[v];
        key.push_back(static_cast<int>(nb.size()));
        key.push_back(triangles);
        std::vector<int> nd;
        for (int w : nb) {
            nd.push_back(static_cast<int>(adj[w].size()));
        }
        std::sort(nd.begin(), nd.end());
        key.insert(key.end(), nd.begin(), nd.end());
    }
    return keys;
}

std::vector<char> adjacency_matrix(const Graph &g) {
    const auto n = static_cast<std::size_t>(g.n_vertices());
    std::vector<char> m(n * n, 0);
    for (const auto &e : g.edges()) {
        m[static_cast<std::size_t>(e.u) * n + e.v] = 1;
        m[static_cast<std::size_t>(e.v) * n + e.u] = 1;
    }
    return m;
}

class IsoSearch {
  public:
    IsoSearch(const Graph &a, const Graph &b)
        : n_(a.n_vertices()), adj_a_(a.adjacency_lists()),
          adj_b_(b.adjacency_lists()), mat_a_(adjacency_matrix(a)),
          mat_b_(adjacency_matrix(b)), keys_a_(vertex_keys(adj_a_, mat_a_, n_)),
          keys_b_(vertex_keys(adj_b_, mat_b_, n_)),
          map_(static_cast<std::size_t>(n_), -1),
          used_(static_cast<std::size_t>(n_), 0) {}

    bool invariants_match() const {
        auto ka = keys_a_;
        auto kb = keys_b_;
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        return ka == kb;
    }

    bool run() {
        build_order();
        return extend(0);
    }

  private:
    // Breadth-first order so that most vertices have an already-mapped
    // neighbour when they are placed.
    void build_order() {
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        for (int root = 0; root < n_; ++root) {
            if (seen[root]) {
                continue;
            }
            std::vector<int> queue{root};
            seen[root] = 1;
            for (std::size_t h = 0; h < queue.size(); ++h) {
                const int v = queue[h];
                order_.push_back(v);
                for (int w : adj_a_[v]) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    bool consistent(int va, int vb, std::size_t depth) const {
        for (std::size_t k = 0; k < depth; ++k) {
            const int ua = order_[k];
            const int ub = map_[ua];
            if (mat_a_[static_cast<std::size_t>(va) * n_ + ua] !=
                mat_b_[static_cast<std::size_t>(vb) * n_ + ub]) {
                return false;
            }
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order_.size()) {
            return true;
        }
        const int va = order_[depth];
        for (int vb = 0; vb < n_; ++vb) {
            if (used_[vb] || keys_a_[va] != keys_b_[vb] ||
                !consistent(va, vb, depth)) {
                continue;
            }
            map_[va] = vb;
            used_[vb] = 1;
            if (extend(depth + 1)) {
                return true;
            }
            used_[vb] = 0;
            map_[va] = -1;
        }
        return false;
    }

    int n_;
    std::vector<std::vector<int>> adj_a_, adj_b_;
    std::vector<char> mat_a_, mat_b_;
    std::vector<std::vector<int>> keys_a_, keys_b_;
    std::vector<int> map_;
    std::vector<char> used_;
    std::vector<int> order_;
};

// Individualization-refinement canonical labeling over bitmask adjacency.
class Canonicalizer {
  public:
    explicit Canonicalizer(const Graph &g)
        : n_(g.n_vertices()), adj_(static_cast<std::size_t>(n_), 0) {
        for (const auto &e : g.edges()) {
            adj_[e.u] |= std::uint64_t{1} << e.v;
            adj_[e.v] |= std::uint64_t{1} << e.u;
        }
    }

    std::vector<int> best_labeling() {
        std::vector<int> colors(static_cast<std::size_t>(n_), 0);
        search(refine(std::move(colors)));
        return best_label_;
    }

  private:
    using Code = std::vector<std::uint64_t>;

    static int count_colors(const std::vector<int> &colors) {
        return colors.empty()
                   ? 0
                   : *std::max_element(colors.begin(), colors.end()) + 1;
    }

    // Equitable refinement: split cells by the multiset of neighbour colours
    // until stable. New colour ids follow the sorted order of signatures, so
    // the result depends only on the coloured graph, not on vertex names.
    std::vector<int> refine(std::vector<int> colors) const {
        int k = count_colors(colors);
        while (true) {
            std::vector<std::vector<int>> sig(static_cast<std::size_t>(n_));
            for (int v = 0; v < n_; ++v) {
                auto &s = sig[v];
                s.push_back(colors[v]);
                std::vector<int> nc;
                for (std::uint64_t m = adj_[v]; m != 0; m &= m - 1) {
                    nc.push_back(colors[std::countr_zero(m)]);
                }
                std::sort(nc.begin(), nc.end());
                s.insert(s.end(), nc.begin(), nc.end());
            }
            auto uniq = sig;
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            for (int v = 0; v < n_; ++v) {
                colors[v] = static_cast<int>(
                    std::lower_bound(uniq.begin(), uniq.end(), sig[v]) -
                    uniq.begin());
            }
            const int k_new = static_cast<int>(uniq.size());
            if (k_new == k) {
                return colors;
            }
            k = k_new;
        }
    }

    Code code_for(const std::vector<int> &label) const {
        std::vector<int> inverse(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) {
            inverse[label[v]] = v;
        }
        Code code((static_cast<std::size_t>(n_) * n_ / 2 + 63) / 64, 0);
        std::size_t bit = 0;
        for (int j = 1; j < n_; ++j) {
            const std::uint64_t row = adj_[inverse[j]];
            for (int i = 0; i < j; ++i, ++bit) {
                if ((row >> inverse[i]) & 1U) {
                    code[bit / 64] |= std::uint64_t{1} << (63 - bit % 64);
                }
            }
        }
        return code;
    }

    void search(const std::vector<int> &colors) {
        const int k = count_colors(colors);
        if (k == n_) {
            Code code = code_for(colors);
            if (best_label_.empty() || code > best_code_) {
                best_code_ = std::move(code);
                best_label_ = colors;
            }
            return;
        }
        // Target cell: the first non-singleton cell in colour order.
        std::vector<int> cell_size(static_cast<std::size_t>(k), 0);
        for (int c : colors) {
            ++cell_size[c];
        }
        int target = 0;
        while (cell_size[target] == 1) {
            ++target;
        }
        for (int v = 0; v < n_; ++v) {
            if (colors[v] != target) {
                continue;
            }
            std::vector<int> child(colors.size());
            for (int u = 0; u < n_; ++u) {
                child[u] = 2 * colors[u] + ((u == v || colors[u] != target) ? 0 : 1);
            }
            // Compress to 0..k'-1 preserving order.
            auto uniq = child;
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            for (auto &c : child) {
                c = static_cast<int>(
                    std::lower_bound(uniq.begin(), uniq.end(), c) -
                    uniq.begin());
            }
            search(refine(std::move(child)));
        }
    }

    int n_;
    std::vector<std::uint64_t> adj_;
    Code best_code_;
    std::vector<int> best_label_;
};

std::vector<std::vector<int>> components(const Graph &g) {
    const auto adj = g.adjacency_lists();
    std::vector<char> seen(adj.size(), 0);
    std::vector<std::vector<int>> out;
    for (int root = 0; root < g.n_vertices(); ++root) {
        if (seen[root]) {
            continue;
        }
        std::vector<int> part{root};
        seen[root] = 1;
        for (std::size_t h = 0; h < part.size(); ++h) {
            for (int w : adj[part[h]]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    part.push_back(w);
                }
            }
        }
        std::sort(part.begin(), part.end());
        out.push_back(std::move(part));
    }
    return out;
}

} // namespace

bool are_isomorphic(const Graph &a, const Graph &b) {
    if (a.n_vertices() != b.n_vertices() || a.n_edges() != b.n_edges()) {
        return false;
    }
    if (a.n_vertices() == 0) {
        return true;
    }
    IsoSearch search(a, b);
    if (!search.invariants_match()) {
        return false;
    }
    return search.run();
}

Graph canonical_form(const Graph &g) {
    if (g.n_vertices() > 64) {
        throw SizeError("canonical labeling supports at most 64 vertices, got " +
                        std::to_string(g.n_vertices()));
    }
    if (g.n_vertices() == 0) {
        return g;
    }
    const auto parts = components(g);
    if (parts.size() == 1) {
        Canonicalizer canon(g);
        return g.relabeled(canon.best_labeling());
    }

    // Disconnected: canonicalize components independently and lay them out
    // in (size, graph6) order. The search tree of a union multiplies the
    // automorphism groups of its parts, this keeps it linear.
    struct Part {
        std::vector<int> vertices;
        Graph canon;
        std::string key;
    };
    std::vector<Part> canon_parts;
    for (const auto &vs : parts) {
        std::vector<int> local(static_cast<std::size_t>(g.n_vertices()), -1);
        for (std::size_t i = 0; i < vs.size(); ++i) {
            local[vs[i]] = static_cast<int>(i);
        }
        std::vector<Edge> edges;
        for (const auto &e : g.edges()) {
            if (local[e.u] >= 0) {
                edges.push_back({local[e.u], local[e.v]});
            }
        }
        Graph sub(static_cast<int>(vs.size()), std::move(edges));
        Canonicalizer canon(sub);
        const auto label = canon.best_labeling();
        std::vector<int> ordered(vs.size());
        for (std::size_t i = 0; i < vs.size(); ++i) {
            ordered[label[i]] = vs[i];
        }
        Graph c = sub.relabeled(label);
        std::string key = emit_graph6(c);
        canon_parts.push_back({std::move(ordered), std::move(c), std::move(key)});
    }
    std::sort(canon_parts.begin(), canon_parts.end(),
              [](const Part &a, const Part &b) {
                  if (a.vertices.size() != b.vertices.size()) {
                      return a.vertices.size() < b.vertices.size();
                  }
                  return a.key < b.key;
              });
    std::vector<int> label(static_cast<std::size_t>(g.n_vertices()));
    int next = 0;
    for (const auto &p : canon_parts) {
        for (int v : p.vertices) {
            label[v] = next++;
        }
    }
    return g.relabeled(label);
}

std::string canonical_graph6(const Graph &g) {
    return emit_graph6(canonical_form(g));
}

} // namespace ofq
