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
#include <functional>
#include <map>

#include "ofalqon/error.hpp"
#include "ofalqon/graph.hpp"

namespace ofq {

namespace {

using ClassMap = std::map<std::string, Graph>;

void insert_class(ClassMap &classes, const Graph &g) {
    Graph canon = canonical_form(g);
    std::string key = emit_graph6(canon);
    classes.try_emplace(std::move(key), std::move(canon));
}

// Three growth operations, each producing a connected simple cubic graph:
//  * edge insertion: subdivide two distinct edges with new vertices x, y and
//    join x-y (+2 vertices);
//  * triangle expansion: replace a vertex by a triangle (+2 vertices);
//  * diamond insertion: replace an edge a-b by a-x, diamond(x,y,z,w), w-b
//    (+4 vertices).
// Closing K4 under these operations (plus edge insertion across components,
// see connected_cubic_upto) reaches every class; the generated counts are
// checked against the known sequence 1, 2, 5, 19, 85, 509 in the tests.
void edge_insertions(const Graph &g, ClassMap &classes) {
    const int n = g.n_vertices();
    const int x = n;
    const int y = n + 1;
    const auto &edges = g.edges();
    for (std::size_t a = 0; a < edges.size(); ++a) {
        for (std::size_t b = a + 1; b < edges.size(); ++b) {
            std::vector<Edge> next;
            next.reserve(edges.size() + 3);
            for (std::size_t k = 0; k < edges.size(); ++k) {
                if (k != a && k != b) {
                    next.push_back(edges[k]);
                }
            }
            next.push_back({edges[a].u, x});
            next.push_back({edges[a].v, x});
            next.push_back({edges[b].u, y});
            next.push_back({edges[b].v, y});
            next.push_back({x, y});
            insert_class(classes, Graph(n + 2, std::move(next)));
        }
    }
}

void triangle_expansions(const Graph &g, ClassMap &classes) {
    const int n = g.n_vertices();
    const auto adj = g.adjacency_lists();
    for (int v = 0; v < n; ++v) {
        // v keeps its first neighbour; n and n+1 take over the other two.
        const int corner[3] = {v, n, n + 1};
        std::vector<Edge> next;
        for (const auto &e : g.edges()) {
            if (e.u != v && e.v != v) {
                next.push_back(e);
            }
        }
        for (int k = 0; k < 3; ++k) {
            next.push_back({corner[k], adj[v][static_cast<std::size_t>(k)]});
        }
        next.push_back({v, n});
        next.push_back({v, n + 1});
        next.push_back({n, n + 1});
        insert_class(classes, Graph(n + 2, std::move(next)));
    }
}

void diamond_insertions(const Graph &g, ClassMap &classes) {
    const int n = g.n_vertices();
    const int x = n;
    const int y = n + 1;
    const int z = n + 2;
    const int w = n + 3;
    const auto &edges = g.edges();
    for (std::size_t a = 0; a < edges.size(); ++a) {
        std::vector<Edge> next;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (k != a) {
                next.push_back(edges[k]);
            }
        }
        next.push_back({edges[a].u, x});
        next.push_back({x, y});
        next.push_back({x, z});
        next.push_back({y, z});
        next.push_back({y, w});
        next.push_back({z, w});
        next.push_back({w, edges[a].v});
        insert_class(classes, Graph(n + 4, std::move(next)));
    }
}

// Disconnected graphs: multisets of >= 2 connected components whose sizes sum
// to n. Components are drawn in non-increasing (size, index) order so every
// multiset is produced once.
void add_disconnected(int n, const std::map<int, std::vector<Graph>> &connected,
                      ClassMap &classes) {
    struct Pick {
        int size;
        std::size_t index;
    };
    std::vector<Pick> picks;
    std::function<void(int, int, std::size_t)> rec =
        [&](int remaining, int max_size, std::size_t max_index) {
            if (remaining == 0) {
                if (picks.size() < 2) {
                    return;
                }
                Graph u;
                for (const auto &p : picks) {
                    u = disjoint_union(u, connected.at(p.size)[p.index]);
                }
                insert_class(classes, u);
                return;
            }
            for (int s = std::min(remaining, max_size); s >= 4; s -= 2) {
                const auto &pool = connected.at(s);
                const std::size_t top =
                    (s == max_size) ? std::min(max_index, pool.size())
                                    : pool.size();
                for (std::size_t i = 0; i < top; ++i) {
                    picks.push_back({s, i});
                    rec(remaining - s, s, i + 1);
                    picks.pop_back();
                }
            }
        };
    rec(n, n, connected.count(n) ? connected.at(n).size() : 0);
}

// connected[n] for every even n in [4, n_max]. Edge insertion also runs on
// the disconnected graphs of the previous size: joining two components is the
// only way to produce a bridge whose sides are both K4-like blocks.
std::map<int, std::vector<Graph>> connected_cubic_upto(int n_max) {
    std::map<int, std::vector<Graph>> by_size;
    if (n_max < 4) {
        return by_size;
    }
    by_size[4] = {canonical_form(complete_graph(4))};
    for (int n = 6; n <= n_max; n += 2) {
        ClassMap grown;
        for (const auto &g : by_size[n - 2]) {
            edge_insertions(g, grown);
            triangle_expansions(g, grown);
        }
        ClassMap split;
        add_disconnected(n - 2, by_size, split);
        for (const auto &[key, g] : split) {
            edge_insertions(g, grown);
        }
        if (n - 4 >= 4) {
            for (const auto &g : by_size[n - 4]) {
                diamond_insertions(g, grown);
            }
        }
        std::vector<Graph> level;
        for (auto &[key, g] : grown) {
            if (is_connected(g)) {
                level.push_back(std::move(g));
            }
        }
        by_size[n] = std::move(level);
    }
    return by_size;
}

} // namespace

std::vector<Graph> enumerate_cubic_graphs(int n_vertices,
                                          Connectivity connectivity) {
    if (n_vertices <= 0) {
        throw InvalidArgument("vertex count must be positive, got " +
                              std::to_string(n_vertices));
    }
    if (n_vertices % 2 != 0) {
        throw InvalidArgument("no cubic graph exists on an odd number (" +
                              std::to_string(n_vertices) + ") of vertices");
    }
    if (n_vertices > max_enumeration_vertices) {
        throw SizeError("cubic enumeration is limited to " +
                        std::to_string(max_enumeration_vertices) +
                        " vertices, got " + std::to_string(n_vertices));
    }
    if (n_vertices < 4) {
        return {};
    }

    const auto connected = connected_cubic_upto(n_vertices);
    ClassMap classes;
    for (const auto &g : connected.at(n_vertices)) {
        classes.try_emplace(emit_graph6(g), g);
    }
    if (connectivity == Connectivity::any) {
        add_disconnected(n_vertices, connected, classes);
    }

    std::vector<Graph> out;
    out.reserve(classes.size());
    for (auto &[key, g] : classes) {
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace ofq
