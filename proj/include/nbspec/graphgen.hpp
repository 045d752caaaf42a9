#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "nbspec/seed.hpp"

namespace nbspec {

using Edge = std::pair<int, int>;

// Simple d-regular graph on vertices 0..n-1. Edges are stored with u < v and
// sorted lexicographically, so equal graphs have equal representations.
struct RegularGraph {
    int n = 0;
    int d = 0;
    std::vector<Edge> edges;

    friend bool operator==(const RegularGraph&, const RegularGraph&) = default;
};

// (d,k)-regular hypergraph: every hyperedge has k distinct vertices, every
// vertex lies in d hyperedges. Each hyperedge is sorted ascending and the list
// is sorted lexicographically.
struct RegularHypergraph {
    int n = 0;
    int d = 0;
    int k = 0;
    std::vector<std::vector<int>> hyperedges;

    friend bool operator==(const RegularHypergraph&, const RegularHypergraph&) = default;
};

// Regular stochastic block model: two d1-regular halves joined by a
// d2-regular bipartite graph. sigma[i] is +1 or -1.
struct RsbmGraph {
    int n = 0;
    int d1 = 0;
    int d2 = 0;
    std::vector<int> sigma;
    RegularGraph graph;

    friend bool operator==(const RsbmGraph&, const RsbmGraph&) = default;
};

// Restarts allowed before a sampler gives up with RetryExhausted.
inline constexpr int kMaxRestarts = 10000;

RegularGraph sample_regular_graph(int n, int d, Seed seed);
RegularHypergraph sample_regular_hypergraph(int n, int d, int k, Seed seed);
RsbmGraph sample_rsbm(int n, int d1, int d2, Seed seed);

// Canonicalizes an explicit edge list and audits it. Used for fixtures and by
// the file reader.
RegularGraph make_regular_graph(int n, int d, std::vector<Edge> edges);
RegularHypergraph make_regular_hypergraph(int n, int d, int k,
                                          std::vector<std::vector<int>> hyperedges);

// Full invariant audits. Throw InvariantError naming the first violation.
void audit(const RegularGraph& g);
void audit(const RegularHypergraph& h);
void audit(const RsbmGraph& g);

// The 2-uniform hypergraph with the same edges.
RegularHypergraph as_hypergraph(const RegularGraph& g);

// Neighbor lists of g, each sorted ascending.
std::vector<std::vector<int>> neighbor_lists(const RegularGraph& g);

}  // namespace nbspec
