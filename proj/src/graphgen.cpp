#include "nbspec/graphgen.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>

#include "nbspec/errors.hpp"

namespace nbspec {
namespace {

// Consecutive rounds without a single accepted block before the partial
// matching is abandoned and the sampler restarts from scratch.
constexpr int kStallRounds = 100;

std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::vector<int> make_stubs(int n, int copies) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * copies);
    for (int v = 0; v < n; ++v) {
        for (int c = 0; c < copies; ++c) stubs.push_back(v);
    }
    return stubs;
}

// Sequential stub matching. Each round shuffles the unmatched stubs and cuts
// them into blocks of `k`; a block is kept iff `accept` returns true for it,
// otherwise its stubs go back to the pool. Returns false on a stall.
template <typename Accept>
bool match_stubs(std::vector<int> pool, std::size_t k, Rng& rng, Accept&& accept) {
    int stalled = 0;
    std::vector<int> rejected;
    while (!pool.empty()) {
        rng.shuffle(std::span<int>(pool));
        rejected.clear();
        bool progress = false;
        for (std::size_t at = 0; at < pool.size(); at += k) {
            std::span<const int> block(pool.data() + at, k);
            if (accept(block)) {
                progress = true;
            } else {
                rejected.insert(rejected.end(), block.begin(), block.end());
            }
        }
        pool.swap(rejected);
        stalled = progress ? 0 : stalled + 1;
        if (stalled >= kStallRounds) return false;
    }
    return true;
}

std::vector<Edge> sample_edges(int n, int d, Rng& rng) {
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        std::unordered_set<std::uint64_t> seen;
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(n) * d / 2);
        const bool ok = match_stubs(make_stubs(n, d), 2, rng, [&](std::span<const int> b) {
            if (b[0] == b[1] || !seen.insert(edge_key(b[0], b[1])).second) return false;
            edges.emplace_back(std::min(b[0], b[1]), std::max(b[0], b[1]));
            return true;
        });
        if (ok) {
            std::sort(edges.begin(), edges.end());
            return edges;
        }
    }
    throw RetryExhausted("regular graph sampler exceeded " + std::to_string(kMaxRestarts) +
                         " restarts (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

// d-regular bipartite graph between left 0..h-1 and right 0..h-1, returned as
// (left, right) pairs.
std::vector<Edge> sample_bipartite(int h, int d, Rng& rng) {
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        std::unordered_set<std::uint64_t> seen;
        std::vector<Edge> pairs;
        std::vector<int> left = make_stubs(h, d);
        std::vector<int> right = make_stubs(h, d);
        int stalled = 0;
        std::vector<int> left_rest, right_rest;
        while (!left.empty() && stalled < kStallRounds) {
            rng.shuffle(std::span<int>(right));
            left_rest.clear();
            right_rest.clear();
            bool progress = false;
            for (std::size_t i = 0; i < left.size(); ++i) {
                const auto key = (static_cast<std::uint64_t>(left[i]) << 32) |
                                 static_cast<std::uint32_t>(right[i]);
                if (seen.insert(key).second) {
                    pairs.emplace_back(left[i], right[i]);
                    progress = true;
                } else {
                    left_rest.push_back(left[i]);
                    right_rest.push_back(right[i]);
                }
            }
            left.swap(left_rest);
            right.swap(right_rest);
            stalled = progress ? 0 : stalled + 1;
        }
        if (left.empty()) return pairs;
    }
    throw RetryExhausted("bipartite sampler exceeded " + std::to_string(kMaxRestarts) +
                         " restarts");
}

std::string describe(const char* what, int value) {
    return std::string(what) + "=" + std::to_string(value);
}

}  // namespace

RegularGraph sample_regular_graph(int n, int d, Seed seed) {
    if ((static_cast<long long>(n) * d) % 2 != 0) {
        throw ParityError("n*d must be even for a d-regular graph (" + describe("n", n) + ", " +
                          describe("d", d) + ")");
    }
    if (d < 1 || n < 1 || d >= n) {
        throw InfeasibleError("a simple d-regular graph needs 1 <= d < n (" + describe("n", n) +
                              ", " + describe("d", d) + ")");
    }
    Rng rng(seed);
    RegularGraph g{n, d, sample_edges(n, d, rng)};
    audit(g);
    return g;
}

RegularHypergraph sample_regular_hypergraph(int n, int d, int k, Seed seed) {
    if (d < 2 || k < 2) {
        throw InfeasibleError("hypergraph sampler needs d >= 2 and k >= 2 (" + describe("d", d) +
                              ", " + describe("k", k) + ")");
    }
    if ((static_cast<long long>(n) * d) % k != 0) {
        throw DivisibilityError("k must divide n*d (" + describe("n", n) + ", " +
                                describe("d", d) + ", " + describe("k", k) + ")");
    }
    if (n < k) {
        throw InfeasibleError("hyperedges of size k need n >= k (" + describe("n", n) + ", " +
                              describe("k", k) + ")");
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        std::set<std::vector<int>> seen;
        std::vector<int> scratch(static_cast<std::size_t>(k));
        const bool ok = match_stubs(make_stubs(n, d), static_cast<std::size_t>(k), rng,
                                    [&](std::span<const int> b) {
                                        std::copy(b.begin(), b.end(), scratch.begin());
                                        std::sort(scratch.begin(), scratch.end());
                                        if (std::adjacent_find(scratch.begin(), scratch.end()) !=
                                            scratch.end()) {
                                            return false;
                                        }
                                        return seen.insert(scratch).second;
                                    });
        if (ok) {
            RegularHypergraph h{n, d, k, {seen.begin(), seen.end()}};
            audit(h);
            return h;
        }
    }
    throw RetryExhausted("hypergraph sampler exceeded " + std::to_string(kMaxRestarts) +
                         " restarts");
}

RsbmGraph sample_rsbm(int n, int d1, int d2, Seed seed) {
    if (n % 2 != 0) throw ParityError("RSBM needs an even vertex count (" + describe("n", n) + ")");
    const int half = n / 2;
    if ((static_cast<long long>(d1) * half) % 2 != 0) {
        throw ParityError("d1*(n/2) must be even (" + describe("n", n) + ", " +
                          describe("d1", d1) + ")");
    }
    if (d1 < 0 || d1 >= half || d2 < 1 || d2 > half) {
        throw InfeasibleError("RSBM needs 0 <= d1 < n/2 and 1 <= d2 <= n/2 (" +
                              describe("n", n) + ", " + describe("d1", d1) + ", " +
                              describe("d2", d2) + ")");
    }

    Rng partition_rng(seed.derive(0));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    partition_rng.shuffle(std::span<int>(perm));
    // perm[0..half) is V1, perm[half..n) is V2.
    std::vector<int> sigma(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < half; ++i) sigma[static_cast<std::size_t>(perm[i])] = 1;

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (d1 + d2) / 2);
    auto add = [&](int a, int b) { edges.emplace_back(std::min(a, b), std::max(a, b)); };
    for (int side = 0; side < 2; ++side) {
        if (d1 == 0) break;
        Rng rng(seed.derive(1 + static_cast<std::uint64_t>(side)));
        const int offset = side * half;
        for (const auto& [a, b] : sample_edges(half, d1, rng)) {
            add(perm[static_cast<std::size_t>(offset + a)],
                perm[static_cast<std::size_t>(offset + b)]);
        }
    }
    Rng cross_rng(seed.derive(3));
    for (const auto& [a, b] : sample_bipartite(half, d2, cross_rng)) {
        add(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(half + b)]);
    }
    std::sort(edges.begin(), edges.end());

    RsbmGraph g{n, d1, d2, std::move(sigma), RegularGraph{n, d1 + d2, std::move(edges)}};
    audit(g);
    return g;
}

RegularGraph make_regular_graph(int n, int d, std::vector<Edge> edges) {
    for (auto& [u, v] : edges) {
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    RegularGraph g{n, d, std::move(edges)};
    audit(g);
    return g;
}

RegularHypergraph make_regular_hypergraph(int n, int d, int k,
                                          std::vector<std::vector<int>> hyperedges) {
    for (auto& e : hyperedges) std::sort(e.begin(), e.end());
    std::sort(hyperedges.begin(), hyperedges.end());
    RegularHypergraph h{n, d, k, std::move(hyperedges)};
    audit(h);
    return h;
}

void audit(const RegularGraph& g) {
    if (g.n < 1 || g.d < 0) throw InvariantError("graph needs n >= 1 and d >= 0");
    if ((static_cast<long long>(g.n) * g.d) % 2 != 0) throw InvariantError("n*d is odd");
    if (g.edges.size() != static_cast<std::size_t>(g.n) * g.d / 2) {
        throw InvariantError("graph has " + std::to_string(g.edges.size()) + " edges, expected " +
                             std::to_string(static_cast<long long>(g.n) * g.d / 2));
    }
    std::vector<int> degree(static_cast<std::size_t>(g.n), 0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto [u, v] = g.edges[i];
        if (u < 0 || v >= g.n || u >= v) {
            throw InvariantError("edge " + std::to_string(i) + " is not a pair 0 <= u < v < n");
        }
        if (i > 0 && !(g.edges[i - 1] < g.edges[i])) {
            throw InvariantError("edges are not sorted and distinct at index " + std::to_string(i));
        }
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
    }
    for (int v = 0; v < g.n; ++v) {
        if (degree[static_cast<std::size_t>(v)] != g.d) {
            throw InvariantError("vertex " + std::to_string(v) + " has degree " +
                                 std::to_string(degree[static_cast<std::size_t>(v)]) +
                                 ", expected " + std::to_string(g.d));
        }
    }
}

void audit(const RegularHypergraph& h) {
    if (h.d < 2 || h.k < 2) throw InvariantError("hypergraph needs d >= 2 and k >= 2");
    if (h.n < h.k) throw InvariantError("hypergraph needs n >= k");
    if ((static_cast<long long>(h.n) * h.d) % h.k != 0) throw InvariantError("k does not divide n*d");
    const auto expected = static_cast<std::size_t>(static_cast<long long>(h.n) * h.d / h.k);
    if (h.hyperedges.size() != expected) {
        throw InvariantError("hypergraph has " + std::to_string(h.hyperedges.size()) +
                             " hyperedges, expected " + std::to_string(expected));
    }
    std::vector<int> degree(static_cast<std::size_t>(h.n), 0);
    for (std::size_t i = 0; i < h.hyperedges.size(); ++i) {
        const auto& e = h.hyperedges[i];
        if (e.size() != static_cast<std::size_t>(h.k)) {
            throw InvariantError("hyperedge " + std::to_string(i) + " has size " +
                                 std::to_string(e.size()));
        }
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] < 0 || e[j] >= h.n) {
                throw InvariantError("hyperedge " + std::to_string(i) + " has a vertex out of range");
            }
            if (j > 0 && e[j - 1] >= e[j]) {
                throw InvariantError("hyperedge " + std::to_string(i) +
                                     " is not strictly ascending (repeated vertex?)");
            }
            ++degree[static_cast<std::size_t>(e[j])];
        }
        if (i > 0 && !(h.hyperedges[i - 1] < e)) {
            throw InvariantError("hyperedges are not sorted and distinct at index " +
                                 std::to_string(i));
        }
    }
    for (int v = 0; v < h.n; ++v) {
        if (degree[static_cast<std::size_t>(v)] != h.d) {
            throw InvariantError("vertex " + std::to_string(v) + " lies in " +
                                 std::to_string(degree[static_cast<std::size_t>(v)]) +
                                 " hyperedges, expected " + std::to_string(h.d));
        }
    }
}

void audit(const RsbmGraph& g) {
    if (g.n % 2 != 0) throw InvariantError("RSBM vertex count is odd");
    if (g.graph.n != g.n || g.graph.d != g.d1 + g.d2) {
        throw InvariantError("RSBM graph parameters disagree with (n, d1 + d2)");
    }
    audit(g.graph);
    if (g.sigma.size() != static_cast<std::size_t>(g.n)) throw InvariantError("sigma has wrong length");
    int plus = 0;
    for (int s : g.sigma) {
        if (s != 1 && s != -1) throw InvariantError("sigma entries must be +1 or -1");
        plus += s == 1;
    }
    if (plus != g.n / 2) throw InvariantError("sigma must have exactly n/2 entries equal to +1");
    std::vector<int> within(static_cast<std::size_t>(g.n), 0);
    std::vector<int> across(static_cast<std::size_t>(g.n), 0);
    for (const auto& [u, v] : g.graph.edges) {
        auto& bucket = g.sigma[static_cast<std::size_t>(u)] == g.sigma[static_cast<std::size_t>(v)]
                           ? within
                           : across;
        ++bucket[static_cast<std::size_t>(u)];
        ++bucket[static_cast<std::size_t>(v)];
    }
    for (int v = 0; v < g.n; ++v) {
        if (within[static_cast<std::size_t>(v)] != g.d1 || across[static_cast<std::size_t>(v)] != g.d2) {
            throw InvariantError("vertex " + std::to_string(v) + " has (within, across) degrees (" +
                                 std::to_string(within[static_cast<std::size_t>(v)]) + ", " +
                                 std::to_string(across[static_cast<std::size_t>(v)]) +
                                 "), expected (" + std::to_string(g.d1) + ", " +
                                 std::to_string(g.d2) + ")");
        }
    }
}

RegularHypergraph as_hypergraph(const RegularGraph& g) {
    RegularHypergraph h{g.n, g.d, 2, {}};
    h.hyperedges.reserve(g.edges.size());
    for (const auto& [u, v] : g.edges) h.hyperedges.push_back({u, v});
    return h;
}

std::vector<std::vector<int>> neighbor_lists(const RegularGraph& g) {
    std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(g.n));
    for (const auto& [u, v] : g.edges) {
        nbrs[static_cast<std::size_t>(u)].push_back(v);
        nbrs[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& list : nbrs) std::sort(list.begin(), list.end());
    return nbrs;
}

}  // namespace nbspec
