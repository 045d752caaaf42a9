#include "nbspec/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace nbspec {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_start_.assign(rows + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        const auto& t = entries[i];
        if (t.row >= rows || t.col >= cols) throw std::out_of_range("sparse entry out of range");
        double sum = 0.0;
        std::size_t j = i;
        for (; j < entries.size() && entries[j].row == t.row && entries[j].col == t.col; ++j) {
            sum += entries[j].value;
        }
        if (sum != 0.0) {
            cols_idx_.push_back(t.col);
            values_.push_back(sum);
            ++row_start_[t.row + 1];
        }
        i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) row_start_[r + 1] += row_start_[r];
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
            out.push_back({r, cols_idx_[p], values_[p]});
        }
    }
    return out;
}

Eigen::MatrixXd SparseMatrix::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                              static_cast<Eigen::Index>(cols_));
    for (const auto& t : triplets()) {
        m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
    }
    return m;
}

double SparseMatrix::row_sum(std::size_t r) const {
    double s = 0.0;
    for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) s += values_[p];
    return s;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
    const auto begin = cols_idx_.begin() + static_cast<std::ptrdiff_t>(row_start_[r]);
    const auto end = cols_idx_.begin() + static_cast<std::ptrdiff_t>(row_start_[r + 1]);
    const auto it = std::lower_bound(begin, end, c);
    return it != end && *it == c ? values_[static_cast<std::size_t>(it - cols_idx_.begin())] : 0.0;
}

OrientedEdgeIndex OrientedEdgeIndex::for_graph(const RegularGraph& g) {
    std::vector<Item> items;
    items.reserve(2 * g.edges.size());
    for (const auto& [u, v] : g.edges) {
        items.push_back({u, v});
        items.push_back({v, u});
    }
    std::sort(items.begin(), items.end());
    return OrientedEdgeIndex(std::move(items));
}

OrientedEdgeIndex OrientedEdgeIndex::for_hypergraph(const RegularHypergraph& h) {
    std::vector<Item> items;
    items.reserve(h.hyperedges.size() * static_cast<std::size_t>(h.k));
    for (std::size_t e = 0; e < h.hyperedges.size(); ++e) {
        for (int i : h.hyperedges[e]) items.push_back({i, static_cast<int>(e)});
    }
    std::sort(items.begin(), items.end());
    return OrientedEdgeIndex(std::move(items));
}

std::optional<std::size_t> OrientedEdgeIndex::find(int first, int second) const {
    const Item key{first, second};
    const auto it = std::lower_bound(items_.begin(), items_.end(), key);
    if (it == items_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - items_.begin());
}

Eigen::MatrixXd ReducedNB::block(int r, int c) const {
    const Eigen::MatrixXd full = dense();
    return full.block(r * n, c * n, n, n);
}

SparseMatrix adjacency_sparse(const RegularGraph& g) {
    std::vector<Triplet> t;
    t.reserve(2 * g.edges.size());
    for (const auto& [u, v] : g.edges) {
        t.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), 1.0});
        t.push_back({static_cast<std::size_t>(v), static_cast<std::size_t>(u), 1.0});
    }
    return {static_cast<std::size_t>(g.n), static_cast<std::size_t>(g.n), std::move(t)};
}

SparseMatrix adjacency_sparse(const RegularHypergraph& h) {
    std::vector<Triplet> t;
    for (const auto& e : h.hyperedges) {
        for (int a : e) {
            for (int b : e) {
                if (a != b) t.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), 1.0});
            }
        }
    }
    return {static_cast<std::size_t>(h.n), static_cast<std::size_t>(h.n), std::move(t)};
}

SymmetricMatrix adjacency_matrix(const RegularGraph& g) { return adjacency_sparse(g).dense(); }

SymmetricMatrix adjacency_matrix(const RegularHypergraph& h) { return adjacency_sparse(h).dense(); }

OrientedEdgeIndex oriented_index(const RegularGraph& g) { return OrientedEdgeIndex::for_graph(g); }

OrientedEdgeIndex oriented_index(const RegularHypergraph& h) {
    return OrientedEdgeIndex::for_hypergraph(h);
}

SparseMatrix nonbacktracking_matrix(const RegularGraph& g) {
    const auto index = oriented_index(g);
    const auto nbrs = neighbor_lists(g);
    // Items with tail v occupy the contiguous range [v*d, (v+1)*d), ordered by
    // head, which is the order of nbrs[v].
    std::vector<Triplet> t;
    t.reserve(index.size() * static_cast<std::size_t>(std::max(g.d - 1, 0)));
    for (std::size_t row = 0; row < index.size(); ++row) {
        const auto [u, v] = index[row];
        const auto& next = nbrs[static_cast<std::size_t>(v)];
        for (std::size_t r = 0; r < next.size(); ++r) {
            if (next[r] == u) continue;
            t.push_back({row, static_cast<std::size_t>(v) * static_cast<std::size_t>(g.d) + r, 1.0});
        }
    }
    return {index.size(), index.size(), std::move(t)};
}

SparseMatrix nonbacktracking_matrix(const RegularHypergraph& h) {
    const auto index = oriented_index(h);
    // incidence[j] lists the hyperedge ranks containing j, ascending; item
    // (j, incidence[j][r]) has index j*d + r.
    std::vector<std::vector<int>> incidence(static_cast<std::size_t>(h.n));
    for (std::size_t e = 0; e < h.hyperedges.size(); ++e) {
        for (int i : h.hyperedges[e]) incidence[static_cast<std::size_t>(i)].push_back(static_cast<int>(e));
    }
    std::vector<Triplet> t;
    t.reserve(index.size() * static_cast<std::size_t>((h.k - 1) * (h.d - 1)));
    for (std::size_t row = 0; row < index.size(); ++row) {
        const auto [i, e] = index[row];
        for (int j : h.hyperedges[static_cast<std::size_t>(e)]) {
            if (j == i) continue;
            const auto& inc = incidence[static_cast<std::size_t>(j)];
            for (std::size_t r = 0; r < inc.size(); ++r) {
                if (inc[r] == e) continue;
                t.push_back({row, static_cast<std::size_t>(j) * static_cast<std::size_t>(h.d) + r, 1.0});
            }
        }
    }
    return {index.size(), index.size(), std::move(t)};
}

namespace {

// Shared block assembly: [0, top_right*I; bottom_left*I, A + diag_shift*I].
ReducedNB assemble_reduced(int n, const SparseMatrix& adjacency, double top_right,
                           double bottom_left, double diag_shift) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<Triplet> t;
    t.reserve(3 * un + adjacency.nnz());
    for (std::size_t i = 0; i < un; ++i) {
        t.push_back({i, un + i, top_right});
        t.push_back({un + i, i, bottom_left});
        t.push_back({un + i, un + i, diag_shift});
    }
    for (const auto& a : adjacency.triplets()) t.push_back({un + a.row, un + a.col, a.value});
    return ReducedNB{n, SparseMatrix(2 * un, 2 * un, std::move(t))};
}

}  // namespace

ReducedNB reduced_nb_matrix(const RegularGraph& g) {
    return assemble_reduced(g.n, adjacency_sparse(g), g.d - 1.0, -1.0, 0.0);
}

ReducedNB reduced_nb_matrix(const RegularHypergraph& h) {
    return assemble_reduced(h.n, adjacency_sparse(h), h.d - 1.0, -(h.k - 1.0), -(h.k - 2.0));
}

}  // namespace nbspec
