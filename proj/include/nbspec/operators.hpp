#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nbspec/graphgen.hpp"

namespace nbspec {

// Dense real symmetric matrix. Adjacency matrices hold nonnegative integers.
using SymmetricMatrix = Eigen::MatrixXd;

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Compressed sparse rows. Construction sorts entries row-major and merges
// duplicates; explicit zeros are dropped.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::vector<Triplet> triplets() const;
    Eigen::MatrixXd dense() const;
    double row_sum(std::size_t r) const;
    double at(std::size_t r, std::size_t c) const;

    template <typename Vector>
    Vector multiply(const Vector& x) const {
        Vector y(static_cast<Eigen::Index>(rows_));
        for (std::size_t r = 0; r < rows_; ++r) {
            typename Vector::Scalar acc(0);
            for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
                acc += values_[p] * x(static_cast<Eigen::Index>(cols_idx_[p]));
            }
            y(static_cast<Eigen::Index>(r)) = acc;
        }
        return y;
    }

    // ||M x - shift x||_2 without forming M x.
    template <typename Vector, typename Scalar>
    double shifted_residual_norm(const Vector& x, Scalar shift) const {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            typename Vector::Scalar acc(0);
            for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
                acc += values_[p] * x(static_cast<Eigen::Index>(cols_idx_[p]));
            }
            sum += std::norm(acc - shift * x(static_cast<Eigen::Index>(r)));
        }
        return std::sqrt(sum);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_start_{0};
    std::vector<std::size_t> cols_idx_;
    std::vector<double> values_;
};

// Oriented edges (u, v) of a graph, or oriented incidences (vertex, hyperedge
// rank) of a hypergraph, in lexicographic order. The position in `items` is
// the row/column index used by the non-backtracking matrix.
class OrientedEdgeIndex {
public:
    struct Item {
        int first = 0;   // tail vertex u, or incidence vertex i
        int second = 0;  // head vertex v, or hyperedge rank e

        friend auto operator<=>(const Item&, const Item&) = default;
    };

    static OrientedEdgeIndex for_graph(const RegularGraph& g);
    static OrientedEdgeIndex for_hypergraph(const RegularHypergraph& h);

    std::size_t size() const { return items_.size(); }
    const std::vector<Item>& items() const { return items_; }
    const Item& operator[](std::size_t i) const { return items_[i]; }

    std::optional<std::size_t> find(int first, int second) const;

private:
    explicit OrientedEdgeIndex(std::vector<Item> items) : items_(std::move(items)) {}
    std::vector<Item> items_;
};

// 2n x 2n reduced non-backtracking matrix, kept sparse. Blocks are
// [0, D - I; -(k-1) I, A - (k-2) I], which is [0, (d-1) I; -I, A] for graphs.
struct ReducedNB {
    int n = 0;
    SparseMatrix matrix;

    Eigen::MatrixXd dense() const { return matrix.dense(); }
    // Block (r, c) with r, c in {0, 1}.
    Eigen::MatrixXd block(int r, int c) const;
};

SymmetricMatrix adjacency_matrix(const RegularGraph& g);
SymmetricMatrix adjacency_matrix(const RegularHypergraph& h);
SparseMatrix adjacency_sparse(const RegularGraph& g);
SparseMatrix adjacency_sparse(const RegularHypergraph& h);

OrientedEdgeIndex oriented_index(const RegularGraph& g);
OrientedEdgeIndex oriented_index(const RegularHypergraph& h);

SparseMatrix nonbacktracking_matrix(const RegularGraph& g);
SparseMatrix nonbacktracking_matrix(const RegularHypergraph& h);

ReducedNB reduced_nb_matrix(const RegularGraph& g);
ReducedNB reduced_nb_matrix(const RegularHypergraph& h);

}  // namespace nbspec
