#pragma once

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logdgla/rational.hpp"

namespace logdgla {

// Sparse column vector: (row, value) pairs, strictly ascending rows, no zeros.
using SparseVec = std::vector<std::pair<int, Rational>>;

inline void sparse_axpy(SparseVec& v, const Rational& lambda, const SparseVec& w) {
    if (lambda == 0 || w.empty()) return;
    SparseVec out;
    out.reserve(v.size() + w.size());
    size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
            out.push_back(std::move(v[i++]));
        } else if (i == v.size() || w[j].first < v[i].first) {
            out.emplace_back(w[j].first, lambda * w[j].second);
            ++j;
        } else {
            Rational c = v[i].second + lambda * w[j].second;
            if (c != 0) out.emplace_back(v[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    v = std::move(out);
}

inline const Rational* sparse_at(const SparseVec& v, int row) {
    auto it = std::lower_bound(v.begin(), v.end(), row,
                               [](const auto& e, int r) { return e.first < r; });
    if (it != v.end() && it->first == row) return &it->second;
    return nullptr;
}

// Column-major exact rational matrix.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const SparseVec& col(int j) const { return data_[j]; }
    SparseVec& col(int j) { return data_[j]; }

    void add_entry(int r, int c, const Rational& val) {
        if (val == 0) return;
        SparseVec& v = data_[c];
        auto it = std::lower_bound(v.begin(), v.end(), r,
                                   [](const auto& e, int row) { return e.first < row; });
        if (it != v.end() && it->first == r) {
            it->second += val;
            if (it->second == 0) v.erase(it);
        } else {
            v.insert(it, {r, val});
        }
    }

    size_t nnz() const {
        size_t n = 0;
        for (const auto& c : data_) n += c.size();
        return n;
    }

    bool is_zero() const { return nnz() == 0; }

    SparseVec apply(const SparseVec& x) const {
        SparseVec out;
        for (const auto& [j, c] : x) sparse_axpy(out, c, data_[j]);
        return out;
    }

    static SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B) {
        SparseMatrix C(A.rows(), B.cols());
        for (int j = 0; j < B.cols(); ++j) C.data_[j] = A.apply(B.col(j));
        return C;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<SparseVec> data_;
};

// Column-echelon reduction with full history: every column of M is reduced
// against the pivots stored so far (pivot row = largest row of the stored
// column). Pivot columns keep their combination vectors, so membership
// queries, solves and kernel vectors all come out expressed over the
// original column indices. Deterministic by construction.
class RationalSolver {
public:
    explicit RationalSolver(const SparseMatrix& M) : M_(&M) {
        for (int j = 0; j < M.cols(); ++j) {
            SparseVec v = M.col(j);
            SparseVec delta;  // M * delta = what reduction subtracted
            reduce(v, &delta);
            if (v.empty()) {
                free_cols_.push_back(j);
            } else {
                SparseVec combo{{j, Rational(1)}};
                sparse_axpy(combo, Rational(-1), delta);  // M * combo = v
                int pivot_row = v.back().first;
                pivot_of_row_[pivot_row] = static_cast<int>(reduced_.size());
                reduced_.push_back(std::move(v));
                combos_.push_back(std::move(combo));
            }
        }
    }

    int rank() const { return static_cast<int>(reduced_.size()); }
    const std::vector<int>& free_columns() const { return free_cols_; }

    // Reduces b against the pivots; returns x with Mx = b, or nullopt.
    std::optional<SparseVec> solve(SparseVec b) const {
        SparseVec combo;
        reduce_rhs(b, combo);
        if (!b.empty()) return std::nullopt;
        return combo;
    }

    bool in_image(SparseVec b) const {
        SparseVec combo;
        reduce_rhs(b, combo);
        return b.empty();
    }

    // Kernel vector supported on the given free column (coefficient 1 there).
    SparseVec kernel_vector(int free_col) const {
        SparseVec v = M_->col(free_col);
        SparseVec delta;
        reduce(v, &delta);
        if (!v.empty())
            throw precondition_error("kernel_vector called on a pivot column");
        SparseVec combo{{free_col, Rational(1)}};
        sparse_axpy(combo, Rational(-1), delta);
        return combo;
    }

    std::vector<SparseVec> kernel_basis() const {
        std::vector<SparseVec> out;
        out.reserve(free_cols_.size());
        for (int j : free_cols_) out.push_back(kernel_vector(j));
        return out;
    }

private:
    // Low-based reduction: eliminate at the largest row while it is pivotal.
    // Each step strictly lowers the largest row, so this terminates, and the
    // pivot lows form an echelon, which is all rank/solve/kernel need. combo
    // tracks the original-column combination with v_in = v_out + M * combo.
    void reduce(SparseVec& v, SparseVec* combo) const {
        while (!v.empty()) {
            auto it = pivot_of_row_.find(v.back().first);
            if (it == pivot_of_row_.end()) return;
            const SparseVec& r = reduced_[it->second];
            Rational lambda = v.back().second / r.back().second;
            sparse_axpy(v, -lambda, r);
            if (combo) sparse_axpy(*combo, lambda, combos_[it->second]);
        }
    }

    void reduce_rhs(SparseVec& b, SparseVec& combo) const { reduce(b, &combo); }

    const SparseMatrix* M_;
    std::vector<SparseVec> reduced_;
    std::vector<SparseVec> combos_;
    std::unordered_map<int, int> pivot_of_row_;
    std::vector<int> free_cols_;
};

inline int sparse_rank(const SparseMatrix& M) { return RationalSolver(M).rank(); }

// col_j += lambda * col_i
inline void col_update(SparseMatrix& M, int j, const Rational& lambda, int i) {
    SparseVec tmp = M.col(j);
    sparse_axpy(tmp, lambda, M.col(i));
    M.col(j) = std::move(tmp);
}

// row_i += lambda * row_j
inline void row_update(SparseMatrix& M, int i, const Rational& lambda, int j) {
    for (int c = 0; c < M.cols(); ++c) {
        const Rational* at_j = sparse_at(M.col(c), j);
        if (at_j) {
            Rational add = lambda * (*at_j);
            M.add_entry(i, c, add);
        }
    }
}

}  // namespace logdgla
