#pragma once

#include <map>

#include "logdgla/basis.hpp"
#include "logdgla/rng.hpp"

namespace logdgla {

// Finite bigraded complex with two anticommuting differentials,
//   d1: (p,q) -> (p+1,q)   and   d2: (p,q) -> (p,q+1),
// supported on the grid [0,np) x [0,nq).
class DoubleComplex {
public:
    DoubleComplex() = default;
    explicit DoubleComplex(std::vector<std::vector<int>> dims) : dims_(std::move(dims)) {
        np_ = static_cast<int>(dims_.size());
        nq_ = np_ ? static_cast<int>(dims_[0].size()) : 0;
        for (const auto& row : dims_)
            if (static_cast<int>(row.size()) != nq_)
                throw config_error("ragged dimension grid");
        d1_.assign(np_, {});
        d2_.assign(np_, {});
        for (int p = 0; p < np_; ++p)
            for (int q = 0; q < nq_; ++q) {
                d1_[p].emplace_back(dim(p + 1, q), dim(p, q));
                d2_[p].emplace_back(dim(p, q + 1), dim(p, q));
            }
    }

    int np() const { return np_; }
    int nq() const { return nq_; }
    int dim(int p, int q) const {
        if (p < 0 || p >= np_ || q < 0 || q >= nq_) return 0;
        return dims_[p][q];
    }

    SparseMatrix& d1(int p, int q) { return d1_[p][q]; }
    SparseMatrix& d2(int p, int q) { return d2_[p][q]; }
    const SparseMatrix& d1(int p, int q) const { return d1_[p][q]; }
    const SparseMatrix& d2(int p, int q) const { return d2_[p][q]; }

    // d1^2 = 0, d2^2 = 0, d1 d2 + d2 d1 = 0 on every slot.
    bool check_invariants() const {
        for (int p = 0; p < np_; ++p)
            for (int q = 0; q < nq_; ++q) {
                if (dim(p, q) == 0) continue;
                if (p + 1 < np_ && !SparseMatrix::multiply(d1(p + 1, q), d1(p, q)).is_zero())
                    return false;
                if (q + 1 < nq_ && !SparseMatrix::multiply(d2(p, q + 1), d2(p, q)).is_zero())
                    return false;
                if (p + 1 < np_ && q + 1 < nq_) {
                    SparseMatrix anti = SparseMatrix::multiply(d2(p + 1, q), d1(p, q));
                    SparseMatrix other = SparseMatrix::multiply(d1(p, q + 1), d2(p, q));
                    for (int j = 0; j < anti.cols(); ++j) {
                        SparseVec sum = anti.col(j);
                        sparse_axpy(sum, Rational(1), other.col(j));
                        if (!sum.empty()) return false;
                    }
                }
            }
        return true;
    }

    // Swaps the axes (and the two differentials). Anticommutation is
    // symmetric in the pair, so invariants carry over unchanged.
    DoubleComplex transposed() const {
        std::vector<std::vector<int>> td(nq_, std::vector<int>(np_, 0));
        for (int p = 0; p < np_; ++p)
            for (int q = 0; q < nq_; ++q) td[q][p] = dims_[p][q];
        DoubleComplex out(std::move(td));
        for (int p = 0; p < np_; ++p)
            for (int q = 0; q < nq_; ++q) {
                out.d1(q, p) = d2(p, q);
                out.d2(q, p) = d1(p, q);
            }
        return out;
    }

private:
    int np_ = 0, nq_ = 0;
    std::vector<std::vector<int>> dims_;
    std::vector<std::vector<SparseMatrix>> d1_, d2_;
};

// One page of the spectral sequence, in the engine convention: the first
// index is the filtration degree, d_r has bidegree (r, 1-r), and
// representatives are stored in total-complex (E_0) coordinates.
struct Page {
    int r = 0;
    int np = 0, nq = 0;
    std::vector<std::vector<int>> dims;                          // [s][t]
    std::map<std::pair<int, int>, SparseMatrix> diff;            // d_r per slot
    std::map<std::pair<int, int>, std::vector<SparseVec>> reps;  // Tot^n coords

    int dim(int s, int t) const {
        if (s < 0 || s >= np || t < 0 || t >= nq) return 0;
        return dims[s][t];
    }

    const SparseMatrix* differential(int s, int t) const {
        auto it = diff.find({s, t});
        return it == diff.end() ? nullptr : &it->second;
    }

    bool differentials_all_zero() const {
        for (const auto& [slot, M] : diff)
            if (!M.is_zero()) return false;
        return true;
    }
};

// Spectral sequence of the filtration by the FIRST index of a DoubleComplex:
// F^s Tot = slots with first index >= s, E_0 differential = d2. Pages are
// computed as honest subquotients
//   E_r^{s,t} = Z_r^{s,t} / (Z_{r-1}^{s+1,t-1} + D Z_{r-1}^{s-r+1,t+r-2}),
//   Z_r^{s,t} = { x in F^s Tot^n : D x in F^{s+r} },
// with exact rational kernels throughout.
class SpectralSequence {
public:
    explicit SpectralSequence(DoubleComplex dc) : dc_(std::move(dc)) {
        n_count_ = dc_.np() + dc_.nq() - 1;
        if (n_count_ < 0) n_count_ = 0;
        offsets_.assign(n_count_, {});
        tot_dims_.assign(n_count_, 0);
        for (int n = 0; n < n_count_; ++n) {
            int off = 0;
            offsets_[n].assign(dc_.np() + 1, 0);
            for (int s = 0; s < dc_.np(); ++s) {
                offsets_[n][s] = off;
                off += dc_.dim(s, n - s);
            }
            offsets_[n][dc_.np()] = off;
            tot_dims_[n] = off;
        }
    }

    const DoubleComplex& complex() const { return dc_; }
    int total_dim(int n) const { return (n < 0 || n >= n_count_) ? 0 : tot_dims_[n]; }
    int degrees() const { return n_count_; }

    // Pages stop changing once r exceeds the filtration width.
    int stabilization_r() const { return dc_.np() + 1; }

    const Page& page(int r) {
        auto it = pages_.find(r);
        if (it != pages_.end()) return it->second;
        return pages_.emplace(r, compute_page(r)).first->second;
    }

    std::vector<int> total_cohomology() {
        std::vector<int> h(n_count_, 0);
        for (int n = 0; n < n_count_; ++n) {
            int rank_out = sparse_rank(total_diff(n));
            int rank_in = n > 0 ? sparse_rank(total_diff(n - 1)) : 0;
            h[n] = tot_dims_[n] - rank_out - rank_in;
        }
        return h;
    }

    // Total differential D = d1 + d2 : Tot^n -> Tot^{n+1}.
    const SparseMatrix& total_diff(int n) {
        auto it = total_diffs_.find(n);
        if (it != total_diffs_.end()) return it->second;
        SparseMatrix D(total_dim(n + 1), total_dim(n));
        for (int s = 0; s < dc_.np(); ++s) {
            int t = n - s;
            if (dc_.dim(s, t) == 0) continue;
            int src_off = offsets_[n][s];
            if (dc_.dim(s + 1, t) > 0) {
                const SparseMatrix& A = dc_.d1(s, t);
                int dst_off = offsets_[n + 1][s + 1];
                for (int j = 0; j < A.cols(); ++j)
                    for (const auto& [row, val] : A.col(j))
                        D.add_entry(dst_off + row, src_off + j, val);
            }
            if (dc_.dim(s, t + 1) > 0) {
                const SparseMatrix& A = dc_.d2(s, t);
                int dst_off = offsets_[n + 1][s];
                for (int j = 0; j < A.cols(); ++j)
                    for (const auto& [row, val] : A.col(j))
                        D.add_entry(dst_off + row, src_off + j, val);
            }
        }
        return total_diffs_.emplace(n, std::move(D)).first->second;
    }

private:
    // Basis of Z_r^{s, n-s} as vectors in Tot^n. s may lie outside [0,np).
    const std::vector<SparseVec>& zr(int r, int s, int n) {
        auto key = std::make_tuple(r, s, n);
        auto it = zr_cache_.find(key);
        if (it != zr_cache_.end()) return it->second;

        std::vector<SparseVec> basis;
        if (n >= 0 && n < n_count_) {
            int s_lo = std::max(s, 0);
            std::vector<int> fpos;  // Tot^n coordinates of F^s
            if (s_lo < dc_.np())
                for (int c = offsets_[n][s_lo]; c < tot_dims_[n]; ++c) fpos.push_back(c);

            int cond_hi = std::min(s + r, dc_.np());  // rows: slots < s+r in Tot^{n+1}
            int rows = 0;
            if (n + 1 < n_count_ && cond_hi > 0) rows = offsets_[n + 1][cond_hi];

            if (!fpos.empty()) {
                if (rows == 0) {
                    for (int c : fpos) basis.push_back({{c, Rational(1)}});
                } else {
                    const SparseMatrix& D = total_diff(n);
                    SparseMatrix A(rows, static_cast<int>(fpos.size()));
                    for (size_t j = 0; j < fpos.size(); ++j)
                        for (const auto& [row, val] : D.col(fpos[j]))
                            if (row < rows) A.col(static_cast<int>(j)).emplace_back(row, val);
                    RationalSolver solver(A);
                    for (SparseVec& k : solver.kernel_basis()) {
                        SparseVec embedded;
                        embedded.reserve(k.size());
                        for (const auto& [j, val] : k) embedded.emplace_back(fpos[j], val);
                        std::sort(embedded.begin(), embedded.end());
                        basis.push_back(std::move(embedded));
                    }
                }
            }
        }
        return zr_cache_.emplace(key, std::move(basis)).first->second;
    }

    struct SlotData {
        std::vector<SparseVec> boundary;  // denominator span
        std::vector<SparseVec> reps;      // chosen coset representatives
    };

    SlotData slot_data(int r, int s, int t) {
        int n = s + t;
        SlotData out;
        out.boundary = zr(std::max(r - 1, 0), s + 1, n);
        if (n - 1 >= 0) {
            const std::vector<SparseVec>& src = zr(std::max(r - 1, 0), s - r + 1, n - 1);
            const SparseMatrix& D = total_diff(n - 1);
            for (const SparseVec& x : src) {
                SparseVec dx = D.apply(x);
                if (!dx.empty()) out.boundary.push_back(std::move(dx));
            }
        }
        const std::vector<SparseVec>& Z = zr(r, s, n);
        // reps = Z columns that extend the boundary span
        SparseMatrix M(total_dim(n), static_cast<int>(out.boundary.size() + Z.size()));
        int j = 0;
        for (const SparseVec& v : out.boundary) M.col(j++) = v;
        for (const SparseVec& v : Z) M.col(j++) = v;
        RationalSolver solver(M);
        std::vector<bool> is_free(M.cols(), false);
        for (int f : solver.free_columns()) is_free[f] = true;
        for (size_t k = 0; k < Z.size(); ++k)
            if (!is_free[out.boundary.size() + k]) out.reps.push_back(Z[k]);
        return out;
    }

    Page compute_page(int r) {
        Page page;
        page.r = r;
        page.np = dc_.np();
        page.nq = dc_.nq();
        page.dims.assign(page.np, std::vector<int>(page.nq, 0));

        std::map<std::pair<int, int>, SlotData> slots;
        for (int s = 0; s < page.np; ++s)
            for (int t = 0; t < page.nq; ++t) {
                if (dc_.dim(s, t) == 0 && zr(r, s, s + t).empty()) continue;
                SlotData data = slot_data(r, s, t);
                page.dims[s][t] = static_cast<int>(data.reps.size());
                if (!data.reps.empty()) page.reps[{s, t}] = data.reps;
                slots.emplace(std::make_pair(s, t), std::move(data));
            }

        // d_r: (s,t) -> (s+r, t-r+1), induced by D on representatives
        for (auto& [slot, data] : slots) {
            auto [s, t] = slot;
            if (data.reps.empty()) continue;
            int ts = s + r, tt = t - r + 1;
            auto target = slots.find({ts, tt});
            int target_dim = target == slots.end() ? 0 : static_cast<int>(target->second.reps.size());
            SparseMatrix dr(target_dim, static_cast<int>(data.reps.size()));
            if (target_dim > 0) {
                const SlotData& td = target->second;
                SparseMatrix M(total_dim(ts + tt),
                               static_cast<int>(td.reps.size() + td.boundary.size()));
                int j = 0;
                for (const SparseVec& v : td.reps) M.col(j++) = v;
                for (const SparseVec& v : td.boundary) M.col(j++) = v;
                RationalSolver coord(M);
                const SparseMatrix& D = total_diff(s + t);
                for (size_t k = 0; k < data.reps.size(); ++k) {
                    SparseVec dx = D.apply(data.reps[k]);
                    if (dx.empty()) continue;
                    auto x = coord.solve(dx);
                    if (!x)
                        throw solver_error("d_" + std::to_string(r) + " image escaped the target subquotient at (" +
                                           std::to_string(s) + "," + std::to_string(t) + ")");
                    for (const auto& [idx, val] : *x)
                        if (idx < static_cast<int>(td.reps.size()))
                            dr.add_entry(idx, static_cast<int>(k), val);
                }
            }
            page.diff.emplace(slot, std::move(dr));
        }
        return page;
    }

    DoubleComplex dc_;
    int n_count_ = 0;
    std::vector<std::vector<int>> offsets_;  // offsets_[n][s]
    std::vector<int> tot_dims_;
    std::map<std::tuple<int, int, int>, std::vector<SparseVec>> zr_cache_;
    std::map<int, SparseMatrix> total_diffs_;
    std::map<int, Page> pages_;
};

enum class Filtration { FirstIndex, AntiHolomorphic };

// Page r of the chosen filtration. For AntiHolomorphic the complex is given
// in (holomorphic p, anti-holomorphic q) orientation and gets transposed, so
// the returned page indexes slots as (filtration s = q, complement t = p)
// and the E_0 differential is d1 of the input (that is, d').
inline Page e_page(const DoubleComplex& dc, int r, Filtration f) {
    DoubleComplex oriented = (f == Filtration::AntiHolomorphic) ? dc.transposed() : dc;
    SpectralSequence ss(std::move(oriented));
    return ss.page(r);
}

}  // namespace logdgla
