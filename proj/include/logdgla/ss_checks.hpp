#pragma once

#include "logdgla/rng.hpp"
#include "logdgla/specseq.hpp"

namespace logdgla {

// Page-law and convergence verdicts for one double complex, computed by
// running the spectral sequence to stabilization and comparing against the
// brute-force cohomology of the total complex.
struct ConvergenceReport {
    bool stabilized = false;
    bool page_laws_hold = true;
    bool converged = true;
    std::vector<int> total_cohomology;
    std::vector<std::vector<std::vector<int>>> page_dims;  // [r][s][t]

    bool ok() const { return stabilized && page_laws_hold && converged; }
};

namespace detail {

// dim H(E_r, d_r) at (s,t) = dim ker d_r there minus rank of d_r arriving.
inline int page_homology_dim(const Page& pg, int s, int t) {
    int dim = pg.dim(s, t);
    if (dim == 0) return 0;
    int rank_out = 0, rank_in = 0;
    if (const SparseMatrix* out = pg.differential(s, t)) rank_out = sparse_rank(*out);
    if (const SparseMatrix* in = pg.differential(s - pg.r, t + pg.r - 1)) rank_in = sparse_rank(*in);
    return dim - rank_out - rank_in;
}

}  // namespace detail

inline ConvergenceReport check_convergence(const DoubleComplex& dc, int r_max = -1) {
    SpectralSequence ss(dc);
    if (r_max < 0) r_max = ss.stabilization_r() + 1;
    ConvergenceReport rep;
    rep.total_cohomology = ss.total_cohomology();

    for (int r = 0; r <= r_max; ++r) {
        const Page& pg = ss.page(r);
        rep.page_dims.push_back(pg.dims);
        if (r > 0) {
            const Page& prev = ss.page(r - 1);
            for (int s = 0; s < pg.np; ++s)
                for (int t = 0; t < pg.nq; ++t)
                    if (pg.dim(s, t) != detail::page_homology_dim(prev, s, t))
                        rep.page_laws_hold = false;
        }
    }

    const Page& last = ss.page(r_max);
    const Page& prev = ss.page(r_max - 1);
    rep.stabilized = last.dims == prev.dims && last.differentials_all_zero() &&
                     prev.differentials_all_zero();

    for (int n = 0; n < ss.degrees(); ++n) {
        int sum = 0;
        for (int s = 0; s < last.np; ++s) sum += last.dim(s, n - s);
        if (sum != rep.total_cohomology[n]) rep.converged = false;
    }
    return rep;
}

// True iff every differential from page r on vanishes.
inline bool check_degeneration(const DoubleComplex& dc, int r) {
    SpectralSequence ss(dc);
    int stop = std::max(ss.stabilization_r() + 1, r);
    for (int s = std::max(r, 0); s <= stop; ++s)
        if (!ss.page(s).differentials_all_zero()) return false;
    return true;
}

// --- synthetic complexes -------------------------------------------------

// A 1-d complex with d mapping the last rank_i coordinates of slot i onto
// the first rank_i coordinates of slot i+1; homology dims are known by
// construction.
struct OneDimComplex {
    std::vector<int> dims;
    std::vector<int> ranks;  // ranks[i]: rank of d_i : i -> i+1

    std::vector<int> homology() const {
        std::vector<int> h(dims.size());
        for (size_t i = 0; i < dims.size(); ++i) {
            int out = i < ranks.size() ? ranks[i] : 0;
            int in = i > 0 ? ranks[i - 1] : 0;
            h[i] = dims[i] - out - in;
        }
        return h;
    }

    static OneDimComplex random(Rng& rng, int length, int max_dim) {
        OneDimComplex c;
        c.dims.resize(length);
        for (int& d : c.dims) d = rng.range(0, max_dim);
        c.ranks.assign(length - 1, 0);
        int prev = 0;
        for (int i = 0; i + 1 < length; ++i) {
            int cap = std::min(c.dims[i] - prev, c.dims[i + 1]);
            c.ranks[i] = cap > 0 ? rng.range(0, cap) : 0;
            prev = c.ranks[i];
        }
        return c;
    }
};

struct RandomDoubleComplex {
    DoubleComplex dc;
    std::vector<int> expected_total;  // Kuenneth oracle per total degree
};

// Tensor of two random 1-d complexes (d2 twisted by (-1)^p so the pair
// anticommutes), direct-summed with a second tensor, then scrambled by
// elementary changes of basis per slot. Invariants hold by construction;
// the expected total cohomology comes from the Kuenneth formula.
inline RandomDoubleComplex random_double_complex(uint64_t seed, int np, int nq, int max_dim) {
    Rng rng(seed);
    auto tensor = [&](const OneDimComplex& A, const OneDimComplex& B) {
        std::vector<std::vector<int>> dims(np, std::vector<int>(nq, 0));
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < nq; ++q) dims[p][q] = A.dims[p] * B.dims[q];
        DoubleComplex dc(std::move(dims));
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < nq; ++q) {
                int bq = B.dims[q];
                if (p + 1 < np) {
                    // dA x id
                    for (int k = 0; k < A.ranks[p]; ++k)
                        for (int j = 0; j < bq; ++j)
                            dc.d1(p, q).add_entry(k * bq + j, (A.dims[p] - A.ranks[p] + k) * bq + j,
                                                  Rational(1));
                }
                if (q + 1 < nq) {
                    // (-1)^p id x dB
                    Rational sign(p % 2 == 0 ? 1 : -1);
                    for (int i = 0; i < A.dims[p]; ++i)
                        for (int k = 0; k < B.ranks[q]; ++k)
                            dc.d2(p, q).add_entry(i * B.dims[q + 1] + k,
                                                  i * bq + (B.dims[q] - B.ranks[q] + k), sign);
                }
            }
        return dc;
    };

    OneDimComplex A1 = OneDimComplex::random(rng, np, max_dim);
    OneDimComplex B1 = OneDimComplex::random(rng, nq, max_dim);
    OneDimComplex A2 = OneDimComplex::random(rng, np, std::max(1, max_dim / 2));
    OneDimComplex B2 = OneDimComplex::random(rng, nq, std::max(1, max_dim / 2));
    DoubleComplex t1 = tensor(A1, B1), t2 = tensor(A2, B2);

    // direct sum
    std::vector<std::vector<int>> dims(np, std::vector<int>(nq, 0));
    for (int p = 0; p < np; ++p)
        for (int q = 0; q < nq; ++q) dims[p][q] = t1.dim(p, q) + t2.dim(p, q);
    DoubleComplex dc(dims);
    auto insert_block = [&](const DoubleComplex& src, bool second) {
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < nq; ++q) {
                int roff1 = second ? t1.dim(p + 1, q) : 0;
                int roff2 = second ? t1.dim(p, q + 1) : 0;
                int coff = second ? t1.dim(p, q) : 0;
                for (int j = 0; j < src.d1(p, q).cols(); ++j)
                    for (const auto& [row, val] : src.d1(p, q).col(j))
                        dc.d1(p, q).add_entry(row + roff1, j + coff, val);
                for (int j = 0; j < src.d2(p, q).cols(); ++j)
                    for (const auto& [row, val] : src.d2(p, q).col(j))
                        dc.d2(p, q).add_entry(row + roff2, j + coff, val);
            }
    };
    insert_block(t1, false);
    insert_block(t2, true);

    // random elementary base changes per slot
    for (int p = 0; p < np; ++p)
        for (int q = 0; q < nq; ++q) {
            int k = dc.dim(p, q);
            if (k < 2) continue;
            for (int step = 0; step < 2 * k; ++step) {
                int i = rng.range(0, k - 1), j = rng.range(0, k - 1);
                if (i == j) continue;
                Rational lambda(rng.flip() ? 1 : -1);
                if (rng.flip()) lambda *= 2;
                // x'_i = x_i + lambda x_j: outgoing maps get col_j -= lambda col_i,
                // incoming maps get row_i += lambda row_j
                col_update(dc.d1(p, q), j, -lambda, i);
                col_update(dc.d2(p, q), j, -lambda, i);
                if (p > 0) row_update(dc.d1(p - 1, q), i, lambda, j);
                if (q > 0) row_update(dc.d2(p, q - 1), i, lambda, j);
            }
        }

    RandomDoubleComplex out;
    out.dc = std::move(dc);
    std::vector<int> hA1 = A1.homology(), hB1 = B1.homology(), hA2 = A2.homology(),
                     hB2 = B2.homology();
    out.expected_total.assign(np + nq - 1, 0);
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < nq; ++j) {
            out.expected_total[i + j] += hA1[i] * hB1[j];
            out.expected_total[i + j] += hA2[i] * hB2[j];
        }
    return out;
}

// Two slots joined by an isomorphism: E_1 carries a nonzero d_1 and E_2 = 0.
inline DoubleComplex two_slot_fixture() {
    DoubleComplex dc(std::vector<std::vector<int>>{{1}, {1}});
    dc.d1(0, 0).add_entry(0, 0, Rational(1));
    return dc;
}

// Staircase: a class at (0,1) survives to E_2 and dies into (2,0) there.
//   x0 in (0,1), x1 in (1,0), d1 x0 = y in (1,1), d2 x1 = -y, d1 x1 = w in (2,0).
inline DoubleComplex staircase_fixture() {
    std::vector<std::vector<int>> dims{{0, 1}, {1, 1}, {1, 0}};
    DoubleComplex dc(std::move(dims));
    dc.d1(0, 1).add_entry(0, 0, Rational(1));   // x0 -> y
    dc.d2(1, 0).add_entry(0, 0, Rational(-1));  // x1 -> -y
    dc.d1(1, 0).add_entry(0, 0, Rational(1));   // x1 -> w
    return dc;
}

}  // namespace logdgla
