#pragma once

#include "logdgla/specseq.hpp"

namespace logdgla {

// The truncated double complex of admissible forms of a model, in the
// (holomorphic p, anti-holomorphic q) orientation: d1 = d', d2 = d''.
// Use full ranges [0,d] x [0,d] for a complete complex; smaller ranges
// truncate brutally (the boundary maps out of the grid are dropped).
struct ModelComplex {
    ModelPtr model;
    Truncation T;
    int p_lo = 0, q_lo = 0;
    DoubleComplex dc;
    std::vector<TermBasis> bases;  // row-major over the grid

    const TermBasis& basis(int p, int q) const {
        return bases[(p - p_lo) * dc.nq() + (q - q_lo)];
    }
};

inline ModelComplex from_model(const ModelPtr& model, std::pair<int, int> p_range,
                               std::pair<int, int> q_range, const Truncation& T) {
    int p_lo = p_range.first, p_hi = p_range.second;
    int q_lo = q_range.first, q_hi = q_range.second;
    if (p_lo < 0 || p_hi > model->d || p_lo > p_hi || q_lo < 0 || q_hi > model->d || q_lo > q_hi)
        throw precondition_error("degree ranges must be within [0,d]");

    int np = p_hi - p_lo + 1, nq = q_hi - q_lo + 1;
    ModelComplex mc;
    mc.model = model;
    mc.T = T;
    mc.p_lo = p_lo;
    mc.q_lo = q_lo;
    std::vector<std::vector<int>> dims(np, std::vector<int>(nq, 0));
    for (int p = p_lo; p <= p_hi; ++p)
        for (int q = q_lo; q <= q_hi; ++q) {
            mc.bases.emplace_back(model, p, q, T);
            dims[p - p_lo][q - q_lo] = mc.bases.back().size();
        }
    mc.dc = DoubleComplex(std::move(dims));
    auto basis_at = [&](int p, int q) -> const TermBasis& {
        return mc.bases[(p - p_lo) * nq + (q - q_lo)];
    };
    for (int p = p_lo; p <= p_hi; ++p)
        for (int q = q_lo; q <= q_hi; ++q) {
            if (basis_at(p, q).size() == 0) continue;
            if (p < p_hi && basis_at(p + 1, q).size() > 0)
                mc.dc.d1(p - p_lo, q - q_lo) = assemble_matrix(
                    basis_at(p, q), basis_at(p + 1, q), [](const LogForm& f) { return dprime(f); });
            if (q < q_hi && basis_at(p, q + 1).size() > 0)
                mc.dc.d2(p - p_lo, q - q_lo) = assemble_matrix(
                    basis_at(p, q), basis_at(p, q + 1), [](const LogForm& f) { return dsecond(f); });
        }
    return mc;
}

// Exact kernel of d' on the admissible (0,q)-space, compared against the
// predicted description: anti-holomorphic monomial q-forms valued in the
// trivial-character part of the module.
struct KernelDescription {
    int q = 0;
    int computed_dim = 0;
    int predicted_dim = 0;
    bool match = false;
    std::vector<Term> predicted_basis;
};

inline KernelDescription kernel_dprime_description(const ModelPtr& model, int q,
                                                   const Truncation& T) {
    KernelDescription out;
    out.q = q;
    TermBasis b0(model, 0, q, T);
    if (model->d >= 1) {
        TermBasis b1(model, 1, q, T);
        SparseMatrix M = assemble_matrix(b0, b1, [](const LogForm& f) { return dprime(f); });
        out.computed_dim = b0.size() - sparse_rank(M);
    } else {
        out.computed_dim = b0.size();
    }
    for (int j = 0; j < b0.size(); ++j) {
        const Term& t = b0.term(j);
        bool anti_holomorphic = true;
        for (int x : t.a)
            if (x != 0) anti_holomorphic = false;
        if (anti_holomorphic && model->values.chars[t.v].is_trivial()) {
            out.predicted_basis.push_back(t);
            ++out.predicted_dim;
        }
    }
    bool predicted_closed = true;
    for (const Term& t : out.predicted_basis) {
        Term u = t;
        u.coeff = Rational(1);
        if (!dprime(LogForm::from_checked(model, {u})).is_zero()) predicted_closed = false;
    }
    out.match = predicted_closed && out.computed_dim == out.predicted_dim;
    return out;
}

}  // namespace logdgla
