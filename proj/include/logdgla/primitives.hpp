#pragma once

#include "logdgla/basis.hpp"

namespace logdgla {

// Diagonal inversion of P_i on the monomial z^a zbar^b: 1/(a_i + kappa_i),
// or nullopt on the kernel direction a_i = 0, kappa_i = 0.
inline std::optional<Rational> monomial_inverse(const ModelConfig& m, int v, int i,
                                                const std::vector<int>& a,
                                                const std::vector<int>& /*b*/) {
    if (i < 1 || i > m.l)
        throw precondition_error("monomial_inverse branch index out of range");
    Rational eig = Rational(a[i - 1]) + m.kappa(v, i);
    if (eig == 0) return std::nullopt;
    return Rational(1) / eig;
}

namespace detail {

// Splits off the theta_k factor: returns psi with omega = theta_k ^ psi + rest,
// where theta_k is dz_k/z_k for k <= l and dz_k otherwise.
inline std::vector<Term> peel_factor(const ModelConfig& m, const LogForm& omega, int k) {
    std::vector<Term> psi;
    for (const Term& t : omega.terms()) {
        const std::vector<int>& set = (k <= m.l) ? t.I : t.J;
        if (!contains(set, k)) continue;
        Term nt = t;
        int before;
        if (k <= m.l) {
            auto it = std::lower_bound(nt.I.begin(), nt.I.end(), k);
            before = static_cast<int>(it - nt.I.begin());
            nt.I.erase(it);
        } else {
            auto it = std::lower_bound(nt.J.begin(), nt.J.end(), k);
            before = static_cast<int>(t.I.size()) + static_cast<int>(it - nt.J.begin());
            nt.J.erase(it);
        }
        if (before % 2 != 0) nt.coeff = -nt.coeff;
        psi.push_back(std::move(nt));
    }
    return psi;
}

}  // namespace detail

inline bool verify_primitive(const LogForm& omega, const LogForm& alpha) {
    return dprime(alpha) == omega;
}

// Constructive primitive for d'-closed admissible forms of holomorphic
// degree p >= 1, by downward induction on the highest one-form direction:
// split omega = theta_k ^ psi + beta, invert P_k (log) or integrate (smooth)
// on the coefficients of psi, subtract, recurse. Smooth directions raise the
// z-degree by one, hence the T+1 bound on the output.
inline LogForm peel_primitive(const LogForm& omega, const Truncation& T) {
    const ModelConfig& m = *omega.model();
    auto pq = omega.bidegree();
    if (omega.is_zero()) return LogForm(omega.model());
    if (!pq || pq->first < 1)
        throw precondition_error("peel_primitive needs a homogeneous form with p >= 1");
    if (!is_admissible(omega))
        throw precondition_error("peel_primitive needs an admissible form");
    if (!within_truncation(omega, T))
        throw precondition_error("peel_primitive input exceeds the truncation");
    if (!dprime(omega).is_zero())
        throw precondition_error("peel_primitive needs a d'-closed form");

    LogForm rest = omega;
    LogForm alpha(omega.model());
    for (int k = m.d; k >= 1; --k) {
        std::vector<Term> psi = detail::peel_factor(m, rest, k);
        if (psi.empty()) continue;
        std::vector<Term> solved;
        solved.reserve(psi.size());
        for (Term& t : psi) {
            if (k <= m.l) {
                auto inv = monomial_inverse(m, t.v, k, t.a, t.b);
                if (!inv)
                    throw solver_error("kernel obstruction while peeling branch " + std::to_string(k));
                t.coeff *= *inv;
            } else {
                t.a[k - 1] += 1;
                t.coeff /= Rational(t.a[k - 1]);
            }
            solved.push_back(std::move(t));
        }
        LogForm big_omega = LogForm::from_checked(omega.model(), std::move(solved));
        alpha = alpha + big_omega;
        rest = rest - dprime(big_omega);
        for (const Term& t : rest.terms())
            if ((k <= m.l && detail::contains(t.I, k)) || (k > m.l && detail::contains(t.J, k)))
                throw solver_error("peeling did not clear direction " + std::to_string(k));
    }
    if (!rest.is_zero())
        throw solver_error("peeling terminated with a nonzero remainder");
    return alpha;
}

// Generic fallback: assemble the exact matrix of d' between the admissible
// bases at T+1 and solve. Returns any solution, or nullopt when omega is
// not in the image.
inline std::optional<LogForm> solve_dprime(const LogForm& omega, const Truncation& T) {
    auto pq = omega.bidegree();
    if (!pq || pq->first < 1)
        throw precondition_error("solve_dprime needs a homogeneous form with p >= 1");
    if (!is_admissible(omega))
        throw precondition_error("solve_dprime needs an admissible form");
    if (!within_truncation(omega, T))
        throw precondition_error("solve_dprime input exceeds the truncation");
    Truncation Tp = T.grown(1);
    TermBasis src(omega.model(), pq->first - 1, pq->second, Tp);
    TermBasis dst(omega.model(), pq->first, pq->second, Tp);
    SparseMatrix M = assemble_matrix(src, dst, [](const LogForm& f) { return dprime(f); });
    RationalSolver solver(M);
    auto x = solver.solve(dst.to_vector(omega));
    if (!x) return std::nullopt;
    return src.from_vector(*x);
}

// Exactness of the truncated d' complex at (p,q): every closed form within
// T should be hit from T+1. Computed purely with ranks.
struct DPrimeExactness {
    int closed_dim = 0;     // dim ker d' on the T-box
    int reachable_dim = 0;  // dim (im d' from the (T+1)-box  meet  T-box)
    bool exact() const { return closed_dim == reachable_dim; }
};

inline DPrimeExactness dprime_exactness(const ModelPtr& model, int p, int q, const Truncation& T) {
    if (p < 1)
        throw precondition_error("dprime_exactness needs p >= 1");
    DPrimeExactness out;
    TermBasis at_T(model, p, q, T);
    if (model->d > p) {
        TermBasis up_T(model, p + 1, q, T);
        SparseMatrix MT = assemble_matrix(at_T, up_T, [](const LogForm& f) { return dprime(f); });
        out.closed_dim = at_T.size() - sparse_rank(MT);
    } else {
        out.closed_dim = at_T.size();
    }

    Truncation Tp = T.grown(1);
    TermBasis src(model, p - 1, q, Tp);
    TermBasis dst(model, p, q, Tp);
    SparseMatrix M = assemble_matrix(src, dst, [](const LogForm& f) { return dprime(f); });
    int rank_M = sparse_rank(M);
    // dim(im M + T-box) via the stacked matrix [M | box columns]
    SparseMatrix stacked(dst.size(), src.size() + at_T.size());
    for (int j = 0; j < src.size(); ++j) stacked.col(j) = M.col(j);
    for (int j = 0; j < at_T.size(); ++j) {
        Term t = at_T.term(j);
        t.coeff = Rational(1);
        stacked.add_entry(dst.index_of(t), src.size() + j, Rational(1));
    }
    int rank_sum = sparse_rank(stacked);
    out.reachable_dim = rank_M + at_T.size() - rank_sum;
    return out;
}

}  // namespace logdgla
