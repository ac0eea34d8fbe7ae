#pragma once

#include <map>
#include <tuple>

#include "logdgla/linalg.hpp"
#include "logdgla/logform.hpp"

namespace logdgla {

// Componentwise degree box: a_i <= max_z_deg, b_i <= max_zbar_deg. Stable
// under d' and d'' (log directions preserve a, smooth ones lower it, d''
// lowers b), which is what makes the truncated double complex well defined.
struct Truncation {
    int max_z_deg = 0;
    int max_zbar_deg = 0;

    Truncation() = default;
    Truncation(int z, int zbar) : max_z_deg(z), max_zbar_deg(zbar) {
        if (z < 0 || zbar < 0)
            throw config_error("truncation degrees must be nonnegative");
    }

    Truncation grown(int dz) const { return Truncation(max_z_deg + dz, max_zbar_deg); }
};

inline bool within_truncation(const LogForm& f, const Truncation& T) {
    for (const Term& t : f.terms()) {
        for (int x : t.a)
            if (x > T.max_z_deg) return false;
        for (int x : t.b)
            if (x > T.max_zbar_deg) return false;
    }
    return true;
}

namespace detail {

// Subsets of {lo..hi} of size k, lexicographically ascending.
inline std::vector<std::vector<int>> subsets_of_size(int lo, int hi, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int x = next; x <= hi - (k - static_cast<int>(cur.size())) + 1; ++x) {
            cur.push_back(x);
            self(self, x + 1);
            cur.pop_back();
        }
    };
    rec(rec, lo);
    return out;
}

}  // namespace detail

struct TermKey {
    int v;
    std::vector<int> I, J, K, a, b;

    auto tied() const { return std::tie(v, I, J, K, a, b); }
    friend bool operator<(const TermKey& x, const TermKey& y) { return x.tied() < y.tied(); }

    static TermKey of(const Term& t) { return TermKey{t.v, t.I, t.J, t.K, t.a, t.b}; }
};

// Ordered basis of the admissible (p,q)-space within a truncation box:
// all terms (v, I, J, K, a, b) with |I|+|J| = p, |K| = q, the box bounds,
// and a_i >= 1 on trivial-monodromy log factors.
class TermBasis {
public:
    TermBasis(ModelPtr model, int p, int q, Truncation T)
        : model_(std::move(model)), p_(p), q_(q), trunc_(T) {
        const ModelConfig& m = *model_;
        if (p < 0 || p > m.d || q < 0 || q > m.d)
            throw precondition_error("basis degrees must lie in [0,d]");
        for (int v = 0; v < static_cast<int>(m.values.size()); ++v)
            for (int isz = std::max(0, p - (m.d - m.l)); isz <= std::min(p, m.l); ++isz)
                for (const auto& I : detail::subsets_of_size(1, m.l, isz))
                    for (const auto& J : detail::subsets_of_size(m.l + 1, m.d, p - isz))
                        for (const auto& K : detail::subsets_of_size(1, m.d, q)) {
                            std::vector<int> amin(m.d, 0);
                            for (int i : I)
                                if (m.kappa(v, i) == 0) amin[i - 1] = 1;
                            emit_monomials(v, I, J, K, amin);
                        }
        std::sort(elems_.begin(), elems_.end(),
                  [](const Term& x, const Term& y) { return x.key() < y.key(); });
        for (size_t idx = 0; idx < elems_.size(); ++idx)
            index_.emplace(TermKey::of(elems_[idx]), static_cast<int>(idx));
    }

    const ModelPtr& model() const { return model_; }
    int p() const { return p_; }
    int q() const { return q_; }
    const Truncation& truncation() const { return trunc_; }
    int size() const { return static_cast<int>(elems_.size()); }
    const Term& term(int idx) const { return elems_[idx]; }

    int index_of(const Term& t) const {
        auto it = index_.find(TermKey::of(t));
        if (it == index_.end())
            throw precondition_error("term outside the enumerated basis");
        return it->second;
    }

    LogForm single_form(int idx) const {
        Term t = elems_[idx];
        t.coeff = Rational(1);
        return LogForm::from_checked(model_, {std::move(t)});
    }

    SparseVec to_vector(const LogForm& f) const {
        SparseVec out;
        for (const Term& t : f.terms())
            out.emplace_back(index_of(t), t.coeff);
        std::sort(out.begin(), out.end());
        return out;
    }

    LogForm from_vector(const SparseVec& x) const {
        std::vector<Term> terms;
        for (const auto& [idx, c] : x) {
            Term t = elems_[idx];
            t.coeff = c;
            terms.push_back(std::move(t));
        }
        return LogForm::from_checked(model_, std::move(terms));
    }

private:
    void emit_monomials(int v, const std::vector<int>& I, const std::vector<int>& J,
                        const std::vector<int>& K, const std::vector<int>& amin) {
        const ModelConfig& m = *model_;
        for (int floor : amin)
            if (floor > trunc_.max_z_deg) return;  // admissibility floor exceeds the box
        Term t;
        t.coeff = Rational(1);
        t.v = v;
        t.I = I;
        t.J = J;
        t.K = K;
        t.a = amin;
        t.b.assign(m.d, 0);
        // odometer over the box
        while (true) {
            elems_.push_back(t);
            int c = 0;
            for (; c < 2 * m.d; ++c) {
                if (c < m.d) {
                    if (t.a[c] < trunc_.max_z_deg) {
                        ++t.a[c];
                        break;
                    }
                    t.a[c] = amin[c];
                } else {
                    if (t.b[c - m.d] < trunc_.max_zbar_deg) {
                        ++t.b[c - m.d];
                        break;
                    }
                    t.b[c - m.d] = 0;
                }
            }
            if (c == 2 * m.d) return;
        }
    }

    ModelPtr model_;
    int p_, q_;
    Truncation trunc_;
    std::vector<Term> elems_;
    std::map<TermKey, int> index_;
};

// Matrix of a linear operation between enumerated bases. Throws if the
// image leaves the destination basis, which would indicate a truncation
// stability bug.
template <typename Op>
SparseMatrix assemble_matrix(const TermBasis& src, const TermBasis& dst, Op&& op) {
    SparseMatrix M(dst.size(), src.size());
    for (int j = 0; j < src.size(); ++j) {
        LogForm img = op(src.single_form(j));
        for (const Term& t : img.terms())
            M.add_entry(dst.index_of(t), j, t.coeff);
    }
    return M;
}

}  // namespace logdgla
