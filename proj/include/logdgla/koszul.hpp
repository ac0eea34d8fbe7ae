#pragma once

#include "logdgla/basis.hpp"

namespace logdgla {

// Koszul complex of the commuting operators P_1..P_l acting on the
// truncated monomial space of one value-basis element:
//   E^j = (monomials) (x) dz_I/z_I over |I| = j,   P = sum_i P_i ^ (dz_i/z_i).
// Each P_i is diagonal with eigenvalue a_i + kappa_i(v).
class KoszulComplex {
public:
    KoszulComplex(ModelPtr model, int v, Truncation T)
        : model_(std::move(model)), v_(v), trunc_(T) {
        const ModelConfig& m = *model_;
        if (m.l < 1)
            throw precondition_error("Koszul complex needs l >= 1");
        if (v < 0 || v >= static_cast<int>(m.values.size()))
            throw precondition_error("value index out of range");

        // monomial list, odometer order
        std::vector<int> a(m.d, 0), b(m.d, 0);
        while (true) {
            monos_a_.push_back(a);
            monos_b_.push_back(b);
            int c = 0;
            for (; c < 2 * m.d; ++c) {
                std::vector<int>& vec = (c < m.d) ? a : b;
                int idx = (c < m.d) ? c : c - m.d;
                int cap = (c < m.d) ? T.max_z_deg : T.max_zbar_deg;
                if (vec[idx] < cap) {
                    ++vec[idx];
                    break;
                }
                vec[idx] = 0;
            }
            if (c == 2 * m.d) break;
        }

        for (int j = 0; j <= m.l; ++j) subsets_.push_back(detail::subsets_of_size(1, m.l, j));

        diffs_.reserve(m.l);
        int nm = static_cast<int>(monos_a_.size());
        for (int j = 0; j < m.l; ++j) {
            SparseMatrix P(dim(j + 1), dim(j));
            const auto& srcs = subsets_[j];
            const auto& dsts = subsets_[j + 1];
            auto dst_index = [&](const std::vector<int>& I) {
                auto it = std::lower_bound(dsts.begin(), dsts.end(), I);
                return static_cast<int>(it - dsts.begin());
            };
            for (size_t si = 0; si < srcs.size(); ++si) {
                for (int i = 1; i <= m.l; ++i) {
                    if (std::binary_search(srcs[si].begin(), srcs[si].end(), i)) continue;
                    std::vector<int> I = srcs[si];
                    auto pos = std::lower_bound(I.begin(), I.end(), i);
                    int before = static_cast<int>(pos - I.begin());
                    I.insert(pos, i);
                    Rational sign(before % 2 == 0 ? 1 : -1);
                    int di = dst_index(I);
                    for (int mono = 0; mono < nm; ++mono) {
                        Rational eig = Rational(monos_a_[mono][i - 1]) + m.kappa(v, i);
                        if (eig == 0) continue;
                        P.add_entry(di * nm + mono, static_cast<int>(si) * nm + mono, sign * eig);
                    }
                }
            }
            diffs_.push_back(std::move(P));
        }
    }

    const ModelPtr& model() const { return model_; }
    int value_index() const { return v_; }
    int l() const { return model_->l; }
    int monomial_count() const { return static_cast<int>(monos_a_.size()); }
    int dim(int j) const {
        return static_cast<int>(subsets_[j].size()) * monomial_count();
    }
    const SparseMatrix& differential(int j) const { return diffs_[j]; }

    bool check_square_zero() const {
        for (size_t j = 0; j + 1 < diffs_.size(); ++j)
            if (!SparseMatrix::multiply(diffs_[j + 1], diffs_[j]).is_zero()) return false;
        return true;
    }

    // Diagonal eigenvalue list of a single P_i, exposed for direct checks.
    std::vector<Rational> eigenvalues(int i) const {
        std::vector<Rational> out;
        for (const auto& a : monos_a_)
            out.push_back(Rational(a[i - 1]) + model_->kappa(v_, i));
        return out;
    }

    // Number of monomials annihilated by every P_i.
    int common_kernel_monomials() const {
        int count = 0;
        for (const auto& a : monos_a_) {
            bool all_zero = true;
            for (int i = 1; i <= model_->l && all_zero; ++i)
                if (Rational(a[i - 1]) + model_->kappa(v_, i) != 0) all_zero = false;
            if (all_zero) ++count;
        }
        return count;
    }

private:
    ModelPtr model_;
    int v_;
    Truncation trunc_;
    std::vector<std::vector<int>> monos_a_, monos_b_;
    std::vector<std::vector<std::vector<int>>> subsets_;
    std::vector<SparseMatrix> diffs_;
};

inline KoszulComplex build_koszul(const ModelPtr& model, int v, const Truncation& T) {
    return KoszulComplex(model, v, T);
}

// Homology dimensions per degree 0..l, by exact rank computation.
inline std::vector<int> koszul_homology(const KoszulComplex& kc) {
    int l = kc.l();
    std::vector<int> ranks(l, 0);
    for (int j = 0; j < l; ++j) ranks[j] = sparse_rank(kc.differential(j));
    std::vector<int> h(l + 1, 0);
    for (int j = 0; j <= l; ++j) {
        int out_rank = (j < l) ? ranks[j] : 0;
        int in_rank = (j > 0) ? ranks[j - 1] : 0;
        h[j] = kc.dim(j) - out_rank - in_rank;
    }
    return h;
}

}  // namespace logdgla
