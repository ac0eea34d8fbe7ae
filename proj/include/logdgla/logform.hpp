#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "logdgla/model.hpp"

namespace logdgla {

// One generator-monomial of a logarithmic form:
//
//   coeff * z^a zbar^b * (dz_i/z_i : i in I) ^ (dz_j : j in J) ^ (dzbar_k : k in K) (x) mu_v
//
// Factors are stored in canonical order: I ascending, then J, then K.
// Branch directions i <= l always use the log frame dz_i/z_i; the smooth
// form dz_i on a branch is represented as z_i * (dz_i/z_i), so J only ever
// contains indices > l.
struct Term {
    Rational coeff;
    std::vector<int> a;  // z exponents, length d, a[c-1] for coordinate c
    std::vector<int> b;  // zbar exponents
    std::vector<int> I;  // log factors, subset of {1..l}, ascending
    std::vector<int> J;  // smooth holomorphic factors, subset of {l+1..d}, ascending
    std::vector<int> K;  // anti-holomorphic factors, subset of {1..d}, ascending
    int v = 0;

    int p() const { return static_cast<int>(I.size() + J.size()); }
    int q() const { return static_cast<int>(K.size()); }

    auto key() const { return std::tie(v, I, J, K, a, b); }
};

namespace detail {

inline bool sorted_unique(const std::vector<int>& s) {
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i - 1] >= s[i]) return false;
    return true;
}

inline bool contains(const std::vector<int>& s, int x) {
    return std::binary_search(s.begin(), s.end(), x);
}

// Sign of inserting index x into the sorted set s: parity of the number of
// factors already standing before the insertion point.
inline int insert_sorted(std::vector<int>& s, int x, int offset_before) {
    auto it = std::lower_bound(s.begin(), s.end(), x);
    int pos = offset_before + static_cast<int>(it - s.begin());
    s.insert(it, x);
    return (pos % 2 == 0) ? 1 : -1;
}

inline void check_term(const ModelConfig& m, const Term& t) {
    if (static_cast<int>(t.a.size()) != m.d || static_cast<int>(t.b.size()) != m.d)
        throw config_error("term exponent vectors must have length d");
    for (int x : t.a)
        if (x < 0) throw config_error("negative z exponent");
    for (int x : t.b)
        if (x < 0) throw config_error("negative zbar exponent");
    if (!sorted_unique(t.I) || !sorted_unique(t.J) || !sorted_unique(t.K))
        throw config_error("factor index sets must be strictly ascending");
    if (!t.I.empty() && (t.I.front() < 1 || t.I.back() > m.l))
        throw config_error("log factor index outside {1..l}");
    if (!t.J.empty() && (t.J.front() <= m.l || t.J.back() > m.d))
        throw config_error("smooth factor index outside {l+1..d}");
    if (!t.K.empty() && (t.K.front() < 1 || t.K.back() > m.d))
        throw config_error("anti-holomorphic factor index outside {1..d}");
    if (t.v < 0 || t.v >= static_cast<int>(m.values.size()))
        throw config_error("value index out of range");
}

}  // namespace detail

// A finite rational combination of terms over a fixed model, kept in normal
// form: terms sorted by (v, I, J, K, a, b), duplicates merged, zeros pruned.
class LogForm {
public:
    LogForm() = default;
    explicit LogForm(ModelPtr model) : model_(std::move(model)) {}
    LogForm(ModelPtr model, std::vector<Term> terms) : model_(std::move(model)) {
        for (const Term& t : terms)
            detail::check_term(*model_, t);
        normalize(std::move(terms));
    }

    const ModelPtr& model() const { return model_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // (p,q) if every term agrees, nullopt otherwise (or for the zero form).
    std::optional<std::pair<int, int>> bidegree() const {
        if (terms_.empty()) return std::nullopt;
        std::pair<int, int> pq{terms_.front().p(), terms_.front().q()};
        for (const Term& t : terms_)
            if (t.p() != pq.first || t.q() != pq.second) return std::nullopt;
        return pq;
    }

    friend bool operator==(const LogForm& f, const LogForm& g) {
        if (f.terms_.size() != g.terms_.size()) return false;
        for (size_t i = 0; i < f.terms_.size(); ++i)
            if (f.terms_[i].key() != g.terms_[i].key() || f.terms_[i].coeff != g.terms_[i].coeff)
                return false;
        if (f.model_ && g.model_ && !(*f.model_ == *g.model_)) return false;
        return true;
    }

    LogForm operator+(const LogForm& other) const {
        require_same_model(other);
        std::vector<Term> all = terms_;
        all.insert(all.end(), other.terms_.begin(), other.terms_.end());
        LogForm out(model_ ? model_ : other.model_);
        out.normalize(std::move(all));
        return out;
    }

    LogForm operator-(const LogForm& other) const { return *this + (other * Rational(-1)); }

    LogForm operator*(const Rational& c) const {
        LogForm out(model_);
        if (c == 0) return out;
        out.terms_ = terms_;
        for (Term& t : out.terms_)
            t.coeff *= c;
        return out;
    }

    void require_same_model(const LogForm& other) const {
        if (model_ && other.model_ && !(*model_ == *other.model_))
            throw config_error("forms live over different models");
    }

    // Internal: assumes terms already checked against the model.
    static LogForm from_checked(ModelPtr model, std::vector<Term> terms) {
        LogForm out(std::move(model));
        out.normalize(std::move(terms));
        return out;
    }

private:
    void normalize(std::vector<Term> terms) {
        std::sort(terms.begin(), terms.end(),
                  [](const Term& x, const Term& y) { return x.key() < y.key(); });
        terms_.clear();
        for (Term& t : terms) {
            if (t.coeff == 0) continue;
            if (!terms_.empty() && terms_.back().key() == t.key()) {
                terms_.back().coeff += t.coeff;
                if (terms_.back().coeff == 0) terms_.pop_back();
            } else {
                terms_.push_back(std::move(t));
            }
        }
    }

    ModelPtr model_;
    std::vector<Term> terms_;
};

inline LogForm normal_form(const LogForm& f) { return f; }  // forms are always normal

// d': log directions act by P_i = z_i d/dz_i + kappa_i (diagonal on
// monomials, eigenvalue a_i + kappa_i), smooth directions by d/dz_j.
inline LogForm dprime(const LogForm& f) {
    const ModelConfig& m = *f.model();
    std::vector<Term> out;
    for (const Term& t : f.terms()) {
        for (int i = 1; i <= m.l; ++i) {
            if (detail::contains(t.I, i)) continue;
            Rational eig = Rational(t.a[i - 1]) + m.kappa(t.v, i);
            if (eig == 0) continue;
            Term nt = t;
            int sign = detail::insert_sorted(nt.I, i, 0);
            nt.coeff = t.coeff * eig * sign;
            out.push_back(std::move(nt));
        }
        for (int j = m.l + 1; j <= m.d; ++j) {
            if (detail::contains(t.J, j)) continue;
            if (t.a[j - 1] == 0) continue;
            Term nt = t;
            int sign = detail::insert_sorted(nt.J, j, static_cast<int>(t.I.size()));
            nt.coeff = t.coeff * Rational(t.a[j - 1]) * sign;
            nt.a[j - 1] -= 1;
            out.push_back(std::move(nt));
        }
    }
    return LogForm::from_checked(f.model(), std::move(out));
}

// d'': d/dzbar_k in every coordinate, the new factor crossing the whole
// holomorphic block first.
inline LogForm dsecond(const LogForm& f) {
    const ModelConfig& m = *f.model();
    std::vector<Term> out;
    for (const Term& t : f.terms()) {
        for (int k = 1; k <= m.d; ++k) {
            if (detail::contains(t.K, k)) continue;
            if (t.b[k - 1] == 0) continue;
            Term nt = t;
            int sign = detail::insert_sorted(nt.K, k, t.p());
            nt.coeff = t.coeff * Rational(t.b[k - 1]) * sign;
            nt.b[k - 1] -= 1;
            out.push_back(std::move(nt));
        }
    }
    return LogForm::from_checked(f.model(), std::move(out));
}

inline LogForm dtotal(const LogForm& f) { return dprime(f) + dsecond(f); }

namespace detail {

// Merge the factor lists of two terms in canonical order. Every one-form
// factor is odd; returns 0 on a repeated factor, otherwise the permutation
// sign of interleaving. Factors rank as (block, index) with blocks I < J < K.
inline int merge_factors(const Term& s, const Term& t, Term& out) {
    struct F {
        int block, idx;
    };
    auto list_of = [](const Term& x) {
        std::vector<F> fs;
        for (int i : x.I) fs.push_back({0, i});
        for (int j : x.J) fs.push_back({1, j});
        for (int k : x.K) fs.push_back({2, k});
        return fs;
    };
    std::vector<F> fs = list_of(s), ft = list_of(t);
    // count inversions between the concatenated lists
    int inversions = 0;
    for (const F& x : fs)
        for (const F& y : ft) {
            if (x.block == y.block && x.idx == y.idx) return 0;
            if (std::pair(x.block, x.idx) > std::pair(y.block, y.idx)) ++inversions;
        }
    auto merge_one = [](const std::vector<int>& u, const std::vector<int>& w) {
        std::vector<int> r;
        std::merge(u.begin(), u.end(), w.begin(), w.end(), std::back_inserter(r));
        return r;
    };
    out.I = merge_one(s.I, t.I);
    out.J = merge_one(s.J, t.J);
    out.K = merge_one(s.K, t.K);
    return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace detail

// Graded bracket: wedge the scalar factors, multiply the monomials, and
// contract the values through the structure constants. The frame product
// mu_a mu_b = z^carry mu_{a#b} contributes the carry monomial, which is
// what keeps brackets of admissible forms admissible.
inline LogForm bracket(const LogForm& f, const LogForm& g) {
    f.require_same_model(g);
    const ModelConfig& m = *f.model();
    if (!m.values.has_structure())
        throw config_error("bracket requires structure constants on the value module");
    std::vector<Term> out;
    for (const Term& s : f.terms())
        for (const Term& t : g.terms()) {
            Term merged;
            int sign = detail::merge_factors(s, t, merged);
            if (sign == 0) continue;
            const auto& row = m.values.bracket_row(s.v, t.v);
            if (row.empty()) continue;
            CharSum cs = char_sum(m.values.chars[s.v], m.values.chars[t.v]);
            merged.a.resize(m.d);
            merged.b.resize(m.d);
            for (int c = 0; c < m.d; ++c) {
                merged.a[c] = s.a[c] + t.a[c] + (c < m.l ? cs.carry[c] : 0);
                merged.b[c] = s.b[c] + t.b[c];
            }
            Rational base = s.coeff * t.coeff * sign;
            for (const auto& e : row) {
                Term nt = merged;
                nt.v = e.c;
                nt.coeff = base * e.coeff;
                out.push_back(std::move(nt));
            }
        }
    return LogForm::from_checked(f.model(), std::move(out));
}

// Membership in the no-residue subalgebra: a log factor against a branch
// with trivial monodromy must be a smooth dz_i in disguise, i.e. a_i >= 1.
inline bool is_admissible(const LogForm& f) {
    const ModelConfig& m = *f.model();
    for (const Term& t : f.terms())
        for (int i : t.I)
            if (m.kappa(t.v, i) == 0 && t.a[i - 1] == 0) return false;
    return true;
}

// Residue along branch i: the restriction to z_i = 0 of the dz_i/z_i
// coefficient, projected to the monodromy-invariant part of the values.
inline LogForm residue(const LogForm& f, int i) {
    const ModelConfig& m = *f.model();
    if (i < 1 || i > m.l)
        throw precondition_error("residue branch index out of range");
    StratumRestriction sr = restrict_to_stratum(m, {i});
    std::vector<Term> out;
    for (const Term& t : f.terms()) {
        if (!detail::contains(t.I, i)) continue;
        if (m.kappa(t.v, i) != 0) continue;  // projection to invariants
        if (t.a[i - 1] != 0 || t.b[i - 1] != 0) continue;
        if (detail::contains(t.K, i)) continue;  // dzbar_i restricts to zero
        Term nt;
        int before = static_cast<int>(std::lower_bound(t.I.begin(), t.I.end(), i) - t.I.begin());
        nt.coeff = (before % 2 == 0) ? t.coeff : -t.coeff;
        nt.v = sr.value_map[t.v];
        for (int c = 1; c <= m.d; ++c) {
            if (c == i) continue;
            nt.a.push_back(t.a[c - 1]);
            nt.b.push_back(t.b[c - 1]);
        }
        for (int x : t.I)
            if (x != i) nt.I.push_back(sr.coord_map[x]);
        for (int x : t.J) nt.J.push_back(sr.coord_map[x]);
        for (int x : t.K) nt.K.push_back(sr.coord_map[x]);
        out.push_back(std::move(nt));
    }
    return LogForm::from_checked(sr.model, std::move(out));
}

// Iterated residue over S in ascending branch order; drops degree by |S|.
inline LogForm residue_m(const LogForm& f, const std::set<int>& S) {
    if (S.empty())
        throw precondition_error("residue_m requires nonempty S");
    LogForm cur = f;
    int shift = 0;  // earlier deletions move later branches down
    for (int i : S) {
        cur = residue(cur, i - shift);
        ++shift;
    }
    return cur;
}

}  // namespace logdgla
