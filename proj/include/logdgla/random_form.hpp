#pragma once

#include <cstdint>

#include "logdgla/logform.hpp"
#include "logdgla/rng.hpp"

namespace logdgla {

// Deterministic pseudorandom homogeneous (p,q)-form with exponents bounded
// by max_deg. With admissible=true, log factors on trivial-monodromy
// branches get a_i bumped to 1 (so max_deg must be >= 1 to use them).
inline LogForm random_form(const ModelPtr& model, int p, int q, int max_deg, uint64_t seed,
                           bool admissible) {
    const ModelConfig& m = *model;
    if (p < 0 || p > m.d || q < 0 || q > m.d)
        throw precondition_error("random_form degrees must lie in [0,d]");
    if (m.values.empty())
        return LogForm(model);
    Rng rng(seed);
    std::vector<Term> terms;
    int n_terms = rng.range(1, 4);
    for (int n = 0; n < n_terms; ++n) {
        Term t;
        t.v = rng.range(0, static_cast<int>(m.values.size()) - 1);
        std::vector<int> hol;
        bool ok = false;
        for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
            hol = rng.sample(1, m.d, p);
            ok = true;
            if (admissible && max_deg < 1)
                for (int i : hol)
                    if (i <= m.l && m.kappa(t.v, i) == 0) ok = false;
        }
        if (!ok) continue;
        t.I.clear();
        t.J.clear();
        for (int i : hol)
            (i <= m.l ? t.I : t.J).push_back(i);
        t.K = rng.sample(1, m.d, q);
        t.a.resize(m.d);
        t.b.resize(m.d);
        for (int c = 0; c < m.d; ++c) {
            t.a[c] = rng.range(0, max_deg);
            t.b[c] = rng.range(0, max_deg);
        }
        if (admissible)
            for (int i : t.I)
                if (m.kappa(t.v, i) == 0 && t.a[i - 1] == 0) t.a[i - 1] = 1;
        int num = rng.range(1, 6) * (rng.flip() ? 1 : -1);
        int den = rng.range(1, 4);
        t.coeff = Rational(num, den);
        t.coeff.canonicalize();
        terms.push_back(std::move(t));
    }
    return LogForm(model, std::move(terms));
}

}  // namespace logdgla
