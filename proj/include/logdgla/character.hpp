#pragma once

#include <utility>
#include <vector>

#include "logdgla/rational.hpp"

namespace logdgla {

// Monodromy exponent vector of a rank-1 summand: one kappa in [0,1) per
// divisor branch. The character is the grading datum of the whole library.
struct Character {
    std::vector<Rational> kappa;

    Character() = default;
    explicit Character(std::vector<Rational> k) : kappa(std::move(k)) {
        for (Rational& x : kappa) {
            x.canonicalize();
            if (x < 0 || x >= 1)
                throw config_error("character component outside [0,1): " + rational_str(x));
        }
    }

    size_t length() const { return kappa.size(); }
    const Rational& operator[](size_t i) const { return kappa[i]; }

    bool is_trivial() const {
        for (const Rational& x : kappa)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const Character& a, const Character& b) { return a.kappa == b.kappa; }
    friend auto operator<=>(const Character& a, const Character& b) = default;
};

struct CharSum {
    Character character;     // componentwise frac(k + k')
    std::vector<int> carry;  // componentwise floor(k + k'), each 0 or 1
};

// Multiplying canonical-extension frames z^k s and z^k' s' yields
// z^carry * z^frac(k+k') (ss'): the fractional part is the new character,
// the integer part becomes an honest monomial factor.
inline CharSum char_sum(const Character& c1, const Character& c2) {
    if (c1.length() != c2.length())
        throw config_error("character length mismatch in char_sum");
    CharSum out;
    out.character.kappa.reserve(c1.length());
    out.carry.reserve(c1.length());
    for (size_t i = 0; i < c1.length(); ++i) {
        Rational s = c1[i] + c2[i];
        if (s >= 1) {
            out.character.kappa.push_back(s - 1);
            out.carry.push_back(1);
        } else {
            out.character.kappa.push_back(s);
            out.carry.push_back(0);
        }
    }
    return out;
}

}  // namespace logdgla
