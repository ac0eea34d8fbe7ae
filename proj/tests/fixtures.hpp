#pragma once

#include <string>
#include <vector>

#include "logdgla/model.hpp"

namespace logdgla::fixtures {

// Rank-1 module with the given character, basis element "mu".
inline ModelPtr rank1(int d, int l, std::vector<std::string> kappas) {
    std::vector<Rational> k;
    for (const auto& s : kappas) k.push_back(parse_rational(s));
    ValueModule vm = ValueModule::abelian({"mu"}, {Character(std::move(k))});
    return make_model(d, l, std::move(vm));
}

// Two abelian rank-1 summands: trivial character and all-1/2 character.
inline ModelPtr mixed(int d, int l) {
    std::vector<Rational> zero(l, Rational(0)), half(l, Rational(1, 2));
    ValueModule vm = ValueModule::abelian({"mu0", "muh"}, {Character(zero), Character(half)});
    return make_model(d, l, std::move(vm));
}

// gl2-type carry fixture: E11,E22 trivial, E12/E21 with opposite characters
// summing to 1 on every branch, structure constants of gl2. kappa12 gives
// the E12 character; E21 gets 1-kappa (or 0 where kappa is 0).
inline ValueModule gl2_module(std::vector<std::string> kappa12) {
    std::vector<Rational> k12, k21, zero;
    for (const auto& s : kappa12) {
        Rational k = parse_rational(s);
        k12.push_back(k);
        k21.push_back(k == 0 ? Rational(0) : Rational(1) - k);
        zero.push_back(Rational(0));
    }
    Rational one(1);
    return ValueModule::with_structure(
        {"E11", "E22", "E12", "E21"},
        {Character(zero), Character(zero), Character(k12), Character(k21)},
        {
            {"E12", "E21", "E11", one},
            {"E12", "E21", "E22", -one},
            {"E11", "E12", "E12", one},
            {"E22", "E12", "E12", -one},
            {"E11", "E21", "E21", -one},
            {"E22", "E21", "E21", one},
        });
}

inline ModelPtr gl2(int d, int l, std::vector<std::string> kappa12) {
    return make_model(d, l, gl2_module(std::move(kappa12)));
}

}  // namespace logdgla::fixtures
