#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logdgla/character.hpp"

namespace logdgla {

// One entry f_{ab}^c of a structure-constant table.
struct StructureEntry {
    int c;
    Rational coeff;
};

// Finite basis with per-element characters, optionally carrying Lie
// structure constants on the canonical-extension frames. The table is
// indexed on the frame basis mu_a = z^{kappa(a)} s_a, so products pick up
// carry monomials (see bracket in logform.hpp).
struct ValueModule {
    std::vector<std::string> names;
    std::vector<Character> chars;
    // structure[a][b] = sorted sparse row of f_{ab}^c; empty optional means
    // "no Lie structure" (bracket unavailable, not abelian).
    std::optional<std::vector<std::vector<std::vector<StructureEntry>>>> structure;

    size_t size() const { return names.size(); }
    bool empty() const { return names.empty(); }
    bool has_structure() const { return structure.has_value(); }

    size_t char_length() const { return chars.empty() ? 0 : chars.front().length(); }

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw config_error("unknown value-basis element '" + name + "'");
    }

    const std::vector<StructureEntry>& bracket_row(int a, int b) const {
        if (!structure)
            throw config_error("value module has no structure constants");
        return (*structure)[a][b];
    }

    void check_consistent() const {
        for (const Character& c : chars)
            if (c.length() != char_length())
                throw config_error("value-basis characters have unequal lengths");
        if (structure) {
            size_t n = size();
            if (structure->size() != n)
                throw config_error("structure table has wrong shape");
            for (const auto& row : *structure) {
                if (row.size() != n)
                    throw config_error("structure table has wrong shape");
                for (const auto& entries : row)
                    for (const auto& e : entries)
                        if (e.c < 0 || e.c >= static_cast<int>(n))
                            throw config_error("structure entry index out of range");
            }
        }
    }

    static ValueModule abelian(std::vector<std::string> names, std::vector<Character> chars) {
        ValueModule vm;
        vm.names = std::move(names);
        vm.chars = std::move(chars);
        size_t n = vm.names.size();
        vm.structure.emplace(n, std::vector<std::vector<StructureEntry>>(n));
        vm.check_consistent();
        return vm;
    }

    // Builds the table from (a_name, b_name, c_name, coeff) quadruples,
    // filling in the antisymmetric counterpart of every entry.
    static ValueModule with_structure(std::vector<std::string> names, std::vector<Character> chars,
                                      const std::vector<std::tuple<std::string, std::string, std::string, Rational>>& entries) {
        ValueModule vm = abelian(std::move(names), std::move(chars));
        for (const auto& [an, bn, cn, coeff] : entries) {
            int a = vm.index_of(an), b = vm.index_of(bn), c = vm.index_of(cn);
            (*vm.structure)[a][b].push_back({c, coeff});
            (*vm.structure)[b][a].push_back({c, -coeff});
        }
        for (auto& row : *vm.structure)
            for (auto& entries_ab : row) {
                std::sort(entries_ab.begin(), entries_ab.end(),
                          [](const StructureEntry& x, const StructureEntry& y) { return x.c < y.c; });
                std::vector<StructureEntry> merged;
                for (const auto& e : entries_ab) {
                    if (!merged.empty() && merged.back().c == e.c)
                        merged.back().coeff += e.coeff;
                    else
                        merged.push_back(e);
                }
                std::erase_if(merged, [](const StructureEntry& e) { return e.coeff == 0; });
                entries_ab = std::move(merged);
            }
        return vm;
    }

    friend bool operator==(const ValueModule& x, const ValueModule& y) {
        if (x.names != y.names || x.chars != y.chars) return false;
        if (x.structure.has_value() != y.structure.has_value()) return false;
        if (!x.structure) return true;
        for (size_t a = 0; a < x.size(); ++a)
            for (size_t b = 0; b < x.size(); ++b) {
                const auto& ex = (*x.structure)[a][b];
                const auto& ey = (*y.structure)[a][b];
                if (ex.size() != ey.size()) return false;
                for (size_t i = 0; i < ex.size(); ++i)
                    if (ex[i].c != ey[i].c || ex[i].coeff != ey[i].coeff) return false;
            }
        return true;
    }
};

struct ValidationReport {
    bool antisymmetry_ok = true;
    bool grading_ok = true;
    bool jacobi_ok = true;
    std::vector<std::string> failures;

    bool ok() const { return antisymmetry_ok && grading_ok && jacobi_ok; }
};

namespace detail {
// Value with an attached carry monomial z^e, used to accumulate iterated
// brackets exactly: key = (exponent vector, basis index).
using CarryPoly = std::map<std::pair<std::vector<int>, int>, Rational>;

inline void carry_poly_add(CarryPoly& poly, std::vector<int> expo, int v, const Rational& coeff) {
    auto key = std::make_pair(std::move(expo), v);
    auto it = poly.find(key);
    if (it == poly.end())
        poly.emplace(std::move(key), coeff);
    else {
        it->second += coeff;
        if (it->second == 0) poly.erase(it);
    }
}
}  // namespace detail

// Checks antisymmetry, character grading, and the carry-adjusted Jacobi
// identity: each cyclic term of [a,[b,c]] + [b,[c,a]] + [c,[a,b]] is
// multiplied by the carry monomials its two frame products accumulate,
// and the sum must vanish identically as a monomial-valued expression.
inline ValidationReport validate_value_module(const ValueModule& vm) {
    ValidationReport rep;
    if (!vm.has_structure())
        return rep;  // nothing to check beyond construction invariants
    vm.check_consistent();
    int n = static_cast<int>(vm.size());

    auto entry = [&](int a, int b, int c) -> Rational {
        for (const auto& e : vm.bracket_row(a, b))
            if (e.c == c) return e.coeff;
        return Rational(0);
    };

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (entry(a, b, c) != -entry(b, a, c)) {
                    rep.antisymmetry_ok = false;
                    rep.failures.push_back("antisymmetry fails at [" + vm.names[a] + "," + vm.names[b] + "] -> " + vm.names[c]);
                }

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            CharSum cs = char_sum(vm.chars[a], vm.chars[b]);
            for (const auto& e : vm.bracket_row(a, b))
                if (vm.chars[e.c] != cs.character) {
                    rep.grading_ok = false;
                    rep.failures.push_back("grading fails: char([" + vm.names[a] + "," + vm.names[b] + "]) != char(" + vm.names[e.c] + ")");
                }
        }

    // [x,[y,z]] with carries: z^{carry(y,z)} * z^{carry(x, y#z)} f_{yz}^e f_{xe}^g mu_g
    auto double_bracket = [&](int x, int y, int z, detail::CarryPoly& acc) {
        CharSum inner = char_sum(vm.chars[y], vm.chars[z]);
        for (const auto& e : vm.bracket_row(y, z)) {
            CharSum outer = char_sum(vm.chars[x], inner.character);
            std::vector<int> expo(inner.carry.size());
            for (size_t i = 0; i < expo.size(); ++i)
                expo[i] = inner.carry[i] + outer.carry[i];
            for (const auto& g : vm.bracket_row(x, e.c))
                detail::carry_poly_add(acc, expo, g.c, e.coeff * g.coeff);
        }
    };

    for (int a = 0; a < n && rep.jacobi_ok; ++a)
        for (int b = a; b < n && rep.jacobi_ok; ++b)
            for (int c = b; c < n; ++c) {
                detail::CarryPoly acc;
                double_bracket(a, b, c, acc);
                double_bracket(b, c, a, acc);
                double_bracket(c, a, b, acc);
                if (!acc.empty()) {
                    rep.jacobi_ok = false;
                    rep.failures.push_back("Jacobi fails on (" + vm.names[a] + "," + vm.names[b] + "," + vm.names[c] + ")");
                    break;
                }
            }

    return rep;
}

}  // namespace logdgla
