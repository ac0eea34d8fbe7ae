#pragma once

#include <memory>
#include <set>
#include <vector>

#include "logdgla/value_module.hpp"

namespace logdgla {

// Local model: a polydisc in coordinates z_1..z_d with the divisor given by
// z_1...z_l = 0, plus the value module graded by length-l characters.
struct ModelConfig {
    int d = 0;
    int l = 0;
    ValueModule values;

    ModelConfig() = default;
    ModelConfig(int d_, int l_, ValueModule vm) : d(d_), l(l_), values(std::move(vm)) {
        if (d < 0 || l < 0 || l > d)
            throw config_error("model requires 0 <= l <= d");
        values.check_consistent();
        if (!values.empty() && static_cast<int>(values.char_length()) != l)
            throw config_error("value-basis characters must have length l");
    }

    const Rational& kappa(int v, int branch) const {  // branch is 1-based
        return values.chars[v][branch - 1];
    }

    friend bool operator==(const ModelConfig& a, const ModelConfig& b) {
        return a.d == b.d && a.l == b.l && a.values == b.values;
    }
};

using ModelPtr = std::shared_ptr<const ModelConfig>;

inline ModelPtr make_model(int d, int l, ValueModule vm) {
    return std::make_shared<const ModelConfig>(d, l, std::move(vm));
}

// Restriction to the stratum cut out by the branches in S: delete those
// coordinates, and keep only the monodromy-invariant part of the values
// (basis elements with kappa_i = 0 for every i in S).
//
// Returns the stratum model together with the index maps needed to push
// forms down (see residue in logform.hpp).
struct StratumRestriction {
    ModelPtr model;
    std::vector<int> coord_map;  // old coordinate (1-based) -> new, 0 if deleted
    std::vector<int> value_map;  // old basis index -> new, -1 if dropped
};

inline StratumRestriction restrict_to_stratum(const ModelConfig& m, const std::set<int>& S) {
    if (S.empty())
        throw precondition_error("stratum restriction requires nonempty S");
    for (int i : S)
        if (i < 1 || i > m.l)
            throw precondition_error("stratum index out of range");

    StratumRestriction out;
    out.coord_map.assign(m.d + 1, 0);
    int next = 1;
    for (int c = 1; c <= m.d; ++c)
        if (!S.count(c)) out.coord_map[c] = next++;

    ValueModule vm;
    out.value_map.assign(m.values.size(), -1);
    for (size_t v = 0; v < m.values.size(); ++v) {
        bool invariant = true;
        for (int i : S)
            if (m.values.chars[v][i - 1] != 0) { invariant = false; break; }
        if (!invariant) continue;
        out.value_map[v] = static_cast<int>(vm.names.size());
        vm.names.push_back(m.values.names[v]);
        std::vector<Rational> kept;
        for (int i = 1; i <= m.l; ++i)
            if (!S.count(i)) kept.push_back(m.values.chars[v][i - 1]);
        vm.chars.push_back(Character(std::move(kept)));
    }
    if (m.values.has_structure()) {
        size_t n = vm.size();
        vm.structure.emplace(n, std::vector<std::vector<StructureEntry>>(n));
        for (size_t a = 0; a < m.values.size(); ++a) {
            if (out.value_map[a] < 0) continue;
            for (size_t b = 0; b < m.values.size(); ++b) {
                if (out.value_map[b] < 0) continue;
                for (const auto& e : m.values.bracket_row(static_cast<int>(a), static_cast<int>(b))) {
                    // grading forces the target to be invariant as well
                    (*vm.structure)[out.value_map[a]][out.value_map[b]].push_back({out.value_map[e.c], e.coeff});
                }
            }
        }
    }
    out.model = make_model(m.d - static_cast<int>(S.size()), m.l - static_cast<int>(S.size()), std::move(vm));
    return out;
}

}  // namespace logdgla
