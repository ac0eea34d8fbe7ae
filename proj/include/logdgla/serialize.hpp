#pragma once

#include <json.hpp>

#include "logdgla/logform.hpp"
#include "logdgla/model_complex.hpp"
#include "logdgla/ss_checks.hpp"

namespace logdgla {

using Json = nlohmann::ordered_json;

inline Json to_json(const Character& c) {
    Json arr = Json::array();
    for (const Rational& k : c.kappa) arr.push_back(rational_str(k));
    return arr;
}

inline Json to_json(const ValueModule& vm) {
    Json basis = Json::array();
    for (size_t i = 0; i < vm.size(); ++i)
        basis.push_back(Json{{"name", vm.names[i]}, {"kappa", to_json(vm.chars[i])}});
    Json out{{"basis", basis}};
    if (vm.has_structure()) {
        Json entries = Json::array();
        for (size_t a = 0; a < vm.size(); ++a)
            for (size_t b = a + 1; b < vm.size(); ++b)
                for (const auto& e : vm.bracket_row(static_cast<int>(a), static_cast<int>(b)))
                    entries.push_back(Json{{"a", vm.names[a]},
                                           {"b", vm.names[b]},
                                           {"c", vm.names[e.c]},
                                           {"coeff", rational_str(e.coeff)}});
        out["structure"] = entries;
    }
    return out;
}

inline Json to_json(const ModelConfig& m) {
    return Json{{"d", m.d}, {"l", m.l}, {"values", to_json(m.values)}};
}

inline Json to_json(const Truncation& T) {
    return Json{{"z", T.max_z_deg}, {"zbar", T.max_zbar_deg}};
}

inline Json to_json(const Term& t) {
    return Json{{"coeff", rational_str(t.coeff)}, {"a", t.a}, {"b", t.b},
                {"I", t.I},                       {"J", t.J}, {"K", t.K},
                {"v", t.v}};
}

inline Json to_json(const LogForm& f) {
    Json terms = Json::array();
    const auto& names = f.model()->values.names;
    for (const Term& t : f.terms()) {
        Json jt = to_json(t);
        jt["v"] = names[t.v];
        terms.push_back(std::move(jt));
    }
    return Json{{"terms", terms}};
}

inline Json to_json(const ValidationReport& rep) {
    return Json{{"antisymmetry", rep.antisymmetry_ok},
                {"grading", rep.grading_ok},
                {"jacobi", rep.jacobi_ok},
                {"failures", rep.failures}};
}

inline Json to_json(const KernelDescription& kd) {
    Json basis = Json::array();
    for (const Term& t : kd.predicted_basis) basis.push_back(to_json(t));
    return Json{{"q", kd.q},
                {"computed_dim", kd.computed_dim},
                {"predicted_dim", kd.predicted_dim},
                {"match", kd.match},
                {"predicted_basis", basis}};
}

inline Json to_json(const Page& pg) {
    Json diffs = Json::array();
    for (const auto& [slot, M] : pg.diff)
        if (!M.is_zero())
            diffs.push_back(Json{{"s", slot.first}, {"t", slot.second}, {"rank", sparse_rank(M)}});
    // representatives in E_0 (total-complex) coordinates, exact entries
    Json reps = Json::array();
    for (const auto& [slot, vecs] : pg.reps) {
        Json jv = Json::array();
        for (const SparseVec& v : vecs) {
            Json entries = Json::array();
            for (const auto& [row, val] : v)
                entries.push_back(Json::array({row, rational_str(val)}));
            jv.push_back(std::move(entries));
        }
        reps.push_back(Json{{"s", slot.first}, {"t", slot.second}, {"vectors", jv}});
    }
    return Json{{"r", pg.r}, {"dims", pg.dims}, {"nonzero_differentials", diffs},
                {"representatives", reps}};
}

inline Json to_json(const ConvergenceReport& rep) {
    return Json{{"stabilized", rep.stabilized},
                {"page_laws_hold", rep.page_laws_hold},
                {"converged", rep.converged},
                {"total_cohomology", rep.total_cohomology}};
}

}  // namespace logdgla
