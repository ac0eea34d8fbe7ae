#pragma once

#include <json.hpp>

#include "logdgla/ode.hpp"

namespace logdgla::ode {

// Structured-text form of sampled functions: the grid plus one [re, im]
// pair per sample, radius-major.
inline nlohmann::ordered_json samples_to_json(const PolarSamples& s) {
    nlohmann::ordered_json out;
    out["R"] = s.grid.R;
    out["n_r"] = s.grid.n_r;
    out["n_phi"] = s.grid.n_phi;
    out["r"] = s.grid.r;
    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (const cplx& v : s.values) vals.push_back({v.real(), v.imag()});
    out["values"] = std::move(vals);
    return out;
}

inline PolarSamples samples_from_json(const nlohmann::ordered_json& j) {
    PolarGrid g;
    g.R = j.at("R").get<double>();
    g.n_r = j.at("n_r").get<int>();
    g.n_phi = j.at("n_phi").get<int>();
    if (g.n_phi < 4 || (g.n_phi & (g.n_phi - 1)) != 0)
        throw config_error("n_phi must be a power of two");
    g.r = j.at("r").get<std::vector<double>>();
    if (static_cast<int>(g.r.size()) != g.n_r)
        throw config_error("radial grid has wrong length");
    double prev = 0.0;
    for (double r : g.r) {
        if (!(r > prev) || r > g.R)
            throw config_error("radial grid must be strictly increasing in (0, R]");
        prev = r;
    }
    g.a.resize(g.n_r);
    for (int i = 0; i < g.n_r; ++i) g.a[i] = g.r[i] * g.r[i];

    const auto& vals = j.at("values");
    if (static_cast<int>(vals.size()) != g.n_r * g.n_phi)
        throw config_error("sample array has wrong shape");
    std::vector<cplx> values;
    values.reserve(vals.size());
    for (const auto& pair : vals) {
        if (!pair.is_array() || pair.size() != 2)
            throw config_error("samples must be [re, im] pairs");
        values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return PolarSamples(std::move(g), std::move(values));
}

}  // namespace logdgla::ode
