#pragma once

#include <complex>

#include "logdgla/basis.hpp"
#include "logdgla/serialize.hpp"

namespace logdgla {

enum class Command { Validate, DglaCheck, Primitive, Koszul, E1, SpecSeq, Ode };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Validate: return "validate";
        case Command::DglaCheck: return "dgla-check";
        case Command::Primitive: return "primitive";
        case Command::Koszul: return "koszul";
        case Command::E1: return "e1";
        case Command::SpecSeq: return "specseq";
        case Command::Ode: return "ode";
    }
    return "?";
}

struct OdeTermSpec {
    std::string kind;  // monomial | mode | monomial_gaussian
    int a = 0, b = 0, n = 0;
    double sigma = 0.0;
    double re = 1.0, im = 0.0;

    friend bool operator==(const OdeTermSpec&, const OdeTermSpec&) = default;
};

struct OdeSpec {
    double R = 1.0;
    int n_r = 256, n_phi = 64, n_max = 32;
    Rational kappa = Rational(1, 2);
    std::vector<OdeTermSpec> f;
    std::string f_file;  // read samples from structured text instead of f
    std::string g_out;   // write the solution samples here

    friend bool operator==(const OdeSpec&, const OdeSpec&) = default;
};

struct RunConfig {
    Command command = Command::Validate;
    uint64_t seed = 0;
    ModelPtr model;  // null for pure-ode runs
    Truncation truncation{2, 2};
    int count = 100;
    int p = 1, q = 0;
    std::string value;  // koszul: value-basis element, default first
    double tolerance = 1e-8;
    std::string out;  // report path; the --out flag takes precedence
    std::optional<OdeSpec> ode;

    friend bool operator==(const RunConfig& x, const RunConfig& y) {
        if (x.command != y.command || x.seed != y.seed || x.count != y.count || x.p != y.p ||
            x.q != y.q || x.value != y.value || x.tolerance != y.tolerance || x.out != y.out ||
            x.ode != y.ode)
            return false;
        if (x.truncation.max_z_deg != y.truncation.max_z_deg ||
            x.truncation.max_zbar_deg != y.truncation.max_zbar_deg)
            return false;
        if ((x.model == nullptr) != (y.model == nullptr)) return false;
        return !x.model || *x.model == *y.model;
    }
};

// Schema violations collected with their JSON paths; syntax errors carry the
// line computed from the parser's byte offset.
struct config_parse_error : config_error {
    std::vector<std::string> errors;
    explicit config_parse_error(std::vector<std::string> errs)
        : config_error(errs.empty() ? "invalid config" : errs.front()), errors(std::move(errs)) {}
};

namespace detail {

inline void check_fields(const Json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed,
                         std::vector<std::string>& errs) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (key == k) ok = true;
        if (!ok) errs.push_back(path + ": unknown field '" + key + "'");
    }
}

inline Rational parse_rational_at(const Json& j, const std::string& path,
                                  std::vector<std::string>& errs) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        errs.push_back(path + ": expected a rational string");
    } catch (const config_error& e) {
        errs.push_back(path + ": " + e.what());
    }
    return Rational(0);
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    std::vector<std::string> errs;
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1;
        for (size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw config_parse_error({"line " + std::to_string(line) + ": " + e.what()});
    }
    if (!j.is_object()) throw config_parse_error({"config must be a JSON object"});

    detail::check_fields(j, "$",
                         {"command", "seed", "model", "truncation", "count", "p", "q", "value",
                          "tolerance", "out", "ode"},
                         errs);

    RunConfig cfg;
    if (!j.contains("command")) {
        errs.push_back("$: missing required field 'command'");
    } else {
        std::string cmd = j["command"].is_string() ? j["command"].get<std::string>() : "";
        if (cmd == "validate") cfg.command = Command::Validate;
        else if (cmd == "dgla-check") cfg.command = Command::DglaCheck;
        else if (cmd == "primitive") cfg.command = Command::Primitive;
        else if (cmd == "koszul") cfg.command = Command::Koszul;
        else if (cmd == "e1") cfg.command = Command::E1;
        else if (cmd == "specseq") cfg.command = Command::SpecSeq;
        else if (cmd == "ode") cfg.command = Command::Ode;
        else errs.push_back("$.command: unknown command '" + cmd + "'");
    }
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned() || j["seed"].is_number_integer())
            cfg.seed = j["seed"].get<uint64_t>();
        else errs.push_back("$.seed: expected an integer");
    }
    if (j.contains("count")) cfg.count = j["count"].get<int>();
    if (j.contains("p")) cfg.p = j["p"].get<int>();
    if (j.contains("q")) cfg.q = j["q"].get<int>();
    if (j.contains("value")) cfg.value = j["value"].get<std::string>();
    if (j.contains("tolerance")) cfg.tolerance = j["tolerance"].get<double>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();

    if (j.contains("truncation")) {
        const Json& t = j["truncation"];
        detail::check_fields(t, "$.truncation", {"z", "zbar"}, errs);
        int z = t.value("z", 0), zbar = t.value("zbar", 0);
        if (z < 0 || zbar < 0)
            errs.push_back("$.truncation: degrees must be nonnegative");
        else
            cfg.truncation = Truncation(z, zbar);
    }

    if (j.contains("model")) {
        const Json& m = j["model"];
        detail::check_fields(m, "$.model", {"d", "l", "values"}, errs);
        int d = m.value("d", 0), l = m.value("l", 0);
        ValueModule vm;
        if (m.contains("values")) {
            const Json& v = m["values"];
            detail::check_fields(v, "$.model.values", {"basis", "structure"}, errs);
            std::vector<std::string> names;
            std::vector<Character> chars;
            for (size_t i = 0; v.contains("basis") && i < v["basis"].size(); ++i) {
                const Json& b = v["basis"][i];
                std::string path = "$.model.values.basis[" + std::to_string(i) + "]";
                detail::check_fields(b, path, {"name", "kappa"}, errs);
                names.push_back(b.value("name", "v" + std::to_string(i)));
                std::vector<Rational> ks;
                if (b.contains("kappa"))
                    for (size_t ki = 0; ki < b["kappa"].size(); ++ki)
                        ks.push_back(detail::parse_rational_at(b["kappa"][ki],
                                                               path + ".kappa[" + std::to_string(ki) + "]", errs));
                try {
                    chars.push_back(Character(std::move(ks)));
                } catch (const config_error& e) {
                    errs.push_back(path + ".kappa: " + e.what());
                    chars.push_back(Character(std::vector<Rational>(l, Rational(0))));
                }
            }
            std::vector<std::tuple<std::string, std::string, std::string, Rational>> entries;
            bool with_structure = v.contains("structure");
            for (size_t i = 0; with_structure && i < v["structure"].size(); ++i) {
                const Json& e = v["structure"][i];
                std::string path = "$.model.values.structure[" + std::to_string(i) + "]";
                detail::check_fields(e, path, {"a", "b", "c", "coeff"}, errs);
                entries.emplace_back(e.value("a", ""), e.value("b", ""), e.value("c", ""),
                                     detail::parse_rational_at(e.value("coeff", Json("1")),
                                                               path + ".coeff", errs));
            }
            if (errs.empty()) {
                try {
                    vm = with_structure ? ValueModule::with_structure(names, chars, entries)
                                        : ValueModule::abelian(names, chars);
                } catch (const config_error& e) {
                    errs.push_back(std::string("$.model.values: ") + e.what());
                }
            }
        }
        if (errs.empty()) {
            try {
                cfg.model = make_model(d, l, std::move(vm));
            } catch (const config_error& e) {
                errs.push_back(std::string("$.model: ") + e.what());
            }
        }
    }

    if (j.contains("ode")) {
        const Json& o = j["ode"];
        detail::check_fields(o, "$.ode",
                             {"R", "n_r", "n_phi", "n_max", "kappa", "f", "f_file", "g_out"},
                             errs);
        OdeSpec spec;
        spec.f_file = o.value("f_file", "");
        spec.g_out = o.value("g_out", "");
        spec.R = o.value("R", 1.0);
        spec.n_r = o.value("n_r", 256);
        spec.n_phi = o.value("n_phi", 64);
        spec.n_max = o.value("n_max", 32);
        if (o.contains("kappa"))
            spec.kappa = detail::parse_rational_at(o["kappa"], "$.ode.kappa", errs);
        if (spec.kappa <= 0 || spec.kappa >= 1)
            errs.push_back("$.ode.kappa: must lie strictly between 0 and 1");
        for (size_t i = 0; o.contains("f") && i < o["f"].size(); ++i) {
            const Json& ft = o["f"][i];
            std::string path = "$.ode.f[" + std::to_string(i) + "]";
            detail::check_fields(ft, path, {"kind", "a", "b", "n", "sigma", "re", "im"}, errs);
            OdeTermSpec ts;
            ts.kind = ft.value("kind", "");
            ts.a = ft.value("a", 0);
            ts.b = ft.value("b", 0);
            ts.n = ft.value("n", 0);
            ts.sigma = ft.value("sigma", 0.0);
            ts.re = ft.value("re", 1.0);
            ts.im = ft.value("im", 0.0);
            if (ts.kind != "monomial" && ts.kind != "mode" && ts.kind != "monomial_gaussian")
                errs.push_back(path + ".kind: unknown kind '" + ts.kind + "'");
            if (ts.a < 0 || ts.b < 0) errs.push_back(path + ": exponents must be nonnegative");
            spec.f.push_back(std::move(ts));
        }
        if (spec.f.empty() && spec.f_file.empty())
            errs.push_back("$.ode: needs either f or f_file");
        if (!spec.f.empty() && !spec.f_file.empty())
            errs.push_back("$.ode: f and f_file are mutually exclusive");
        cfg.ode = std::move(spec);
    }

    // command-specific requirements
    if (errs.empty()) {
        bool needs_model = cfg.command != Command::Ode;
        if (needs_model && !cfg.model)
            errs.push_back("$: command requires a model");
        if (cfg.command == Command::Ode && !cfg.ode)
            errs.push_back("$: ode command requires the ode section");
        if (cfg.command == Command::Primitive && cfg.model &&
            (cfg.p < 1 || cfg.p > cfg.model->d))
            errs.push_back("$.p: primitive needs 1 <= p <= d");
    }

    if (!errs.empty()) throw config_parse_error(std::move(errs));
    return cfg;
}

inline Json serialize_config(const RunConfig& cfg) {
    Json out;
    out["command"] = command_name(cfg.command);
    out["seed"] = cfg.seed;
    if (cfg.model) out["model"] = to_json(*cfg.model);
    out["truncation"] = to_json(cfg.truncation);
    out["count"] = cfg.count;
    out["p"] = cfg.p;
    out["q"] = cfg.q;
    if (!cfg.value.empty()) out["value"] = cfg.value;
    out["tolerance"] = cfg.tolerance;
    if (!cfg.out.empty()) out["out"] = cfg.out;
    if (cfg.ode) {
        Json o{{"R", cfg.ode->R},
               {"n_r", cfg.ode->n_r},
               {"n_phi", cfg.ode->n_phi},
               {"n_max", cfg.ode->n_max},
               {"kappa", rational_str(cfg.ode->kappa)}};
        Json terms = Json::array();
        for (const OdeTermSpec& t : cfg.ode->f)
            terms.push_back(Json{{"kind", t.kind},
                                 {"a", t.a},
                                 {"b", t.b},
                                 {"n", t.n},
                                 {"sigma", t.sigma},
                                 {"re", t.re},
                                 {"im", t.im}});
        if (!cfg.ode->f.empty()) o["f"] = terms;
        if (!cfg.ode->f_file.empty()) o["f_file"] = cfg.ode->f_file;
        if (!cfg.ode->g_out.empty()) o["g_out"] = cfg.ode->g_out;
        out["ode"] = std::move(o);
    }
    return out;
}

}  // namespace logdgla
