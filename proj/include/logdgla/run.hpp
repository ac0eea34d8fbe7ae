#pragma once

#include <fstream>

#include "logdgla/config.hpp"
#include "logdgla/koszul.hpp"
#include "logdgla/ode_io.hpp"
#include "logdgla/primitives.hpp"
#include "logdgla/random_form.hpp"
#include "logdgla/version.hpp"

namespace logdgla {

struct RunResult {
    Json report;
    bool checks_passed = true;
};

namespace detail {

inline LogForm random_homogeneous(const ModelPtr& m, Rng& rng, int max_deg) {
    int p = rng.range(0, m->d), q = rng.range(0, m->d);
    return random_form(m, p, q, max_deg, rng.next(), true);
}

inline Json run_validate(const RunConfig& cfg, bool& ok) {
    ValidationReport rep = validate_value_module(cfg.model->values);
    ok = rep.ok();
    return Json{{"checks", to_json(rep)}};
}

inline Json run_dgla_check(const RunConfig& cfg, bool& ok) {
    const ModelPtr& m = cfg.model;
    Rng rng(cfg.seed);
    int max_deg = std::max(1, cfg.truncation.max_z_deg);
    bool antisym = true, jacobi = true, leibniz = true, differentials = true, closure = true;
    int produced = 0;
    for (int trial = 0; trial < cfg.count; ++trial) {
        LogForm a = random_homogeneous(m, rng, max_deg);
        LogForm b = random_homogeneous(m, rng, max_deg);
        LogForm c = random_homogeneous(m, rng, max_deg);
        if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
        ++produced;
        int da = a.bidegree()->first + a.bidegree()->second;
        int db = b.bidegree()->first + b.bidegree()->second;
        int dc = c.bidegree()->first + c.bidegree()->second;

        if (!dprime(dprime(a)).is_zero() || !dsecond(dsecond(a)).is_zero() ||
            !(dprime(dsecond(a)) + dsecond(dprime(a))).is_zero())
            differentials = false;

        Rational s1((da * db) % 2 == 0 ? 1 : -1);
        if (!(bracket(a, b) + bracket(b, a) * s1).is_zero()) antisym = false;

        Rational j1((dc * da) % 2 == 0 ? 1 : -1), j2((da * db) % 2 == 0 ? 1 : -1),
            j3((db * dc) % 2 == 0 ? 1 : -1);
        if (!(bracket(a, bracket(b, c)) * j1 + bracket(b, bracket(c, a)) * j2 +
              bracket(c, bracket(a, b)) * j3)
                 .is_zero())
            jacobi = false;

        Rational sa(da % 2 == 0 ? 1 : -1);
        if (!(dtotal(bracket(a, b)) - bracket(dtotal(a), b) - bracket(a, dtotal(b)) * sa)
                 .is_zero())
            leibniz = false;

        if (!is_admissible(bracket(a, b)) || !is_admissible(dprime(a)) ||
            !is_admissible(dsecond(a)))
            closure = false;
    }
    ok = antisym && jacobi && leibniz && differentials && closure;
    return Json{{"checks",
                 Json{{"graded_antisymmetry", antisym},
                      {"graded_jacobi", jacobi},
                      {"leibniz", leibniz},
                      {"differential_identities", differentials},
                      {"admissibility_closure", closure}}},
                {"data", Json{{"triples", produced}}}};
}

inline Json run_primitive(const RunConfig& cfg, bool& ok) {
    const ModelPtr& m = cfg.model;
    Rng rng(cfg.seed);
    bool verified = true, within = true, solver_agrees = true;
    int produced = 0;
    int max_deg = std::min(cfg.truncation.max_z_deg, cfg.truncation.max_zbar_deg);
    Json samples = Json::array();
    for (int trial = 0; trial < cfg.count && produced < cfg.count; ++trial) {
        LogForm beta = random_form(m, cfg.p - 1, cfg.q, max_deg, rng.next(), true);
        LogForm omega = dprime(beta);
        if (omega.is_zero()) continue;
        ++produced;
        LogForm alpha = peel_primitive(omega, cfg.truncation);
        if (!verify_primitive(omega, alpha)) verified = false;
        if (!within_truncation(alpha, cfg.truncation.grown(1))) within = false;
        if (produced <= 3) {
            auto alt = solve_dprime(omega, cfg.truncation);
            if (!alt || !dprime(*alt - alpha).is_zero()) solver_agrees = false;
            samples.push_back(Json{{"omega", to_json(omega)}, {"alpha", to_json(alpha)}});
        }
    }
    ok = verified && within && solver_agrees && produced > 0;
    return Json{{"checks",
                 Json{{"primitives_verified", verified},
                      {"within_truncation", within},
                      {"matrix_solver_agrees", solver_agrees}}},
                {"data", Json{{"count", produced}, {"p", cfg.p}, {"q", cfg.q},
                              {"samples", samples}}}};
}

inline Json run_koszul(const RunConfig& cfg, bool& ok) {
    const ModelPtr& m = cfg.model;
    int v = cfg.value.empty() ? 0 : m->values.index_of(cfg.value);
    KoszulComplex kc = build_koszul(m, v, cfg.truncation);
    std::vector<int> h = koszul_homology(kc);

    int common = kc.common_kernel_monomials();
    std::vector<int> expected(m->l + 1, 0);
    long binom = 1;
    for (int jdeg = 0; jdeg <= m->l; ++jdeg) {
        expected[jdeg] = static_cast<int>(common * binom);
        binom = binom * (m->l - jdeg) / (jdeg + 1);
    }
    bool square_zero = kc.check_square_zero();
    bool oracle = (h == expected);
    std::vector<int> dims(m->l + 1);
    for (int jdeg = 0; jdeg <= m->l; ++jdeg) dims[jdeg] = kc.dim(jdeg);
    ok = square_zero && oracle;
    return Json{{"checks", Json{{"square_zero", square_zero}, {"diagonal_oracle", oracle}}},
                {"data", Json{{"value", m->values.names[v]},
                              {"dims", dims},
                              {"homology", h},
                              {"oracle_homology", expected}}}};
}

inline Json run_e1(const RunConfig& cfg, bool& ok) {
    const ModelPtr& m = cfg.model;
    Json per_q = Json::array();
    bool all_match = true;
    for (int q = 0; q <= m->d; ++q) {
        KernelDescription kd = kernel_dprime_description(m, q, cfg.truncation);
        all_match = all_match && kd.match;
        Json jq = to_json(kd);
        jq.erase("predicted_basis");  // keep reports compact
        per_q.push_back(std::move(jq));
    }
    ModelComplex mc = from_model(m, {0, m->d}, {0, m->d}, cfg.truncation);
    SpectralSequence ss(mc.dc.transposed());
    const Page& e1 = ss.page(1);
    // display dims as [holomorphic p][anti-holomorphic q]
    std::vector<std::vector<int>> dims(m->d + 1, std::vector<int>(m->d + 1, 0));
    for (int p = 0; p <= m->d; ++p)
        for (int q = 0; q <= m->d; ++q) dims[p][q] = e1.dim(q, p);
    ok = all_match;
    return Json{{"checks", Json{{"kernel_description_match", all_match}}},
                {"data", Json{{"kernels", per_q}, {"e1_dims_pq", dims}}}};
}

inline Json run_specseq(const RunConfig& cfg, bool& ok) {
    const ModelPtr& m = cfg.model;
    ModelComplex mc = from_model(m, {0, m->d}, {0, m->d}, cfg.truncation);
    DoubleComplex engine = mc.dc.transposed();
    bool invariants = mc.dc.check_invariants();
    ConvergenceReport conv = check_convergence(engine);

    SpectralSequence ss(engine);
    int stab = ss.stabilization_r() + 1;
    Json pages = Json::array();
    for (int r = 0; r <= stab; ++r) pages.push_back(to_json(ss.page(r)));
    int degenerate_at = stab;
    for (int r = stab; r >= 0; --r) {
        if (!ss.page(r).differentials_all_zero()) break;
        degenerate_at = r;
    }
    ok = invariants && conv.ok();
    return Json{{"checks", Json{{"complex_invariants", invariants},
                                {"stabilized", conv.stabilized},
                                {"page_laws_hold", conv.page_laws_hold},
                                {"converged", conv.converged}}},
                {"data", Json{{"axes", "filtration_q_first"},
                              {"pages", pages},
                              {"degenerate_at_r", degenerate_at},
                              {"total_cohomology", conv.total_cohomology}}}};
}

inline ode::PolarSamples build_ode_samples(const OdeSpec& spec) {
    ode::PolarGrid grid = ode::make_grid(spec.R, spec.n_r, spec.n_phi);
    return ode::sample_function(grid, [&spec](double r, double phi) {
        std::complex<double> acc(0.0, 0.0);
        for (const OdeTermSpec& t : spec.f) {
            std::complex<double> coeff(t.re, t.im);
            double a = r * r;
            if (t.kind == "monomial") {
                acc += coeff * std::polar(std::pow(r, t.a + t.b), (t.a - t.b) * phi);
            } else if (t.kind == "mode") {
                acc += coeff * std::polar(std::pow(r, std::abs(t.n)) * std::exp(-t.sigma * a),
                                          t.n * phi);
            } else {  // monomial_gaussian
                acc += coeff * std::polar(std::pow(r, t.a + t.b) * std::exp(-t.sigma * a),
                                          (t.a - t.b) * phi);
            }
        }
        return acc;
    });
}

inline Json run_ode(const RunConfig& cfg, bool& ok, bool with_timings) {
    const OdeSpec& spec = *cfg.ode;
    ode::PolarSamples f = spec.f_file.empty() ? build_ode_samples(spec)
                                              : [&spec] {
                                                    std::ifstream in(spec.f_file);
                                                    if (!in)
                                                        throw config_error(
                                                            "cannot read samples file '" +
                                                            spec.f_file + "'");
                                                    Json j = Json::parse(in);
                                                    return ode::samples_from_json(j);
                                                }();
    double kappa = spec.kappa.get_d();
    ode::SolveResult res = ode::solve(f, kappa, spec.n_max);
    if (!spec.g_out.empty()) {
        std::ofstream out(spec.g_out, std::ios::binary);
        if (!out) throw config_error("cannot write samples to '" + spec.g_out + "'");
        out << ode::samples_to_json(res.g).dump(2) << "\n";
    }
    bool residual_ok = res.report.residual_sup <= cfg.tolerance;
    bool finite = true;
    for (const auto& v : res.g.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
    ok = residual_ok && res.report.mode_bounds_ok && finite;
    Json data{{"residual_sup", res.report.residual_sup},
              {"tail_bound", res.report.tail_bound},
              {"aliasing", res.report.aliasing},
              {"aliasing_warning", res.report.aliasing_warning},
              {"worst_mode_margin", res.report.worst_mode_margin},
              {"kappa", rational_str(spec.kappa)},
              {"n_max", spec.n_max}};
    if (with_timings) data["seconds"] = res.report.seconds;
    return Json{{"checks", Json{{"residual_within_tolerance", residual_ok},
                                {"mode_bounds", res.report.mode_bounds_ok},
                                {"finite", finite}}},
                {"data", std::move(data)}};
}

}  // namespace detail

// Dispatches a validated config and assembles the versioned report. Reports
// are byte-stable for a fixed (config, seed, version); timings are only
// included on request since they would break that.
inline RunResult run(const RunConfig& cfg, bool with_timings = false) {
    bool ok = true;
    Json body;
    switch (cfg.command) {
        case Command::Validate: body = detail::run_validate(cfg, ok); break;
        case Command::DglaCheck: body = detail::run_dgla_check(cfg, ok); break;
        case Command::Primitive: body = detail::run_primitive(cfg, ok); break;
        case Command::Koszul: body = detail::run_koszul(cfg, ok); break;
        case Command::E1: body = detail::run_e1(cfg, ok); break;
        case Command::SpecSeq: body = detail::run_specseq(cfg, ok); break;
        case Command::Ode: body = detail::run_ode(cfg, ok, with_timings); break;
    }
    RunResult out;
    out.report = Json{{"schema_version", kReportSchemaVersion},
                      {"version", kVersion},
                      {"command", command_name(cfg.command)},
                      {"seed", cfg.seed},
                      {"config", serialize_config(cfg)},
                      {"passed", ok}};
    for (auto& [key, value] : body.items()) out.report[key] = std::move(value);
    out.checks_passed = ok;
    return out;
}

}  // namespace logdgla
