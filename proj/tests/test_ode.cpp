#include <catch2/catch_amalgamated.hpp>

#include "logdgla/ode.hpp"

using namespace logdgla;
using namespace logdgla::ode;

namespace {

// Reference oracle: adaptive Simpson on (1/nu) int_0^1 h(a u^{1/nu}) du,
// independent of the product-integration path under test.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double fl,
                        double fm, double fh, double tol, int depth) {
    double mid = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    double flm = f(lm), frm = f(rm);
    double coarse = (hi - lo) / 6.0 * (fl + 4 * fm + fh);
    double left = (mid - lo) / 6.0 * (fl + 4 * flm + fm);
    double right = (hi - mid) / 6.0 * (fm + 4 * frm + fh);
    if (depth > 40 || std::abs(left + right - coarse) < 15 * tol)
        return left + right + (left + right - coarse) / 15.0;
    return adaptive_simpson(f, lo, mid, fl, flm, fm, tol / 2, depth + 1) +
           adaptive_simpson(f, mid, hi, fm, frm, fh, tol / 2, depth + 1);
}

double reference_w(const std::function<double(double)>& h, double a, double nu) {
    auto integrand = [&](double u) { return h(a * std::pow(u, 1.0 / nu)); };
    double fl = integrand(1e-300), fm = integrand(0.5), fh = integrand(1.0);
    return adaptive_simpson(integrand, 0.0, 1.0, fl, fm, fh, 1e-13, 0) / nu;
}

PolarGrid small_grid() { return make_grid(1.0, 128, 32); }

}  // namespace

TEST_CASE("grid construction") {
    PolarGrid g = make_grid(2.0, 64, 32);
    CHECK(g.r.front() > 0.0);
    CHECK(g.r.back() == 2.0);
    CHECK(std::is_sorted(g.r.begin(), g.r.end()));
    CHECK_THROWS_AS(make_grid(1.0, 64, 48), config_error);  // not a power of two
}

TEST_CASE("fourier_modes on single monomials") {
    PolarGrid g = small_grid();
    SECTION("f = z") {
        PolarSamples s = sample_function(g, [](double r, double phi) {
            return cplx(r * std::cos(phi), r * std::sin(phi));
        });
        ModeData m = fourier_modes(s, 8);
        for (int j = 0; j < g.n_r; ++j)
            CHECK(std::abs(m.h[1 + 8][j] - cplx(1.0, 0.0)) < 1e-12);
        for (int n = -8; n <= 8; ++n) {
            if (n == 1) continue;
            CHECK(m.sup_h[n + 8] < 1e-10);
        }
    }
    SECTION("f = zbar^2") {
        PolarSamples s = sample_function(g, [](double r, double phi) {
            return cplx(r * r * std::cos(2 * phi), -r * r * std::sin(2 * phi));
        });
        ModeData m = fourier_modes(s, 8);
        for (int j = 0; j < g.n_r; ++j)
            CHECK(std::abs(m.h[-2 + 8][j] - cplx(1.0, 0.0)) < 1e-12);
    }
    SECTION("radial gaussian lands in mode zero") {
        PolarSamples s = sample_function(
            g, [](double r, double) { return cplx(std::exp(-r * r), 0.0); });
        ModeData m = fourier_modes(s, 8);
        for (int j = 0; j < g.n_r; ++j)
            CHECK(std::abs(m.h[8][j] - std::exp(-g.a[j])) < 1e-12);
        for (int n = 1; n <= 8; ++n) CHECK(m.sup_h[n + 8] < 1e-12);
    }
    SECTION("n_max at the Nyquist bin is rejected") {
        PolarSamples s = sample_function(g, [](double, double) { return cplx(1.0, 0.0); });
        CHECK_THROWS_AS(fourier_modes(s, g.n_phi / 2), precondition_error);
    }
}

TEST_CASE("radial_solve against exact and reference values") {
    PolarGrid g = small_grid();
    SECTION("constant h, n=1, kappa=1/2 gives 2/3") {
        std::vector<cplx> h(g.n_r, cplx(1.0, 0.0));
        auto w = radial_solve(h, g, 1, 0.5);
        for (int j = 0; j < g.n_r; ++j)
            CHECK(std::abs(w[j] - cplx(2.0 / 3.0, 0.0)) < 1e-12);
    }
    SECTION("constant h, n=-1 branch gives 1/kappa = 2") {
        std::vector<cplx> h(g.n_r, cplx(1.0, 0.0));
        auto w = radial_solve(h, g, -1, 0.5);
        for (int j = 0; j < g.n_r; ++j) CHECK(std::abs(w[j] - cplx(2.0, 0.0)) < 1e-12);
    }
    SECTION("gaussian h cross-checked to 1e-10") {
        std::vector<cplx> h(g.n_r);
        for (int j = 0; j < g.n_r; ++j) h[j] = cplx(std::exp(-g.a[j]), 0.0);
        auto hfun = [](double b) { return std::exp(-b); };
        for (int n : {0, 1, 5, -3}) {
            auto w = radial_solve(h, g, n, 0.5);
            double nu = n >= 0 ? n + 0.5 : 0.5;
            for (int j = 7; j < g.n_r; j += 24) {
                double ref = reference_w(hfun, g.a[j], nu);
                CHECK(std::abs(w[j] - cplx(ref, 0.0)) < 1e-10);
            }
        }
    }
    SECTION("kappa outside (0,1) rejected") {
        std::vector<cplx> h(g.n_r, cplx(1.0, 0.0));
        CHECK_THROWS_AS(radial_solve(h, g, 0, 0.0), precondition_error);
        CHECK_THROWS_AS(radial_solve(h, g, 0, 1.0), precondition_error);
    }
}

TEST_CASE("apply_P_numeric") {
    PolarGrid g = small_grid();
    SECTION("monomial eigenvalue") {
        PolarSamples s = sample_function(g, [](double r, double phi) {
            return cplx(r * r * std::cos(2 * phi), r * r * std::sin(2 * phi));  // z^2
        });
        PolarSamples pg = apply_P_numeric(s, 1.0 / 3.0);
        double worst = 0.0;
        for (int j = 0; j < g.n_r; ++j)
            for (int k = 0; k < g.n_phi; ++k)
                worst = std::max(worst, std::abs(pg.at(j, k) - (7.0 / 3.0) * s.at(j, k)));
        CHECK(worst < 1e-9);
    }
    SECTION("constants scale by kappa") {
        PolarSamples s = sample_function(g, [](double, double) { return cplx(3.0, -1.0); });
        PolarSamples pg = apply_P_numeric(s, 0.25);
        double worst = 0.0;
        for (size_t i = 0; i < pg.values.size(); ++i)
            worst = std::max(worst, std::abs(pg.values[i] - 0.25 * s.values[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("solve end to end") {
    PolarGrid g = small_grid();
    SECTION("f = z recovers g = (2/3) z") {
        PolarSamples f = sample_function(g, [](double r, double phi) {
            return cplx(r * std::cos(phi), r * std::sin(phi));
        });
        SolveResult res = solve(f, 0.5, 8);
        double worst = 0.0;
        for (int j = 0; j < g.n_r; ++j)
            for (int k = 0; k < g.n_phi; ++k)
                worst = std::max(worst, std::abs(res.g.at(j, k) - (2.0 / 3.0) * f.at(j, k)));
        CHECK(worst < 1e-10);
        CHECK(res.report.residual_sup < 1e-10);
        CHECK(res.report.mode_bounds_ok);
    }
    SECTION("f = z + zbar splits into 2/3 z + 2 zbar") {
        PolarSamples f = sample_function(g, [](double r, double phi) {
            return cplx(2 * r * std::cos(phi), 0.0);  // z + zbar
        });
        SolveResult res = solve(f, 0.5, 8);
        double worst = 0.0;
        for (int j = 0; j < g.n_r; ++j)
            for (int k = 0; k < g.n_phi; ++k) {
                double r = g.r[j], phi = g.phi(k);
                cplx expect = cplx(2.0 / 3.0 * r * std::cos(phi), 2.0 / 3.0 * r * std::sin(phi)) +
                              cplx(2.0 * r * std::cos(phi), -2.0 * r * std::sin(phi));
                worst = std::max(worst, std::abs(res.g.at(j, k) - expect));
            }
        CHECK(worst < 1e-10);
    }
    SECTION("manufactured polynomial solution") {
        double kappa = 1.0 / 3.0;
        // g* = z^2 + (1/2) z zbar^3 + zbar^2; f = P g* has eigenvalues 2+k, 1+k, k
        auto gstar = [](double r, double phi) {
            cplx z = std::polar(r, phi), zb = std::conj(z);
            return z * z + 0.5 * z * zb * zb * zb + zb * zb;
        };
        PolarSamples f = sample_function(g, [&](double r, double phi) {
            cplx z = std::polar(r, phi), zb = std::conj(z);
            return (2 + kappa) * z * z + (1 + kappa) * 0.5 * z * zb * zb * zb + kappa * zb * zb;
        });
        SolveResult res = solve(f, kappa, 8);
        double worst = 0.0;
        for (int j = 0; j < g.n_r; ++j) {
            if (g.r[j] > 0.9) break;
            for (int k = 0; k < g.n_phi; ++k)
                worst = std::max(worst, std::abs(res.g.at(j, k) - gstar(g.r[j], g.phi(k))));
        }
        CHECK(worst < 1e-8);
        CHECK(res.report.residual_sup < 1e-8);
    }
    SECTION("smooth non-polynomial data") {
        PolarSamples f = sample_function(g, [](double r, double phi) {
            double a = r * r;
            cplx mode0 = cplx(std::exp(-a), 0.0);
            cplx mode2 = std::polar(r * r * std::exp(-2 * a), 2 * phi);
            cplx modem3 = std::polar(r * r * r * std::exp(-a), -3 * phi);
            return mode0 + 0.7 * mode2 + cplx(0.0, 0.4) * modem3;
        });
        SolveResult res = solve(f, 0.5, 12);
        CHECK(res.report.residual_sup < 1e-7);
        CHECK(res.report.mode_bounds_ok);
        CHECK(res.report.tail_bound < 1e-8);
    }
    SECTION("undersampled input trips the aliasing warning") {
        PolarGrid coarse = make_grid(1.0, 64, 16);
        PolarSamples f = sample_function(coarse, [](double r, double phi) {
            return std::polar(std::pow(r, 8), 8.0 * phi);  // lands on the Nyquist bin
        });
        SolveResult res = solve(f, 0.5, 4);
        CHECK(res.report.aliasing_warning);
        PolarSamples fine = sample_function(g, [](double r, double phi) {
            return std::polar(r, phi);
        });
        CHECK_FALSE(solve(fine, 0.5, 4).report.aliasing_warning);
    }
    SECTION("non-unit disk radius") {
        PolarGrid g2 = make_grid(2.0, 128, 32);
        PolarSamples f = sample_function(g2, [](double r, double phi) {
            return cplx(r * std::cos(phi), r * std::sin(phi));
        });
        SolveResult res = solve(f, 0.5, 8);
        double worst = 0.0;
        for (int j = 0; j < g2.n_r; ++j)
            for (int k = 0; k < g2.n_phi; ++k)
                worst = std::max(worst, std::abs(res.g.at(j, k) - (2.0 / 3.0) * f.at(j, k)));
        CHECK(worst < 1e-9);
        CHECK(res.report.residual_sup < 1e-9);
    }
    SECTION("kappa stress") {
        PolarSamples f = sample_function(g, [](double r, double phi) {
            return cplx(std::exp(-r * r) * std::cos(phi) * r, 0.0);
        });
        for (double kappa : {1e-3, 0.5, 1.0 - 1e-3}) {
            SolveResult res = solve(f, kappa, 8);
            CHECK(std::isfinite(res.report.residual_sup));
            for (const cplx& v : res.g.values) {
                CHECK(std::isfinite(v.real()));
                CHECK(std::isfinite(v.imag()));
            }
        }
    }
}
