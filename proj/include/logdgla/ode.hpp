#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "logdgla/rational.hpp"

namespace logdgla::ode {

using cplx = std::complex<double>;

struct PolarGrid {
    double R = 1.0;
    int n_r = 0, n_phi = 0;
    std::vector<double> r;  // strictly increasing, in (0, R]
    std::vector<double> a;  // r^2

    double phi(int k) const { return 2.0 * std::numbers::pi * k / n_phi; }
};

// Uniform in r: quadratically refined in a = r^2 near the puncture, fine
// enough in a near the rim where the weighted integrals carry their mass.
inline PolarGrid make_grid(double R, int n_r, int n_phi) {
    if (R <= 0 || n_r < 8)
        throw config_error("grid needs R > 0 and n_r >= 8");
    if (n_phi < 4 || (n_phi & (n_phi - 1)) != 0)
        throw config_error("n_phi must be a power of two");
    PolarGrid g;
    g.R = R;
    g.n_r = n_r;
    g.n_phi = n_phi;
    g.r.resize(n_r);
    g.a.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
        g.r[j] = R * static_cast<double>(j + 1) / n_r;
        g.a[j] = g.r[j] * g.r[j];
    }
    return g;
}

struct PolarSamples {
    PolarGrid grid;
    std::vector<cplx> values;  // [j * n_phi + k]

    PolarSamples() = default;
    PolarSamples(PolarGrid g, std::vector<cplx> vals) : grid(std::move(g)), values(std::move(vals)) {
        if (static_cast<int>(values.size()) != grid.n_r * grid.n_phi)
            throw config_error("sample array has wrong shape");
        for (const cplx& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw config_error("samples must be finite");
    }

    cplx at(int j, int k) const { return values[j * grid.n_phi + k]; }
    cplx& at(int j, int k) { return values[j * grid.n_phi + k]; }
};

inline PolarSamples sample_function(const PolarGrid& g,
                                    const std::function<cplx(double, double)>& f) {
    std::vector<cplx> vals(g.n_r * g.n_phi);
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_phi; ++k) vals[j * g.n_phi + k] = f(g.r[j], g.phi(k));
    return PolarSamples(PolarGrid(g), std::move(vals));
}

namespace detail {

// Angular DFT at one radius: c_n = (1/N) sum_k f_k e^{-i n phi_k}.
inline std::vector<cplx> angular_coefficients(const PolarSamples& s, int j) {
    int N = s.grid.n_phi;
    std::vector<cplx> c(N);
    for (int n = 0; n < N; ++n) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k < N; ++k) {
            double ang = -2.0 * std::numbers::pi * n * k / N;
            acc += s.at(j, k) * cplx(std::cos(ang), std::sin(ang));
        }
        c[n] = acc / static_cast<double>(N);
    }
    return c;
}

// Least-squares polynomial fit (degree <= 4) used to extend h_n below the
// radius where dividing by r^|n| stops being trustworthy.
class PolyFit {
public:
    PolyFit(const std::vector<double>& x, const std::vector<cplx>& y, int degree) {
        int n = static_cast<int>(x.size());
        deg_ = std::min(degree, n - 1);
        scale_ = 1.0;
        for (double v : x) scale_ = std::max(scale_, std::abs(v));
        int m = deg_ + 1;
        std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
        std::vector<cplx> atb(m, cplx(0.0, 0.0));
        for (int i = 0; i < n; ++i) {
            double t = x[i] / scale_, p = 1.0;
            std::vector<double> pows(m);
            for (int d = 0; d < m; ++d) {
                pows[d] = p;
                p *= t;
            }
            for (int rr = 0; rr < m; ++rr) {
                for (int cc = 0; cc < m; ++cc) ata[rr][cc] += pows[rr] * pows[cc];
                atb[rr] += pows[rr] * y[i];
            }
        }
        coef_.assign(m, cplx(0.0, 0.0));
        // dense Gaussian elimination with partial pivoting
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int rr = col + 1; rr < m; ++rr)
                if (std::abs(ata[rr][col]) > std::abs(ata[piv][col])) piv = rr;
            std::swap(ata[col], ata[piv]);
            std::swap(atb[col], atb[piv]);
            for (int rr = col + 1; rr < m; ++rr) {
                double f = ata[rr][col] / ata[col][col];
                for (int cc = col; cc < m; ++cc) ata[rr][cc] -= f * ata[col][cc];
                atb[rr] -= f * atb[col];
            }
        }
        for (int rr = m - 1; rr >= 0; --rr) {
            cplx acc = atb[rr];
            for (int cc = rr + 1; cc < m; ++cc) acc -= ata[rr][cc] * coef_[cc];
            coef_[rr] = acc / ata[rr][rr];
        }
    }

    cplx eval(double x) const {
        double t = x / scale_;
        cplx acc(0.0, 0.0);
        for (int d = deg_; d >= 0; --d) acc = acc * t + coef_[d];
        return acc;
    }

private:
    int deg_;
    double scale_;
    std::vector<cplx> coef_;
};

// Radial profile of one angular mode: divides the DFT coefficient by r^|n|
// where that is well conditioned, extends below by a polynomial fit in a,
// and zeroes modes sitting at the roundoff floor.
inline std::vector<cplx> extract_profile(const std::vector<std::vector<cplx>>& coeffs,
                                         const PolarGrid& g, int n, double global_max) {
    constexpr double kMinPower = 1e-6;
    constexpr double kNoiseRel = 1e-13;
    std::vector<cplx> hn(g.n_r, cplx(0.0, 0.0));
    int bin = (n >= 0) ? n : n + g.n_phi;
    int first_usable = g.n_r;
    double max_coeff = 0.0;
    for (int j = g.n_r - 1; j >= 0; --j) {
        double p = std::pow(g.r[j], std::abs(n));
        if (p < kMinPower) break;
        max_coeff = std::max(max_coeff, std::abs(coeffs[j][bin]));
        hn[j] = coeffs[j][bin] / p;
        first_usable = j;
    }
    if (first_usable == g.n_r)
        throw solver_error("no usable radii for mode " + std::to_string(n));
    if (max_coeff < kNoiseRel * global_max) {
        std::fill(hn.begin(), hn.end(), cplx(0.0, 0.0));
        return hn;
    }
    if (first_usable > 0) {
        int fit_count = std::min(12, g.n_r - first_usable);
        std::vector<double> xs(g.a.begin() + first_usable, g.a.begin() + first_usable + fit_count);
        std::vector<cplx> ys(hn.begin() + first_usable, hn.begin() + first_usable + fit_count);
        PolyFit fit(xs, ys, 4);
        for (int j = 0; j < first_usable; ++j) hn[j] = fit.eval(g.a[j]);
    }
    return hn;
}

}  // namespace detail

struct ModeData {
    PolarGrid grid;
    int n_max = 0;
    std::vector<std::vector<cplx>> h;  // h[n + n_max][j], samples of h_n(a_j)
    std::vector<double> sup_h;         // sup_j |h_n(a_j)|
    double aliasing = 0.0;             // largest Nyquist-bin magnitude seen
    double reconstruction_error = 0.0; // sup |f - sum of kept modes|
    std::vector<int> dropped_n;        // modes between n_max and Nyquist
    std::vector<double> dropped_sup_h; // their measured sup |h_n|
};

// Angular decomposition f = sum_n e^{i n phi} r^|n| h_n(r^2). The division
// by r^|n| is done only where r^|n| is large enough to trust; below that the
// radial profile is extended by a low-degree polynomial fit in a.
inline ModeData fourier_modes(const PolarSamples& s, int n_max) {
    const PolarGrid& g = s.grid;
    if (n_max >= g.n_phi / 2)
        throw precondition_error("fourier_modes requires n_max < n_phi/2");
    ModeData out;
    out.grid = g;
    out.n_max = n_max;
    out.h.assign(2 * n_max + 1, std::vector<cplx>(g.n_r, cplx(0.0, 0.0)));
    out.sup_h.assign(2 * n_max + 1, 0.0);

    std::vector<std::vector<cplx>> coeffs(g.n_r);
    for (int j = 0; j < g.n_r; ++j) {
        coeffs[j] = detail::angular_coefficients(s, j);
        out.aliasing = std::max(out.aliasing, std::abs(coeffs[j][g.n_phi / 2]));
    }

    double global_max = 1e-300;
    for (const cplx& v : s.values) global_max = std::max(global_max, std::abs(v));

    for (int n = -n_max; n <= n_max; ++n) {
        out.h[n + n_max] = detail::extract_profile(coeffs, g, n, global_max);
        for (const cplx& v : out.h[n + n_max])
            out.sup_h[n + n_max] = std::max(out.sup_h[n + n_max], std::abs(v));
    }

    // measured sup |h_n| of the dropped band, for the tail estimate
    for (int n = -(g.n_phi / 2 - 1); n <= g.n_phi / 2 - 1; ++n) {
        if (std::abs(n) <= n_max) continue;
        std::vector<cplx> hn = detail::extract_profile(coeffs, g, n, global_max);
        double sup = 0.0;
        for (const cplx& v : hn) sup = std::max(sup, std::abs(v));
        out.dropped_n.push_back(n);
        out.dropped_sup_h.push_back(sup);
    }

    // reconstruction check against the kept band
    double err = 0.0;
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_phi; ++k) {
            cplx acc(0.0, 0.0);
            for (int n = -n_max; n <= n_max; ++n) {
                double ang = 2.0 * std::numbers::pi * n * k / g.n_phi;
                acc += out.h[n + n_max][j] * std::pow(g.r[j], std::abs(n)) *
                       cplx(std::cos(ang), std::sin(ang));
            }
            err = std::max(err, std::abs(acc - s.at(j, k)));
        }
    out.reconstruction_error = err;
    return out;
}

// Denominator of the mode-wise sup bound: the safe minimum of the two
// constants the estimates use for n >= 0, and kappa itself for n < 0
// (where the radial equation is the n = 0 one).
inline double mode_bound_denominator(int n, double kappa) {
    if (n < 0) return kappa;
    double nu = n + kappa;
    return std::min(nu, std::abs(nu - 1.0));
}

namespace detail {

// Newton divided differences through the points (x[i], y[i]), converted to
// coefficients in powers of (x - x0).
inline void local_poly(const std::vector<double>& x, const std::vector<cplx>& y, double x0,
                       std::vector<cplx>& out) {
    int n = static_cast<int>(x.size());
    std::vector<cplx> dd = y;
    for (int level = 1; level < n; ++level)
        for (int i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - level]);
    // Horner expansion of the Newton form around x0: multiply by
    // (delta - (x_i - x0)) in the shifted variable delta = x - x0.
    out.assign(n, cplx(0.0, 0.0));
    out[0] = dd[n - 1];
    int deg = 0;
    for (int i = n - 2; i >= 0; --i) {
        double shift = x[i] - x0;
        ++deg;
        for (int d = deg; d >= 1; --d) out[d] = out[d - 1] - shift * out[d];
        out[0] = -shift * out[0] + dd[i];
    }
}

}  // namespace detail

namespace detail {

constexpr int kPanelDeg = 4;  // local interpolation degree

// Polynomial pieces per panel [b_{k-1}, b_k] with b_{-1} = 0, in powers of
// (b - left endpoint).
inline std::vector<std::vector<cplx>> panel_polys(const std::vector<cplx>& h, const PolarGrid& g) {
    int nr = g.n_r;
    std::vector<std::vector<cplx>> panel_coef(nr);
    for (int k = 0; k < nr; ++k) {
        int lo = std::max(0, std::min(k - kPanelDeg / 2, nr - 1 - kPanelDeg));
        std::vector<double> xs(g.a.begin() + lo, g.a.begin() + lo + kPanelDeg + 1);
        std::vector<cplx> ys(h.begin() + lo, h.begin() + lo + kPanelDeg + 1);
        double left = (k == 0) ? 0.0 : g.a[k - 1];
        local_poly(xs, ys, left, panel_coef[k]);
    }
    return panel_coef;
}

}  // namespace detail

// Sup of the piecewise-polynomial extension of h the quadrature integrates
// (panel endpoints plus interior probes). This is the right-hand side of
// the mode bound, where the pointwise sample sup can miss the a -> 0 limit.
inline double integrand_sup(const std::vector<cplx>& h, const PolarGrid& g) {
    auto polys = detail::panel_polys(h, g);
    double sup = 0.0;
    for (int k = 0; k < g.n_r; ++k) {
        double left = (k == 0) ? 0.0 : g.a[k - 1];
        double width = g.a[k] - left;
        for (int probe = 0; probe <= 4; ++probe) {
            double delta = width * probe / 4.0;
            cplx acc(0.0, 0.0);
            for (int d = detail::kPanelDeg; d >= 0; --d) acc = acc * delta + polys[k][d];
            sup = std::max(sup, std::abs(acc));
        }
    }
    return sup;
}

// Solves a w' + nu w = h_n on the grid through the variation-of-constants
// integral a^{-nu} int_0^a b^{nu-1} h_n(b) db, rewritten with b = a t as
// w(a) = int_0^1 t^{nu-1} h_n(a t) dt. The weight moments are integrated
// exactly against local interpolating polynomials of h_n, so the endpoint
// singularity never meets the quadrature.
inline std::vector<cplx> radial_solve(const std::vector<cplx>& h, const PolarGrid& g, int n,
                                      double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw precondition_error("radial_solve requires 0 < kappa < 1");
    double nu = (n >= 0) ? n + kappa : kappa;
    int nr = g.n_r;
    constexpr int kDeg = detail::kPanelDeg;
    std::vector<std::vector<cplx>> panel_coef = detail::panel_polys(h, g);

    std::vector<cplx> w(nr, cplx(0.0, 0.0));
    std::vector<double> moments(kDeg + 1);
    for (int j = 0; j < nr; ++j) {
        double aj = g.a[j];
        cplx acc(0.0, 0.0);
        for (int k = 0; k <= j; ++k) {
            double tl = (k == 0) ? 0.0 : g.a[k - 1] / aj;
            double tr = g.a[k] / aj;
            // base moments I_0(nu + m) = (tr^{nu+m} - tl^{nu+m}) / (nu+m)
            double trp = std::pow(tr, nu), tlp = (tl == 0.0) ? 0.0 : std::pow(tl, nu);
            std::vector<double> base(2 * kDeg + 1);
            double trk = trp, tlk = tlp;
            for (int m = 0; m <= 2 * kDeg; ++m) {
                base[m] = (trk - tlk) / (nu + m);
                trk *= tr;
                tlk *= tl;
            }
            // shifted moments I_m = int t^{nu-1} (t - tl)^m dt by the
            // two-term recurrence I_m^{(nu)} = I_{m-1}^{(nu+1)} - tl I_{m-1}^{(nu)}
            std::vector<double> shifted = base;  // level 0 in index "extra power"
            moments[0] = base[0];
            for (int m = 1; m <= kDeg; ++m) {
                for (int e = 0; e + 1 < static_cast<int>(shifted.size()); ++e)
                    shifted[e] = shifted[e + 1] - tl * shifted[e];
                shifted.pop_back();
                moments[m] = shifted[0];
            }
            // contribution: sum_m c_m * a_j^m * I_m  (shifted basis scales by a_j^m)
            double ajm = 1.0;
            for (int m = 0; m <= kDeg; ++m) {
                acc += panel_coef[k][m] * (ajm * moments[m]);
                ajm *= aj;
            }
        }
        w[j] = acc;
    }
    return w;
}

// g = sum_n e^{i n phi} r^|n| w_n(r^2), plus the tail-bound estimate over the
// dropped band n_max < |n| < n_phi/2, evaluated at the verification radius.
struct Reconstruction {
    PolarSamples g;
    double tail_bound = 0.0;
};

// The tail estimate applies the mode-wise sup bound to the measured dropped
// band: sum over n_max < |n| < n_phi/2 of r^|n| sup|h_n| / denom(n).
inline Reconstruction reconstruct(const ModeData& modes, const std::vector<std::vector<cplx>>& w,
                                  double kappa, double verify_radius_fraction = 0.9) {
    const PolarGrid& g = modes.grid;
    std::vector<cplx> vals(g.n_r * g.n_phi, cplx(0.0, 0.0));
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_phi; ++k) {
            cplx acc(0.0, 0.0);
            for (int n = -modes.n_max; n <= modes.n_max; ++n) {
                double ang = 2.0 * std::numbers::pi * n * k / g.n_phi;
                acc += w[n + modes.n_max][j] * std::pow(g.r[j], std::abs(n)) *
                       cplx(std::cos(ang), std::sin(ang));
            }
            vals[j * g.n_phi + k] = acc;
        }
    Reconstruction out{PolarSamples(PolarGrid(g), std::move(vals)), 0.0};
    double r_star = verify_radius_fraction * g.R;
    for (size_t i = 0; i < modes.dropped_n.size(); ++i) {
        int n = modes.dropped_n[i];
        out.tail_bound += std::pow(r_star, std::abs(n)) * modes.dropped_sup_h[i] /
                          mode_bound_denominator(n, kappa);
    }
    return out;
}

// P g per mode: spectral in phi (the n/2 term of the displayed identity
// z d/dz = a d/da + (1/2i) d/dphi), finite differences in a. The known
// r^|n| factor of each mode is handled analytically, so the differentiated
// radial profile w is smooth in a and the local stencils converge:
//   P (e^{i n phi} r^|n| w(a)) = e^{i n phi} r^|n| (a w' + nu w),
// with nu = n + kappa for n >= 0 and nu = kappa otherwise.
inline PolarSamples apply_P_numeric(const PolarSamples& s, double kappa) {
    const PolarGrid& g = s.grid;
    int N = g.n_phi;
    std::vector<cplx> vals(g.n_r * N, cplx(0.0, 0.0));

    std::vector<std::vector<cplx>> coeffs(g.n_r);
    for (int j = 0; j < g.n_r; ++j) coeffs[j] = detail::angular_coefficients(s, j);
    double global_max = 1e-300;
    for (const cplx& v : s.values) global_max = std::max(global_max, std::abs(v));

    constexpr int kDeg = 4;
    for (int n = -(N / 2 - 1); n <= N / 2 - 1; ++n) {
        std::vector<cplx> u = detail::extract_profile(coeffs, g, n, global_max);
        std::vector<cplx> du(g.n_r);
        for (int j = 0; j < g.n_r; ++j) {
            int lo = std::max(0, std::min(j - kDeg / 2, g.n_r - 1 - kDeg));
            std::vector<double> xs(g.a.begin() + lo, g.a.begin() + lo + kDeg + 1);
            std::vector<cplx> ys(u.begin() + lo, u.begin() + lo + kDeg + 1);
            std::vector<cplx> c;
            detail::local_poly(xs, ys, g.a[j], c);
            du[j] = c.size() > 1 ? c[1] : cplx(0.0, 0.0);
        }
        double nu = (n >= 0) ? n + kappa : kappa;
        for (int j = 0; j < g.n_r; ++j) {
            cplx pj = std::pow(g.r[j], std::abs(n)) * (g.a[j] * du[j] + nu * u[j]);
            for (int k = 0; k < N; ++k) {
                double ang = 2.0 * std::numbers::pi * n * k / N;
                vals[j * N + k] += pj * cplx(std::cos(ang), std::sin(ang));
            }
        }
    }
    return PolarSamples(PolarGrid(g), std::move(vals));
}

struct SolveReport {
    double residual_sup = 0.0;       // ||P g - f|| on r <= 0.9 R
    double tail_bound = 0.0;
    double aliasing = 0.0;
    bool aliasing_warning = false;   // significant energy at the Nyquist bin
    bool mode_bounds_ok = true;
    double worst_mode_margin = 0.0;  // max over modes of ||w|| - bound
    double seconds = 0.0;
};

struct SolveResult {
    PolarSamples g;
    SolveReport report;
};

inline SolveResult solve(const PolarSamples& f, double kappa, int n_max,
                         double verify_radius_fraction = 0.9) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw precondition_error("solve requires 0 < kappa < 1");
    auto t0 = std::chrono::steady_clock::now();
    ModeData modes = fourier_modes(f, n_max);
    std::vector<std::vector<cplx>> w(2 * n_max + 1);
    SolveReport rep;
    for (int n = -n_max; n <= n_max; ++n) {
        w[n + n_max] = radial_solve(modes.h[n + n_max], modes.grid, n, kappa);
        double sup_w = 0.0;
        for (const cplx& v : w[n + n_max]) sup_w = std::max(sup_w, std::abs(v));
        double sup_h = std::max(modes.sup_h[n + n_max], integrand_sup(modes.h[n + n_max], f.grid));
        double bound = sup_h / mode_bound_denominator(n, kappa);
        double margin = sup_w - bound;
        rep.worst_mode_margin = std::max(rep.worst_mode_margin, margin);
        if (margin > 1e-10) rep.mode_bounds_ok = false;
    }
    Reconstruction rec = reconstruct(modes, w, kappa, verify_radius_fraction);

    double global_max = 1e-300;
    for (const cplx& v : f.values) global_max = std::max(global_max, std::abs(v));
    rep.aliasing_warning = modes.aliasing > 1e-9 * global_max;

    PolarSamples pg = apply_P_numeric(rec.g, kappa);
    double res = 0.0;
    const PolarGrid& g = f.grid;
    for (int j = 0; j < g.n_r; ++j) {
        if (g.r[j] > verify_radius_fraction * g.R) break;
        for (int k = 0; k < g.n_phi; ++k) res = std::max(res, std::abs(pg.at(j, k) - f.at(j, k)));
    }
    rep.residual_sup = res;
    rep.tail_bound = rec.tail_bound;
    rep.aliasing = modes.aliasing;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return SolveResult{std::move(rec.g), rep};
}

}  // namespace logdgla::ode
