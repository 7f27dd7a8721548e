#include "subrk/subelliptic_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "subrk/errors.hpp"
#include "subrk/faa_di_bruno.hpp"

namespace subrk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kContourSwitch = 2.0;       // z^2/4t above which values take the contour
constexpr double kConditioningLimit = 1e-4;  // relative error estimate that aborts a table

struct Integrand {
    Space space;
    SubellipticPoint pt;
    int max_a, max_c;
    double split;
    RiemannianConfig rc;

    std::size_t npair() const { return static_cast<std::size_t>((max_a + 1) * (max_c + 1)); }

    // Writes the mantissas (real parts, then folded imaginary parts) and
    // returns the log of the common weight.
    double eval(double lam, std::span<double> out) const {
        const double t = pt.t, r = pt.r;
        const XArg xa = XArg::from_angle(r, lam);
        const QParts parts = space == Space::su2 ? q_su2_parts(t, xa, max_a, rc) : q_sphere_parts(t, pt.d, xa, max_a, rc);
        double logw;
        if (lam >= split && xa.xm1 >= -1e-14)
            logw = parts.log_pref + combined_exponent_angle(t, r, lam);
        else
            logw = parts.log_pref + parts.log_q - lam * lam / (4.0 * t);

        const double ch = std::cosh(lam);
        const double sr = std::sin(r), cr = std::cos(r);
        std::vector<double> inner(static_cast<std::size_t>(std::max(max_a, 1)));
        for (int j = 1; j <= max_a; ++j) {
            const double dj[4] = {cr, -sr, -cr, sr};
            inner[static_cast<std::size_t>(j - 1)] = dj[j % 4] * ch;
        }
        const std::vector<double> dq = composite_derivs(parts.m, inner, max_a);

        const std::size_t np = npair();
        const double om = lam / (2.0 * t);
        const std::complex<double> ph_p = std::polar(1.0, -om * pt.z);
        const std::complex<double> ph_m = std::polar(1.0, om * pt.z);
        std::complex<double> zp(1.0, 0.0), zm(1.0, 0.0);
        const std::complex<double> ip(0.0, -om), im(0.0, om);
        for (int c = 0; c <= max_c; ++c) {
            const std::complex<double> g = ph_p * zp + ph_m * zm;
            for (int a = 0; a <= max_a; ++a) {
                const std::size_t k = static_cast<std::size_t>(a * (max_c + 1) + c);
                out[k] = dq[static_cast<std::size_t>(a)] * g.real();
                out[np + k] = dq[static_cast<std::size_t>(a)] * g.imag();
            }
            zp *= ip;
            zm *= im;
        }
        return logw;
    }
};

using cplx_t = std::complex<double>;

cplx_t over_sin(cplx_t e) { return std::abs(e) < 1e-8 ? cplx_t(1.0) : e / std::sin(e); }
cplx_t sinhc(cplx_t w) { return std::abs(w) < 1e-8 ? cplx_t(1.0) : std::sinh(w) / w; }

// log of [h(c + e) - h(c - e)] / sin(e), h(a) = a e^{-s (lam^2 + a^2)}, written
// without the cancellation at small e.
cplx_t log_pair(double s, double lam, double c, cplx_t e) {
    const cplx_t w = 2.0 * s * c * e;
    return std::log(2.0) - s * (lam * lam + c * c) - s * e * e + std::log(over_sin(e)) +
           std::log(std::cosh(w) - 2.0 * s * c * c * sinhc(w));
}

cplx_t log_sum(std::span<const cplx_t> v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const cplx_t& x : v) mx = std::max(mx, x.real());
    cplx_t sum = 0.0;
    for (const cplx_t& x : v) sum += std::exp(x - mx);
    return mx + std::log(sum);
}

// log of e^{-lambda^2/4t} sum_k (phi + 2 pi k)/sin(phi) e^{-(phi + 2 pi k)^2/4t}
// with cos(phi) = cos(r) cosh(lambda + i z).  Near phi = 0 and phi = pi the
// terms are paired so the removable singularity cancels analytically.
cplx_t contour_log(double t, double r, double z, double lam) {
    const double s = 1.0 / (4.0 * t);
    const cplx_t x = std::cos(r) * std::cosh(cplx_t(lam, z));
    const cplx_t phi = std::acos(x);
    if (std::abs(phi) < 0.05) {
        const std::array<cplx_t, 3> v{std::log(over_sin(phi)) - s * (lam * lam + phi * phi),
                                      log_pair(s, lam, 2.0 * kPi, phi), log_pair(s, lam, 4.0 * kPi, phi)};
        return log_sum(v);
    }
    if (std::abs(kPi - phi) < 0.05) {
        const cplx_t psi = kPi - phi;
        const cplx_t neg(0.0, kPi);
        const std::array<cplx_t, 2> v{log_pair(s, lam, kPi, psi) + neg, log_pair(s, lam, 3.0 * kPi, psi) + neg};
        return log_sum(v);
    }
    const cplx_t log_sin = std::log(std::sin(phi));
    std::array<cplx_t, 4> v;
    for (int k = -2; k <= 1; ++k) {
        const cplx_t a = phi + 2.0 * kPi * k;
        v[static_cast<std::size_t>(k + 2)] = std::log(a) - log_sin - s * (lam * lam + a * a);
    }
    return log_sum(v);
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw UsageError("quadrature tolerances must be positive");
    if (!(t_switch > 0.0 && t_switch <= 0.1)) throw UsageError("t_switch must lie in (0, 0.1]");
    if (max_panels < 1) throw UsageError("max_panels must be positive");
    if (!(tail_drop > 0.0) || !(lambda_cap > 0.0)) throw UsageError("tail rule parameters must be positive");
}

void SubellipticPoint::validate() const {
    if (!(t > 0.0)) throw DomainError("subelliptic kernel: t must be positive");
    if (!(r >= 0.0 && r < 0.5 * kPi)) throw DomainError("subelliptic kernel: r must lie in [0, pi/2)");
    if (!(std::abs(z) <= kPi)) throw DomainError("subelliptic kernel: z must lie in [-pi, pi]");
    if (d < 1) throw DomainError("subelliptic kernel: d must be >= 1");
}

double branch_split(double r) {
    const double s = std::sin(0.5 * r);
    return 2.0 * std::asinh(s / std::sqrt(std::cos(r)));
}

double z_prefactor_poly(int j, double t, double z) {
    std::vector<double> a{1.0};
    for (int k = 0; k < j; ++k) {
        std::vector<double> b(a.size() + 1, 0.0);
        for (std::size_t i = 1; i < a.size(); ++i) b[i - 1] += double(i) * a[i];
        for (std::size_t i = 0; i < a.size(); ++i) b[i + 1] += a[i] / (2.0 * t);
        a = std::move(b);
    }
    double v = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * z + a[i];
    return v;
}

SubellipticTable p_deriv_table(Space space, const SubellipticPoint& pt, int max_a, int max_c,
                               const QuadratureConfig& cfg) {
    pt.validate();
    cfg.validate();
    if (space == Space::su2 && pt.d != 1) throw UsageError("su2 kernel has d = 1");
    if (max_a < 0 || max_c < 0 || max_a + max_c > cfg.max_order)
        throw UsageError("subelliptic kernel: derivative order above the configured maximum");
    const double t = pt.t;
    const double zexp = pt.z * pt.z / (4.0 * t);
    if (zexp > 700.0) throw NumericalError("subelliptic kernel: e^{z^2/4t} overflows at this (t, z)");

    const Integrand ig{space, pt, max_a, max_c, branch_split(pt.r), cfg.riemann};
    const std::size_t np = ig.npair();
    std::vector<double> buf(2 * np);

    auto log_env = [&](double lam) {
        const double lw = ig.eval(lam, buf);
        double mx = 0.0;
        for (std::size_t k = 0; k < np; ++k) mx = std::max(mx, std::abs(buf[k]));
        return mx > 0.0 ? lw + std::log(mx) : -std::numeric_limits<double>::infinity();
    };
    const double h0 = 0.5 * std::min(std::sqrt(t), 0.1);
    double log_peak = 0.0;
    const double lam_max = decay_cutoff(log_env, 0.0, h0, cfg.tail_drop, cfg.lambda_cap, &log_peak, 0.05);
    if (!std::isfinite(log_peak)) throw NumericalError("subelliptic kernel: integrand envelope is not finite");

    const bool subst =
        cfg.path == QuadPath::substitution || (cfg.path == QuadPath::automatic && t <= cfg.t_switch);
    const double jac = subst ? std::sqrt(4.0 * t) : 1.0;
    VecIntegrand f = [&](double u, std::span<double> out) {
        const double lw = ig.eval(jac * u, out);
        const double w = jac * std::exp(lw - log_peak);
        for (double& v : out) v *= w;
    };

    QuadOptions qo{cfg.rel_tol, cfg.abs_tol, cfg.max_panels};
    const double split = std::min(ig.split, lam_max);
    const double us = split / jac, ue = lam_max / jac;
    std::vector<double> breaks;
    if (subst)
        for (int k = 1; k <= 8 && k < ue; ++k)
            if (k > us) breaks.push_back(k);
    QuadResult qt;
    if (us > 0.0) {
        std::vector<double> tb;
        if (subst)
            for (int k = 1; k <= 8 && k < us; ++k) tb.push_back(k);
        qt = integrate_gk(f, 2 * np, 0.0, us, qo, tb);
    } else {
        qt.value.assign(2 * np, 0.0);
        qt.err.assign(2 * np, 0.0);
        qt.l1.assign(2 * np, 0.0);
    }
    const QuadResult qh = integrate_gk(f, 2 * np, us, ue, qo, breaks);
    if (!qt.converged || !qh.converged) throw NumericalError("subelliptic kernel: quadrature did not converge");

    const double scale = std::exp(log_peak + zexp) / std::sqrt(4.0 * kPi * t);
    const double eps = std::numeric_limits<double>::epsilon();
    SubellipticTable tab;
    tab.max_a = max_a;
    tab.max_c = max_c;
    tab.lambda_split = ig.split;
    tab.lambda_max = lam_max;
    tab.substitution = subst;
    tab.evals = qt.evals + qh.evals;
    tab.val.assign(np, 0.0);
    tab.err.assign(np, 0.0);
    tab.trig.assign(np, 0.0);
    tab.hyp.assign(np, 0.0);
    std::vector<double> az(static_cast<std::size_t>(max_c + 1));
    for (int j = 0; j <= max_c; ++j) az[static_cast<std::size_t>(j)] = z_prefactor_poly(j, t, pt.z);
    for (int a = 0; a <= max_a; ++a) {
        for (int m = 0; m <= max_c; ++m) {
            double vt = 0.0, vh = 0.0, e = 0.0, res = 0.0, binom = 1.0;
            for (int j = 0; j <= m; ++j) {
                const std::size_t k = tab.index(a, m - j);
                const double w = binom * az[static_cast<std::size_t>(j)];
                vt += w * qt.value[k];
                vh += w * qh.value[k];
                e += std::abs(w) * (qt.err[k] + qh.err[k] + eps * (qt.l1[k] + qh.l1[k]));
                res += std::abs(w) * std::abs(qt.value[np + k] + qh.value[np + k]);
                binom = binom * double(m - j) / double(j + 1);
            }
            const std::size_t o = tab.index(a, m);
            tab.trig[o] = scale * vt;
            tab.hyp[o] = scale * vh;
            tab.val[o] = tab.trig[o] + tab.hyp[o];
            tab.err[o] = scale * e;
            tab.imag_residual = std::max(tab.imag_residual, scale * res);
        }
    }
    if (tab.err[0] > kConditioningLimit * std::abs(tab.val[0]))
        throw NumericalError("subelliptic kernel: cancellation at z^2/4t = " + std::to_string(zexp) +
                             " leaves no accurate digits; values alone are available by the contour path");
    return tab;
}

ContourValue p_contour(Space space, const SubellipticPoint& pt, const QuadratureConfig& cfg) {
    pt.validate();
    cfg.validate();
    if (pt.d != 1) throw UsageError("contour evaluation supports d = 1 only");
    const double t = pt.t;
    auto log_env = [&](double lam) { return contour_log(t, pt.r, pt.z, lam).real(); };
    const double h0 = 0.5 * std::min(std::sqrt(t), 0.1);
    double log_peak = 0.0;
    const double lam_max = decay_cutoff(log_env, 0.0, h0, cfg.tail_drop, std::min(cfg.lambda_cap, 300.0), &log_peak, 0.05);
    if (!std::isfinite(log_peak)) throw NumericalError("contour evaluation: integrand envelope is not finite");
    VecIntegrand f = [&](double lam, std::span<double> out) {
        out[0] = std::exp(contour_log(t, pt.r, pt.z, lam) - log_peak).real();
    };
    const QuadResult q = integrate_gk(f, 1, 0.0, lam_max, QuadOptions{cfg.rel_tol, cfg.abs_tol, cfg.max_panels});
    if (!q.converged) throw NumericalError("contour evaluation: quadrature did not converge");
    double log_c = std::log(std::sqrt(kPi) / 4.0) + t - 1.5 * std::log(t) - 0.5 * std::log(4.0 * kPi * t) + log_peak;
    if (space == Space::sphere) log_c -= 2.0 * std::log(kPi);
    const double scale = 2.0 * std::exp(log_c);
    const double eps = std::numeric_limits<double>::epsilon();
    return {scale * q.value[0], scale * (q.err[0] + eps * q.l1[0]), lam_max, q.evals};
}

namespace {

bool use_contour(const SubellipticPoint& pt, const QuadratureConfig& cfg) {
    return cfg.path == QuadPath::automatic && pt.d == 1 && pt.z * pt.z / (4.0 * pt.t) > kContourSwitch;
}

}  // namespace

double p_su2(const SubellipticPoint& pt, const QuadratureConfig& cfg) {
    if (use_contour(pt, cfg)) return p_contour(Space::su2, pt, cfg).value;
    return p_deriv_table(Space::su2, pt, 0, 0, cfg).at(0, 0);
}

double p_sphere(const SubellipticPoint& pt, const QuadratureConfig& cfg) {
    if (use_contour(pt, cfg)) return p_contour(Space::sphere, pt, cfg).value;
    return p_deriv_table(Space::sphere, pt, 0, 0, cfg).at(0, 0);
}

double p_derivs(Space space, const SubellipticPoint& pt, int n_r, int n_z, const QuadratureConfig& cfg) {
    return p_deriv_table(space, pt, n_r, n_z, cfg).at(n_r, n_z);
}

}  // namespace subrk
