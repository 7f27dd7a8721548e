#include "subrk/heisenberg_kernel.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "subrk/errors.hpp"
#include "subrk/faa_di_bruno.hpp"

namespace subrk {

void HeisenbergParams::validate() const {
    if (d < 1) throw DomainError("Heisenberg kernel: d must be >= 1");
    if (!(t > 0.0)) throw DomainError("Heisenberg kernel: t must be positive");
}

double h_sinh_factor(double t, double lambda, double small) {
    const double s = lambda * t;
    if (std::abs(s) < small) {
        const double s2 = s * s;
        return (1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0) / t;
    }
    return lambda / std::sinh(s);
}

double h_coth_factor(double t, double lambda, double small) {
    const double s = lambda * t;
    if (std::abs(s) < small) {
        const double s2 = s * s;
        return (1.0 + s2 / 3.0 - s2 * s2 / 45.0) / t;
    }
    return lambda / std::tanh(s);
}

namespace {

double log_weight(const HeisenbergParams& p, double r, double lambda, double small) {
    return p.d * std::log(h_sinh_factor(p.t, lambda, small)) - 0.25 * r * r * h_coth_factor(p.t, lambda, small);
}

}  // namespace

DerivTable h_deriv_table(const HeisenbergParams& p, double r, double z, int max_a, int max_c,
                         const HeisenbergConfig& cfg) {
    p.validate();
    if (!(r >= 0.0)) throw DomainError("Heisenberg kernel: r must be >= 0");
    if (max_a < 0 || max_c < 0 || max_a + max_c > cfg.max_order)
        throw UsageError("Heisenberg kernel: derivative order above the configured maximum");

    const int na = max_a + 1;
    const int nc = max_c + 1;
    const std::size_t npair = static_cast<std::size_t>(na * nc);
    const double small = cfg.small_lambda_t;

    // Envelope: weight times the polynomial growth of the derivative factors.
    const int deg = max_a + max_c;
    auto log_env = [&](double lam) {
        return log_weight(p, r, lam, small) + deg * std::log1p(lam) + max_a * std::log1p(r);
    };
    const double rate = p.d * p.t + 0.25 * r * r;
    const double step = std::min(1.0, 1.0 / rate) / 8.0;
    double log_peak = 0.0;
    const double lam_max = decay_cutoff(log_env, 0.0, step, 42.0, 1e7, &log_peak);

    // dim: npair real parts followed by npair folded imaginary parts
    auto f = [&](double lam, std::span<double> out) {
        const double w = std::exp(log_weight(p, r, lam, small) - log_peak);
        const double b = h_coth_factor(p.t, lam, small);
        std::vector<double> outer(static_cast<std::size_t>(na), 1.0);
        std::vector<double> inner(static_cast<std::size_t>(std::max(max_a, 1)), 0.0);
        inner[0] = -0.5 * r * b;
        if (max_a >= 2) inner[1] = -0.5 * b;
        const std::vector<double> pr = composite_derivs(outer, inner, max_a);
        const std::complex<double> ph_p = std::polar(1.0, 0.5 * lam * z);
        const std::complex<double> ph_m = std::polar(1.0, -0.5 * lam * z);
        std::complex<double> zp(1.0, 0.0), zm(1.0, 0.0);
        const std::complex<double> ip(0.0, 0.5 * lam), im(0.0, -0.5 * lam);
        for (int c = 0; c < nc; ++c) {
            const std::complex<double> gp = ph_p * zp;
            const std::complex<double> gm = ph_m * zm;
            for (int a = 0; a < na; ++a) {
                const std::size_t k = static_cast<std::size_t>(a * nc + c);
                out[k] = w * pr[static_cast<std::size_t>(a)] * (gp.real() + gm.real());
                out[npair + k] = w * pr[static_cast<std::size_t>(a)] * (gp.imag() + gm.imag());
            }
            zp *= ip;
            zm *= im;
        }
    };

    const QuadResult q = integrate_gk(f, 2 * npair, 0.0, lam_max, cfg.quad);
    if (!q.converged) throw NumericalError("Heisenberg kernel: quadrature did not converge");

    const double scale = std::exp(log_peak) / std::pow(4.0 * std::numbers::pi, p.d + 1);
    DerivTable tab;
    tab.max_a = max_a;
    tab.max_c = max_c;
    tab.lambda_max = lam_max;
    tab.evals = q.evals;
    tab.val.resize(npair);
    tab.err.resize(npair);
    for (std::size_t k = 0; k < npair; ++k) {
        tab.val[k] = scale * q.value[k];
        tab.err[k] = scale * q.err[k];
        tab.imag_residual = std::max(tab.imag_residual, scale * std::abs(q.value[npair + k]));
    }
    return tab;
}

KernelValue h_kernel_value(const HeisenbergParams& p, double r, double z, const HeisenbergConfig& cfg) {
    const DerivTable t = h_deriv_table(p, r, z, 0, 0, cfg);
    return {t.at(0, 0), t.err_at(0, 0), t.imag_residual, t.evals};
}

double h_kernel(const HeisenbergParams& p, double r, double z, const HeisenbergConfig& cfg) {
    return h_kernel_value(p, r, z, cfg).value;
}

double h_derivs(const HeisenbergParams& p, double r, double z, int n_r, int n_z, const HeisenbergConfig& cfg) {
    return h_deriv_table(p, r, z, n_r, n_z, cfg).at(n_r, n_z);
}

}  // namespace subrk
