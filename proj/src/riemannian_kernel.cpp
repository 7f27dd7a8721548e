#include "subrk/riemannian_kernel.hpp"

#include <cmath>
#include <numbers>

#include "subrk/errors.hpp"
#include "subrk/faa_di_bruno.hpp"

namespace subrk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_args(double t, XArg x, int n_max, const RiemannianConfig& cfg) {
    if (!(t > 0.0)) throw DomainError("Riemannian kernel: t must be positive");
    if (!(x.xm1 > -2.0)) throw DomainError("Riemannian kernel: x must exceed -1");
    if (n_max < 0 || n_max > cfg.max_order) throw UsageError("Riemannian kernel: derivative order above the configured maximum");
}

// max(1, |x|): the j-th derivative is measured in units of xs^{-j}, the
// scale the leading factor's derivatives follow for large x.
double deriv_scale(XArg x) { return std::max(1.0, std::abs(x.x)); }

// Generous log-bound of the k-th remainder term and its first n derivatives,
// the j-th multiplied by deriv_scale^j.
double remainder_log_bound(double t, XArg x, int k, int n) {
    const double K = kPi * k / t;
    const double s = -x.xm1;
    const double xs = deriv_scale(x);
    const double omx2 = std::max(std::abs(s * (2.0 - s)) / (xs * xs), 1e-2);
    double lb = -kPi * kPi * k * k / t + std::log(2.0 * (1.0 + 2.0 * kPi * k * K));
    if (s > 0.0) lb += K * 2.0 * std::asin(std::sqrt(0.5 * s));
    lb += n * std::log(4.0 * (K + n) * (K + n) / omx2);
    return lb;
}

}  // namespace

double QParts::value(std::size_t k) const { return m[k] * std::exp(log_pref + log_q); }

std::vector<double> q_leading_mantissas(double t, XArg x, int n_max, double* log_q) {
    const auto u = arc_sq_derivs(x, n_max + 1);
    std::vector<double> ones(n_max + 2, 1.0), y(n_max + 1);
    for (int i = 1; i <= n_max + 1; ++i) y[i - 1] = -u[i] / (4.0 * t);
    const auto bell = composite_derivs<double>(ones, y, n_max + 1);
    std::vector<double> out(n_max + 1);
    for (int j = 0; j <= n_max; ++j) out[j] = 2.0 * t * bell[j + 1];
    if (log_q) *log_q = -u[0] / (4.0 * t);
    return out;
}

std::vector<double> one_plus_r_derivs(double t, XArg x, int n_max, const RiemannianConfig& cfg) {
    std::vector<double> out(n_max + 1, 0.0);
    out[0] = 1.0;
    if (!cfg.include_remainder) return out;
    const double log_floor = std::log(cfg.tolerance) - 4.0;
    const double xs = deriv_scale(x);
    for (int k = 1; k <= cfg.kmax; ++k) {
        if (remainder_log_bound(t, x, k, n_max) < log_floor) break;
        const double K = kPi * k / t;
        const LogScaled F = cosh_family_derivs(K, x, n_max);
        const LogScaled G = sinc_family_derivs(K, x, n_max);
        const double factor = 2.0 * std::exp(-kPi * kPi * k * k / t + F.log_scale);
        bool small = true;
        double unit = 1.0;
        for (int j = 0; j <= n_max; ++j) {
            const double term = factor * (F.m[j] - 2.0 * kPi * k * G.m[j]);
            out[j] += term;
            if (std::abs(term) * unit > cfg.tolerance * std::max(1.0, std::abs(out[j]) * unit)) small = false;
            unit *= xs;
        }
        if (small) break;
    }
    return out;
}

std::vector<double> remainder_derivs(double t, XArg x, int n_max, const RiemannianConfig& cfg) {
    check_args(t, x, n_max, cfg);
    std::vector<double> out(n_max + 1, 0.0);
    for (int k = 1; k <= cfg.kmax; ++k) {
        const double K = kPi * k / t;
        const LogScaled F = cosh_family_derivs(K, x, n_max);
        const LogScaled G = sinc_family_derivs(K, x, n_max);
        const double factor = 2.0 * std::exp(-kPi * kPi * k * k / t + F.log_scale);
        bool small = true;
        for (int j = 0; j <= n_max; ++j) {
            const double term = factor * (F.m[j] - 2.0 * kPi * k * G.m[j]);
            out[j] += term;
            if (std::abs(term) > 1e-17 * std::abs(out[j])) small = false;
        }
        if (small) break;
    }
    return out;
}

int remainder_terms_used(double t, XArg x, int n_max, const RiemannianConfig& cfg) {
    if (!cfg.include_remainder) return 0;
    const double log_floor = std::log(cfg.tolerance) - 4.0;
    int used = 0;
    for (int k = 1; k <= cfg.kmax; ++k) {
        if (remainder_log_bound(t, x, k, n_max) < log_floor) break;
        ++used;
    }
    return used;
}

QParts q_su2_parts(double t, XArg x, int n_max, const RiemannianConfig& cfg) {
    check_args(t, x, n_max, cfg);
    QParts out;
    out.log_pref = std::log(std::sqrt(kPi) / 4.0) + t - 1.5 * std::log(t);
    const auto mq = q_leading_mantissas(t, x, n_max, &out.log_q);
    const auto rr = one_plus_r_derivs(t, x, n_max, cfg);
    out.m.assign(n_max + 1, 0.0);
    for (int k = 0; k <= n_max; ++k) {
        double c = 1.0, acc = 0.0;
        for (int j = 0; j <= k; ++j) {
            acc += c * mq[j] * rr[k - j];
            c = c * double(k - j) / double(j + 1);
        }
        out.m[k] = acc;
    }
    return out;
}

QParts q_sphere_parts(double t, int d, XArg x, int n_max, const RiemannianConfig& cfg) {
    if (d < 1) throw DomainError("sphere kernel: d must be >= 1");
    if (d - 1 + n_max > cfg.max_order) throw UsageError("sphere kernel: derivative order above the configured maximum");
    QParts base = q_su2_parts(t, x, d - 1 + n_max, cfg);
    QParts out;
    out.log_q = base.log_q;
    out.log_pref = base.log_pref - 2.0 * std::log(kPi) - (d - 1) * std::log(2.0 * kPi) + double(d * d - 1) * t;
    out.m.assign(base.m.begin() + (d - 1), base.m.end());
    return out;
}

double q_su2(double t, double x, const RiemannianConfig& cfg) { return q_su2_parts(t, XArg::from_x(x), 0, cfg).value(0); }

LogScaled q_su2_derivs(double t, double x, int n_max, const RiemannianConfig& cfg) {
    return q_su2_parts(t, XArg::from_x(x), n_max, cfg).log_scaled();
}

LogScaled q_sphere(double t, int d, double x, int n_max, const RiemannianConfig& cfg) {
    return q_sphere_parts(t, d, XArg::from_x(x), n_max, cfg).log_scaled();
}

double q_leading(double t, double x) {
    double lq = 0.0;
    const auto m = q_leading_mantissas(t, XArg::from_x(x), 0, &lq);
    return m[0] * std::exp(lq + std::log(std::sqrt(kPi) / 4.0) + t - 1.5 * std::log(t));
}

double q_remainder(double t, double x, const RiemannianConfig& cfg) {
    return remainder_derivs(t, XArg::from_x(x), 0, cfg)[0];
}

}  // namespace subrk
