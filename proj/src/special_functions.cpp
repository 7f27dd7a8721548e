#include "subrk/special_functions.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <mutex>

#include "subrk/errors.hpp"

namespace subrk {

namespace {

constexpr double kSeriesWindow = 0.5;  // |1 - x| below which Taylor series are used
constexpr double kHornerMaxX = 64.0;   // beyond this the acosh tables would overflow

// ---- exact polynomial helpers -------------------------------------------------

Poly poly_trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return poly_trim(r);
}

Poly poly_scale(const Poly& a, const BigInt& c) {
    Poly r(a);
    for (auto& v : r) v *= c;
    return poly_trim(r);
}

Poly poly_deriv(const Poly& a) {
    Poly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
    return poly_trim(r);
}

Poly poly_shift(const Poly& a, int k) {  // multiply by x^k
    if (a.empty()) return a;
    Poly r(k, 0);
    r.insert(r.end(), a.begin(), a.end());
    return r;
}

// multiply by (sign_c + sign_x2 * x^2)
Poly poly_mul_quad(const Poly& a, int c0, int c2) {
    return poly_add(poly_scale(a, c0), poly_scale(poly_shift(a, 2), c2));
}

bool poly_equal(const Poly& a, const Poly& b) { return poly_trim(a) == poly_trim(b); }

BiPoly bi_trim(BiPoly p) {
    for (auto& row : p)
        while (!row.empty() && row.back() == 0) row.pop_back();
    while (!p.empty() && p.back().empty()) p.pop_back();
    return p;
}

BiPoly bi_add(const BiPoly& a, const BiPoly& b) {
    BiPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::size_t la = i < a.size() ? a[i].size() : 0, lb = i < b.size() ? b[i].size() : 0;
        r[i].assign(std::max(la, lb), 0);
        for (std::size_t j = 0; j < la; ++j) r[i][j] += a[i][j];
        for (std::size_t j = 0; j < lb; ++j) r[i][j] += b[i][j];
    }
    return bi_trim(r);
}

BiPoly bi_scale(const BiPoly& a, const BigInt& c) {
    BiPoly r(a);
    for (auto& row : r)
        for (auto& v : row) v *= c;
    return bi_trim(r);
}

BiPoly bi_dx(const BiPoly& a) {
    BiPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) {
        r.push_back(a[i]);
        for (auto& v : r.back()) v *= static_cast<long>(i);
    }
    return bi_trim(r);
}

BiPoly bi_shift_x(const BiPoly& a, int k) {
    if (a.empty()) return a;
    BiPoly r(k);
    r.insert(r.end(), a.begin(), a.end());
    return r;
}

BiPoly bi_mul_K(const BiPoly& a) {
    BiPoly r(a);
    for (auto& row : r)
        if (!row.empty()) row.insert(row.begin(), BigInt(0));
    return bi_trim(r);
}

BiPoly bi_mul_quad(const BiPoly& a, int c0, int c2) {
    return bi_add(bi_scale(a, c0), bi_scale(bi_shift_x(a, 2), c2));
}

// (K^2 + n^2) * a
BiPoly bi_mul_K2n2(const BiPoly& a, int n) {
    return bi_add(bi_mul_K(bi_mul_K(a)), bi_scale(a, BigInt(n) * n));
}

std::unique_ptr<RecurrencePolys> build_polys(DerivKind kind) {
    auto out = std::make_unique<RecurrencePolys>();
    out->kind = kind;
    const int N = kMaxDerivOrder + 1;
    if (kind == DerivKind::acos_sq || kind == DerivKind::acosh_sq) {
        const bool hyp = kind == DerivKind::acosh_sq;
        // hyp: (x^2 - 1) replaces (1 - x^2) and the x-terms flip sign.
        const int c0 = hyp ? -1 : 1, c2 = hyp ? 1 : -1, sx = hyp ? -1 : 1;
        out->p.resize(N + 1);
        out->q.resize(N + 1);
        out->p[1] = {};
        out->q[1] = {BigInt(hyp ? 2 : -2)};
        for (int n = 1; n < N; ++n) {
            const Poly& p = out->p[n];
            const Poly& q = out->q[n];
            Poly pn = poly_add(poly_mul_quad(poly_deriv(p), c0, c2), poly_scale(poly_shift(p, 1), BigInt(sx * (2 * n - 2))));
            pn = poly_add(pn, poly_scale(q, BigInt(-sx)));
            Poly qn = poly_add(poly_mul_quad(poly_deriv(q), c0, c2), poly_scale(poly_shift(q, 1), BigInt(sx * (2 * n - 1))));
            out->p[n + 1] = pn;
            out->q[n + 1] = qn;
        }
    } else if (kind == DerivKind::cosh_K_acos || kind == DerivKind::cos_K_acosh) {
        const bool hyp = kind == DerivKind::cos_K_acosh;
        const int c0 = hyp ? -1 : 1, c2 = hyp ? 1 : -1, sx = hyp ? -1 : 1;
        out->gc.resize(N + 1);
        out->gs.resize(N + 1);
        out->gc[1] = {};
        out->gs[1] = {{BigInt(0), BigInt(-1)}};
        for (int n = 1; n < N; ++n) {
            const BiPoly& gc = out->gc[n];
            const BiPoly& gs = out->gs[n];
            // trig: gc' = (1-x^2) gc_x + (2n-2) x gc - K gs
            //       gs' = (1-x^2)(gs_x - K gc) + (2n-1) x gs
            // hyp:  gc' = (x^2-1) gc_x - (2n-2) x gc + K gs
            //       gs' = (x^2-1)(gs_x - K gc) - (2n-1) x gs
            BiPoly nc = bi_add(bi_mul_quad(bi_dx(gc), c0, c2), bi_scale(bi_shift_x(gc, 1), BigInt(sx * (2 * n - 2))));
            nc = bi_add(nc, bi_scale(bi_mul_K(gs), BigInt(-sx)));
            BiPoly ns = bi_mul_quad(bi_add(bi_dx(gs), bi_scale(bi_mul_K(gc), BigInt(-1))), c0, c2);
            ns = bi_add(ns, bi_scale(bi_shift_x(gs, 1), BigInt(sx * (2 * n - 1))));
            out->gc[n + 1] = nc;
            out->gs[n + 1] = ns;
        }
    } else {
        throw UsageError("recurrence_polys: no polynomial table for the sinc kinds");
    }
    return out;
}

struct DoubleTables {
    std::vector<std::vector<double>> p, q;
};

std::vector<double> to_double(const Poly& p) {
    std::vector<double> r;
    for (const auto& c : p) r.push_back(c.convert_to<double>());
    return r;
}

const DoubleTables& double_tables(bool hyp) {
    static const std::array<DoubleTables, 2> tabs = [] {
        std::array<DoubleTables, 2> t;
        for (int h = 0; h < 2; ++h) {
            const auto& rp = recurrence_polys(h ? DerivKind::acosh_sq : DerivKind::acos_sq);
            t[h].p.resize(rp.p.size());
            t[h].q.resize(rp.q.size());
            for (std::size_t n = 1; n < rp.p.size(); ++n) {
                t[h].p[n] = to_double(rp.p[n]);
                t[h].q[n] = to_double(rp.q[n]);
            }
        }
        return t;
    }();
    return tabs[hyp ? 1 : 0];
}

double horner(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

const std::vector<double>& acos_series_table() {
    static const std::vector<double> c = [] {
        std::vector<double> v(1200, 0.0);
        v[1] = 2.0;
        for (int n = 1; n + 1 < static_cast<int>(v.size()); ++n)
            v[n + 1] = v[n] * double(n) * double(n) / (double(2 * n + 1) * double(n + 1));
        return v;
    }();
    return c;
}

void check_order(int n) {
    if (n < 0 || n > kMaxDerivOrder) throw UsageError("derivative order out of range [0, " + std::to_string(kMaxDerivOrder) + "]");
}

// Angles from 1 - x without cancellation.
double acos_from_s(double s) { return 2.0 * std::asin(std::sqrt(0.5 * s)); }
double acosh_from_xm1(double xm1) { return 2.0 * std::asinh(std::sqrt(0.5 * xm1)); }

// Sum_{n >= k} coef(n) * n!/(n-k)! * s^{n-k}, coef(n) for n >= 1.
template <class Coef>
double falling_series(const Coef& coef, int k, double s, int cap) {
    if (s == 0.0) {
        double ff = 1.0;
        for (int i = 2; i <= k; ++i) ff *= i;
        return coef(k) * ff;
    }
    double sum = 0.0;
    double sp = 1.0;  // s^{n-k}
    double prev = std::numeric_limits<double>::infinity();
    for (int n = std::max(k, 0); n < cap; ++n) {
        double ff = 1.0;
        for (int i = n - k + 1; i <= n; ++i) ff *= i;
        const double term = coef(n) * ff * sp;
        sum += term;
        if (n > k + 8 && std::abs(term) <= 1e-18 * std::abs(sum) && std::abs(term) <= std::abs(prev)) break;
        prev = term;
        sp *= s;
    }
    return sum;
}

}  // namespace

XArg XArg::from_angle(double a, double lambda) {
    const double c = std::cos(a);
    const double sh = std::sinh(0.5 * lambda);
    const double sa = std::sin(0.5 * a);
    return {c * std::cosh(lambda), 2.0 * c * sh * sh - 2.0 * sa * sa};
}

void DerivFamily::validate() const {
    if (!(near_one_threshold > 0.0 && near_one_threshold <= 0.5))
        throw UsageError("near_one_threshold must lie in (0, 0.5]");
    if (series_order < max_order + 4) throw UsageError("series_order must be >= max_order + 4");
    if (max_order < 0 || max_order > kMaxDerivOrder) throw UsageError("max_order out of range");
    const bool needs_k = kind != DerivKind::acos_sq && kind != DerivKind::acosh_sq;
    if (needs_k && !(K > 0.0)) throw DomainError("K must be positive");
}

const RecurrencePolys& recurrence_polys(DerivKind kind) {
    static std::mutex mu;
    static std::array<std::unique_ptr<RecurrencePolys>, 4> cache;
    int idx = 0;
    switch (kind) {
        case DerivKind::acos_sq: idx = 0; break;
        case DerivKind::acosh_sq: idx = 1; break;
        case DerivKind::cosh_K_acos: idx = 2; break;
        case DerivKind::cos_K_acosh: idx = 3; break;
        default: throw UsageError("recurrence_polys: no polynomial table for the sinc kinds");
    }
    std::lock_guard lock(mu);
    if (!cache[idx]) cache[idx] = build_polys(kind);
    return *cache[idx];
}

int poly_degree(const Poly& p) { return static_cast<int>(poly_trim(p).size()) - 1; }

bool recurrence_identity_holds(DerivKind kind, int n) {
    const auto& rp = recurrence_polys(kind);
    if (n < 2 || n > kMaxDerivOrder) throw UsageError("identity order out of range");
    if (kind == DerivKind::acos_sq || kind == DerivKind::acosh_sq) {
        // M' = (1/w)[(1-x^2) p' - x p - q] w^0 ... written per kind:
        //   trig: M_n' = (1-x^2)p' - x p - q over w, plus q' A
        //   hyp:  M_n' = (x^2-1)p' + x p + q over v, plus q' H
        const bool hyp = kind == DerivKind::acosh_sq;
        const int c0 = hyp ? -1 : 1, c2 = hyp ? 1 : -1, sx = hyp ? -1 : 1;
        const BigInt f = BigInt(n - 1) * (n - 1) * (hyp ? -1 : 1);
        const Poly& p = rp.p[n];
        const Poly& q = rp.q[n];
        Poly lhs_w = poly_add(poly_mul_quad(poly_deriv(p), c0, c2), poly_scale(poly_shift(p, 1), BigInt(-sx)));
        lhs_w = poly_add(lhs_w, poly_scale(q, BigInt(-sx)));
        Poly rhs_w = poly_scale(poly_mul_quad(rp.p[n - 1], c0, c2), f);
        return poly_equal(lhs_w, rhs_w) && poly_equal(poly_deriv(q), poly_scale(rp.q[n - 1], f));
    }
    // N_n' = +-(K^2 + (n-1)^2) N_{n-1}
    const bool hyp = kind == DerivKind::cos_K_acosh;
    const int c0 = hyp ? -1 : 1, c2 = hyp ? 1 : -1, sx = hyp ? -1 : 1;
    const BiPoly& gc = rp.gc[n];
    const BiPoly& gs = rp.gs[n];
    // trig: C-part (1-x^2) gc_x - x gc - K gs ;  S-part gs_x - K gc
    // hyp:  C-part (x^2-1) gc_x + x gc + K gs ;  S-part gs_x - K gc
    BiPoly cpart = bi_add(bi_mul_quad(bi_dx(gc), c0, c2), bi_scale(bi_shift_x(gc, 1), BigInt(-sx)));
    cpart = bi_add(cpart, bi_scale(bi_mul_K(gs), BigInt(-sx)));
    BiPoly spart = bi_add(bi_dx(gs), bi_scale(bi_mul_K(gc), BigInt(-1)));
    BiPoly rc = bi_mul_quad(bi_mul_K2n2(rp.gc[n - 1], n - 1), c0, c2);
    BiPoly rs = bi_mul_K2n2(rp.gs[n - 1], n - 1);
    if (hyp) {
        rc = bi_scale(rc, BigInt(-1));
        rs = bi_scale(rs, BigInt(-1));
    }
    return bi_trim(cpart) == bi_trim(rc) && bi_trim(spart) == bi_trim(rs);
}

double acos_sq_series_coeff(int n) {
    const auto& c = acos_series_table();
    if (n < 0) return 0.0;
    return n < static_cast<int>(c.size()) ? c[n] : 0.0;
}

double cosh_family_series_coeff(double K, int n) {
    double a = 1.0;
    for (int m = 0; m < n; ++m) a *= (K * K + double(m) * m) / (double(2 * m + 1) * double(m + 1));
    return a;
}

std::vector<double> arc_sq_derivs(XArg xa, int n_max) {
    check_order(n_max);
    const double x = xa.x;
    const double s = -xa.xm1;
    if (!(s < 2.0) || std::isnan(x)) throw DomainError("arccos^2 family evaluated at x <= -1");
    std::vector<double> out(n_max + 1);
    if (std::abs(s) <= kSeriesWindow) {
        const auto& c = acos_series_table();
        auto coef = [&c](int n) { return n >= 1 ? c[n] : 0.0; };
        for (int k = 0; k <= n_max; ++k) {
            const double v = falling_series(coef, k, s, static_cast<int>(c.size()));
            out[k] = (k % 2 ? -v : v);
        }
        return out;
    }
    if (s > 0.0) {
        const auto& tab = double_tables(false);
        const double w = std::sqrt(s * (2.0 - s));
        const double A = acos_from_s(s);
        out[0] = A * A;
        double wp = w;  // w^{2k-1}
        for (int k = 1; k <= n_max; ++k) {
            out[k] = (horner(tab.p[k], x) * w + horner(tab.q[k], x) * A) / wp;
            wp *= w * w;
        }
        return out;
    }
    const double xm1 = xa.xm1;
    const double v = std::sqrt(xm1 * (xm1 + 2.0));
    const double H = acosh_from_xm1(xm1);
    out[0] = -H * H;
    if (n_max == 0) return out;
    if (x <= kHornerMaxX) {
        const auto& tab = double_tables(true);
        double vp = v;
        for (int k = 1; k <= n_max; ++k) {
            out[k] = -(horner(tab.p[k], x) * v + horner(tab.q[k], x) * H) / vp;
            vp *= v * v;
        }
        return out;
    }
    // (1 - x^2) u^{(n+2)} = (2n+1) x u^{(n+1)} + n^2 u^{(n)}, n >= 1; here with
    // (1 - x^2) = -xm1 (xm1 + 2).
    const double omx2 = -xm1 * (xm1 + 2.0);
    out[1] = -2.0 * H / v;
    if (n_max >= 2) out[2] = (x * out[1] + 2.0) / omx2;
    for (int n = 1; n + 2 <= n_max; ++n) out[n + 2] = (double(2 * n + 1) * x * out[n + 1] + double(n) * n * out[n]) / omx2;
    return out;
}

std::vector<double> acos_sq_derivs(double x, int n_max) {
    if (!(std::abs(x) <= 1.0)) throw DomainError("acos_sq_derivs: |x| > 1");
    if (x == -1.0) throw DomainError("acos_sq_derivs: derivatives are singular at x = -1");
    return arc_sq_derivs(XArg::from_x(x), n_max);
}

std::vector<double> acosh_sq_derivs(double x, int n_max) {
    if (!(x >= 1.0)) throw DomainError("acosh_sq_derivs: x < 1");
    auto u = arc_sq_derivs(XArg::from_x(x), n_max);
    for (auto& v : u) v = -v;
    return u;
}

LogScaled cosh_family_derivs(double K, XArg xa, int n_max) {
    check_order(n_max);
    if (!(K > 0.0)) throw DomainError("K must be positive");
    const double x = xa.x;
    const double s = -xa.xm1;
    if (!(s < 2.0)) throw DomainError("cosh(K arccos x) family evaluated at x <= -1");
    LogScaled out;
    out.m.assign(n_max + 1, 0.0);
    const bool trig = s > 0.0;
    const double A = trig ? acos_from_s(s) : 0.0;
    out.log_scale = K * A;
    const double K2 = K * K;

    const bool series = trig ? s <= kSeriesWindow : (-s <= std::min(kSeriesWindow, 1.0 / K2));
    if (series) {
        const int cap = 20000;
        if (out.log_scale < 600.0) {
            // coefficient a_n computed incrementally inside the loop via a cache
            std::vector<double> a{1.0};
            auto coef = [&a, K2](int n) {
                while (static_cast<int>(a.size()) <= n) {
                    const int m = static_cast<int>(a.size()) - 1;
                    a.push_back(a.back() * (K2 + double(m) * m) / (double(2 * m + 1) * double(m + 1)));
                }
                return a[n];
            };
            const double scale = std::exp(-out.log_scale);
            for (int k = 0; k <= n_max; ++k) {
                const double v = falling_series(coef, k, s, cap);
                out.m[k] = (k % 2 ? -v : v) * scale;
            }
        } else {
            // log-domain terms, all positive (s > 0 on this side)
            const double ls = std::log(s);
            for (int k = 0; k <= n_max; ++k) {
                double lg_a = 0.0;
                for (int m = 0; m < k; ++m) lg_a += std::log((K2 + double(m) * m) / (double(2 * m + 1) * double(m + 1)));
                double sum = 0.0, prev = std::numeric_limits<double>::infinity();
                for (int n = k; n < cap; ++n) {
                    const double lff = std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0);
                    const double term = std::exp(lg_a + lff + (n - k) * ls - out.log_scale);
                    sum += term;
                    if (n > k + 8 && term <= 1e-18 * sum && term <= prev) break;
                    prev = term;
                    lg_a += std::log((K2 + double(n) * n) / (double(2 * n + 1) * double(n + 1)));
                }
                out.m[k] = (k % 2 ? -sum : sum);
            }
        }
        return out;
    }
    // three-term recurrence (1-x^2) F^{(n+1)} = (2n-1) x F^{(n)} + (K^2 + (n-1)^2) F^{(n-1)}
    double omx2;
    if (trig) {
        omx2 = s * (2.0 - s);
        const double w = std::sqrt(omx2);
        const double e = std::exp(-2.0 * K * A);
        out.m[0] = 0.5 * (1.0 + e);
        if (n_max >= 1) out.m[1] = -K * 0.5 * (1.0 - e) / w;
    } else {
        const double xm1 = xa.xm1;
        omx2 = -xm1 * (xm1 + 2.0);
        const double v = std::sqrt(-omx2);
        const double H = acosh_from_xm1(xm1);
        out.m[0] = std::cos(K * H);
        if (n_max >= 1) out.m[1] = -K * std::sin(K * H) / v;
    }
    for (int n = 1; n + 1 <= n_max; ++n)
        out.m[n + 1] = (double(2 * n - 1) * x * out.m[n] + (K2 + double(n - 1) * (n - 1)) * out.m[n - 1]) / omx2;
    return out;
}

LogScaled sinc_family_derivs(double K, XArg xa, int n_max) {
    check_order(n_max);
    if (n_max + 1 > kMaxDerivOrder) throw UsageError("sinc family order too large");
    LogScaled F = cosh_family_derivs(K, xa, n_max + 1);
    const auto u = arc_sq_derivs(xa, n_max + 1);
    LogScaled out;
    out.log_scale = F.log_scale;
    out.m.assign(n_max + 1, 0.0);
    // G u' = (2/K) F'
    for (int m = 0; m <= n_max; ++m) {
        double acc = (2.0 / K) * F.m[m + 1];
        // binomials C(m, j)
        double c = 1.0;
        for (int j = 0; j < m; ++j) {
            acc -= c * out.m[j] * u[m - j + 1];
            c = c * double(m - j) / double(j + 1);
        }
        out.m[m] = acc / u[1];
    }
    return out;
}

LogScaled trig_hyp_derivs(const DerivFamily& family, double x, int n_max) {
    family.validate();
    if (n_max > family.max_order) throw UsageError("trig_hyp_derivs: order above family max_order");
    const bool acos_kind = family.kind == DerivKind::acos_sq || family.kind == DerivKind::cosh_K_acos ||
                           family.kind == DerivKind::sinhc_K_acos;
    if (acos_kind && !(x > -1.0 && x <= 1.0)) throw DomainError("x outside (-1, 1] for an arccos kind");
    if (!acos_kind && !(x >= 1.0)) throw DomainError("x < 1 for an arccosh kind");
    const XArg xa = XArg::from_x(x);
    switch (family.kind) {
        case DerivKind::acos_sq: return {0.0, arc_sq_derivs(xa, n_max)};
        case DerivKind::acosh_sq: return {0.0, acosh_sq_derivs(x, n_max)};
        case DerivKind::cosh_K_acos:
        case DerivKind::cos_K_acosh: return cosh_family_derivs(family.K, xa, n_max);
        case DerivKind::sinhc_K_acos:
        case DerivKind::sinc_K_acosh: return sinc_family_derivs(family.K, xa, n_max);
    }
    return {};
}

double combined_exponent_angle(double t, double a, double lambda) {
    if (!(t > 0.0)) throw DomainError("combined_exponent: t must be positive");
    lambda = std::abs(lambda);
    const XArg xa = XArg::from_angle(a, lambda);
    double xm1 = xa.xm1;
    if (xm1 < 0.0) {
        if (xm1 < -1e-14 * std::max(1.0, xa.x)) throw DomainError("combined_exponent: argument below 1 (trig branch)");
        xm1 = 0.0;
    }
    const double sa = std::sin(0.5 * a);
    const double ch = std::cosh(lambda);
    const double m = 2.0 * sa * sa * ch;
    if (m == 0.0) return 0.0;
    const double v = std::sqrt(xm1 * (xm1 + 2.0));
    const double x = 1.0 + xm1;
    const double delta = m * (1.0 + (x + ch) / (v + std::sinh(lambda)));
    const double D = std::log1p(-delta * std::exp(-lambda));
    return D * (2.0 * lambda + D) / (4.0 * t);
}

double combined_exponent(double t, double r, double lambda) {
    if (!(t > 0.0)) throw DomainError("combined_exponent: t must be positive");
    return combined_exponent_angle(t, std::sqrt(t) * r, lambda);
}

}  // namespace subrk
