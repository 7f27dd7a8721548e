#include "subrk/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "subrk/errors.hpp"
#include "subrk/heisenberg_kernel.hpp"
#include "subrk/quadrature.hpp"
#include "subrk/riemannian_kernel.hpp"
#include "subrk/special_functions.hpp"
#include "subrk/subelliptic_kernel.hpp"

namespace subrk {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::size_t i) {
        try {
            body(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t nt = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) run(i);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += nt) run(i);
            });
    }
    // Report the failure at the earliest grid index, independent of scheduling.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

[[noreturn]] void rethrow_at(const Error& e, double t) {
    throw Error(e.code(), std::string(e.what()) + " (at t = " + format_double(t) + ")");
}

double fit_slope(const std::vector<double>& ts, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(errs[i] > 0.0)) continue;
        const double x = std::log(ts[i]), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

void finish(ConvergenceReport& rep, const ConvergenceConfig& cfg) {
    rep.degenerate = std::abs(rep.target) < cfg.degenerate_floor;
    std::vector<double> ts, es;
    for (auto& row : rep.rows) {
        row.abs_err = std::abs(row.scaled - row.target);
        row.rel_err = row.abs_err / std::max(std::abs(row.target), cfg.degenerate_floor);
        if (row.has_cross) {
            const double scale = std::max({std::abs(row.scaled), std::abs(row.cross), cfg.degenerate_floor});
            row.cross_gap = std::abs(row.scaled - row.cross) / scale;
            rep.max_cross_gap = std::max(rep.max_cross_gap, row.cross_gap);
        }
    }
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        ts.push_back(rep.rows[i].t);
        es.push_back(rep.err(i));
    }
    rep.slope = fit_slope(ts, es);
    rep.final_err = es.empty() ? 0.0 : es.back();
    rep.monotone = rep.decreasing_over(cfg.monotone_window);
    rep.cross_ok = rep.max_cross_gap <= cfg.cross_tol;
    const double tol = rep.degenerate ? cfg.degenerate_abs_tol : cfg.rel_tol;
    rep.passed = rep.monotone && rep.final_err < tol && rep.cross_ok;
}

}  // namespace

std::vector<double> default_t_grid() { return {0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}; }

void ConvergenceConfig::validate() const {
    if (t_grid.empty()) throw UsageError("t grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw UsageError("t grid values must be positive");
        if (i > 0 && !(t_grid[i] < t_grid[i - 1])) throw UsageError("t grid must be strictly decreasing");
    }
    if (!(rel_tol > 0.0) || !(degenerate_floor > 0.0) || !(degenerate_abs_tol > 0.0) || !(cross_tol > 0.0))
        throw UsageError("convergence tolerances must be positive");
    if (monotone_window < 2) throw UsageError("monotone window must be at least 2");
    if (threads < 1) throw UsageError("threads must be positive");
}

namespace {

// Errors at rounding level count as converged; an exactly vanishing target
// and value cannot decrease further.
constexpr double kExactFloor = 1e-14;

}  // namespace

bool ConvergenceReport::decreasing_over(int window) const {
    const std::size_t n = rows.size();
    if (n < 2) return false;
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(window));
    for (std::size_t i = n - w + 1; i < n; ++i)
        if (!(err(i) < err(i - 1)) && !(err(i) <= kExactFloor && err(i - 1) <= kExactFloor)) return false;
    return true;
}

ConvergenceReport converge_su2(const LieWord& w, double r, double theta, double z, const ConvergenceConfig& cfg) {
    cfg.validate();
    if (w.alphabet() != Alphabet::su2) throw UsageError("invalid-alphabet: converge_su2 needs an su2 word");
    if (!(r >= 0.0 && r <= 3.0) || !(std::abs(z) <= 3.0))
        throw DomainError("converge: point outside the window r in [0, 3], |z| <= 3");
    if (word_degree(w) > 6) throw UsageError("converge: word degree above 6");
    for (double t : cfg.t_grid)
        if (!(std::sqrt(t) * r < 0.5 * kPi)) throw DomainError("converge: sqrt(t) r reaches pi/2 on the grid");

    ConvergenceReport rep;
    rep.space = Alphabet::su2;
    rep.word = w.to_string();
    rep.point = {r, theta, z};
    rep.kernel_limit = w.empty();
    if (rep.kernel_limit) {
        rep.target = h_kernel({1, 1.0}, r, z, cfg.hermite.heis);
    } else {
        const std::vector<cplx> hp{r * std::cos(theta), r * std::sin(theta), z};
        rep.target = hermite(Alphabet::heisenberg, beta_map(w), 1.0, hp, cfg.hermite);
    }
    const double half_deg = 0.5 * word_degree(w);
    rep.rows.resize(cfg.t_grid.size());
    parallel_for(rep.rows.size(), cfg.threads, [&](std::size_t i) {
        const double t = cfg.t_grid[i];
        ConvergenceRow& row = rep.rows[i];
        row.t = t;
        row.target = rep.target;
        try {
            if (rep.kernel_limit) {
                const double p = p_su2({std::sqrt(t) * r, t * z, t, 1}, cfg.hermite.quad);
                row.scaled = t * t * p / (2.0 * kPi * kPi);
            } else {
                const std::vector<cplx> sp{std::sqrt(t) * r, theta, t * z};
                row.scaled = std::pow(t, half_deg) * hermite(Alphabet::su2, w, t, sp, cfg.hermite);
            }
        } catch (const Error& e) {
            rethrow_at(e, t);
        }
    });
    finish(rep, cfg);
    return rep;
}

Frames sphere_frames_on_su2() {
    Frames f;
    f.chart = su2_chart();
    f.alphabet = Alphabet::sphere;
    f.d = 1;
    const Frames s = su2_frame();
    const Expr r = Expr::var(0), th = Expr::var(1), z = Expr::var(2);
    const Expr i(cplx(0.0, 1.0));
    const DiffOp t1 =
        (s[{LetterKind::X, 0}] + s[{LetterKind::Y, 0}].times(i)).times(Expr(-0.5) * exp(i * z) * cos(r));
    f.fields.emplace_back(Letter{LetterKind::T, 0}, s[{LetterKind::Z, 0}]);
    f.fields.emplace_back(Letter{LetterKind::T, 1}, t1);
    f.fields.emplace_back(Letter{LetterKind::T, 2}, t1.times(tan(r) * exp(-(i * th))));
    return f;
}

std::vector<cplx> sphere_to_su2_point(cplx w, double z) {
    const double rho = std::abs(w);
    const double theta = rho > 0.0 ? -std::arg(-w) : 0.0;
    return {std::atan(rho), theta, z};
}

ConvergenceReport converge_sphere(const LieWord& w, const std::vector<cplx>& wpt, double z,
                                  const ConvergenceConfig& cfg) {
    cfg.validate();
    if (w.alphabet() != Alphabet::sphere) throw UsageError("invalid-alphabet: converge_sphere needs a sphere word");
    const int d = w.d();
    if (static_cast<int>(wpt.size()) != d) throw UsageError("converge: point needs d complex coordinates");
    double rho2 = 0.0;
    for (const cplx& c : wpt) rho2 += std::norm(c);
    const double rho = std::sqrt(rho2);
    if (!(rho <= 3.0) || !(std::abs(z) <= 3.0)) throw DomainError("converge: point outside the window |w| <= 3, |z| <= 3");
    if (word_degree(w) > 6) throw UsageError("converge: word degree above 6");

    ConvergenceReport rep;
    rep.space = Alphabet::sphere;
    rep.d = d;
    rep.word = w.to_string();
    rep.point = wpt;
    rep.point.push_back(z);
    rep.kernel_limit = w.empty();
    if (rep.kernel_limit) {
        rep.target = h_kernel({d, 1.0}, rho, z, cfg.hermite.heis);
    } else {
        std::vector<cplx> hp(static_cast<std::size_t>(2 * d + 1));
        for (int j = 0; j < d; ++j) {
            hp[static_cast<std::size_t>(j)] = wpt[static_cast<std::size_t>(j)].imag();
            hp[static_cast<std::size_t>(d + j)] = wpt[static_cast<std::size_t>(j)].real();
        }
        hp.back() = z;
        rep.target = hermite(Alphabet::heisenberg, kappa_map(w), 1.0, hp, cfg.hermite);
    }
    const bool cross = cfg.cross_check && d == 1;
    const Frames corr = cross ? sphere_frames_on_su2() : Frames{};
    const DiffOp corr_op = cross ? compile_word(corr, w) : DiffOp();
    const double half_deg = 0.5 * word_degree(w);

    rep.rows.resize(cfg.t_grid.size());
    parallel_for(rep.rows.size(), cfg.threads, [&](std::size_t i) {
        const double t = cfg.t_grid[i], st = std::sqrt(t);
        ConvergenceRow& row = rep.rows[i];
        row.t = t;
        row.target = rep.target;
        try {
            const double rs = std::atan(st * rho);
            if (rep.kernel_limit) {
                const double p = p_sphere({rs, t * z, t, d}, cfg.hermite.quad);
                row.scaled = std::pow(t, d + 1) * p / 2.0;
            } else {
                std::vector<cplx> sp;
                for (const cplx& c : wpt) sp.push_back(st * c);
                sp.push_back(t * z);
                row.scaled = std::pow(t, half_deg) * hermite(Alphabet::sphere, w, t, sp, cfg.hermite);
            }
            if (cross) {
                row.has_cross = true;
                if (rep.kernel_limit) {
                    const double p = p_su2({rs, t * z, t, 1}, cfg.hermite.quad);
                    row.cross = t * t * p / (2.0 * kPi * kPi);
                } else {
                    const std::vector<cplx> q = sphere_to_su2_point(st * wpt[0], t * z);
                    row.cross = std::pow(t, half_deg) *
                                hermite_of(corr_op, corr.chart, q, su2_kernel_jet(t, cfg.hermite.quad));
                }
            }
        } catch (const Error& e) {
            rethrow_at(e, t);
        }
    });
    finish(rep, cfg);
    return rep;
}

bool SuiteReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.passed || !e.enforced; });
}

double tail_ratio(double c, double t, int n) {
    double s = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double term = std::exp(-c * (k - 1) / t) * std::pow(double(k), n);
        s += term;
        if (k > n && term < 1e-18 * s) break;
    }
    return s;
}

// ------------------------------------------------------------ lemma suite

namespace {

std::vector<double> trig_grid() {
    std::vector<double> g;
    for (int k = 1; k < 20; ++k) g.push_back(k / 20.0);
    g.push_back(0.99);
    g.push_back(0.999);
    return g;
}
const std::vector<double> kHypNear{1.001, 1.01, 1.05, 1.1, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.5};
const std::vector<double> kHypFar{2.6, 3, 4, 6, 10, 20, 50};
const std::vector<double> kKGrid{1, 2, 5, 10, 20, 40};
const std::vector<double> kTGrid{0.9, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05};

// Bound constants C_n, n = first..first+size-1, calibrated on the grids above
// with 10% headroom over an independent high-precision evaluation.
struct Calibrated {
    int first;
    std::vector<double> c;
};
const std::map<std::string, Calibrated> kConstants{
    {"acos_sq", {1, {3.35, 2.04, 3.06, 7.41}}},
    {"acosh_sq", {1, {2.2, 0.733, 0.586, 0.753}}},
    {"cosh_K_acos", {1, {0.499, 0.525, 0.922, 2.4}}},
    {"sinhc_K_acos", {1, {0.146, 0.13, 0.217, 0.552}}},
    {"sinc_K_acosh_limit", {1, {0.367, 0.196, 0.182, 0.251}}},
    {"sinc_K_acosh", {1, {0.0762, 0.0407, 0.0377, 0.052}}},
    {"R1", {0, {2.61, 6.16, 15.1, 42.1, 139.0}}},
    {"R2_near", {0, {41.9, 134.0, 261.0, 468.0, 916.0}}},
    {"R2_far", {0, {8.08, 27.7, 80.9, 293.0, 1440.0}}},
    {"Q1", {0, {1.1, 0.527, 0.247, 0.126, 0.42}}},
    {"Q2", {0, {1.1, 0.541, 0.262, 0.124, 0.0578}}},
};

double double_factorial_odd(int n) {  // (2n - 1)!!
    double v = 1.0;
    for (int k = 1; k <= 2 * n - 1; k += 2) v *= k;
    return v;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return s;
}

// One entry: ratio(n) is the worst normalized magnitude over the parameter grid.
template <class Ratio>
SuiteEntry bound_entry(const std::string& name, const std::string& key, int max_order, Ratio ratio) {
    const Calibrated& cal = kConstants.at(key);
    SuiteEntry e{name, "bound", true, true, 0.0, 1.0, ""};
    std::vector<double> worst;
    const int last = std::min<int>(max_order, cal.first + static_cast<int>(cal.c.size()) - 1);
    for (int n = cal.first; n <= last; ++n) {
        const double r = ratio(n);
        worst.push_back(r);
        const double m = r / cal.c[static_cast<std::size_t>(n - cal.first)];
        if (!(m <= 1.0)) e.passed = false;
        e.value = std::max(e.value, std::isfinite(m) ? m : std::numeric_limits<double>::infinity());
    }
    e.detail = "max ratio per order from n=" + std::to_string(cal.first) + ": " + fmt_list(worst);
    return e;
}

double acos_sq_n(double x, int n) { return x < 1.0 ? acos_sq_derivs(x, n)[static_cast<std::size_t>(n)] : acosh_sq_derivs(x, n)[static_cast<std::size_t>(n)]; }

}  // namespace

SuiteReport lemma_suite(const LemmaConfig& cfg) {
    if (cfg.max_order < 1 || cfg.max_order > 8) throw UsageError("lemma suite: max_order must lie in [1, 8]");
    SuiteReport rep;
    rep.suite = "lemmas";
    const std::vector<double> xt = trig_grid();
    std::vector<double> xh = kHypNear;
    xh.insert(xh.end(), kHypFar.begin(), kHypFar.end());

    {  // arccos^2 and arccosh^2 derivative limits at x = 1
        SuiteEntry e{"arc_sq_limits", "limit", true, true, 0.0, 1e-8, ""};
        const auto a = acos_sq_derivs(1.0, 8);
        const auto h = acosh_sq_derivs(1.0, 8);
        double fact = 1.0;
        for (int n = 1; n <= 8; ++n) {
            if (n > 1) fact *= n - 1;
            const double want = 2.0 * fact * fact / double_factorial_odd(n);
            for (double got : {a[static_cast<std::size_t>(n)], h[static_cast<std::size_t>(n)]})
                e.value = std::max(e.value, std::abs(std::abs(got) - want) / want);
        }
        e.passed = e.value < e.threshold;
        e.detail = "|d^n/dx^n arccos^2| and |d^n/dx^n arccosh^2| at x = 1 against 2((n-1)!)^2/(2n-1)!!, n <= 8";
        rep.entries.push_back(e);
    }
    {  // cos(K arccosh x) limits
        SuiteEntry e{"cos_K_acosh_limits", "limit", true, true, 0.0, 1e-8, ""};
        for (double K : {1.0, 3.0, 10.0}) {
            const LogScaled f = cosh_family_derivs(K, XArg{1.0, 0.0}, 5);
            double prod = 1.0;
            for (int n = 1; n <= 5; ++n) {
                prod *= K * K + double(n - 1) * (n - 1);
                const double want = (n % 2 ? -1.0 : 1.0) * prod / double_factorial_odd(n);
                e.value = std::max(e.value, std::abs(f.value(static_cast<std::size_t>(n)) - want) / std::abs(want));
            }
        }
        e.passed = e.value < e.threshold;
        e.detail = "signed limits (-1)^n prod_{m<n}(K^2+m^2)/(2n-1)!!, n <= 5, K in {1, 3, 10}";
        rep.entries.push_back(e);
    }

    rep.entries.push_back(bound_entry("acos_sq_bounded", "acos_sq", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double x : xt) m = std::max(m, std::abs(acos_sq_n(x, n)));
        return m;
    }));
    rep.entries.push_back(bound_entry("acosh_sq_bounded", "acosh_sq", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double x : xh) m = std::max(m, std::abs(acos_sq_n(x, n)));
        return m;
    }));
    rep.entries.push_back(bound_entry("cosh_K_acos", "cosh_K_acos", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double K : kKGrid)
            for (double x : xt) {
                const double v = cosh_family_derivs(K, XArg::from_x(x), n).value(static_cast<std::size_t>(n));
                m = std::max(m, std::abs(v) / (std::pow(K, n) * std::exp(K * kPi / 2)));
            }
        return m;
    }));
    rep.entries.push_back(bound_entry("sinhc_K_acos", "sinhc_K_acos", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double K : kKGrid)
            for (double x : xt) {
                const double v = sinc_family_derivs(K, XArg::from_x(x), n).value(static_cast<std::size_t>(n));
                m = std::max(m, std::abs(v) / (std::pow(K, n + 1) * std::exp(K * kPi / 2)));
            }
        return m;
    }));
    {  // derivatives of cos(K arccosh x) never exceed their limit at x = 1
        SuiteEntry e{"cos_K_acosh_bound", "bound", true, true, 0.0, 1.0 + 1e-9, ""};
        for (double K : kKGrid) {
            const LogScaled lim = cosh_family_derivs(K, XArg{1.0, 0.0}, cfg.max_order);
            for (double x : xh) {
                const LogScaled f = cosh_family_derivs(K, XArg::from_x(x), cfg.max_order);
                for (int n = 1; n <= cfg.max_order; ++n) {
                    const auto k = static_cast<std::size_t>(n);
                    e.value = std::max(e.value, std::abs(f.value(k)) / std::abs(lim.value(k)));
                }
            }
        }
        e.passed = e.value <= e.threshold;
        e.detail = "max over x > 1 of |d^n cos(K arccosh x)| / |limit at x = 1|";
        rep.entries.push_back(e);
    }
    rep.entries.push_back(bound_entry("sinc_K_acosh_limit", "sinc_K_acosh_limit", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double K : kKGrid) {
            const double v = sinc_family_derivs(K, XArg{1.0, 0.0}, n).value(static_cast<std::size_t>(n));
            m = std::max(m, std::abs(v) / std::pow(K, 2 * n + 1));
        }
        return m;
    }));
    rep.entries.push_back(bound_entry("sinc_K_acosh", "sinc_K_acosh", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double K : kKGrid)
            for (double x : kHypNear) {
                const double v = sinc_family_derivs(K, XArg::from_x(x), n).value(static_cast<std::size_t>(n));
                m = std::max(m, std::abs(v) / (std::pow(K, 2 * n + 1) * std::exp(K * kPi / 2)));
            }
        return m;
    }));
    {  // tail sums: sup over t in (0, 1) is the t -> 1 value
        SuiteEntry e{"tail_sum", "bound", true, true, 0.0, 1.0, ""};
        const double c = kPi * kPi;
        bool ordered = true;
        for (int n = 0; n <= 6; ++n) {
            const double cn = tail_ratio(c, 1.0, n);
            for (int i = 1; i < 100; ++i) {
                const double t = i / 100.0;
                const double lin = tail_ratio(c, t, n);
                double sq = 0.0;
                for (int k = 1; k < 60; ++k) sq += std::exp(-c * (double(k) * k - 1.0) / t) * std::pow(double(k), n);
                if (sq > lin * (1.0 + 1e-15)) ordered = false;
                e.value = std::max(e.value, lin / cn);
            }
        }
        e.passed = ordered && e.value <= e.threshold;
        e.detail = std::string("e^{c/t} sum_k e^{-ck/t} k^n <= C_n with C_n the t = 1 value, c = pi^2, n <= 6; ") +
                   "quadratic-exponent sum below the linear one: " + (ordered ? "yes" : "no");
        rep.entries.push_back(e);
    }

    const RiemannianConfig rc{};
    auto rsup = [&](double t, const std::vector<double>& xs, int n, auto weight) {
        double m = 0.0;
        for (double x : xs) {
            const double v = remainder_derivs(t, XArg::from_x(x), n, rc)[static_cast<std::size_t>(n)];
            m = std::max(m, std::abs(v) * weight(x));
        }
        return m;
    };
    auto one = [](double) { return 1.0; };
    rep.entries.push_back(bound_entry("R1", "R1", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double t : kTGrid) m = std::max(m, rsup(t, xt, n, one) * std::pow(t, n + 1) * std::exp(kPi * kPi / (2 * t)));
        return m;
    }));
    {  // the e^{-pi^2/t} rate is not uniform on (0, 1); recorded, not enforced
        SuiteEntry e{"R1_rate_pi2_over_t", "bound", false, false, 0.0, 0.0, ""};
        std::vector<double> r;
        for (double t : kTGrid) r.push_back(rsup(t, xt, 0, one) * t * std::exp(kPi * kPi / t));
        e.value = r.back() / r.front();
        e.detail = "t e^{pi^2/t} sup|R1| along t = 0.9 .. 0.05: " + fmt_list(r);
        rep.entries.push_back(e);
    }
    rep.entries.push_back(bound_entry("R2_near", "R2_near", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double t : kTGrid)
            m = std::max(m, rsup(t, kHypNear, n, one) * std::pow(t, 2 * n + 1) * std::exp(kPi * kPi / t));
        return m;
    }));
    rep.entries.push_back(bound_entry("R2_far", "R2_far", cfg.max_order, [&](int n) {
        double m = 0.0;
        auto w = [n](double x) { return std::pow(x * x - 1.0, 0.5 * n); };
        for (double t : kTGrid) m = std::max(m, rsup(t, kHypFar, n, w) * std::pow(t, n) * std::exp(kPi * kPi / t));
        return m;
    }));
    rep.entries.push_back(bound_entry("Q1", "Q1", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double t : kTGrid)
            for (double x : xt) {
                double lq = 0.0;
                const auto mq = q_leading_mantissas(t, XArg::from_x(x), n, &lq);
                m = std::max(m, std::abs(mq[static_cast<std::size_t>(n)]) * std::exp(lq) * std::pow(t, n));
            }
        return m;
    }));
    rep.entries.push_back(bound_entry("Q2", "Q2", cfg.max_order, [&](int n) {
        double m = 0.0;
        for (double t : kTGrid)
            for (double x : xh) {
                const auto mq = q_leading_mantissas(t, XArg::from_x(x), n, nullptr);
                const double a = std::acosh(x);
                m = std::max(m, std::abs(mq[static_cast<std::size_t>(n)]) * std::pow(t, n) *
                                    std::pow(x * x - 1.0, 0.5 * (n + 1)) / std::pow(a, n + 1));
            }
        return m;
    }));
    return rep;
}

// ---------------------------------------------------------- property suite

double su2_mass(double t, const QuadratureConfig& cfg, double rel_tol) {
    const double r_max = 0.5 * kPi - 1e-7;
    const QuadOptions inner{rel_tol, 1e-14, 200};
    const QuadOptions outer{rel_tol, 1e-14, 200};
    auto fr = [&](double r, std::span<double> out) {
        auto fz = [&](double z, std::span<double> o) { o[0] = p_contour(Space::su2, {r, z, t, 1}, cfg).value; };
        const QuadResult qz = integrate_gk(fz, 1, 0.0, kPi, inner);
        if (!qz.converged) throw NumericalError("su2 mass: inner quadrature did not converge");
        out[0] = 2.0 * qz.value[0] * std::sin(2.0 * r) / (2.0 * kPi);
    };
    const QuadResult q = integrate_gk(fr, 1, 0.0, r_max, outer);
    if (!q.converged) throw NumericalError("su2 mass: outer quadrature did not converge");
    return q.value[0];
}

namespace {

SuiteEntry check(const std::string& name, const std::string& group, double value, double threshold,
                 const std::string& detail) {
    return {name, group, value <= threshold, true, value, threshold, detail};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

SuiteReport property_suite(const PropertyConfig& cfg) {
    SuiteReport rep;
    rep.suite = "properties";
    const QuadratureConfig& qc = cfg.quad;
    const HeisenbergConfig& hc = cfg.heis;

    rep.entries.push_back(check("heisenberg_origin", "anchor", rel(h_kernel({1, 1.0}, 0.0, 0.0, hc), 1.0 / 32.0), 1e-10,
                                "h_1(0, 0) = 1/32"));
    {
        double worst = 0.0;
        for (int d : {1, 2, 3})
            for (double t : {0.3, 2.5})
                for (auto [r, z] : std::array<std::pair<double, double>, 3>{{{0.7, 0.4}, {1.2, -0.9}, {0.0, 1.5}}}) {
                    const double a = h_kernel({d, t}, r, z, hc);
                    const double b = std::pow(t, -(d + 1)) * h_kernel({d, 1.0}, r / std::sqrt(t), z / t, hc);
                    worst = std::max(worst, rel(a, b));
                }
        rep.entries.push_back(check("heisenberg_dilation", "anchor", worst, 1e-10,
                                    "h_t(r, z) = t^{-(d+1)} h_1(r / sqrt t, z / t), d <= 3"));
    }
    {
        double worst = 0.0;
        for (double t : {0.05, 0.3, 1.0})
            for (auto [r, z] : std::array<std::pair<double, double>, 3>{{{0.2, 0.1}, {0.5, -0.4}, {0.7, 0.3}}}) {
                const SubellipticPoint pt{r, z, t, 1};
                worst = std::max(worst, rel(p_sphere(pt, qc) * kPi * kPi, p_su2(pt, qc)));
            }
        rep.entries.push_back(check("sphere_d1_ratio", "anchor", worst, 1e-10, "pi^2 p_{t,1} = p_t"));
    }
    if (cfg.include_normalization) {
        double worst = 0.0;
        for (double t : {0.1, 0.5}) worst = std::max(worst, std::abs(su2_mass(t, qc) - 1.0));
        rep.entries.push_back(check("su2_normalization", "normalization", worst, 1e-5,
                                    "integral of p_t over SU(2) for t in {0.1, 0.5}"));
    }
    {
        double worst = 0.0;
        for (double t : {0.1, 0.7})
            for (double r : {0.3, 1.1}) {
                worst = std::max(worst, rel(p_su2({r, -0.8, t, 1}, qc), p_su2({r, 0.8, t, 1}, qc)));
                worst = std::max(worst, rel(p_sphere({r, -0.8, t, 2}, qc), p_sphere({r, 0.8, t, 2}, qc)));
                worst = std::max(worst, rel(h_kernel({2, t}, r, -0.8, hc), h_kernel({2, t}, r, 0.8, hc)));
            }
        rep.entries.push_back(check("z_parity", "parity", worst, 1e-12, "kernels even in z"));
    }
    {
        double worst = 0.0;
        HermiteConfig hcfg{qc, hc};
        for (double th : {0.0, 1.0, 2.5}) {
            const std::vector<cplx> pt{0.6, th, 0.0};
            worst = std::max(worst, std::abs(hermite(Alphabet::su2, LieWord::su2("Z"), 0.2, pt, hcfg)));
        }
        rep.entries.push_back(check("hermite_z_parity", "parity", worst, 1e-10, "K_Z(t, (r, theta, 0)) = 0"));
    }
    {
        double worst = 0.0;
        for (double t : {0.05, 0.5})
            for (int n = 0; n <= 4; ++n) {
                const auto lo = q_su2_parts(t, XArg{1.0 - 1e-9, -1e-9}, n).value(static_cast<std::size_t>(n));
                const auto hi = q_su2_parts(t, XArg{1.0 + 1e-9, 1e-9}, n).value(static_cast<std::size_t>(n));
                worst = std::max(worst, rel(lo, hi));
            }
        rep.entries.push_back(check("branch_continuity", "continuity", worst, 1e-6,
                                    "q_t^{(n)} across x = 1 (x = 1 -+ 1e-9), n <= 4"));
    }
    {
        double worst = 0.0;
        double worst4 = 0.0;
        QuadratureConfig with_r = qc;
        with_r.rel_tol = std::min(qc.rel_tol, 1e-13);
        with_r.abs_tol = 1e-300;
        with_r.max_panels = std::max(qc.max_panels, 20000);
        QuadratureConfig no_r = with_r;
        no_r.riemann.include_remainder = false;
        // scaled points (sqrt(t) r, t z) of the zero-order convergence grid
        for (double r : {0.5, 1.0})
            for (double z : {0.0, 0.5, 1.0}) {
                const double t = 0.3;
                const SubellipticPoint pt{std::sqrt(t) * r, t * z, t, 1};
                const auto a = p_deriv_table(Space::su2, pt, 4, 4, with_r);
                const auto b = p_deriv_table(Space::su2, pt, 4, 4, no_r);
                for (int i = 0; i <= 4; ++i)
                    for (int c = 0; c + i <= 4; ++c) {
                        const double e = rel(b.at(i, c), a.at(i, c));
                        if (i + c <= 1) worst = std::max(worst, e);
                        worst4 = std::max(worst4, e);
                    }
            }
        rep.entries.push_back(check("remainder_negligible", "remainder", worst, 1e-10,
                                    "R-branch share of p and first derivatives at t = 0.3, scaled points"));
        rep.entries.push_back({"remainder_order4", "remainder", worst4 <= 1e-10, false, worst4, 1e-10,
                               "R-branch share of derivatives up to total order 4, same points"});
    }
    {
        double worst = 0.0;
        QuadratureConfig direct = qc, subst = qc;
        direct.path = QuadPath::direct;
        subst.path = QuadPath::substitution;
        for (double t : {0.002, 0.01})
            for (double r : {0.02, 0.05}) {
                const SubellipticPoint pt{r, 3.0 * t, t, 1};
                const auto a = p_deriv_table(Space::su2, pt, 1, 1, direct);
                const auto b = p_deriv_table(Space::su2, pt, 1, 1, subst);
                for (std::size_t k = 0; k < a.val.size(); ++k)
                    worst = std::max(worst, rel(b.val[k], a.val[k]));
            }
        rep.entries.push_back(check("quadrature_paths", "quadrature", worst, 1e-8,
                                    "substitution and direct paths agree, derivatives up to (1, 1)"));
    }
    {
        double worst = 0.0;
        QuadratureConfig tight = qc;
        tight.rel_tol = 1e-13;
        const SubellipticPoint pt{0.6, 0.4, 0.4, 1};
        const auto tab = p_deriv_table(Space::su2, pt, 1, 1, tight);
        auto p = [&](double r, double z) { return p_su2({r, z, pt.t, 1}, tight); };
        auto richardson = [](auto f, double h) {
            const double d1 = (f(h) - f(-h)) / (2 * h), d2 = (f(h / 2) - f(-h / 2)) / h;
            return (4 * d2 - d1) / 3;
        };
        const double dr = richardson([&](double e) { return p(pt.r + e, pt.z); }, 0.02);
        const double dz = richardson([&](double e) { return p(pt.r, pt.z + e); }, 0.02);
        worst = std::max(rel(tab.at(1, 0), dr), rel(tab.at(0, 1), dz));
        rep.entries.push_back(check("fd_vs_analytic", "derivatives", worst, 1e-6,
                                    "first r and z derivatives of p against Richardson differences"));
    }
    {
        const Frames f = su2_frame();
        const Letter X{LetterKind::X, 0}, Y{LetterKind::Y, 0}, Z{LetterKind::Z, 0};
        int failures = 0;
        failures += !equivalent(commutator(f[X], f[Y]), f[Z].times(Expr(2.0)), f.chart);
        failures += !equivalent(commutator(f[Y], f[Z]), f[X].times(Expr(2.0)), f.chart);
        failures += !equivalent(commutator(f[Z], f[X]), f[Y].times(Expr(2.0)), f.chart);
        for (int d : {1, 2}) {
            const Frames h = heisenberg_frames(d);
            const Letter z0{LetterKind::HZ0, 0};
            for (int j = 1; j <= d; ++j) {
                const Letter xj{LetterKind::HX, j}, yj{LetterKind::HY, j}, zj{LetterKind::HZ, j};
                failures += !equivalent(commutator(h[xj], h[yj]), h[z0].times(Expr(2.0)), h.chart);
                failures += !equivalent(commutator(h[xj], h[z0]), DiffOp(h.chart.nvars()), h.chart);
                failures += !equivalent(commutator(h[yj], h[z0]), DiffOp(h.chart.nvars()), h.chart);
                failures += !equivalent(h[zj], (h[yj] - h[xj].times(Expr(cplx(0.0, 1.0)))).times(Expr(0.5)), h.chart);
            }
        }
        rep.entries.push_back(check("bracket_identities", "symbolic", failures, 0.0,
                                    "su2 structure constants, Heisenberg relations, Z_j = (Y_j - i X_j)/2"));
    }
    {
        const Frames s = su2_scaled_frame(1e-4), h = heisenberg_cylindrical_frame();
        const std::vector<cplx> pt{1.0, 0.3, 0.7};
        double gap = max_coefficient_gap(s[{LetterKind::X, 0}], h[{LetterKind::HX, 1}], pt);
        gap = std::max(gap, max_coefficient_gap(s[{LetterKind::Y, 0}], h[{LetterKind::HY, 1}], pt));
        const Frames ss = sphere_scaled_frames(2, 1e-4), hh = heisenberg_complex_frames(2);
        const std::vector<cplx> wp = chart_point(ss.chart, std::vector<cplx>{cplx(0.3, 0.2), cplx(-0.4, 0.1), 0.5});
        for (int j = 1; j <= 2; ++j)
            gap = std::max(gap, max_coefficient_gap(ss[{LetterKind::T, j}], hh[{LetterKind::HZ, j}], wp));
        rep.entries.push_back(check("scaled_frame_limit", "symbolic", gap, 1e-3,
                                    "coefficient gap to the Heisenberg frames at t = 1e-4"));
    }
    {
        HermiteConfig hcfg{qc, hc};
        const std::vector<cplx> pt{0.7, 0.9, 0.4};
        const cplx k = hermite(Alphabet::su2, LieWord::su2("X,Y"), 0.3, pt, hcfg);
        rep.entries.push_back(check("hermite_real", "symbolic", std::abs(k.imag()) / std::abs(k), 1e-10,
                                    "imaginary part of K_{X,Y} on SU(2)"));
    }
    {
        // trig-branch share of p at small t, recorded for reference
        SuiteEntry e{"trig_branch_share", "quadrature", true, false, 0.0, 0.0, ""};
        std::vector<double> shares;
        for (double t : {0.1, 0.01, 0.001}) {
            const auto tab = p_deriv_table(Space::su2, {std::sqrt(t), 0.5 * t, t, 1}, 0, 0, qc);
            shares.push_back(std::abs(tab.trig[0] / tab.hyp[0]));
        }
        e.value = shares.back();
        e.detail = "|I1/I2| at scaled point (sqrt t, t/2), t = 0.1, 0.01, 0.001: " + fmt_list(shares);
        rep.entries.push_back(e);
    }
    return rep;
}

// ----------------------------------------------------------------- output

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::string to_csv(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "t,scaled_value,target,abs_err,rel_err,scaled_imag,target_imag\n";
    for (const auto& row : rep.rows)
        os << format_double(row.t) << ',' << format_double(row.scaled.real()) << ','
           << format_double(row.target.real()) << ',' << format_double(row.abs_err) << ','
           << format_double(row.rel_err) << ',' << format_double(row.scaled.imag()) << ','
           << format_double(row.target.imag()) << '\n';
    return os.str();
}

namespace {

nlohmann::ordered_json cjson(cplx c) { return nlohmann::ordered_json::array({c.real(), c.imag()}); }

}  // namespace

std::string to_json(const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["kind"] = "convergence";
    j["space"] = alphabet_name(rep.space);
    j["d"] = rep.d;
    j["word"] = rep.word;
    auto pts = nlohmann::ordered_json::array();
    for (const cplx& c : rep.point) pts.push_back(cjson(c));
    j["point"] = pts;
    j["target"] = cjson(rep.target);
    j["kernel_limit"] = rep.kernel_limit;
    j["degenerate"] = rep.degenerate;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) {
        nlohmann::ordered_json o;
        o["t"] = r.t;
        o["scaled_value"] = cjson(r.scaled);
        o["abs_err"] = r.abs_err;
        o["rel_err"] = r.rel_err;
        if (r.has_cross) {
            o["cross_value"] = cjson(r.cross);
            o["cross_gap"] = r.cross_gap;
        }
        rows.push_back(o);
    }
    j["rows"] = rows;
    j["monotone"] = rep.monotone;
    j["final_err"] = rep.final_err;
    j["slope"] = rep.slope;
    j["max_cross_gap"] = rep.max_cross_gap;
    j["passed"] = rep.passed;
    return j.dump(2) + "\n";
}

std::string to_json(const SuiteReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["kind"] = "suite";
    j["suite"] = rep.suite;
    auto es = nlohmann::ordered_json::array();
    for (const auto& e : rep.entries) {
        nlohmann::ordered_json o;
        o["name"] = e.name;
        o["group"] = e.group;
        o["passed"] = e.passed;
        o["enforced"] = e.enforced;
        o["value"] = e.value;
        o["threshold"] = e.threshold;
        o["detail"] = e.detail;
        es.push_back(o);
    }
    j["entries"] = es;
    j["passed"] = rep.passed();
    return j.dump(2) + "\n";
}

}  // namespace subrk
