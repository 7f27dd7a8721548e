#include "subrk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace subrk {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    std::vector<double> val, err, l1;
};

void gk15(const VecIntegrand& f, std::size_t dim, Panel& p, int& evals) {
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    std::vector<std::vector<double>> fv(15, std::vector<double>(dim));
    f(c, fv[7]);
    for (int j = 0; j < 7; ++j) {
        f(c - h * xgk[j], fv[j]);
        f(c + h * xgk[j], fv[14 - j]);
    }
    evals += 15;
    p.val.assign(dim, 0.0);
    p.err.assign(dim, 0.0);
    p.l1.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double rk = wgk[7] * fv[7][i], rg = wg[3] * fv[7][i], ra = wgk[7] * std::abs(fv[7][i]);
        for (int j = 0; j < 7; ++j) {
            const double s = fv[j][i] + fv[14 - j][i];
            rk += wgk[j] * s;
            ra += wgk[j] * (std::abs(fv[j][i]) + std::abs(fv[14 - j][i]));
            if (j % 2 == 1) rg += wg[j / 2] * s;
        }
        const double mean = 0.5 * rk;
        double rasc = wgk[7] * std::abs(fv[7][i] - mean);
        for (int j = 0; j < 7; ++j) rasc += wgk[j] * (std::abs(fv[j][i] - mean) + std::abs(fv[14 - j][i] - mean));
        double e = std::abs((rk - rg) * h);
        rasc *= std::abs(h);
        if (rasc != 0.0 && e != 0.0) e = rasc * std::min(1.0, std::pow(200.0 * e / rasc, 1.5));
        const double l1 = ra * std::abs(h);
        if (l1 > 0.0) e = std::max(e, 50.0 * 2.220446049250313e-16 * l1);
        p.val[i] = rk * h;
        p.err[i] = e;
        p.l1[i] = l1;
    }
}

}  // namespace

void accumulate(QuadResult& a, const QuadResult& b) {
    if (a.value.empty()) {
        a = b;
        return;
    }
    for (std::size_t i = 0; i < a.value.size(); ++i) {
        a.value[i] += b.value[i];
        a.err[i] += b.err[i];
        a.l1[i] += b.l1[i];
    }
    a.panels += b.panels;
    a.evals += b.evals;
    a.converged = a.converged && b.converged;
}

QuadResult integrate_gk(const VecIntegrand& f, std::size_t dim, double a, double b, const QuadOptions& opt,
                        std::span<const double> breaks) {
    QuadResult res;
    res.value.assign(dim, 0.0);
    res.err.assign(dim, 0.0);
    res.l1.assign(dim, 0.0);
    if (!(b > a)) return res;

    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    std::vector<std::unique_ptr<Panel>> store;
    std::vector<double> tot_val(dim, 0.0), tot_err(dim, 0.0), tot_l1(dim, 0.0);

    auto add = [&](const Panel& p, double sign) {
        for (std::size_t i = 0; i < dim; ++i) {
            tot_val[i] += sign * p.val[i];
            tot_err[i] += sign * p.err[i];
            tot_l1[i] += sign * p.l1[i];
        }
    };
    auto tol_of = [&](std::size_t i) { return std::max(opt.abs_tol, opt.rel_tol * std::abs(tot_l1[i])); };
    auto priority = [&](const Panel& p) {
        double pr = 0.0;
        for (std::size_t i = 0; i < dim; ++i) pr = std::max(pr, p.err[i] / tol_of(i));
        return pr;
    };

    std::vector<Panel*> live;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (!(pts[k + 1] > pts[k])) continue;
        store.push_back(std::make_unique<Panel>());
        Panel& p = *store.back();
        p.a = pts[k];
        p.b = pts[k + 1];
        gk15(f, dim, p, res.evals);
        add(p, 1.0);
        live.push_back(&p);
    }

    auto done = [&]() {
        for (std::size_t i = 0; i < dim; ++i)
            if (tot_err[i] > tol_of(i)) return false;
        return true;
    };

    int panels = static_cast<int>(live.size());
    while (!done()) {
        if (panels >= opt.max_panels) {
            res.converged = false;
            break;
        }
        // refresh priorities (tolerances move as totals change)
        auto it = std::max_element(live.begin(), live.end(), [&](Panel* x, Panel* y) { return priority(*x) < priority(*y); });
        Panel* worst = *it;
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) {
            res.converged = false;
            break;
        }
        add(*worst, -1.0);
        store.push_back(std::make_unique<Panel>());
        Panel& left = *store.back();
        left.a = worst->a;
        left.b = mid;
        store.push_back(std::make_unique<Panel>());
        Panel& right = *store.back();
        right.a = mid;
        right.b = worst->b;
        gk15(f, dim, left, res.evals);
        gk15(f, dim, right, res.evals);
        add(left, 1.0);
        add(right, 1.0);
        *it = &left;
        live.push_back(&right);
        ++panels;
    }
    // re-sum from the live panels to avoid drift from the add/subtract updates
    std::fill(tot_val.begin(), tot_val.end(), 0.0);
    std::fill(tot_err.begin(), tot_err.end(), 0.0);
    std::fill(tot_l1.begin(), tot_l1.end(), 0.0);
    for (Panel* p : live) add(*p, 1.0);
    res.value = tot_val;
    res.err = tot_err;
    res.l1 = tot_l1;
    res.panels = panels;
    return res;
}

double decay_cutoff(const std::function<double(double)>& log_env, double start, double step, double drop,
                    double cap, double* log_peak, double rel_step) {
    double peak = log_env(start);
    double x = start;
    bool descending = false;
    while (x < cap) {
        x = std::min(cap, x + std::max(step, rel_step * x));
        const double v = log_env(x);
        if (v > peak) {
            peak = v;
            descending = false;
        } else {
            descending = true;
        }
        if (descending && v < peak - drop) break;
    }
    if (log_peak) *log_peak = peak;
    return x;
}

}  // namespace subrk
