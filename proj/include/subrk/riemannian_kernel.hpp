#pragma once

#include <vector>

#include "subrk/special_functions.hpp"

namespace subrk {

struct RiemannianConfig {
    int kmax = 10;
    double tolerance = 1e-16;
    int max_order = 16;
    bool include_remainder = true;
};

// q^{(k)}(x) = m[k] * exp(log_pref + log_q).  log_q = -arccos^2(x)/(4t) is kept
// apart so the subelliptic transform can fuse it with the Gaussian weight.
struct QParts {
    double log_pref = 0.0;
    double log_q = 0.0;
    std::vector<double> m;

    double value(std::size_t k) const;
    LogScaled log_scaled() const { return {log_pref + log_q, m}; }
};

// Leading factor Q (Q1 on x <= 1, Q2 on x >= 1) and its x-derivatives as
// Q^{(j)} = mq[j] * exp(-u/4t), u = arccos^2 x continued.
std::vector<double> q_leading_mantissas(double t, XArg x, int n_max, double* log_q = nullptr);
// (1 + R)^{(j)}, j = 0..n_max, R the Poisson remainder series.
std::vector<double> one_plus_r_derivs(double t, XArg x, int n_max, const RiemannianConfig& cfg = {});
// R^{(j)} alone, summed without the leading 1 (no cancellation for tiny R).
std::vector<double> remainder_derivs(double t, XArg x, int n_max, const RiemannianConfig& cfg = {});
// Number of remainder terms that were above the truncation threshold.
int remainder_terms_used(double t, XArg x, int n_max, const RiemannianConfig& cfg = {});

QParts q_su2_parts(double t, XArg x, int n_max, const RiemannianConfig& cfg = {});
QParts q_sphere_parts(double t, int d, XArg x, int n_max, const RiemannianConfig& cfg = {});

double q_su2(double t, double x, const RiemannianConfig& cfg = {});
LogScaled q_su2_derivs(double t, double x, int n_max, const RiemannianConfig& cfg = {});
LogScaled q_sphere(double t, int d, double x, int n_max = 0, const RiemannianConfig& cfg = {});

// q_su2 = q_leading * (1 + q_remainder), each as a plain value.
double q_leading(double t, double x);
double q_remainder(double t, double x, const RiemannianConfig& cfg = {});

}  // namespace subrk
