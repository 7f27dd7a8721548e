#pragma once

#include <cmath>
#include <vector>

#include "subrk/faa_di_bruno.hpp"

namespace subrk {

// Values m[k] * exp(log_scale); keeps e^{+-large} factors out of doubles.
struct LogScaled {
    double log_scale = 0.0;
    std::vector<double> m;

    double value(std::size_t k) const { return m[k] * std::exp(log_scale); }
};

// x together with x - 1 computed without cancellation by the caller.
struct XArg {
    double x = 1.0;
    double xm1 = 0.0;

    static XArg from_x(double x) { return {x, x - 1.0}; }
    // x = cos(a) cosh(lambda)
    static XArg from_angle(double a, double lambda);
};

enum class DerivKind { acos_sq, acosh_sq, cosh_K_acos, cos_K_acosh, sinhc_K_acos, sinc_K_acosh };

struct DerivFamily {
    DerivKind kind = DerivKind::acos_sq;
    double K = 1.0;
    int max_order = 16;
    double near_one_threshold = 0.5;
    int series_order = 24;

    void validate() const;
};

inline constexpr int kMaxDerivOrder = 24;

// Exact polynomial tables. For the arccos^2 / arccosh^2 kinds
//   d^n/dx^n = M_n / (+-(1 - x^2))^{(2n-1)/2},  M_n = p_n(x) w + q_n(x) A
// with w = sqrt(|1 - x^2|) and A = arccos x or arccosh x.  For the K kinds
//   N_n = gc_n(x, K) w C + gs_n(x, K) S
// with (C, S) = (cosh, sinh)(K arccos x) or (cos, sin)(K arccosh x).
using Poly = std::vector<BigInt>;                // coefficient of x^i
using BiPoly = std::vector<std::vector<BigInt>>;  // [i][j] coefficient of x^i K^j

struct RecurrencePolys {
    DerivKind kind;
    std::vector<Poly> p, q;      // index n = 1..max
    std::vector<BiPoly> gc, gs;  // index n = 1..max
};

const RecurrencePolys& recurrence_polys(DerivKind kind);
// Checks M_n' = (n-1)^2 M_{n-1} (or the variant for the kind) exactly.
bool recurrence_identity_holds(DerivKind kind, int n);
int poly_degree(const Poly& p);

// u^(k), k = 0..n, for u = arccos^2 continued analytically past x = 1
// (u = -arccosh^2 there).  Valid for x in (-1, inf).
std::vector<double> arc_sq_derivs(XArg x, int n_max);

std::vector<double> acos_sq_derivs(double x, int n_max);
std::vector<double> acosh_sq_derivs(double x, int n_max);

// F_K = cosh(K arccos x) = cos(K arccosh x) and G_K = sinh(K arccos x)/arccos x
// = sin(K arccosh x)/arccosh x, one analytic function each.  Log scale is
// K arccos x for x < 1 and 0 otherwise.
LogScaled cosh_family_derivs(double K, XArg x, int n_max);
LogScaled sinc_family_derivs(double K, XArg x, int n_max);

LogScaled trig_hyp_derivs(const DerivFamily& family, double x, int n_max);

// (arccosh^2(cos(sqrt(t) r) cosh lambda) - lambda^2) / (4t)
double combined_exponent(double t, double r, double lambda);
// Same with the angle a = sqrt(t) r given directly.
double combined_exponent_angle(double t, double a, double lambda);

// Taylor coefficients of arccos^2(1 - s) and of cosh(K arccos(1 - s)).
double acos_sq_series_coeff(int n);
double cosh_family_series_coeff(double K, int n);

}  // namespace subrk
