#pragma once

#include <vector>

#include "subrk/quadrature.hpp"
#include "subrk/riemannian_kernel.hpp"

namespace subrk {

enum class Space { su2, sphere };

enum class QuadPath { automatic, direct, substitution };

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 2000;
    double t_switch = 0.02;      // substitution path for t <= t_switch
    double tail_drop = 42.0;     // log-units below the envelope peak
    double lambda_cap = 690.0;   // cosh(lambda) stays finite
    int max_order = 8;
    QuadPath path = QuadPath::automatic;
    RiemannianConfig riemann{};

    void validate() const;
};

// Cylindrical point (r, z) at time t; theta drops out of the kernels.
struct SubellipticPoint {
    double r = 0.0;
    double z = 0.0;
    double t = 1.0;
    int d = 1;

    void validate() const;
};

// d^a/dr^a d^c/dz^c p for a <= max_a, c <= max_c, with the contributions of
// the two branches lambda < lambda_split (x < 1) and lambda > lambda_split.
struct SubellipticTable {
    int max_a = 0;
    int max_c = 0;
    std::vector<double> val, err, trig, hyp;
    double imag_residual = 0.0;
    double lambda_split = 0.0;
    double lambda_max = 0.0;
    bool substitution = false;
    int evals = 0;

    std::size_t index(int a, int c) const { return static_cast<std::size_t>(a * (max_c + 1) + c); }
    double at(int a, int c) const { return val[index(a, c)]; }
    double err_at(int a, int c) const { return err[index(a, c)]; }
};

// arccosh(1 / cos r), where cos(r) cosh(lambda) crosses 1.
double branch_split(double r);

// Throws NumericalError when the real-axis integral has lost all accuracy to
// the e^{z^2/4t} cancellation (relative error estimate above 1e-4).
SubellipticTable p_deriv_table(Space space, const SubellipticPoint& pt, int max_a, int max_c,
                               const QuadratureConfig& cfg = {});

// Values; with the automatic path and d = 1 these switch to p_contour once
// z^2/4t > 2.
double p_su2(const SubellipticPoint& pt, const QuadratureConfig& cfg = {});
double p_sphere(const SubellipticPoint& pt, const QuadratureConfig& cfg = {});
double p_derivs(Space space, const SubellipticPoint& pt, int n_r, int n_z, const QuadratureConfig& cfg = {});

// p alone by the shifted contour lambda -> lambda + i z.  The weight then
// carries e^{-z^2/4t} instead of e^{+z^2/4t}, so the value stays accurate at
// large z^2/4t where the real-axis integral cancels.  q_t is taken at complex
// argument from its theta-sum form.  su2, or sphere with d = 1.
struct ContourValue {
    double value = 0.0;
    double err = 0.0;
    double lambda_max = 0.0;
    int evals = 0;
};

ContourValue p_contour(Space space, const SubellipticPoint& pt, const QuadratureConfig& cfg = {});

// The z-prefactor polynomials: d^j/dz^j e^{z^2/4t} = a_j(z) e^{z^2/4t}.
double z_prefactor_poly(int j, double t, double z);

}  // namespace subrk
