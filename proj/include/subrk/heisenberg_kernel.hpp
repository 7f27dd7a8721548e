#pragma once

#include <vector>

#include "subrk/quadrature.hpp"

namespace subrk {

struct HeisenbergParams {
    int d = 1;
    double t = 1.0;

    void validate() const;
};

struct HeisenbergConfig {
    QuadOptions quad{1e-12, 1e-16, 4000};
    int max_order = 8;
    double small_lambda_t = 1e-3;  // series for lambda/sinh(lambda t) below this
};

// Result of one quadrature: value plus diagnostics.
struct KernelValue {
    double value = 0.0;
    double err = 0.0;
    double imag_residual = 0.0;
    int evals = 0;
};

// Derivatives d^a/dr^a d^c/dz^c for a <= max_a, c <= max_c from one pass.
struct DerivTable {
    int max_a = 0;
    int max_c = 0;
    std::vector<double> val;
    std::vector<double> err;
    double imag_residual = 0.0;
    double lambda_max = 0.0;
    int evals = 0;

    double at(int a, int c) const { return val[static_cast<std::size_t>(a * (max_c + 1) + c)]; }
    double err_at(int a, int c) const { return err[static_cast<std::size_t>(a * (max_c + 1) + c)]; }
};

DerivTable h_deriv_table(const HeisenbergParams& p, double r, double z, int max_a, int max_c,
                         const HeisenbergConfig& cfg = {});

KernelValue h_kernel_value(const HeisenbergParams& p, double r, double z, const HeisenbergConfig& cfg = {});
double h_kernel(const HeisenbergParams& p, double r, double z, const HeisenbergConfig& cfg = {});
double h_derivs(const HeisenbergParams& p, double r, double z, int n_r, int n_z, const HeisenbergConfig& cfg = {});

// The integrand weight (lambda / sinh(lambda t))^d and lambda coth(lambda t),
// exposed for tests.
double h_sinh_factor(double t, double lambda, double small_lambda_t = 1e-3);
double h_coth_factor(double t, double lambda, double small_lambda_t = 1e-3);

}  // namespace subrk
