#pragma once

#include <functional>
#include <span>
#include <vector>

namespace subrk {

// Vector-valued integrand: writes dim values at a point.
using VecIntegrand = std::function<void(double, std::span<double>)>;

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 2000;
};

struct QuadResult {
    std::vector<double> value;
    std::vector<double> err;
    std::vector<double> l1;  // integral of |f|, the scale for the relative test
    int panels = 0;
    int evals = 0;
    bool converged = true;
};

// Globally adaptive 15-point Gauss-Kronrod over [a, b] split at the given
// interior breakpoints.  Component i is accepted when
// err_i <= max(abs_tol, rel_tol * l1_i).
QuadResult integrate_gk(const VecIntegrand& f, std::size_t dim, double a, double b, const QuadOptions& opt,
                        std::span<const double> breaks = {});

// Scans log_env from start with steps max(step, rel_step * x) and returns the
// first grid point past the running maximum where log_env fell `drop` below
// it (capped at cap).  The maximum is written to log_peak.
double decay_cutoff(const std::function<double(double)>& log_env, double start, double step, double drop,
                    double cap, double* log_peak = nullptr, double rel_step = 0.0);

// Adds b into a (values, errors, l1, counters).
void accumulate(QuadResult& a, const QuadResult& b);

}  // namespace subrk
