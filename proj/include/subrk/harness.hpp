#pragma once

#include <complex>
#include <string>
#include <vector>

#include "subrk/lie_words.hpp"
#include "subrk/operator_algebra.hpp"

namespace subrk {

std::vector<double> default_t_grid();

struct ConvergenceConfig {
    std::vector<double> t_grid = default_t_grid();
    HermiteConfig hermite{};
    double rel_tol = 0.05;           // final relative error bound
    double degenerate_floor = 1e-6;  // |target| below this switches to absolute error
    double degenerate_abs_tol = 1e-3;
    int monotone_window = 4;         // strictly decreasing over the last points
    bool cross_check = true;         // d = 1 sphere runs against the SU(2) frame
    double cross_tol = 1e-3;
    int threads = 1;

    void validate() const;
};

struct ConvergenceRow {
    double t = 0.0;
    cplx scaled;
    cplx target;
    double abs_err = 0.0;
    double rel_err = 0.0;
    bool has_cross = false;
    cplx cross;  // same quantity computed in the SU(2) frame (d = 1 spheres)
    double cross_gap = 0.0;
};

struct ConvergenceReport {
    Alphabet space = Alphabet::su2;
    int d = 1;
    std::string word;
    std::vector<cplx> point;  // (r, theta, z) or (w_1..w_d, z)
    cplx target;
    bool kernel_limit = false;  // empty word: kernel ratio instead of Hermite function
    bool degenerate = false;
    std::vector<ConvergenceRow> rows;
    bool monotone = false;
    double final_err = 0.0;  // relative, or absolute when degenerate
    double slope = 0.0;      // least-squares log-log slope, diagnostic only
    double max_cross_gap = 0.0;
    bool cross_ok = true;
    bool passed = false;

    // Strictly decreasing error over the last `window` rows; consecutive
    // errors both below 1e-14 also count.
    bool decreasing_over(int window) const;
    double err(std::size_t i) const { return degenerate ? rows[i].abs_err : rows[i].rel_err; }
};

// t^{|w|/2} K_w(t, (sqrt(t) r, theta, t z)) against H_{beta(w)}(1, (r, theta, z)).
ConvergenceReport converge_su2(const LieWord& w, double r, double theta, double z, const ConvergenceConfig& cfg = {});
// t^{|w|/2} (T_w p)(sqrt(t) w, t z) / p against the kappa(w) Heisenberg Hermite function.
ConvergenceReport converge_sphere(const LieWord& w, const std::vector<cplx>& wpt, double z,
                                  const ConvergenceConfig& cfg = {});

// T_0, T_1, T_2 of the d = 1 sphere written in the SU(2) chart (r, theta, z),
// with w = -tan(r) e^{-i theta}.
Frames sphere_frames_on_su2();
// SU(2) chart point of the d = 1 sphere point (w, z).
std::vector<cplx> sphere_to_su2_point(cplx w, double z);

struct SuiteEntry {
    std::string name;
    std::string group;
    bool passed = false;
    bool enforced = true;  // informational entries do not affect the verdict
    double value = 0.0;    // worst observed metric
    double threshold = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<SuiteEntry> entries;

    bool passed() const;
};

struct LemmaConfig {
    int max_order = 4;  // derivative orders checked by the bound lemmas
};

SuiteReport lemma_suite(const LemmaConfig& cfg = {});

struct PropertyConfig {
    QuadratureConfig quad{};
    HeisenbergConfig heis{};
    bool include_normalization = true;
};

SuiteReport property_suite(const PropertyConfig& cfg = {});

// Sum_{k>=1} e^{-c(k-1)/t} k^n, the tail sum divided by e^{-c/t}.
double tail_ratio(double c, double t, int n);

// Integral of p_t over SU(2) with the normalized Haar measure.
double su2_mass(double t, const QuadratureConfig& cfg = {}, double rel_tol = 1e-8);

// Shortest round-trip decimal.
std::string format_double(double v);
std::string to_csv(const ConvergenceReport& rep);
std::string to_json(const ConvergenceReport& rep);
std::string to_json(const SuiteReport& rep);

}  // namespace subrk
