#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "subrk/heisenberg_kernel.hpp"
#include "subrk/lie_words.hpp"
#include "subrk/subelliptic_kernel.hpp"

namespace subrk {

using cplx = std::complex<double>;

// Immutable expression tree over indexed variables.
class Expr {
public:
    enum class Op { constant, var, add, mul, pow, sin, cos, tan, exp, atan };

    Expr();
    Expr(double c);
    Expr(cplx c);
    static Expr var(int index);

    Op op() const;
    bool is_constant() const { return op() == Op::constant; }
    bool is_zero() const;
    bool is_one() const;
    cplx constant_value() const;
    bool depends_on(int v) const;
    std::size_t node_count() const;

    Expr diff(int v) const;
    cplx eval(std::span<const cplx> x) const;
    // Replaces variable i by values[i].
    Expr substitute(const std::vector<Expr>& values) const;
    std::string str(const std::vector<std::string>& names) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);

    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr tan(const Expr& a);
    friend Expr exp(const Expr& a);
    friend Expr atan(const Expr& a);
    friend Expr pow(const Expr& a, double p);

    struct Node;  // defined in the implementation file

private:
    explicit Expr(std::shared_ptr<const Node> n);
    static Expr unary(Op op, const Expr& a);
    std::shared_ptr<const Node> node_;
};

Expr sqrt(const Expr& a);

// Coordinates on which operators act.  Kernels are functions f(R, z) of the
// radial expression and the coordinate z_index.  conj_pairs lists (w, wbar)
// variables that are evaluated as complex conjugates.
struct Chart {
    std::string name;
    std::vector<std::string> vars;
    int z_index = 0;
    Expr radial;
    std::vector<std::pair<int, int>> conj_pairs;
    std::vector<std::vector<cplx>> samples;  // deterministic identity-test points

    int nvars() const { return static_cast<int>(vars.size()); }
};

Chart su2_chart();
Chart heisenberg_cylindrical_chart();
Chart heisenberg_cartesian_chart(int d);
Chart heisenberg_complex_chart(int d);
Chart sphere_chart(int d);

// Sum of coefficient * d^alpha over the chart variables.
class DiffOp {
public:
    using Multi = std::vector<int>;

    explicit DiffOp(int nvars = 0) : n_(nvars) {}
    static DiffOp identity(int nvars);
    static DiffOp partial(int nvars, int v, const Expr& coeff = Expr(1.0));

    int nvars() const { return n_; }
    int order() const;
    const std::map<Multi, Expr>& terms() const { return terms_; }
    Expr coefficient(const Multi& alpha) const;
    void add_term(const Multi& alpha, const Expr& coeff);

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp times(const Expr& c) const;
    // (this o rhs) f = this(rhs f)
    DiffOp compose(const DiffOp& rhs) const;
    Expr apply(const Expr& f) const;
    DiffOp substitute(const std::vector<Expr>& values) const;
    std::string str(const Chart& chart) const;

private:
    int n_;
    std::map<Multi, Expr> terms_;
};

DiffOp commutator(const DiffOp& a, const DiffOp& b);
// Coefficientwise equality at the chart's sample points, relative tolerance.
bool equivalent(const DiffOp& a, const DiffOp& b, const Chart& chart, double tol = 1e-12);
// Largest coefficient difference at one point.
double max_coefficient_gap(const DiffOp& a, const DiffOp& b, std::span<const cplx> point);

struct Frames {
    Chart chart;
    Alphabet alphabet = Alphabet::su2;
    int d = 1;
    std::vector<std::pair<Letter, DiffOp>> fields;

    const DiffOp& operator[](const Letter& l) const;
};

Frames su2_frame();
Frames su2_scaled_frame(double t);
// T_0..T_d plus T_{d+1} (index d + 1) in the inhomogeneous chart.
Frames sphere_frames(int d);
Frames sphere_scaled_frames(int d, double t);
// Real and complex Heisenberg fields in Cartesian coordinates (x, y, z).
Frames heisenberg_frames(int d);
// The same fields written in (w, wbar, z) with w = y + i x.
Frames heisenberg_complex_frames(int d);
// X, Y, Z_0 for d = 1 in cylindrical coordinates.
Frames heisenberg_cylindrical_frame();

DiffOp compile_word(const Frames& frames, const LieWord& w);

// Table f[a][c] = d^a/dR^a d^c/dz^c of the kernel at (R, z).
using KernelJet = std::function<std::vector<std::vector<double>>(double R, double z, int max_a, int max_c)>;

KernelJet su2_kernel_jet(double t, const QuadratureConfig& cfg = {});
KernelJet sphere_kernel_jet(int d, double t, const QuadratureConfig& cfg = {});
KernelJet heisenberg_kernel_jet(int d, double t, const HeisenbergConfig& cfg = {});

// Full chart point from user coordinates: su2 / cylindrical (r, theta, z),
// Cartesian (x_1..x_d, y_1..y_d, z), complex charts (w_1..w_d, z).
std::vector<cplx> chart_point(const Chart& chart, std::span<const cplx> coords);

// (op f)(point) / f(point) for a kernel f(R, z).
cplx hermite_of(const DiffOp& op, const Chart& chart, std::span<const cplx> point, const KernelJet& jet);

struct HermiteConfig {
    QuadratureConfig quad{};
    HeisenbergConfig heis{};
    int max_word = 6;
};

// K_w(t, point) for space su2 (r, theta, z), sphere (w_1..w_d, z) or
// heisenberg (x_1..x_d, y_1..y_d, z).
cplx hermite(Alphabet space, const LieWord& w, double t, std::span<const cplx> point, const HermiteConfig& cfg = {});

}  // namespace subrk
