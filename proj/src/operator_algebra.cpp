#include "subrk/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "subrk/errors.hpp"

namespace subrk {

// ---------------------------------------------------------------- Expr

struct Expr::Node {
    Op op = Op::constant;
    cplx value{0.0, 0.0};
    int var = -1;
    double expo = 1.0;
    std::vector<Expr> kids;
    std::uint64_t deps = 0;
    std::size_t count = 1;
};

namespace {

std::shared_ptr<Expr::Node> new_node(Expr::Op op) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    return n;
}

bool is_integer(double p) { return std::abs(p) <= 64.0 && p == std::round(p); }

cplx int_pow(cplx b, int p) {
    if (p < 0) return 1.0 / int_pow(b, -p);
    cplx r(1.0, 0.0);
    while (p) {
        if (p & 1) r *= b;
        b *= b;
        p >>= 1;
    }
    return r;
}

cplx eval_pow(cplx b, double p) {
    if (is_integer(p)) return int_pow(b, static_cast<int>(p));
    if (b.imag() == 0.0 && b.real() >= 0.0) return {std::pow(b.real(), p), 0.0};
    return std::pow(b, p);
}

}  // namespace

Expr::Expr() : Expr(cplx(0.0, 0.0)) {}

Expr::Expr(double c) : Expr(cplx(c, 0.0)) {}

Expr::Expr(cplx c) {
    auto n = new_node(Op::constant);
    n->value = c;
    node_ = std::move(n);
}

Expr::Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Expr Expr::var(int index) {
    if (index < 0 || index >= 64) throw UsageError("Expr: variable index out of range");
    auto n = new_node(Op::var);
    n->var = index;
    n->deps = std::uint64_t(1) << index;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Op Expr::op() const { return node_->op; }
bool Expr::is_zero() const { return is_constant() && node_->value == cplx(0.0, 0.0); }
bool Expr::is_one() const { return is_constant() && node_->value == cplx(1.0, 0.0); }
cplx Expr::constant_value() const { return node_->value; }
bool Expr::depends_on(int v) const { return (node_->deps >> v) & 1u; }
std::size_t Expr::node_count() const { return node_->count; }

Expr operator+(const Expr& a, const Expr& b) {
    cplx c(0.0, 0.0);
    std::vector<Expr> kids;
    for (const Expr* e : {&a, &b}) {
        if (e->op() == Expr::Op::add) {
            for (const Expr& k : e->node_->kids) {
                if (k.is_constant())
                    c += k.constant_value();
                else
                    kids.push_back(k);
            }
        } else if (e->is_constant()) {
            c += e->constant_value();
        } else {
            kids.push_back(*e);
        }
    }
    // Collect c1 * e + c2 * e when both share the same node.
    std::vector<std::pair<cplx, Expr>> terms;
    for (const Expr& k : kids) {
        cplx coef(1.0, 0.0);
        Expr base = k;
        if (k.op() == Expr::Op::mul && k.node_->kids.size() == 2 && k.node_->kids[0].is_constant()) {
            coef = k.node_->kids[0].constant_value();
            base = k.node_->kids[1];
        }
        auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& tm) { return tm.second.node_ == base.node_; });
        if (it == terms.end())
            terms.emplace_back(coef, base);
        else
            it->first += coef;
    }
    kids.clear();
    for (const auto& [coef, base] : terms) {
        if (coef == cplx(0.0, 0.0)) continue;
        kids.push_back(coef == cplx(1.0, 0.0) ? base : Expr(coef) * base);
    }
    if (c != cplx(0.0, 0.0)) kids.insert(kids.begin(), Expr(c));
    if (kids.empty()) return Expr();
    if (kids.size() == 1) return kids[0];
    auto n = new_node(Expr::Op::add);
    for (const Expr& k : kids) {
        n->deps |= k.node_->deps;
        n->count += k.node_->count;
    }
    n->kids = std::move(kids);
    return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

Expr operator*(const Expr& a, const Expr& b) {
    cplx c(1.0, 0.0);
    std::vector<Expr> kids;
    for (const Expr* e : {&a, &b}) {
        if (e->op() == Expr::Op::mul) {
            for (const Expr& k : e->node_->kids) {
                if (k.is_constant())
                    c *= k.constant_value();
                else
                    kids.push_back(k);
            }
        } else if (e->is_constant()) {
            c *= e->constant_value();
        } else {
            kids.push_back(*e);
        }
    }
    if (c == cplx(0.0, 0.0)) return Expr();
    if (c != cplx(1.0, 0.0)) kids.insert(kids.begin(), Expr(c));
    if (kids.empty()) return Expr(c);
    if (kids.size() == 1) return kids[0];
    auto n = new_node(Expr::Op::mul);
    for (const Expr& k : kids) {
        n->deps |= k.node_->deps;
        n->count += k.node_->count;
    }
    n->kids = std::move(kids);
    return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

Expr operator-(const Expr& a) { return Expr(-1.0) * a; }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator/(const Expr& a, const Expr& b) { return a * pow(b, -1.0); }

Expr pow(const Expr& a, double p) {
    if (p == 0.0) return Expr(1.0);
    if (p == 1.0) return a;
    if (a.is_constant()) return Expr(eval_pow(a.constant_value(), p));
    auto n = new_node(Expr::Op::pow);
    n->expo = p;
    n->deps = a.node_->deps;
    n->count = a.node_->count + 1;
    n->kids = {a};
    return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

Expr sqrt(const Expr& a) { return pow(a, 0.5); }

Expr Expr::unary(Op op, const Expr& a) {
    if (a.is_constant()) {
        const cplx v = a.constant_value();
        switch (op) {
            case Op::sin: return Expr(std::sin(v));
            case Op::cos: return Expr(std::cos(v));
            case Op::tan: return Expr(std::tan(v));
            case Op::exp: return Expr(std::exp(v));
            case Op::atan: return Expr(std::atan(v));
            default: break;
        }
    }
    auto n = new_node(op);
    n->deps = a.node_->deps;
    n->count = a.node_->count + 1;
    n->kids = {a};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr sin(const Expr& a) { return Expr::unary(Expr::Op::sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Expr::Op::cos, a); }
Expr tan(const Expr& a) { return Expr::unary(Expr::Op::tan, a); }
Expr exp(const Expr& a) { return Expr::unary(Expr::Op::exp, a); }
Expr atan(const Expr& a) { return Expr::unary(Expr::Op::atan, a); }

Expr Expr::diff(int v) const {
    if (!depends_on(v)) return Expr();
    const Node& n = *node_;
    switch (n.op) {
        case Op::constant: return Expr();
        case Op::var: return Expr(1.0);
        case Op::add: {
            Expr s;
            for (const Expr& k : n.kids) s = s + k.diff(v);
            return s;
        }
        case Op::mul: {
            Expr s;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (!n.kids[i].depends_on(v)) continue;
                Expr term = n.kids[i].diff(v);
                for (std::size_t j = 0; j < n.kids.size(); ++j)
                    if (j != i) term = term * n.kids[j];
                s = s + term;
            }
            return s;
        }
        case Op::pow: return Expr(n.expo) * pow(n.kids[0], n.expo - 1.0) * n.kids[0].diff(v);
        case Op::sin: return cos(n.kids[0]) * n.kids[0].diff(v);
        case Op::cos: return -sin(n.kids[0]) * n.kids[0].diff(v);
        case Op::tan: return (Expr(1.0) + pow(tan(n.kids[0]), 2.0)) * n.kids[0].diff(v);
        case Op::exp: return *this * n.kids[0].diff(v);
        case Op::atan: return n.kids[0].diff(v) / (Expr(1.0) + pow(n.kids[0], 2.0));
    }
    return Expr();
}

cplx Expr::eval(std::span<const cplx> x) const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::var: return x[static_cast<std::size_t>(n.var)];
        case Op::add: {
            cplx s(0.0, 0.0);
            for (const Expr& k : n.kids) s += k.eval(x);
            return s;
        }
        case Op::mul: {
            cplx s(1.0, 0.0);
            for (const Expr& k : n.kids) s *= k.eval(x);
            return s;
        }
        case Op::pow: return eval_pow(n.kids[0].eval(x), n.expo);
        case Op::sin: return std::sin(n.kids[0].eval(x));
        case Op::cos: return std::cos(n.kids[0].eval(x));
        case Op::tan: return std::tan(n.kids[0].eval(x));
        case Op::exp: return std::exp(n.kids[0].eval(x));
        case Op::atan: {
            const cplx a = n.kids[0].eval(x);
            if (a.imag() == 0.0) return {std::atan(a.real()), 0.0};
            return std::atan(a);
        }
    }
    return {};
}

Expr Expr::substitute(const std::vector<Expr>& values) const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::constant: return *this;
        case Op::var:
            if (static_cast<std::size_t>(n.var) >= values.size()) throw UsageError("substitute: missing variable");
            return values[static_cast<std::size_t>(n.var)];
        case Op::add: {
            Expr s;
            for (const Expr& k : n.kids) s = s + k.substitute(values);
            return s;
        }
        case Op::mul: {
            Expr s(1.0);
            for (const Expr& k : n.kids) s = s * k.substitute(values);
            return s;
        }
        case Op::pow: return pow(n.kids[0].substitute(values), n.expo);
        default: return unary(n.op, n.kids[0].substitute(values));
    }
}

std::string Expr::str(const std::vector<std::string>& names) const {
    const Node& n = *node_;
    std::ostringstream os;
    os.precision(17);
    auto fn = [&](const char* name) { os << name << "(" << n.kids[0].str(names) << ")"; };
    switch (n.op) {
        case Op::constant:
            if (n.value.imag() == 0.0)
                os << n.value.real();
            else
                os << "(" << n.value.real() << (n.value.imag() < 0 ? "-" : "+") << std::abs(n.value.imag()) << "i)";
            break;
        case Op::var:
            os << (static_cast<std::size_t>(n.var) < names.size() ? names[static_cast<std::size_t>(n.var)]
                                                                  : "v" + std::to_string(n.var));
            break;
        case Op::add:
        case Op::mul:
            os << "(";
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) os << (n.op == Op::add ? " + " : "*");
                os << n.kids[i].str(names);
            }
            os << ")";
            break;
        case Op::pow: os << n.kids[0].str(names) << "^" << n.expo; break;
        case Op::sin: fn("sin"); break;
        case Op::cos: fn("cos"); break;
        case Op::tan: fn("tan"); break;
        case Op::exp: fn("exp"); break;
        case Op::atan: fn("atan"); break;
    }
    return os.str();
}

// ---------------------------------------------------------------- charts

namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic low-discrepancy values in [lo, hi].
double sample_value(int k, int dim, double lo, double hi) {
    const double g = std::numbers::phi - 1.0;
    const double f = std::fmod(0.1234 + (k + 1) * g + dim * 0.3819660112501051 * (k + 2), 1.0);
    return lo + (hi - lo) * f;
}

std::vector<std::vector<cplx>> real_samples(const std::vector<std::pair<double, double>>& ranges) {
    std::vector<std::vector<cplx>> out;
    for (int k = 0; k < 5; ++k) {
        std::vector<cplx> p;
        for (std::size_t i = 0; i < ranges.size(); ++i)
            p.emplace_back(sample_value(k, static_cast<int>(i), ranges[i].first, ranges[i].second), 0.0);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::vector<cplx>> complex_samples(int d, double scale) {
    std::vector<std::vector<cplx>> out;
    for (int k = 0; k < 5; ++k) {
        std::vector<cplx> p(static_cast<std::size_t>(2 * d + 1));
        for (int j = 0; j < d; ++j) {
            const cplx w(sample_value(k, 2 * j, -scale, scale), sample_value(k, 2 * j + 1, -scale, scale));
            p[static_cast<std::size_t>(j)] = w;
            p[static_cast<std::size_t>(d + j)] = std::conj(w);
        }
        p[static_cast<std::size_t>(2 * d)] = sample_value(k, 2 * d, -2.0, 2.0);
        out.push_back(std::move(p));
    }
    return out;
}

void check_d(int d) {
    if (d < 1 || d > 16) throw DomainError("dimension d must lie in [1, 16]");
}

Chart complex_chart_base(int d, const std::string& name) {
    Chart c;
    c.name = name;
    for (int j = 1; j <= d; ++j) c.vars.push_back("w" + std::to_string(j));
    for (int j = 1; j <= d; ++j) c.vars.push_back("wb" + std::to_string(j));
    c.vars.push_back("z");
    c.z_index = 2 * d;
    for (int j = 0; j < d; ++j) c.conj_pairs.emplace_back(j, d + j);
    c.samples = complex_samples(d, 0.6);
    return c;
}

Expr rho_sq(int d) {
    Expr s;
    for (int j = 0; j < d; ++j) s = s + Expr::var(j) * Expr::var(d + j);
    return s;
}

}  // namespace

Chart su2_chart() {
    Chart c;
    c.name = "su2";
    c.vars = {"r", "theta", "z"};
    c.z_index = 2;
    c.radial = Expr::var(0);
    c.samples = real_samples({{0.2, 1.3}, {0.0, 2.0 * kPi}, {-2.0, 2.0}});
    return c;
}

Chart heisenberg_cylindrical_chart() {
    Chart c = su2_chart();
    c.name = "heisenberg-cylindrical";
    c.samples = real_samples({{0.2, 2.5}, {0.0, 2.0 * kPi}, {-2.5, 2.5}});
    return c;
}

Chart heisenberg_cartesian_chart(int d) {
    check_d(d);
    Chart c;
    c.name = "heisenberg";
    for (int j = 1; j <= d; ++j) c.vars.push_back("x" + std::to_string(j));
    for (int j = 1; j <= d; ++j) c.vars.push_back("y" + std::to_string(j));
    c.vars.push_back("z");
    c.z_index = 2 * d;
    Expr s;
    for (int j = 0; j < 2 * d; ++j) s = s + pow(Expr::var(j), 2.0);
    c.radial = sqrt(s);
    std::vector<std::pair<double, double>> ranges(static_cast<std::size_t>(2 * d), {-1.5, 1.5});
    ranges.emplace_back(-2.5, 2.5);
    c.samples = real_samples(ranges);
    return c;
}

Chart heisenberg_complex_chart(int d) {
    check_d(d);
    Chart c = complex_chart_base(d, "heisenberg-complex");
    c.radial = sqrt(rho_sq(d));
    return c;
}

Chart sphere_chart(int d) {
    check_d(d);
    Chart c = complex_chart_base(d, "sphere");
    c.radial = atan(sqrt(rho_sq(d)));
    return c;
}

std::vector<cplx> chart_point(const Chart& chart, std::span<const cplx> coords) {
    if (chart.conj_pairs.empty()) {
        if (static_cast<int>(coords.size()) != chart.nvars())
            throw UsageError("point has " + std::to_string(coords.size()) + " coordinates, chart '" + chart.name +
                             "' needs " + std::to_string(chart.nvars()));
        return {coords.begin(), coords.end()};
    }
    const int d = static_cast<int>(chart.conj_pairs.size());
    if (static_cast<int>(coords.size()) != d + 1)
        throw UsageError("point needs " + std::to_string(d) + " complex coordinates and z");
    std::vector<cplx> p(static_cast<std::size_t>(chart.nvars()));
    for (int j = 0; j < d; ++j) {
        p[static_cast<std::size_t>(chart.conj_pairs[static_cast<std::size_t>(j)].first)] = coords[static_cast<std::size_t>(j)];
        p[static_cast<std::size_t>(chart.conj_pairs[static_cast<std::size_t>(j)].second)] =
            std::conj(coords[static_cast<std::size_t>(j)]);
    }
    p[static_cast<std::size_t>(chart.z_index)] = coords[static_cast<std::size_t>(d)];
    return p;
}

// ---------------------------------------------------------------- DiffOp

DiffOp DiffOp::identity(int nvars) {
    DiffOp o(nvars);
    o.add_term(Multi(static_cast<std::size_t>(nvars), 0), Expr(1.0));
    return o;
}

DiffOp DiffOp::partial(int nvars, int v, const Expr& coeff) {
    DiffOp o(nvars);
    Multi m(static_cast<std::size_t>(nvars), 0);
    m[static_cast<std::size_t>(v)] = 1;
    o.add_term(m, coeff);
    return o;
}

int DiffOp::order() const {
    int best = 0;
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (int e : m) s += e;
        best = std::max(best, s);
    }
    return best;
}

Expr DiffOp::coefficient(const Multi& alpha) const {
    const auto it = terms_.find(alpha);
    return it == terms_.end() ? Expr() : it->second;
}

void DiffOp::add_term(const Multi& alpha, const Expr& coeff) {
    if (static_cast<int>(alpha.size()) != n_) throw UsageError("DiffOp: multi-index length mismatch");
    if (coeff.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(alpha, coeff);
        return;
    }
    it->second = it->second + coeff;
    if (it->second.is_zero()) terms_.erase(it);
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    if (o.n_ != n_) throw UsageError("DiffOp: variable count mismatch");
    DiffOp r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + o.times(Expr(-1.0)); }

DiffOp DiffOp::times(const Expr& c) const {
    DiffOp r(n_);
    for (const auto& [m, e] : terms_) r.add_term(m, c * e);
    return r;
}

namespace {

// d^alpha applied to a coefficient, all sub-multi-indices gamma <= alpha.
void leibniz(const Expr& b, const DiffOp::Multi& alpha, std::size_t pos, DiffOp::Multi& gamma, double weight,
             const std::function<void(const DiffOp::Multi&, double)>& emit) {
    if (pos == alpha.size()) {
        emit(gamma, weight);
        return;
    }
    double binom = 1.0;
    for (int g = 0; g <= alpha[pos]; ++g) {
        gamma[pos] = g;
        leibniz(b, alpha, pos + 1, gamma, weight * binom, emit);
        binom = binom * double(alpha[pos] - g) / double(g + 1);
    }
    gamma[pos] = 0;
}

Expr diff_multi(const Expr& e, const DiffOp::Multi& gamma) {
    Expr r = e;
    for (std::size_t v = 0; v < gamma.size(); ++v)
        for (int k = 0; k < gamma[v]; ++k) r = r.diff(static_cast<int>(v));
    return r;
}

}  // namespace

DiffOp DiffOp::compose(const DiffOp& rhs) const {
    if (rhs.n_ != n_) throw UsageError("DiffOp: variable count mismatch");
    DiffOp r(n_);
    for (const auto& [alpha, a] : terms_) {
        for (const auto& [beta, b] : rhs.terms_) {
            Multi gamma(alpha.size(), 0);
            leibniz(b, alpha, 0, gamma, 1.0, [&](const Multi& g, double w) {
                const Expr db = diff_multi(b, g);
                if (db.is_zero()) return;
                Multi m(alpha.size());
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = alpha[i] - g[i] + beta[i];
                r.add_term(m, Expr(w) * a * db);
            });
        }
    }
    return r;
}

Expr DiffOp::apply(const Expr& f) const {
    Expr s;
    for (const auto& [m, c] : terms_) s = s + c * diff_multi(f, m);
    return s;
}

DiffOp DiffOp::substitute(const std::vector<Expr>& values) const {
    DiffOp r(n_);
    for (const auto& [m, c] : terms_) r.add_term(m, c.substitute(values));
    return r;
}

std::string DiffOp::str(const Chart& chart) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str(chart.vars);
        for (std::size_t v = 0; v < m.size(); ++v)
            if (m[v]) os << "*d_" << chart.vars[v] << (m[v] > 1 ? "^" + std::to_string(m[v]) : "");
    }
    if (first) os << "0";
    return os.str();
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a.compose(b) - b.compose(a); }

double max_coefficient_gap(const DiffOp& a, const DiffOp& b, std::span<const cplx> point) {
    const DiffOp diff = a - b;
    double gap = 0.0;
    for (const auto& [m, c] : diff.terms()) gap = std::max(gap, std::abs(c.eval(point)));
    return gap;
}

bool equivalent(const DiffOp& a, const DiffOp& b, const Chart& chart, double tol) {
    if (a.nvars() != b.nvars() || a.nvars() != chart.nvars()) return false;
    std::map<DiffOp::Multi, int> keys;
    for (const auto& [m, c] : a.terms()) keys[m] = 1;
    for (const auto& [m, c] : b.terms()) keys[m] = 1;
    for (const auto& p : chart.samples) {
        for (const auto& [m, unused] : keys) {
            const cplx va = a.coefficient(m).eval(p);
            const cplx vb = b.coefficient(m).eval(p);
            if (std::abs(va - vb) > tol * std::max(1.0, std::abs(va) + std::abs(vb))) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- frames

const DiffOp& Frames::operator[](const Letter& l) const {
    for (const auto& [k, op] : fields)
        if (k == l) return op;
    throw UsageError("invalid-alphabet: letter " + letter_name(l) + " not in frame '" + chart.name + "'");
}

namespace {

DiffOp first_order(int n, const std::vector<std::pair<int, Expr>>& parts) {
    DiffOp o(n);
    for (const auto& [v, c] : parts) o = o + DiffOp::partial(n, v, c);
    return o;
}

Frames su2_frame_impl(double t, bool scaled) {
    Frames f;
    f.chart = su2_chart();
    f.alphabet = Alphabet::su2;
    const Expr r = Expr::var(0), th = Expr::var(1), z = Expr::var(2);
    const double st = std::sqrt(t);
    const Expr A = Expr(2.0 * t) * z - th;
    // tan(r) and 2 / sin(2r), or their scaled forms
    const Expr tz = scaled ? tan(Expr(st) * r) / Expr(st) : tan(r);
    const Expr cth = scaled ? Expr(2.0 * st) / sin(Expr(2.0 * st) * r) : Expr(2.0) / sin(Expr(2.0) * r);
    f.fields.emplace_back(Letter{LetterKind::X, 0}, first_order(3, {{0, cos(A)}, {2, tz * sin(A)}, {1, cth * sin(A)}}));
    f.fields.emplace_back(Letter{LetterKind::Y, 0},
                          first_order(3, {{0, -sin(A)}, {2, tz * cos(A)}, {1, cth * cos(A)}}));
    f.fields.emplace_back(Letter{LetterKind::Z, 0}, DiffOp::partial(3, 2));
    return f;
}

Frames sphere_frames_impl(int d, double t) {
    check_d(d);
    Frames f;
    f.chart = sphere_chart(d);
    f.alphabet = Alphabet::sphere;
    f.d = d;
    const int n = 2 * d + 1;
    const Expr z = Expr::var(2 * d);
    const Expr rho2 = rho_sq(d);
    const Expr s = sqrt(Expr(1.0) + Expr(t) * rho2);
    const Expr e = exp(Expr(cplx(0.0, -t)) * z);
    const Expr half_over_i(cplx(0.0, -0.5));  // 1 / (2i)
    f.fields.emplace_back(Letter{LetterKind::T, 0}, DiffOp::partial(n, 2 * d));
    std::vector<DiffOp> tj;
    for (int j = 0; j < d; ++j) {
        const Expr wb = Expr::var(d + j);
        tj.push_back(first_order(n, {{j, s * e}, {2 * d, -(wb * e / s) * half_over_i}}));
        f.fields.emplace_back(Letter{LetterKind::T, j + 1}, tj.back());
    }
    if (t == 1.0) {
        // T_{d+1} written out independently of the T_j
        std::vector<std::pair<int, Expr>> parts;
        for (int k = 0; k < d; ++k) parts.emplace_back(k, -s * e * Expr::var(k));
        parts.emplace_back(2 * d, e * half_over_i * rho2 / s);
        f.fields.emplace_back(Letter{LetterKind::T, d + 1}, first_order(n, parts));
    } else {
        DiffOp td(n);
        for (int k = 0; k < d; ++k) td = td - tj[static_cast<std::size_t>(k)].times(Expr::var(k));
        f.fields.emplace_back(Letter{LetterKind::T, d + 1}, td);
    }
    return f;
}

}  // namespace

Frames su2_frame() { return su2_frame_impl(1.0, false); }

Frames su2_scaled_frame(double t) {
    if (!(t > 0.0)) throw DomainError("scaled frame: t must be positive");
    return su2_frame_impl(t, true);
}

Frames sphere_frames(int d) { return sphere_frames_impl(d, 1.0); }

Frames sphere_scaled_frames(int d, double t) {
    if (!(t > 0.0)) throw DomainError("scaled frame: t must be positive");
    return sphere_frames_impl(d, t);
}

Frames heisenberg_frames(int d) {
    check_d(d);
    Frames f;
    f.chart = heisenberg_cartesian_chart(d);
    f.alphabet = Alphabet::heisenberg;
    f.d = d;
    const int n = 2 * d + 1, zi = 2 * d;
    const Expr i(cplx(0.0, 1.0)), half(0.5);
    f.fields.emplace_back(Letter{LetterKind::HZ0, 0}, DiffOp::partial(n, zi));
    for (int j = 0; j < d; ++j) {
        const Expr x = Expr::var(j), y = Expr::var(d + j);
        f.fields.emplace_back(Letter{LetterKind::HX, j + 1}, first_order(n, {{j, Expr(1.0)}, {zi, -y}}));
        f.fields.emplace_back(Letter{LetterKind::HY, j + 1}, first_order(n, {{d + j, Expr(1.0)}, {zi, x}}));
        // Z_j = (d_y - i d_x)/2 + (i/2) wbar d_z with wbar = y - i x
        f.fields.emplace_back(Letter{LetterKind::HZ, j + 1},
                              first_order(n, {{d + j, half}, {j, -half * i}, {zi, half * i * (y - i * x)}}));
        f.fields.emplace_back(Letter{LetterKind::HZbar, j + 1},
                              first_order(n, {{d + j, half}, {j, half * i}, {zi, -half * i * (y + i * x)}}));
    }
    return f;
}

Frames heisenberg_complex_frames(int d) {
    check_d(d);
    Frames f;
    f.chart = heisenberg_complex_chart(d);
    f.alphabet = Alphabet::heisenberg;
    f.d = d;
    const int n = 2 * d + 1, zi = 2 * d;
    const Expr i(cplx(0.0, 1.0)), half(0.5);
    f.fields.emplace_back(Letter{LetterKind::HZ0, 0}, DiffOp::partial(n, zi));
    for (int j = 0; j < d; ++j) {
        const Expr w = Expr::var(j), wb = Expr::var(d + j);
        // d_x = i (d_w - d_wb), d_y = d_w + d_wb; x = (w - wb)/2i, y = (w + wb)/2
        f.fields.emplace_back(Letter{LetterKind::HX, j + 1},
                              first_order(n, {{j, i}, {d + j, -i}, {zi, -half * (w + wb)}}));
        f.fields.emplace_back(Letter{LetterKind::HY, j + 1},
                              first_order(n, {{j, Expr(1.0)}, {d + j, Expr(1.0)}, {zi, -half * i * (w - wb)}}));
        f.fields.emplace_back(Letter{LetterKind::HZ, j + 1}, first_order(n, {{j, Expr(1.0)}, {zi, half * i * wb}}));
        f.fields.emplace_back(Letter{LetterKind::HZbar, j + 1}, first_order(n, {{d + j, Expr(1.0)}, {zi, -half * i * w}}));
    }
    return f;
}

Frames heisenberg_cylindrical_frame() {
    Frames f;
    f.chart = heisenberg_cylindrical_chart();
    f.alphabet = Alphabet::heisenberg;
    const Expr r = Expr::var(0), th = Expr::var(1);
    f.fields.emplace_back(Letter{LetterKind::HX, 1},
                          first_order(3, {{0, cos(th)}, {2, -r * sin(th)}, {1, -sin(th) / r}}));
    f.fields.emplace_back(Letter{LetterKind::HY, 1}, first_order(3, {{0, sin(th)}, {2, r * cos(th)}, {1, cos(th) / r}}));
    f.fields.emplace_back(Letter{LetterKind::HZ0, 0}, DiffOp::partial(3, 2));
    return f;
}

DiffOp compile_word(const Frames& frames, const LieWord& w) {
    if (w.alphabet() != frames.alphabet || (w.alphabet() != Alphabet::su2 && w.d() != frames.d))
        throw UsageError("invalid-alphabet: word over " + alphabet_name(w.alphabet()) + " does not match frame '" +
                         frames.chart.name + "'");
    DiffOp op = DiffOp::identity(frames.chart.nvars());
    for (const Letter& l : w.letters()) op = op.compose(frames[l]);
    return op;
}

// ---------------------------------------------------------------- Hermite

KernelJet su2_kernel_jet(double t, const QuadratureConfig& cfg) {
    return [t, cfg](double R, double z, int A, int C) {
        QuadratureConfig c = cfg;
        c.max_order = std::max(c.max_order, A + C);
        const SubellipticTable tab = p_deriv_table(Space::su2, {R, z, t, 1}, A, C, c);
        std::vector<std::vector<double>> out(static_cast<std::size_t>(A + 1), std::vector<double>(static_cast<std::size_t>(C + 1)));
        for (int a = 0; a <= A; ++a)
            for (int k = 0; k <= C; ++k) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = tab.at(a, k);
        return out;
    };
}

KernelJet sphere_kernel_jet(int d, double t, const QuadratureConfig& cfg) {
    return [d, t, cfg](double R, double z, int A, int C) {
        QuadratureConfig c = cfg;
        c.max_order = std::max(c.max_order, A + C);
        const SubellipticTable tab = p_deriv_table(Space::sphere, {R, z, t, d}, A, C, c);
        std::vector<std::vector<double>> out(static_cast<std::size_t>(A + 1), std::vector<double>(static_cast<std::size_t>(C + 1)));
        for (int a = 0; a <= A; ++a)
            for (int k = 0; k <= C; ++k) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = tab.at(a, k);
        return out;
    };
}

KernelJet heisenberg_kernel_jet(int d, double t, const HeisenbergConfig& cfg) {
    return [d, t, cfg](double R, double z, int A, int C) {
        HeisenbergConfig c = cfg;
        c.max_order = std::max(c.max_order, A + C);
        const DerivTable tab = h_deriv_table({d, t}, R, z, A, C, c);
        std::vector<std::vector<double>> out(static_cast<std::size_t>(A + 1), std::vector<double>(static_cast<std::size_t>(C + 1)));
        for (int a = 0; a <= A; ++a)
            for (int k = 0; k <= C; ++k) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = tab.at(a, k);
        return out;
    };
}

namespace {

// d^alpha f(R, z) = sum over (a, c) of coeff * f_{a,c}.
using Jet = std::map<std::pair<int, int>, Expr>;

Jet jet_diff(const Jet& j, int v, const Chart& chart, const std::vector<Expr>& dR) {
    Jet out;
    auto add = [&](std::pair<int, int> k, const Expr& e) {
        if (e.is_zero()) return;
        auto it = out.find(k);
        if (it == out.end())
            out.emplace(k, e);
        else
            it->second = it->second + e;
    };
    for (const auto& [k, c] : j) {
        add(k, c.diff(v));
        add({k.first + 1, k.second}, c * dR[static_cast<std::size_t>(v)]);
        if (v == chart.z_index) add({k.first, k.second + 1}, c);
    }
    return out;
}

}  // namespace

cplx hermite_of(const DiffOp& op, const Chart& chart, std::span<const cplx> point, const KernelJet& jet) {
    if (op.nvars() != chart.nvars() || static_cast<int>(point.size()) != chart.nvars())
        throw UsageError("hermite: operator, chart and point disagree on the variable count");
    std::vector<Expr> dR;
    for (int v = 0; v < chart.nvars(); ++v) dR.push_back(chart.radial.diff(v));

    std::map<DiffOp::Multi, Jet> memo;
    const DiffOp::Multi zero(static_cast<std::size_t>(chart.nvars()), 0);
    memo[zero] = Jet{{{0, 0}, Expr(1.0)}};
    std::function<const Jet&(const DiffOp::Multi&)> jet_of = [&](const DiffOp::Multi& m) -> const Jet& {
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
        DiffOp::Multi prev = m;
        int v = 0;
        while (prev[static_cast<std::size_t>(v)] == 0) ++v;
        --prev[static_cast<std::size_t>(v)];
        Jet j = jet_diff(jet_of(prev), v, chart, dR);
        return memo.emplace(m, std::move(j)).first->second;
    };

    int A = 0, C = 0;
    std::vector<std::pair<cplx, const Jet*>> work;
    for (const auto& [m, c] : op.terms()) {
        const Jet& j = jet_of(m);
        for (const auto& [k, e] : j) {
            A = std::max(A, k.first);
            C = std::max(C, k.second);
        }
        work.emplace_back(c.eval(point), &j);
    }
    const double R = chart.radial.eval(point).real();
    const double z = point[static_cast<std::size_t>(chart.z_index)].real();
    const auto f = jet(R, z, A, C);
    const double f0 = f[0][0];
    if (!(std::abs(f0) > 1e-300)) throw NumericalError("hermite: kernel underflow at the evaluation point");
    cplx num(0.0, 0.0);
    for (const auto& [coef, j] : work) {
        cplx s(0.0, 0.0);
        for (const auto& [k, e] : *j)
            s += e.eval(point) * f[static_cast<std::size_t>(k.first)][static_cast<std::size_t>(k.second)];
        num += coef * s;
    }
    return num / f0;
}

cplx hermite(Alphabet space, const LieWord& w, double t, std::span<const cplx> point, const HermiteConfig& cfg) {
    if (static_cast<int>(w.size()) > cfg.max_word) throw UsageError("hermite: word longer than the configured maximum");
    if (w.alphabet() != space) throw UsageError("invalid-alphabet: word does not belong to space " + alphabet_name(space));
    switch (space) {
        case Alphabet::su2: {
            const Frames f = su2_frame();
            return hermite_of(compile_word(f, w), f.chart, chart_point(f.chart, point), su2_kernel_jet(t, cfg.quad));
        }
        case Alphabet::sphere: {
            const Frames f = sphere_frames(w.d());
            return hermite_of(compile_word(f, w), f.chart, chart_point(f.chart, point),
                              sphere_kernel_jet(w.d(), t, cfg.quad));
        }
        case Alphabet::heisenberg: {
            const Frames f = heisenberg_frames(w.d());
            return hermite_of(compile_word(f, w), f.chart, chart_point(f.chart, point),
                              heisenberg_kernel_jet(w.d(), t, cfg.heis));
        }
    }
    return {};
}

}  // namespace subrk
