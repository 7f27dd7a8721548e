#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "subrk/errors.hpp"
#include "subrk/harness.hpp"
#include "subrk/heisenberg_kernel.hpp"
#include "subrk/lie_words.hpp"
#include "subrk/operator_algebra.hpp"
#include "subrk/riemannian_kernel.hpp"
#include "subrk/subelliptic_kernel.hpp"

namespace subrk::cli {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw UsageError("not a number: '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::complex<double> parse_complex(std::string_view s) {
    s = trim(s);
    if (s.empty()) throw UsageError("empty coordinate");
    if (s.back() != 'i') return {parse_real(s), 0.0};
    s.remove_suffix(1);
    // split at the last sign that is not the sign of an exponent
    std::size_t cut = std::string_view::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    auto imag_of = [](std::string_view im) {
        if (im.empty() || im == "+") return 1.0;
        if (im == "-") return -1.0;
        return parse_real(im);
    };
    if (cut == std::string_view::npos) return {0.0, imag_of(s)};
    return {parse_real(s.substr(0, cut)), imag_of(s.substr(cut))};
}

std::vector<std::complex<double>> parse_point(std::string_view s) {
    std::vector<std::complex<double>> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = s.find(',', start);
        out.push_back(parse_complex(s.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> parse_grid(std::string_view s) {
    std::vector<double> out;
    for (const auto& c : parse_point(s)) {
        if (c.imag() != 0.0) throw UsageError("t grid values must be real");
        out.push_back(c.real());
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (auto h = v.find('#'); h != std::string_view::npos) v = v.substr(0, h);
        v = trim(v);
        if (v.empty()) continue;
        auto eq = v.find('=');
        if (eq == std::string_view::npos || trim(v.substr(0, eq)).empty())
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key(trim(v.substr(0, eq)));
        std::string val(trim(v.substr(eq + 1)));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        out.emplace_back(std::move(key), std::move(val));
    }
    return out;
}

namespace {

enum class Format { table, json, csv };

struct Common {
    std::string format;
    std::string output;
    std::string config;
};

struct QuadFlags {
    double rel_tol = QuadratureConfig{}.rel_tol;
    int max_panels = QuadratureConfig{}.max_panels;
    std::string path = "auto";

    void add(CLI::App* app) {
        app->add_option("--rel-tol", rel_tol, "quadrature relative tolerance")->capture_default_str();
        app->add_option("--max-panels", max_panels, "quadrature panel budget")->capture_default_str();
        app->add_option("--path", path, "subelliptic integration path")
            ->check(CLI::IsMember({"auto", "direct", "substitution"}))
            ->capture_default_str();
    }

    QuadratureConfig config() const {
        QuadratureConfig c;
        c.rel_tol = rel_tol;
        c.max_panels = max_panels;
        c.path = path == "direct" ? QuadPath::direct : path == "substitution" ? QuadPath::substitution : QuadPath::automatic;
        c.validate();
        return c;
    }

    HeisenbergConfig heis() const {
        HeisenbergConfig h;
        h.quad.rel_tol = std::max(rel_tol, 1e-14);
        h.quad.max_panels = std::max(max_panels, h.quad.max_panels);
        return h;
    }
};

Format resolve_format(const std::string& f, Format fallback) {
    if (f.empty()) return fallback;
    if (f == "table") return Format::table;
    if (f == "json") return Format::json;
    if (f == "csv") return Format::csv;
    throw UsageError("unknown format '" + f + "'");
}

std::string fd(double v) { return format_double(v); }

std::string cplx_str(cplx c) {
    if (c.imag() == 0.0) return fd(c.real());
    return fd(c.real()) + (std::signbit(c.imag()) ? "-" : "+") + fd(std::abs(c.imag())) + "i";
}

json cplx_json(cplx c) { return json::array({c.real(), c.imag()}); }

std::string suite_table(const SuiteReport& rep) {
    std::ostringstream os;
    for (const auto& e : rep.entries) {
        const char* tag = !e.enforced ? "info" : e.passed ? "pass" : "FAIL";
        os << tag << "  " << e.group << '/' << e.name << "  value " << fd(e.value) << "  threshold "
           << fd(e.threshold);
        if (!e.detail.empty()) os << "  " << e.detail;
        os << '\n';
    }
    os << (rep.passed() ? "suite passed\n" : "suite FAILED\n");
    return os.str();
}

std::string suite_csv(const SuiteReport& rep) {
    std::ostringstream os;
    os << "name,group,passed,enforced,value,threshold\n";
    for (const auto& e : rep.entries)
        os << e.name << ',' << e.group << ',' << e.passed << ',' << e.enforced << ',' << fd(e.value) << ','
           << fd(e.threshold) << '\n';
    return os.str();
}

std::string convergence_table(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "word '" << rep.word << "' target " << cplx_str(rep.target) << (rep.degenerate ? " (absolute error)" : "")
       << '\n';
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        os << "t " << fd(r.t) << "  scaled " << cplx_str(r.scaled) << "  err " << fd(rep.err(i));
        if (r.has_cross) os << "  cross gap " << fd(r.cross_gap);
        os << '\n';
    }
    os << "monotone " << (rep.monotone ? "yes" : "no") << ", final error " << fd(rep.final_err) << ", slope "
       << fd(rep.slope) << '\n'
       << (rep.passed ? "converged\n" : "NOT converged\n");
    return os.str();
}

// Adds --key=value for every config key the command line does not set.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    std::set<std::string> given;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        std::string name = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
        given.insert(name);
        if (name == "config") {
            if (auto eq = a.find('='); eq != std::string::npos)
                path = a.substr(eq + 1);
            else if (i + 1 < args.size())
                path = args[i + 1];
        }
    }
    if (path.empty()) return args;
    for (auto& [k, v] : read_config(path))
        if (!given.count(k)) args.push_back("--" + k + "=" + v);
    return args;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heat kernels and Hermite functions on SU(2), CR spheres and Heisenberg groups", "subrk"};
    app.fallthrough();
    app.require_subcommand(1);
    Common common;
    app.add_option("--format", common.format, "output format: table, json or csv");
    app.add_option("--output", common.output, "write the result to this file instead of stdout");
    app.add_option("--config", common.config, "key=value file; command-line flags take precedence");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "evaluate a heat kernel or its derivatives");
    kernel->require_subcommand(1);

    std::string rspace = "su2";
    int rd = 1, rorder = 0;
    double rt = 1.0, rx = 0.0;
    RiemannianConfig rcfg;
    auto* riem = kernel->add_subcommand("riemannian", "Riemannian kernel q_t as a function of x = cos(distance)");
    riem->add_option("--space", rspace, "su2 or sphere")->check(CLI::IsMember({"su2", "sphere"}))->capture_default_str();
    riem->add_option("--d", rd, "sphere dimension index (S^{2d+1})")->capture_default_str();
    riem->add_option("--t", rt, "time")->capture_default_str();
    riem->add_option("--x", rx, "cos of the distance; x > 1 continues to imaginary distance")->required();
    riem->add_option("--order", rorder, "x-derivative order")->capture_default_str();
    riem->add_option("--kmax", rcfg.kmax, "remainder terms")->capture_default_str();
    riem->add_flag("!--no-remainder", rcfg.include_remainder, "leading term only");

    std::string sspace = "su2";
    SubellipticPoint spt;
    int sdr = 0, sdz = 0;
    QuadFlags squad;
    auto* sub = kernel->add_subcommand("subelliptic", "subelliptic kernel p_t(r, z) and its (r, z) derivatives");
    sub->add_option("--space", sspace, "su2 or sphere")->check(CLI::IsMember({"su2", "sphere"}))->capture_default_str();
    sub->add_option("--d", spt.d, "sphere dimension index")->capture_default_str();
    sub->add_option("--t", spt.t, "time")->capture_default_str();
    sub->add_option("--r", spt.r, "radial coordinate")->required();
    sub->add_option("--z", spt.z, "vertical coordinate")->required();
    sub->add_option("--dr", sdr, "r-derivative order")->capture_default_str();
    sub->add_option("--dz", sdz, "z-derivative order")->capture_default_str();
    squad.add(sub);

    HeisenbergParams hp;
    double hr = 0.0, hz = 0.0;
    int hdr = 0, hdz = 0;
    QuadFlags hquad;
    auto* heis = kernel->add_subcommand("heisenberg", "Heisenberg kernel h_t(r, z) and its (r, z) derivatives");
    heis->add_option("--d", hp.d, "dimension index (H^{2d+1})")->capture_default_str();
    heis->add_option("--t", hp.t, "time")->capture_default_str();
    heis->add_option("--r", hr, "radial coordinate |x + iy|")->required();
    heis->add_option("--z", hz, "vertical coordinate")->required();
    heis->add_option("--dr", hdr, "r-derivative order")->capture_default_str();
    heis->add_option("--dz", hdz, "z-derivative order")->capture_default_str();
    hquad.add(heis);

    // hermite
    std::string hspace = "su2", hword, hpoint;
    int hd = 1;
    double ht = 1.0;
    QuadFlags hfquad;
    auto* herm = app.add_subcommand("hermite", "Hermite function (word applied to the kernel) / kernel");
    herm->add_option("--space", hspace, "su2, sphere or heisenberg")
        ->check(CLI::IsMember({"su2", "sphere", "heisenberg"}))
        ->capture_default_str();
    herm->add_option("--d", hd, "dimension index")->capture_default_str();
    herm->add_option("--word", hword, "comma-separated letters, e.g. X,Y or T1,T0; empty for the identity");
    herm->add_option("--t", ht, "time")->capture_default_str();
    herm->add_option("--point", hpoint,
                     "su2: r,theta,z; sphere: w_1,...,w_d,z (complex as a+bi); heisenberg: x_1..x_d,y_1..y_d,z")
        ->required();
    hfquad.add(herm);

    // converge
    std::string cspace = "su2", cword, cpoint, cgrid;
    int cd = 1;
    ConvergenceConfig ccfg;
    bool no_cross = false;
    auto* conv = app.add_subcommand("converge", "small-time convergence of scaled Hermite functions");
    conv->add_option("--space", cspace, "su2 or sphere")->check(CLI::IsMember({"su2", "sphere"}))->capture_default_str();
    conv->add_option("--d", cd, "sphere dimension index")->capture_default_str();
    conv->add_option("--word", cword, "comma-separated letters; empty compares kernels");
    conv->add_option("--point", cpoint, "su2: r,theta,z; sphere: w_1,...,w_d,z")->required();
    conv->add_option("--t-grid", cgrid, "strictly decreasing comma-separated times");
    conv->add_option("--rel-tol", ccfg.rel_tol, "final relative error bound")->capture_default_str();
    conv->add_option("--abs-tol", ccfg.degenerate_abs_tol, "final absolute error bound for near-zero targets")
        ->capture_default_str();
    conv->add_option("--window", ccfg.monotone_window, "points over which the error must decrease")
        ->capture_default_str();
    conv->add_option("--cross-tol", ccfg.cross_tol, "d = 1 sphere vs SU(2) agreement")->capture_default_str();
    conv->add_option("--threads", ccfg.threads, "worker threads over the t grid")->capture_default_str();
    conv->add_flag("--no-cross", no_cross, "skip the d = 1 SU(2) cross-check");

    // suites
    LemmaConfig lcfg;
    auto* lem = app.add_subcommand("verify-lemmas", "check the special-function limits and bounds");
    lem->add_option("--max-order", lcfg.max_order, "highest derivative order for the bound checks")
        ->capture_default_str();

    bool skip_norm = false;
    QuadFlags pquad;
    auto* prop = app.add_subcommand("verify-properties", "check identities and invariants of the kernels");
    prop->add_flag("--skip-normalization", skip_norm, "omit the SU(2) mass integrals (the slowest check)");
    pquad.add(prop);

    std::vector<std::string> args(argv + 1, argv + argc);
    int code = 0;
    try {
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    }

    std::string text;
    try {
        if (riem->parsed()) {
            Format f = resolve_format(common.format, Format::table);
            if (rorder < 0) throw UsageError("--order must be non-negative");
            LogScaled ls = rspace == "su2" ? q_su2_derivs(rt, rx, rorder, rcfg) : q_sphere(rt, rd, rx, rorder, rcfg);
            double v = ls.value(static_cast<std::size_t>(rorder));
            if (f == Format::json) {
                json j;
                j["schema"] = 1;
                j["kind"] = "riemannian";
                j["space"] = rspace;
                j["d"] = rspace == "su2" ? 1 : rd;
                j["t"] = rt;
                j["x"] = rx;
                j["order"] = rorder;
                j["value"] = v;
                j["log_scale"] = ls.log_scale;
                j["mantissa"] = ls.m[static_cast<std::size_t>(rorder)];
                text = j.dump(2) + "\n";
            } else if (f == Format::csv) {
                text = "value,log_scale,mantissa\n" + fd(v) + "," + fd(ls.log_scale) + "," +
                       fd(ls.m[static_cast<std::size_t>(rorder)]) + "\n";
            } else {
                text = fd(v) + "\n";
            }
        } else if (sub->parsed()) {
            Format f = resolve_format(common.format, Format::table);
            Space space = sspace == "su2" ? Space::su2 : Space::sphere;
            if (space == Space::su2) spt.d = 1;
            spt.validate();
            QuadratureConfig qc = squad.config();
            if (sdr < 0 || sdz < 0) throw UsageError("derivative orders must be non-negative");
            double value = 0.0, errv = 0.0, imag = 0.0;
            bool contour = qc.path == QuadPath::automatic && sdr == 0 && sdz == 0 && spt.d == 1 &&
                           spt.z * spt.z / (4.0 * spt.t) > 2.0;
            if (contour) {
                ContourValue cv = p_contour(space, spt, qc);
                value = cv.value;
                errv = cv.err;
            } else {
                SubellipticTable tab = p_deriv_table(space, spt, sdr, sdz, qc);
                value = tab.at(sdr, sdz);
                errv = tab.err_at(sdr, sdz);
                imag = tab.imag_residual;
            }
            double split = branch_split(spt.r);
            if (f == Format::json) {
                json j;
                j["schema"] = 1;
                j["kind"] = "subelliptic";
                j["space"] = sspace;
                j["d"] = spt.d;
                j["t"] = spt.t;
                j["r"] = spt.r;
                j["z"] = spt.z;
                j["dr"] = sdr;
                j["dz"] = sdz;
                j["value"] = value;
                j["err_estimate"] = errv;
                j["branch_split_lambda"] = std::isfinite(split) ? json(split) : json(nullptr);
                j["imag_residual"] = imag;
                j["path"] = contour ? "contour" : "real_axis";
                text = j.dump(2) + "\n";
            } else if (f == Format::csv) {
                text = "value,err_estimate,branch_split_lambda,imag_residual\n" + fd(value) + "," + fd(errv) + "," +
                       fd(split) + "," + fd(imag) + "\n";
            } else {
                text = fd(value) + " ± " + fd(errv) + "\n";
            }
        } else if (heis->parsed()) {
            Format f = resolve_format(common.format, Format::table);
            hp.validate();
            if (hdr < 0 || hdz < 0) throw UsageError("derivative orders must be non-negative");
            DerivTable tab = h_deriv_table(hp, hr, hz, hdr, hdz, hquad.heis());
            double value = tab.at(hdr, hdz), errv = tab.err_at(hdr, hdz);
            if (f == Format::json) {
                json j;
                j["schema"] = 1;
                j["kind"] = "heisenberg";
                j["d"] = hp.d;
                j["t"] = hp.t;
                j["r"] = hr;
                j["z"] = hz;
                j["dr"] = hdr;
                j["dz"] = hdz;
                j["value"] = value;
                j["err_estimate"] = errv;
                j["imag_residual"] = tab.imag_residual;
                text = j.dump(2) + "\n";
            } else if (f == Format::csv) {
                text = "value,err_estimate,imag_residual\n" + fd(value) + "," + fd(errv) + "," +
                       fd(tab.imag_residual) + "\n";
            } else {
                text = fd(value) + " ± " + fd(errv) + "\n";
            }
        } else if (herm->parsed()) {
            Format f = resolve_format(common.format, Format::table);
            Alphabet a = parse_alphabet(hspace);
            int d = a == Alphabet::su2 ? 1 : hd;
            LieWord w = LieWord::parse(a, d, hword);
            HermiteConfig hc;
            hc.quad = hfquad.config();
            hc.heis = hfquad.heis();
            auto pt = parse_point(hpoint);
            cplx v = hermite(a, w, ht, pt, hc);
            if (f == Format::json) {
                json j;
                j["schema"] = 1;
                j["kind"] = "hermite";
                j["space"] = hspace;
                j["d"] = d;
                j["word"] = w.to_string();
                j["t"] = ht;
                auto p = json::array();
                for (const cplx& c : pt) p.push_back(cplx_json(c));
                j["point"] = p;
                j["value"] = cplx_json(v);
                text = j.dump(2) + "\n";
            } else if (f == Format::csv) {
                text = "real,imag\n" + fd(v.real()) + "," + fd(v.imag()) + "\n";
            } else {
                text = cplx_str(v) + "\n";
            }
        } else if (conv->parsed()) {
            Format f = resolve_format(common.format, Format::csv);
            if (!cgrid.empty()) ccfg.t_grid = parse_grid(cgrid);
            ccfg.cross_check = !no_cross;
            auto pt = parse_point(cpoint);
            ConvergenceReport rep;
            if (cspace == "su2") {
                if (pt.size() != 3) throw UsageError("su2 point is r,theta,z");
                for (const cplx& c : pt)
                    if (c.imag() != 0.0) throw UsageError("su2 coordinates are real");
                rep = converge_su2(LieWord::parse(Alphabet::su2, 1, cword), pt[0].real(), pt[1].real(), pt[2].real(),
                                   ccfg);
            } else {
                if (static_cast<int>(pt.size()) != cd + 1) throw UsageError("sphere point is w_1,...,w_d,z");
                if (pt.back().imag() != 0.0) throw UsageError("z is real");
                std::vector<cplx> wpt(pt.begin(), pt.end() - 1);
                rep = converge_sphere(LieWord::parse(Alphabet::sphere, cd, cword), wpt, pt.back().real(), ccfg);
            }
            text = f == Format::json ? to_json(rep) : f == Format::csv ? to_csv(rep) : convergence_table(rep);
            if (!rep.passed) code = static_cast<int>(ErrorCode::suite);
        } else if (lem->parsed() || prop->parsed()) {
            Format f = resolve_format(common.format, Format::table);
            SuiteReport rep;
            if (lem->parsed()) {
                rep = lemma_suite(lcfg);
            } else {
                PropertyConfig pc;
                pc.quad = pquad.config();
                pc.heis = pquad.heis();
                pc.include_normalization = !skip_norm;
                rep = property_suite(pc);
            }
            text = f == Format::json ? to_json(rep) : f == Format::csv ? suite_csv(rep) : suite_table(rep);
            if (!rep.passed()) code = static_cast<int>(ErrorCode::suite);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorCode::numerical);
    }

    if (common.output.empty()) {
        out << text;
    } else {
        std::ofstream file(common.output);
        if (!file || !(file << text)) {
            err << "error: cannot write '" << common.output << "'\n";
            return static_cast<int>(ErrorCode::usage);
        }
    }
    if (code == static_cast<int>(ErrorCode::suite)) err << "suite failure\n";
    return code;
}

}  // namespace subrk::cli
