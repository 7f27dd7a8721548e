#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "subrk/errors.hpp"
#include "subrk/harness.hpp"
#include "subrk/operator_algebra.hpp"

using namespace subrk;

namespace {

const Letter X{LetterKind::X, 0}, Y{LetterKind::Y, 0}, Z{LetterKind::Z, 0};

double h_ref(int a, int c) {
    std::ifstream in(SUBRK_TEST_DATA "/reference_values.json");
    const nlohmann::json ref = nlohmann::json::parse(in);
    for (const auto& row : ref["h"])
        if (row["d"] == 1 && row["t"] == 1.0 && row["r"] == 1.0 && row["z"] == 0.5 && row["a"] == a && row["c"] == c)
            return row["value"];
    FAIL("reference row missing");
    return 0.0;
}

LieWord random_word(std::mt19937& rng, Alphabet a, int d, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::vector<Letter> ls;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
        if (a == Alphabet::su2) {
            const Letter pick[] = {X, Y, Z};
            ls.push_back(pick[std::uniform_int_distribution<int>(0, 2)(rng)]);
        } else {
            ls.push_back({LetterKind::T, std::uniform_int_distribution<int>(0, d)(rng)});
        }
    }
    return LieWord(a, d, ls);
}

}  // namespace

TEST_CASE("expression trees differentiate and evaluate") {
    const Expr x = Expr::var(0), y = Expr::var(1);
    const Expr f = sin(x) * exp(y) + pow(x, 3.0) / cos(y);
    const std::vector<cplx> at{0.4, -0.3};
    const double fx = std::cos(0.4) * std::exp(-0.3) + 3 * 0.16 / std::cos(-0.3);
    CHECK(f.diff(0).eval(at).real() == doctest::Approx(fx).epsilon(1e-14));
    const double fy = std::sin(0.4) * std::exp(-0.3) + 0.064 * std::sin(-0.3) / std::pow(std::cos(-0.3), 2);
    CHECK(f.diff(1).eval(at).real() == doctest::Approx(fy).epsilon(1e-14));
    CHECK(f.diff(0).diff(1).eval(at).real() == doctest::Approx(f.diff(1).diff(0).eval(at).real()).epsilon(1e-14));
    CHECK((x * Expr(0.0)).is_zero());
    CHECK((x - x).is_zero());
    CHECK(atan(x).diff(0).eval(at).real() == doctest::Approx(1 / (1 + 0.16)));
    CHECK(tan(x).diff(0).eval(at).real() == doctest::Approx(1 / std::pow(std::cos(0.4), 2)));
}

TEST_CASE("su2 structure constants") {
    const Frames f = su2_frame();
    CHECK(equivalent(commutator(f[X], f[Y]), f[Z].times(Expr(2.0)), f.chart));
    CHECK(equivalent(commutator(f[Y], f[Z]), f[X].times(Expr(2.0)), f.chart));
    CHECK(equivalent(commutator(f[Z], f[X]), f[Y].times(Expr(2.0)), f.chart));
    CHECK_FALSE(equivalent(commutator(f[X], f[Y]), f[Z], f.chart));
}

TEST_CASE("Heisenberg relations") {
    for (int d : {1, 2, 3}) {
        const Frames h = heisenberg_frames(d);
        const Letter z0{LetterKind::HZ0, 0};
        const DiffOp zero(h.chart.nvars());
        for (int j = 1; j <= d; ++j) {
            const Letter xj{LetterKind::HX, j}, yj{LetterKind::HY, j};
            CHECK(equivalent(commutator(h[xj], h[yj]), h[z0].times(Expr(2.0)), h.chart));
            CHECK(equivalent(commutator(h[xj], h[z0]), zero, h.chart));
            for (int k = 1; k <= d; ++k)
                if (k != j) {
                    CHECK(equivalent(commutator(h[xj], h[{LetterKind::HY, k}]), zero, h.chart));
                    CHECK(equivalent(commutator(h[xj], h[{LetterKind::HX, k}]), zero, h.chart));
                }
            const DiffOp zj = (h[yj] - h[xj].times(Expr(cplx(0.0, 1.0)))).times(Expr(0.5));
            CHECK(equivalent(h[{LetterKind::HZ, j}], zj, h.chart));
        }
    }
}

TEST_CASE("compiling words is a homomorphism") {
    std::mt19937 rng(20240611);
    const Frames f = su2_frame();
    const Frames s = sphere_frames(2);
    for (int trial = 0; trial < 12; ++trial) {
        const LieWord u = random_word(rng, Alphabet::su2, 1, 2), v = random_word(rng, Alphabet::su2, 1, 2);
        CHECK(equivalent(compile_word(f, u.concat(v)), compile_word(f, u).compose(compile_word(f, v)), f.chart, 1e-10));
        const LieWord a = random_word(rng, Alphabet::sphere, 2, 2), b = random_word(rng, Alphabet::sphere, 2, 2);
        CHECK(equivalent(compile_word(s, a.concat(b)), compile_word(s, a).compose(compile_word(s, b)), s.chart, 1e-10));
    }
}

TEST_CASE("Hermite functions: trivial cases") {
    const std::vector<cplx> pt{0.5, 0.0, 0.3};
    CHECK(hermite(Alphabet::su2, LieWord::su2(""), 0.5, pt) == cplx(1.0, 0.0));
    for (double th : {0.0, 0.8, 2.0}) {
        const std::vector<cplx> p0{0.6, th, 0.0};
        CHECK(std::abs(hermite(Alphabet::su2, LieWord::su2("Z"), 0.4, p0)) < 1e-10);
    }
}

TEST_CASE("Z-words do not see theta") {
    for (const char* w : {"Z", "Z,Z"}) {
        const cplx a = hermite(Alphabet::su2, LieWord::su2(w), 0.4, std::vector<cplx>{0.6, 0.0, 0.3});
        const cplx b = hermite(Alphabet::su2, LieWord::su2(w), 0.4, std::vector<cplx>{0.6, 2.1, 0.3});
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
}

TEST_CASE("su2 Hermite functions are real") {
    for (const char* w : {"X", "X,Y", "Y,Z,X"}) {
        const cplx k = hermite(Alphabet::su2, LieWord::su2(w), 0.3, std::vector<cplx>{0.7, 0.9, 0.4});
        CHECK(std::abs(k.imag()) <= 1e-10 * std::abs(k));
    }
}

TEST_CASE("Heisenberg X at (1, 0, 0.5) is d_r log h") {
    const double want = h_ref(1, 0) / h_ref(0, 0);
    const cplx k = hermite(Alphabet::heisenberg, LieWord::parse(Alphabet::heisenberg, 1, "X"), 1.0,
                           std::vector<cplx>{1.0, 0.0, 0.5});
    CHECK(k.real() == doctest::Approx(want).epsilon(1e-10));
    // finite difference of log h
    const double e = 1e-4;
    auto logh = [](double r) { return std::log(h_kernel({1, 1.0}, r, 0.5)); };
    CHECK(k.real() == doctest::Approx((logh(1 + e) - logh(1 - e)) / (2 * e)).epsilon(1e-7));
}

TEST_CASE("d = 1 sphere frames written on SU(2)") {
    const Frames sf = sphere_frames_on_su2();
    const Frames s1 = sphere_frames(1);
    const cplx w(0.3, -0.4);
    const double z = 0.2, t = 0.5;
    const auto su2_pt = sphere_to_su2_point(w, z);
    for (const char* word : {"T1", "T0", "T1,T0", "T0,T1,T1"}) {
        const LieWord lw = LieWord::parse(Alphabet::sphere, 1, word);
        const cplx a = hermite(Alphabet::sphere, lw, t, std::vector<cplx>{w, z});
        const cplx b = hermite_of(compile_word(sf, lw), sf.chart, su2_pt, su2_kernel_jet(t));
        CAPTURE(word);
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    }
    CHECK(s1.d == 1);
}

TEST_CASE("scaled frames approach the Heisenberg frames") {
    const Frames h = heisenberg_cylindrical_frame();
    const std::vector<cplx> pt{1.0, 0.3, 0.7};
    double prev = 1e300;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        const Frames s = su2_scaled_frame(t);
        const double gap = std::max(max_coefficient_gap(s[X], h[{LetterKind::HX, 1}], pt),
                                    max_coefficient_gap(s[Y], h[{LetterKind::HY, 1}], pt));
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("word limits") {
    HermiteConfig cfg;
    cfg.max_word = 2;
    CHECK_THROWS_AS(hermite(Alphabet::su2, LieWord::su2("X,Y,Z"), 0.5, std::vector<cplx>{0.5, 0.0, 0.3}, cfg),
                    UsageError);
    CHECK_THROWS_AS(hermite(Alphabet::sphere, LieWord::su2("X"), 0.5, std::vector<cplx>{0.5, 0.3}), UsageError);
}
