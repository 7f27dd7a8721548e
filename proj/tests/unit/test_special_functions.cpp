#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "subrk/errors.hpp"
#include "subrk/special_functions.hpp"

using namespace subrk;

namespace {

const nlohmann::json& reference() {
    static const nlohmann::json j = [] {
        std::ifstream in(SUBRK_TEST_DATA "/reference_values.json");
        return nlohmann::json::parse(in);
    }();
    return j;
}

std::vector<double> ref(const std::string& key) { return reference()[key].get<std::vector<double>>(); }

double odd_double_factorial(int n) {
    double v = 1.0;
    for (int k = 1; k <= 2 * n - 1; k += 2) v *= k;
    return v;
}

}  // namespace

TEST_CASE("arccos^2 and arccosh^2 derivatives against mpmath") {
    const auto a = acos_sq_derivs(0.3, 8);
    const auto want_a = ref("acos_sq_at_0.3");
    for (int k = 0; k <= 8; ++k) CHECK(a[k] == doctest::Approx(want_a[k]).epsilon(1e-12));
    const auto h = acosh_sq_derivs(2.0, 8);
    const auto want_h = ref("acosh_sq_at_2");
    for (int k = 0; k <= 8; ++k) CHECK(h[k] == doctest::Approx(want_h[k]).epsilon(1e-12));
}

TEST_CASE("limits at x = 1") {
    const auto a = acos_sq_derivs(1.0, 10);
    const auto h = acosh_sq_derivs(1.0, 10);
    double fact = 1.0;
    for (int n = 1; n <= 10; ++n) {
        if (n > 1) fact *= n - 1;
        const double mag = 2.0 * fact * fact / odd_double_factorial(n);
        CHECK(std::abs(a[n]) == doctest::Approx(mag).epsilon(1e-12));
        CHECK(std::abs(h[n]) == doctest::Approx(mag).epsilon(1e-12));
        // arccosh^2 = -arccos^2 continued
        CHECK(h[n] == doctest::Approx(-a[n]).epsilon(1e-12));
    }
    for (double K : {1.0, 3.0, 10.0}) {
        const LogScaled f = cosh_family_derivs(K, {1.0, 0.0}, 5);
        double prod = 1.0;
        for (int n = 1; n <= 5; ++n) {
            prod *= K * K + double(n - 1) * (n - 1);
            CHECK(std::abs(f.value(n)) == doctest::Approx(prod / odd_double_factorial(n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("series window edges join the closed forms") {
    for (double x : {0.5, 1.5}) {
        const auto lo = arc_sq_derivs(XArg::from_x(x - 1e-9), 6);
        const auto hi = arc_sq_derivs(XArg::from_x(x + 1e-9), 6);
        for (int k = 0; k <= 6; ++k) CHECK(lo[k] == doctest::Approx(hi[k]).epsilon(1e-7));
        const LogScaled f = cosh_family_derivs(2.5, XArg::from_x(x - 1e-9), 6);
        const LogScaled g = cosh_family_derivs(2.5, XArg::from_x(x + 1e-9), 6);
        for (int k = 0; k <= 6; ++k) CHECK(f.value(k) == doctest::Approx(g.value(k)).epsilon(1e-7));
    }
}

TEST_CASE("K families against mpmath") {
    const double K = 3.0;
    struct Case {
        const char* key;
        double x;
        bool sinc;
    };
    for (const Case c : {Case{"cosh_K_acos_at_0.4", 0.4, false}, Case{"sinhc_K_acos_at_0.4", 0.4, true},
                         Case{"cos_K_acosh_at_1.7", 1.7, false}, Case{"sinc_K_acosh_at_1.7", 1.7, true}}) {
        const auto want = ref(c.key);
        const LogScaled got = c.sinc ? sinc_family_derivs(K, XArg::from_x(c.x), 6) : cosh_family_derivs(K, XArg::from_x(c.x), 6);
        for (int k = 0; k <= 6; ++k) CHECK(got.value(k) == doctest::Approx(want[k]).epsilon(1e-11));
    }
}

TEST_CASE("large K keeps the exponential out of the mantissa") {
    const LogScaled f = cosh_family_derivs(400.0, XArg::from_x(-0.9), 4);
    CHECK(std::isfinite(f.m[4]));
    CHECK(f.log_scale == doctest::Approx(400.0 * std::acos(-0.9)));
    CHECK(f.m[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact polynomial recurrences") {
    for (auto kind : {DerivKind::acos_sq, DerivKind::acosh_sq, DerivKind::cosh_K_acos, DerivKind::cos_K_acosh})
        for (int n = 2; n <= 12; ++n) CHECK(recurrence_identity_holds(kind, n));
    CHECK_THROWS_AS(recurrence_polys(DerivKind::sinhc_K_acos), UsageError);
}

TEST_CASE("Taylor coefficients at x = 1") {
    const double acos_c[] = {0.0, 2.0, 1.0 / 3.0, 4.0 / 45.0, 1.0 / 35.0, 16.0 / 1575.0};
    for (int n = 1; n <= 5; ++n) CHECK(acos_sq_series_coeff(n) == doctest::Approx(acos_c[n]).epsilon(1e-15));
    const double cosh3[] = {1.0, 9.0, 15.0, 13.0, 117.0 / 14.0};
    for (int n = 0; n <= 4; ++n) CHECK(cosh_family_series_coeff(3.0, n) == doctest::Approx(cosh3[n]).epsilon(1e-14));
}

TEST_CASE("combined exponent fuses without overflow") {
    const double t = 0.3, r = 0.4, lambda = 2.0;
    const double a = std::acosh(std::cos(std::sqrt(t) * r) * std::cosh(lambda));
    CHECK(combined_exponent(t, r, lambda) == doctest::Approx((a * a - lambda * lambda) / (4 * t)).epsilon(1e-12));
    // e^{arccosh^2/4t} alone overflows here
    const double v = combined_exponent(1e-4, 1.0, 40.0);
    CHECK(std::isfinite(v));
    CHECK(v < 0.0);
}

TEST_CASE("domain and usage errors") {
    DerivFamily f;
    f.kind = DerivKind::acos_sq;
    CHECK_THROWS_AS(trig_hyp_derivs(f, 1.5, 2), DomainError);
    f.kind = DerivKind::acosh_sq;
    CHECK_THROWS_AS(trig_hyp_derivs(f, 0.5, 2), DomainError);
    f.kind = DerivKind::cosh_K_acos;
    f.K = -1.0;
    CHECK_THROWS_AS(trig_hyp_derivs(f, 0.5, 2), DomainError);
    f.K = 1.0;
    f.max_order = 4;
    CHECK_THROWS_AS(trig_hyp_derivs(f, 0.5, 6), UsageError);
    CHECK(trig_hyp_derivs(f, 0.5, 4).value(0) == doctest::Approx(std::cosh(std::acos(0.5))));
}
