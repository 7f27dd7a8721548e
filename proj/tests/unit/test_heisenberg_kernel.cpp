#include "doctest.h"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "subrk/errors.hpp"
#include "subrk/heisenberg_kernel.hpp"

using namespace subrk;

namespace {

const nlohmann::json& reference() {
    static const nlohmann::json j = [] {
        std::ifstream in(SUBRK_TEST_DATA "/reference_values.json");
        return nlohmann::json::parse(in);
    }();
    return j;
}

}  // namespace

TEST_CASE("value at the origin is 1/32") {
    // 2 / (4 pi)^2 * int_0^inf lambda / sinh(lambda) = 2 / (16 pi^2) * pi^2 / 4
    KernelValue v = h_kernel_value({1, 1.0}, 0.0, 0.0);
    CHECK(std::abs(v.value - 1.0 / 32.0) < 1e-12);
    CHECK(v.err < 1e-10);
}

TEST_CASE("mixed derivatives against mpmath") {
    for (const auto& row : reference()["h"]) {
        const int d = row["d"], a = row["a"], c = row["c"];
        const double t = row["t"], r = row["r"], z = row["z"], want = row["value"];
        CAPTURE(d);
        CAPTURE(a);
        CAPTURE(c);
        const double got = h_derivs({d, t}, r, z, a, c);
        if (std::abs(want) < 1e-12)
            CHECK(std::abs(got - want) < 1e-14);
        else
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("one table serves every order") {
    DerivTable tab = h_deriv_table({2, 0.7}, 0.9, -0.4, 3, 2);
    for (int a = 0; a <= 3; ++a)
        for (int c = 0; c <= 2; ++c) CHECK(tab.at(a, c) == doctest::Approx(h_derivs({2, 0.7}, 0.9, -0.4, a, c)));
}

TEST_CASE("dilation") {
    for (int d : {1, 2, 3})
        for (double t : {0.01, 0.3, 4.0}) {
            const double r = 0.8, z = 0.6;
            const double lhs = h_kernel({d, t}, std::sqrt(t) * r, t * z);
            const double rhs = std::pow(t, -(d + 1)) * h_kernel({d, 1.0}, r, z);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
}

TEST_CASE("parity: odd z-derivatives vanish at z = 0, odd r-derivatives at r = 0") {
    CHECK(std::abs(h_derivs({1, 1.0}, 0.7, 0.0, 0, 1)) < 1e-15);
    CHECK(std::abs(h_derivs({1, 1.0}, 0.7, 0.0, 1, 3)) < 1e-15);
    CHECK(std::abs(h_derivs({2, 1.0}, 0.0, 0.4, 1, 0)) < 1e-15);
    CHECK(h_kernel({1, 1.0}, 0.5, 0.3) == doctest::Approx(h_kernel({1, 1.0}, 0.5, -0.3)));
}

TEST_CASE("integrand weights are smooth at lambda t -> 0") {
    for (double lt : {1e-3, 1e-6})
        for (double t : {0.5, 2.0}) {
            const double lam = lt / t;
            CHECK(h_sinh_factor(t, lam * (1 - 1e-9)) == doctest::Approx(h_sinh_factor(t, lam * (1 + 1e-9))).epsilon(1e-12));
            CHECK(h_coth_factor(t, lam * (1 - 1e-9)) == doctest::Approx(h_coth_factor(t, lam * (1 + 1e-9))).epsilon(1e-12));
        }
    CHECK(h_sinh_factor(2.0, 0.0) == doctest::Approx(0.5));
    CHECK(h_coth_factor(2.0, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("bad parameters") {
    CHECK_THROWS_AS(h_kernel({0, 1.0}, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(h_kernel({1, -1.0}, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(h_derivs({1, 1.0}, 0.0, 0.0, 9, 0), UsageError);
}
