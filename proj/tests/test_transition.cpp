#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace basym;
using Catch::Matchers::WithinRel;

TEST_CASE("epsilon expansion", "[transition]") {
    SECTION("diagonal equals Meissel Third") {
        for (double n : {100.0, 300.0, 1000.0}) {
            INFO("n=" << n);
            CHECK_THAT(epsilon_expansion(BesselQuery(n, n)).value, WithinRel(meissel_third(n, 7).value, 1e-12));
        }
    }
    SECTION("accuracy inside the window") {
        for (double x : {295.0, 300.5, 305.0, 310.0}) {
            INFO("x=" << x);
            CHECK(test::rel(epsilon_expansion(BesselQuery(300, x)).value, test::oracle(300, x)) < 1e-4);
        }
        CHECK(test::rel(epsilon_expansion(BesselQuery(300, 305)).value, test::oracle(300, 305)) < 1e-10);
    }
    SECTION("outside the window") {
        try {
            epsilon_expansion(BesselQuery(300, 330));
            FAIL("expected OutOfValidity");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OutOfValidity);
        }
        CHECK_THROWS_AS(epsilon_expansion(BesselQuery(300, 270)), Error);
        // a wider radius is honoured
        CHECK_NOTHROW(epsilon_expansion(BesselQuery(300, 330), 15, 5.0));
        CHECK_THROWS_AS(epsilon_expansion(BesselQuery(300, 300), 16), Error);
    }
    SECTION("large order is finite and consistent with Watson") {
        for (double x : {1000020.0, 1000100.0}) {
            const BesselQuery q(1e6, x);
            const auto e = epsilon_expansion(q);
            const auto w = watson_above(q);
            INFO("x=" << x);
            CHECK(std::isfinite(e.value));
            CHECK(test::rel(e.value, w.value) < 1e-4);
        }
    }
    SECTION("terms vanish where sin((m+1) pi / 3) does") {
        const double a = epsilon_expansion(BesselQuery(300, 305), 1).value;
        const double b = epsilon_expansion(BesselQuery(300, 305), 2).value;
        CHECK(a == b);
    }
}

TEST_CASE("Watson below", "[transition]") {
    for (double nu : {100.0, 300.0, 1000.0}) {
        const double u = std::cbrt(nu);
        for (double d : {0.5, 2.0, 5.0}) {
            const double x = nu - d * u;
            const auto r = watson_below(BesselQuery(nu, x));
            INFO("nu=" << nu << " x=" << x);
            CHECK(r.rigorous);
            CHECK(r.method == Method::WatsonBelow);
            CHECK(std::fabs(r.value - test::oracle(nu, x)) <= *r.est_error);
            CHECK(*r.est_error <= 3.0 / nu);
        }
    }
    CHECK_THROWS_AS(watson_below(BesselQuery(300, 300)), Error);
}

TEST_CASE("Watson above", "[transition]") {
    for (double nu : {100.0, 300.0, 1000.0}) {
        const double u = std::cbrt(nu);
        for (double d : {0.5, 2.0, 5.0}) {
            const double x = nu + d * u;
            const auto r = watson_above(BesselQuery(nu, x));
            INFO("nu=" << nu << " x=" << x);
            CHECK(r.rigorous);
            CHECK(std::fabs(r.value - test::oracle(nu, x)) <= 24.0 / nu);
        }
    }
    // continuity onto the diagonal
    CHECK(test::rel(watson_above(BesselQuery(300, 300.0001)).value, meissel_third(300).value) < 1e-4);
    try {
        watson_above(BesselQuery(300, 400));
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfRange);
    }
    CHECK_THROWS_AS(watson_above(BesselQuery(300, 299)), Error);
}

TEST_CASE("Watson bounds", "[transition]") {
    CHECK(WatsonBound::above(300) == 24.0 / 300);
    CHECK(WatsonBound::below(300, 299.999) <= 3.0 / 300);
    CHECK(WatsonBound::below(300, 200) < WatsonBound::below(300, 290));
}
