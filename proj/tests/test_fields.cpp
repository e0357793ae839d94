#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wente/counterexample.hpp"
#include "wente/dyadic.hpp"
#include "wente/error.hpp"
#include "wente/fields.hpp"

using namespace wente;
using std::numbers::pi;

TEST_CASE("parsing") {
    const auto t = parse_descriptor(" 0.5*x + monomial:2,1 +2*cos:3");
    REQUIRE(t.size() == 3u);
    CHECK(t[0].coef == 0.5);
    CHECK(t[0].name == "x");
    CHECK(t[1].coef == 1.0);
    CHECK(t[1].params == std::vector<double>{2.0, 1.0});
    CHECK(t[2].coef == 2.0);
    CHECK(t[2].name == "cos");
    CHECK(parse_descriptor("-1*y")[0].coef == -1.0);
    CHECK(parse_descriptor("rpowcos:2.5")[0].params.size() == 1u);
}

TEST_CASE("evaluation") {
    const double r = 0.3, t = 1.1, x = r * std::cos(t), y = r * std::sin(t);
    auto ev = [&](const std::string& d) { return evaluate(parse_descriptor(d), r, t); };
    CHECK(ev("one") == 1.0);
    CHECK(ev("const:-2.5") == -2.5);
    CHECK(ev("x") == doctest::Approx(x));
    CHECK(ev("y") == doctest::Approx(y));
    CHECK(ev("r2") == doctest::Approx(r * r));
    CHECK(ev("rpow:1.5") == doctest::Approx(std::pow(r, 1.5)));
    CHECK(ev("rpowcos:2,3") == doctest::Approx(r * r * std::cos(3 * t)));
    CHECK(ev("rpowcos:2") == doctest::Approx(r * r * std::cos(t)));
    CHECK(ev("log") == doctest::Approx(std::log(r)));
    CHECK(ev("cos:2") == doctest::Approx(std::cos(2 * t)));
    CHECK(ev("sin:2") == doctest::Approx(std::sin(2 * t)));
    CHECK(ev("monomial:2,1") == doctest::Approx(x * x * y));
    CHECK(ev("h") == doctest::Approx(x / (r * r) - x));
    CHECK(ev("f:0.5") == doctest::Approx(x * std::pow(r, 0.5)));
    CHECK(ev("a_alpha:0.5") == doctest::Approx(2.5 * std::pow(r, 0.5)));
    CHECK(ev("psi:1") == doctest::Approx(cutoff_psi(1)(r)));
    CHECK(ev("chi:1") == doctest::Approx(cutoff_chi(1)(r)));
    CHECK(ev("h_alpha:1") == doctest::Approx(glued_value(r, t, 1.0)));
    CHECK(ev("a_tilde:1") == doctest::Approx(a_tilde_value(r, 1.0)));
    CHECK(ev("2*x+-1*x") == doctest::Approx(x));
}

TEST_CASE("sampling is linear in the descriptor") {
    auto g = make_grid(32, 4, 8, 2);
    const ScalarField a = sample("x+0.5*cos:2", g);
    const ScalarField b = sample("x", g);
    const ScalarField c = sample("cos:2", g);
    CHECK(max_abs(a - (b + 0.5 * c)) < 1e-15);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(parse_descriptor(""), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("x++y"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("nope"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("cos"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("x:1"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("rpowcos:1,2,3"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("abc*x"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("chi:1.5"), ParameterError);
    CHECK_THROWS_AS(parse_descriptor("psi:-1"), ParameterError);
    auto g = make_grid(32, 4, 8, 2);
    CHECK_THROWS_AS(sample("1e308*rpow:-3", g), EvaluationError);
    try {
        sample("1e308*rpow:-3", g);
    } catch (const EvaluationError& e) {
        CHECK(std::string(e.what()).find("node (0, 0)") != std::string::npos);
    }
}

TEST_CASE("catalog") {
    const auto names = catalog();
    CHECK(names.size() == 18u);
    for (const char* n : {"one", "x", "y", "h", "h_alpha", "a_tilde", "psi", "chi", "monomial"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
}
