#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wente/error.hpp"
#include "wente/fields.hpp"
#include "wente/grid.hpp"
#include "wente/poisson.hpp"

using namespace wente;
using std::numbers::pi;

namespace {

GridPtr ref_grid() { return make_grid(128, 8, 16, 4); }

double max_diff(const ScalarField& a, const ScalarField& b) { return max_abs(a - b); }

}  // namespace

TEST_CASE("constant right-hand side") {
    auto g = ref_grid();
    const auto sol = solve_dirichlet(sample("one", g));
    CHECK(max_diff(sol.phi, sample("0.25*r2+-0.25*one", g)) < 1e-8);
    CHECK(sol.report.boundary_max < 1e-12);
    CHECK(sol.report.residual_l2 < 1e-8);
}

TEST_CASE("J(x, y) drives (r^2 - 1)/4 with sup 1/4") {
    auto g = ref_grid();
    const ScalarField rhs = jacobian(sample("x", g), sample("y", g));
    const ScalarField phi = solve_dirichlet(rhs).phi;
    CHECK(max_abs(phi) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("each angular mode converges at second order") {
    // Lap((1 - r^2) r^m cos(m theta)) = -4 (m + 1) r^m cos(m theta)
    for (int m = 0; m <= 4; ++m) {
        const std::string mm = std::to_string(m);
        const std::string rhs = std::to_string(-4.0 * (m + 1)) + "*rpowcos:" + mm + "," + mm;
        const std::string exact = "rpowcos:" + mm + "," + mm + "+-1*rpowcos:" + std::to_string(m + 2) + "," + mm;
        double e[2];
        for (int n = 0; n < 2; ++n) {
            auto g = make_grid(32, 6, 8 << n, 4);
            e[n] = max_abs(solve_dirichlet(sample(rhs, g)).phi - sample(exact, g));
        }
        CAPTURE(m);
        CHECK(e[1] < 1e-3);
        // the m = 0 closure reproduces quadratics to rounding
        if (e[0] > 1e-10) CHECK(std::log2(e[0] / e[1]) >= 1.9);
    }
}

TEST_CASE("second order convergence on a mixed manufactured solution") {
    auto err = [](int npl) {
        auto g = make_grid(64, 6, npl, 4);
        // phi = (1 - r^2)(x + 1/4 + r^3 cos 3 theta)
        const ScalarField rhs = sample("-8*rpowcos:1,1+-1*one+-16*rpowcos:3,3", g);
        const ScalarField exact = sample("rpowcos:1,1+-1*rpowcos:3,1+0.25*one+-0.25*r2+rpowcos:3,3+-1*rpowcos:5,3", g);
        return relative_l2(solve_dirichlet(rhs).phi, exact);
    };
    const double e1 = err(8), e2 = err(16);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("maximum principle") {
    auto g = ref_grid();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScalarField rhs(g);
    for (double& v : rhs.values) v = u(rng);
    const ScalarField phi = solve_dirichlet(rhs).phi;
    for (double v : phi.values) REQUIRE(v <= 1e-14);
}

TEST_CASE("solver is linear") {
    auto g = ref_grid();
    const ScalarField a = sample("x+monomial:2,2", g), b = sample("cos:3+rpow:1.5", g);
    const ScalarField lhs = solve_dirichlet(2.0 * a + (-3.0) * b).phi;
    const ScalarField rhs = 2.0 * solve_dirichlet(a).phi + (-3.0) * solve_dirichlet(b).phi;
    CHECK(max_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("solver commutes with rotation by one angular step") {
    auto g = ref_grid();
    const ScalarField f = sample("monomial:3,1+0.4*sin:5+y", g);
    ScalarField rotated(g);
    const int nt = g->n_theta();
    for (int i = 0; i < g->n_radial(); ++i)
        for (int k = 0; k < nt; ++k) rotated(i, (k + 1) % nt) = f(i, k);
    const ScalarField p = solve_dirichlet(f).phi, pr = solve_dirichlet(rotated).phi;
    double err = 0.0;
    for (int i = 0; i < g->n_radial(); ++i)
        for (int k = 0; k < nt; ++k) err = std::max(err, std::abs(pr(i, (k + 1) % nt) - p(i, k)));
    CHECK(err < 1e-12);
}

TEST_CASE("newton potential examples") {
    auto g = make_grid(64, 6, 8, 4);
    CHECK(max_abs(newton_potential(ScalarField(g))) == 0.0);
    // for f = 1 the potential at the origin is int_0^1 r log r dr = -1/4
    const ScalarField u = newton_potential(sample("one", g));
    CHECK(u(0, 0) == doctest::Approx(-0.25).epsilon(2e-3));
    // outside a radial source it is (mass / 2 pi) log r
    const ScalarField src = sample("chi:3", g);
    const double mass = integrate(src);
    const ScalarField us = newton_potential(src);
    for (int i = 0; i < g->n_radial(); ++i) {
        if (g->radius(i) < 0.25) continue;
        CHECK(us(i, 5) == doctest::Approx(mass / (2 * pi) * std::log(g->radius(i))).epsilon(1e-6));
    }
}

TEST_CASE("pointwise newton potential matches the full one away from the source") {
    auto g = make_grid(64, 6, 8, 4);
    const ScalarField src = sample("chi:3", g);
    const ScalarField full = newton_potential(src);
    std::vector<std::size_t> targets;
    for (int i = 0; i < g->n_radial(); ++i)
        if (g->radius(i) >= 0.5) targets.push_back(g->index(i, 3));
    const auto at = newton_potential_at(src, targets);
    for (std::size_t t = 0; t < targets.size(); ++t)
        CHECK(at[t] == doctest::Approx(full.values[targets[t]]).epsilon(1e-12));
}

TEST_CASE("harmonic correction") {
    auto g = ref_grid();
    const int nt = g->n_theta();
    std::vector<double> bc(nt);
    for (int k = 0; k < nt; ++k) bc[k] = 2.0 + std::cos(g->theta(k)) - 0.5 * std::cos(2 * g->theta(k));
    const ScalarField v = harmonic_correction(g, bc);
    CHECK(max_diff(v, sample("2*one+rpowcos:1,1+-0.5*rpowcos:2,2", g)) < 1e-12);
    for (int k = 0; k < nt; ++k) CHECK(std::abs(v(g->n_radial() - 1, k) - bc[k]) < 1e-10);
    CHECK_THROWS_AS(harmonic_correction(g, std::vector<double>(nt - 1)), GridMismatchError);
}

TEST_CASE("potential-minus-harmonic oracle improves under refinement") {
    const char* desc = "monomial:2,1+0.5*rpowcos:1,2+-1*y";
    auto coarse = make_grid(32, 5, 8, 4), fine = make_grid(64, 5, 16, 4);
    const double ec = oracle_compare(sample(desc, coarse)).relative_l2;
    const double ef = oracle_compare(sample(desc, fine)).relative_l2;
    CHECK(ef < ec);
    CHECK(ef < 0.05);
}
