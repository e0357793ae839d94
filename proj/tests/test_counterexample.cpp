#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "wente/counterexample.hpp"
#include "wente/error.hpp"
#include "wente/fields.hpp"
#include "wente/grid.hpp"
#include "wente/poisson.hpp"

using namespace wente;
using std::numbers::pi;

namespace {

GridPtr ref_grid() { return make_grid(128, 8, 16, 4); }

// composite Simpson, n even
double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// angular mean by the trapezoid rule, exact for low trigonometric degree
double angular_mean(const std::function<double(double)>& f, int n = 64) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += f(2 * pi * k / n);
    return s / n;
}

// |grad g|^2 by central differences in Cartesian coordinates
double grad_sq(const std::function<double(double, double)>& g, double r, double t) {
    const double x = r * std::cos(t), y = r * std::sin(t), h = 1e-6 * r;
    auto at = [&](double px, double py) { return g(std::hypot(px, py), std::atan2(py, px)); };
    const double gx = (at(x + h, y) - at(x - h, y)) / (2 * h);
    const double gy = (at(x, y + h) - at(x, y - h)) / (2 * h);
    return gx * gx + gy * gy;
}

double fd_laplacian(const std::function<double(double, double)>& g, double r, double t) {
    const double x = r * std::cos(t), y = r * std::sin(t), h = 1e-4 * r;
    auto at = [&](double px, double py) { return g(std::hypot(px, py), std::atan2(py, px)); };
    return (at(x + h, y) + at(x - h, y) + at(x, y + h) + at(x, y - h) - 4 * at(x, y)) / (h * h);
}

}  // namespace

TEST_CASE("s_alpha and K examples") {
    CHECK(s_alpha(1.0) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(s_alpha(2.0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(k_factor(s_alpha(1.0), 1.0) == doctest::Approx(2.0 * std::sqrt(3.0)));
    CHECK_THROWS_AS(s_alpha(0.0), ParameterError);
    CHECK_THROWS_AS(k_factor(1.0, 1.0), ParameterError);
    // K s^alpha alpha = 2 for every alpha
    for (double a : {2.0, 1.0, 0.3, 1e-3}) CHECK(k_factor(s_alpha(a), a) * std::pow(s_alpha(a), a) * a == doctest::Approx(2.0));
}

TEST_CASE("glued family on the grid") {
    auto g = ref_grid();
    const double alpha = 2.0 / 3.0;
    const GluedFamily fam = build_glued_family(alpha, g);
    for (double v : boundary_trace(fam.h_field)) CHECK(std::abs(v) < 1e-14);
    CHECK(fam.continuity_jump() < 1e-12);
    CHECK(std::abs(fam.flux_match_residual()) < 1e-12);
    CHECK(fam.normal_derivative_jump() == doctest::Approx(-2.0 * (1 + fam.s * fam.s) / (fam.s * fam.s)));
    // the exact gradient agrees with the spectral/difference one away from the kink
    const VectorField num = gradient(fam.h_field);
    for (int i = 0; i < g->n_radial(); ++i) {
        const double r = g->radius(i);
        if (std::abs(r - fam.s) < 0.1 * fam.s || r < 0.05) continue;
        const auto n = g->index(i, 7);
        REQUIRE(num.vx[n] == doctest::Approx(fam.grad_h.vx[n]).epsilon(5e-3).scale(1.0));
    }
    CHECK_THROWS_AS(build_glued_family(1e-8, g), ParameterError);
    CHECK_THROWS_AS(build_glued_family(2.5, g), ParameterError);
    CHECK_THROWS_AS(build_glued_family(0.0, g), ParameterError);
}

TEST_CASE("h is harmonic outside, h_alpha has a derivative jump, phi does not") {
    for (double alpha : {1.0, 0.5, 0.125}) {
        const double s = s_alpha(alpha);
        auto h = [&](double r, double t) { return glued_value(r, t, alpha); };
        auto phi = [&](double r, double t) { return wente_solution_value(r, t, alpha); };
        CAPTURE(alpha);
        for (double r : {0.5 * (s + 1.0), 0.95}) CHECK(std::abs(fd_laplacian(h, r, 0.3)) < 1e-4);
        // Lap phi = J(a~, y) = d_x a~ = K (alpha + 2) alpha r^{alpha - 2} x inside, 0 outside
        const double K = k_factor(s, alpha);
        for (double r : {0.3 * s, 0.7 * s}) {
            const double t = 0.4;
            const double expected = K * (alpha + 2) * alpha * std::pow(r, alpha - 2) * r * std::cos(t);
            CHECK(fd_laplacian(phi, r, t) == doctest::Approx(expected).epsilon(1e-4));
        }
        CHECK(std::abs(fd_laplacian(phi, 0.5 * (s + 1.0), 0.4)) < 1e-4);
        // one-sided radial derivatives at r = s along theta = 0
        const double e = 1e-7 * s;
        auto jump = [&](auto fn) {
            const double out = (fn(s + 2 * e, 0.0) - fn(s + e, 0.0)) / e;
            const double in = (fn(s - e, 0.0) - fn(s - 2 * e, 0.0)) / e;
            return out - in;
        };
        CHECK(jump(h) == doctest::Approx(-2.0 * (1 + s * s) / (s * s)).epsilon(1e-4));
        CHECK(std::abs(jump(phi)) < 1e-4 * (1 + s * s) / (s * s));
        CHECK(phi(1.0, 0.7) == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("circle mean of |grad h|^2 is r^-4 + 1") {
    for (double r : {0.2, 0.5, 0.9}) {
        const double m = angular_mean([&](double t) { return grad_sq(h_value, r, t); });
        CHECK(m == doctest::Approx(std::pow(r, -4) + 1).epsilon(1e-6));
    }
}

TEST_CASE("closed forms against quadrature of the pointwise fields") {
    for (double alpha : {2.0, 1.0, 0.5, 0.1}) {
        const double s = s_alpha(alpha), K = k_factor(s, alpha);
        auto inside = [&](double r, double t) { return K * f_value(r, t, alpha); };
        // radial integrands with the 2 pi r area element; inner parts in u = log r
        auto outer_int = [&](double w_of_r_fn(double, double), double p) {
            return simpson([&](double r) {
                return 2 * pi * r * w_of_r_fn(r, p) * angular_mean([&](double t) { return grad_sq(h_value, r, t); });
            }, s, 1.0);
        };
        auto w_pow = [](double r, double b) { return std::pow(r, 2 * b); };
        const double inner_crit = simpson([&](double u) {
            const double r = std::exp(u);
            return 2 * pi * r * r * r * r * angular_mean([&](double t) { return grad_sq(inside, r, t); });
        }, std::log(s) - 40.0, std::log(s));
        for (double beta : {0.0, 0.5, 1.0}) {
            const NormsRecord cf = closed_form_norms(alpha, beta);
            CAPTURE(alpha);
            CAPTURE(beta);
            CHECK(cf.grad_a_sq == doctest::Approx(4 * pi * (2 + alpha) * (2 + alpha) / alpha));
            CHECK(cf.outer_unweighted == doctest::Approx(outer_int(w_pow, 0.0)).epsilon(1e-6));
            // the left-hand weight is r^2
            CHECK(cf.outer_crit == doctest::Approx(outer_int(w_pow, 1.0)).epsilon(1e-6));
            if (beta < 1.0) CHECK(cf.outer_weighted_beta == doctest::Approx(outer_int(w_pow, beta)).epsilon(1e-6));
            CHECK(cf.lhs_crit == doctest::Approx(cf.outer_crit + inner_crit).epsilon(1e-6));
            CHECK(cf.lhs_crit >= cf.lhs_crit_lower);
            const double c = K * (alpha + 2) * alpha;
            // r^2 |log r|^beta c^2 r^{2 alpha - 2} times r dr = r^2 du, written in u
            const double rhs = simpson([&](double u) {
                return 2 * pi * c * c * std::exp((2 * alpha + 2) * u) * std::pow(-u, beta);
            }, std::log(s) - 80.0 / (2 * alpha + 2), std::log(s), 20000);
            CHECK(cf.rhs_beta == doctest::Approx(rhs).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(closed_form_norms(1.0, 1.5), ParameterError);
    CHECK_THROWS_AS(closed_form_norms(0.0, 0.5), ParameterError);
}

TEST_CASE("closed form values at alpha = 1") {
    // s^2 = 1/3: outer_unweighted = pi (3 - 1/3), grad_a_sq = 36 pi
    const NormsRecord cf = closed_form_norms(1.0, 0.0);
    CHECK(cf.outer_unweighted == doctest::Approx(8 * pi / 3));
    CHECK(cf.grad_a_sq == doctest::Approx(36 * pi));
    CHECK(cf.lhs_crit_lower == doctest::Approx(pi * 0.5 * std::log(3.0)));
    CHECK(cf.entries().size() == 7u);
}

TEST_CASE("beta = 0 keeps the a~ norm bounded, beta > 0 does not help enough") {
    double prev = INFINITY;
    for (double alpha : default_alpha_list()) {
        const double v = closed_form_norms(alpha, 0.0).rhs_beta;
        CHECK(v == doctest::Approx(8 * pi * (alpha + 2) * alpha / (2 * alpha + 2)));
        CHECK(v < prev);
        prev = v;
    }
    // the quotient grows without bound for beta < 1
    const double r1 = closed_form_norms(1.0, 0.5).lhs_crit / closed_form_norms(1.0, 0.5).rhs_beta;
    const double r8 = closed_form_norms(1.0 / 256, 0.5).lhs_crit / closed_form_norms(1.0 / 256, 0.5).rhs_beta;
    CHECK(r8 > 10 * r1);
}

TEST_CASE("exp-sinh quadrature of |grad a~|^2") {
    for (double alpha : default_alpha_list()) {
        CAPTURE(alpha);
        CHECK(grad_a_tilde_quadrature(alpha) == doctest::Approx(closed_form_norms(alpha, 0.0).grad_a_sq).epsilon(1e-10));
    }
    CHECK_THROWS_AS(grad_a_tilde_quadrature(0.0), ParameterError);
}

TEST_CASE("the Dirichlet solve converges to phi, not to h_alpha") {
    for (double alpha : {1.0, 2.0 / 3.0}) {
        double err[2];
        int n = 0;
        for (int npl : {16, 32}) {
            auto g = make_grid(128, 8, npl, 4);
            const GluedFamily fam = build_glued_family(alpha, g);
            const ScalarField phi = solve_dirichlet(jacobian(fam.grad_a_tilde, fam.grad_b_tilde)).phi;
            err[n++] = relative_l2(phi, wente_solution_field(alpha, g));
            CHECK(relative_l2(phi, fam.h_field) > 0.5);
        }
        CAPTURE(alpha);
        CHECK(err[1] < 0.05);
        CHECK(err[1] < err[0]);
    }
}

TEST_CASE("sweep structure") {
    auto g = ref_grid();
    const SweepTable t = divergence_sweep({0.25, 1.0, 0.5}, 0.5, g);
    REQUIRE(t.rows.size() == 3u);
    CHECK(t.rows[0].alpha == 1.0);
    CHECK(t.rows[2].alpha == 0.25);
    for (const auto& row : t.rows) {
        CHECK(row.report.rhs_a == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
        CHECK(row.report.ratio == doctest::Approx(row.closed_form_ratio).epsilon(0.05));
        CHECK(row.solved_ratio > 0.0);
        CHECK(row.solved_ratio < row.report.ratio);
    }
    CHECK(t.monotone_increasing);
    CHECK(t.slope > 0.0);
    CHECK(t.max_over_min > 1.0);
    std::ostringstream os;
    write_sweep_csv(os, t);
    CHECK(os.str().rfind("alpha,s_alpha,beta,lhs,rhs,ratio,closed_form_ratio,solved_ratio,slope\n", 0) == 0);
    CHECK_THROWS_AS(divergence_sweep({0.5}, 0.5, g), ParameterError);
}
