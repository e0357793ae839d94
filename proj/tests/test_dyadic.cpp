#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "wente/dyadic.hpp"
#include "wente/error.hpp"
#include "wente/fields.hpp"
#include "wente/grid.hpp"
#include "wente/poisson.hpp"

using namespace wente;
using std::numbers::pi;

namespace {

GridPtr ref_grid() { return make_grid(128, 8, 16, 4); }

double energy(const VectorField& v) { return integrate(squared_magnitude(v)); }

double max_norm(const VectorField& v) {
    double m = 0.0;
    for (std::size_t n = 0; n < v.vx.size(); ++n) m = std::max(m, std::hypot(v.vx[n], v.vy[n]));
    return m;
}

}  // namespace

TEST_CASE("cutoff examples") {
    const Cutoff chi = cutoff_chi(2);
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(0.125) == 1.0);
    CHECK(chi(0.25) == 0.0);
    CHECK(chi(0.5) == 0.0);
    CHECK(chi(0.1875) == doctest::Approx(0.5));
    CHECK(chi.derivative(0.1) == 0.0);
    CHECK(chi.derivative(0.1875) == doctest::Approx(-1.5 * 8.0));
    CHECK(chi.support_lo() == 0.0);
    CHECK(chi.support_hi() == 0.25);

    const Cutoff psi = cutoff_psi(2);
    CHECK(psi(0.0625) == 1.0);
    CHECK(psi(0.25) == 1.0);
    CHECK(psi(0.03125) == 0.0);
    CHECK(psi(0.25 + 0.03125) == 0.0);
    CHECK(psi.support_lo() == 0.03125);
    CHECK(psi.support_hi() == doctest::Approx(0.28125));
}

TEST_CASE("cutoff derivatives match finite differences and stay bounded") {
    for (int j = 0; j <= 6; ++j) {
        const Cutoff chi = cutoff_chi(j), psi = cutoff_psi(j);
        const double h = std::ldexp(1e-7, -j);
        for (double t = 0.01; t < 1.0; t += 0.01) {
            const double r = std::ldexp(t, -j);
            const double tol = 1e-5 * std::ldexp(1.0, j);
            CHECK(std::abs(chi.derivative(r) - (chi(r + h) - chi(r - h)) / (2 * h)) < tol);
            CHECK(std::abs(psi.derivative(r) - (psi(r + h) - psi(r - h)) / (2 * h)) < 8 * tol);
            CHECK(std::abs(chi.derivative(r)) <= 3.0 * std::ldexp(1.0, j) * (1 + 1e-12));
        }
    }
}

TEST_CASE("cutoff energies are scale invariant and bounded") {
    auto g = ref_grid();
    std::vector<double> chi_e, psi_e;
    for (int j = 1; j <= 6; ++j) {
        const double ec = energy(gradient(sample("chi:" + std::to_string(j), g)));
        const double ep = energy(gradient(sample("psi:" + std::to_string(j), g)));
        CAPTURE(j);
        CHECK(ec <= 32 * pi);
        CHECK(ep <= 64 * pi);
        chi_e.push_back(ec);
        psi_e.push_back(ep);
    }
    for (std::size_t n = 1; n < chi_e.size(); ++n) {
        CHECK(chi_e[n] == doctest::Approx(chi_e[0]).epsilon(1e-2));
        CHECK(psi_e[n] == doctest::Approx(psi_e[0]).epsilon(1e-2));
    }
}

TEST_CASE("partition of unity") {
    for (int jm : {0, 1, 4, 7}) {
        for (double r = 1e-6; r <= 1.0; r *= 1.05) {
            double s = 0.0;
            for (int j = 0; j <= jm; ++j) s += partition_piece(j, jm)(r);
            REQUIRE(s == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(partition_piece(3, 2), ParameterError);
    CHECK_THROWS_AS(cutoff_chi(-1), ParameterError);
}

TEST_CASE("decomposition of y") {
    auto g = ref_grid();
    const ScalarField b = sample("y", g);
    const DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    REQUIRE(dec.pieces.size() == 7u);
    CHECK(dec.reconstruction_error < 1e-12);
    CHECK(dec.support_violation == 0.0);
    CHECK(dec.pieces.back().tail);
    CHECK(dec.pieces.back().support_lo == 0.0);
    for (const auto& p : dec.pieces) {
        if (p.tail) continue;
        const double band_area = pi * (std::ldexp(1.0, -2 * p.j) - std::ldexp(1.0, -2 * p.j - 4));
        CAPTURE(p.j);
        CHECK(energy(p.grad_b_j) <= 1.5 * band_area);
        CHECK(p.level_constant <= dec.c_dec);
        // y is homogeneous, so every interior level sees the same constant
        if (p.j > 0) CHECK(p.level_constant == doctest::Approx(dec.pieces[1].level_constant).epsilon(1e-6));
    }
    CHECK(dec.c_dec < 1.5);
}

TEST_CASE("reconstruction of the field values") {
    auto g = ref_grid();
    const ScalarField b = sample("monomial:2,1+0.4*cos:3+x", g);
    const DyadicDecomposition dec = decompose_b(b, 5);
    ScalarField sum(g);
    for (const auto& p : dec.pieces) sum += p.b_j;
    CHECK(max_abs(sum - b) < 1e-12);
}

TEST_CASE("radial b has radial pieces") {
    auto g = ref_grid();
    const DyadicDecomposition dec = decompose_b(sample("r2", g), 5);
    for (const auto& p : dec.pieces) {
        for (int i = 0; i < g->n_radial(); ++i)
            for (int k = 1; k < g->n_theta(); ++k) REQUIRE(p.b_j(i, k) == doctest::Approx(p.b_j(i, 0)).epsilon(1e-12));
    }
}

TEST_CASE("a single dyadic bump only feeds its neighbouring levels") {
    auto g = ref_grid();
    const ScalarField b = sample("chi:5", g);
    const DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    for (const auto& p : dec.pieces) {
        CAPTURE(p.j);
        if (p.j == 4 || p.j == 5)
            CHECK(max_norm(p.grad_b_j) > 1.0);
        else
            CHECK(max_norm(p.grad_b_j) < 1e-12);
    }
}

TEST_CASE("localize_a") {
    auto g = ref_grid();
    const ScalarField x = sample("x", g);
    const LocalizedA lx = localize_a(x, gradient(x), 3);
    CHECK(std::abs(lx.c_j) < 1e-14);
    CHECK(lx.constant > 1.0);
    for (int j : {2, 4, 5}) CHECK(localize_a(x, gradient(x), j).constant == doctest::Approx(lx.constant).epsilon(1e-2));

    const ScalarField shifted = sample("x+3*one", g);
    const LocalizedA ls = localize_a(shifted, gradient(shifted), 3);
    CHECK(ls.c_j == doctest::Approx(3.0));
    CHECK(max_abs(ls.a_j - lx.a_j) < 1e-12);

    const ScalarField c = sample("const:2", g);
    const LocalizedA lc = localize_a(c, gradient(c), 2);
    CHECK(max_abs(lc.a_j) == 0.0);
    CHECK(lc.constant == 0.0);
}

TEST_CASE("localizing a does not change J(a, b_j)") {
    auto g = ref_grid();
    const ScalarField a = sample("monomial:1,2+0.5*cos:2+x", g);
    const VectorField ga = gradient(a);
    const ScalarField b = sample("y+monomial:3,0", g);
    DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    for (auto& p : dec.pieces) {
        if (p.tail) continue;
        solve_piece(a, ga, p);
        CAPTURE(p.j);
        CHECK(max_abs(jacobian(p.grad_a_j, p.grad_b_j) - jacobian(ga, p.grad_b_j)) < 1e-12);
    }
}

TEST_CASE("audit records") {
    auto g = ref_grid();
    const ScalarField a = sample("x", g), b = sample("y", g);
    const VectorField ga = gradient(a);
    DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    std::vector<AuditRecord> recs;
    for (auto& p : dec.pieces) {
        CHECK_THROWS_AS(audit_piece(a, ga, p, 0.5), ParameterError);
        solve_piece(a, ga, p);
        for (double alpha : {0.5, 1.0}) {
            const AuditRecord rec = audit_piece(a, ga, p, alpha);
            CHECK_FALSE(rec.skipped);
            for (const auto& e : rec.entries) {
                CAPTURE(e.id);
                CHECK(std::isfinite(e.constant));
                CHECK(e.constant >= 0.0);
            }
            REQUIRE(rec.find("localized_wente") != nullptr);
            REQUIRE(rec.find("weighted_sup") != nullptr);
            REQUIRE(rec.find("weighted_energy") != nullptr);
            CHECK((rec.find("weighted_energy_pow") != nullptr) == (alpha == 1.0));
            CHECK((rec.find("tail_decay") != nullptr) == (p.j >= 2));
            recs.push_back(rec);
        }
        CHECK_THROWS_AS(audit_piece(a, ga, p, 1.5), ParameterError);
    }
    std::ostringstream os;
    write_audit_csv(os, recs);
    CHECK(os.str().rfind("j,inequality,lhs,rhs,constant\n", 0) == 0);
}

TEST_CASE("per-level constants are uniform in j") {
    auto g = ref_grid();
    const ScalarField a = sample("x", g), b = sample("y", g);
    const VectorField ga = gradient(a);
    DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    std::vector<double> wente, sup;
    for (auto& p : dec.pieces) {
        if (p.tail || p.j == 0) continue;
        solve_piece(a, ga, p);
        const AuditRecord rec = audit_piece(a, ga, p, 0.5);
        wente.push_back(rec.find("localized_wente")->constant);
        sup.push_back(rec.find("weighted_sup")->constant);
    }
    for (std::size_t n = 0; n < wente.size(); ++n) {
        CHECK(wente[n] == doctest::Approx(wente.back()).epsilon(0.02));
        CHECK(sup[n] == doctest::Approx(sup.back()).epsilon(0.1));
    }
}

TEST_CASE("a skipped piece") {
    auto g = ref_grid();
    const ScalarField a = sample("x", g), b = sample("chi:5", g);
    const VectorField ga = gradient(a);
    DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    auto& p = dec.pieces[2];
    solve_piece(a, ga, p);
    const AuditRecord rec = audit_piece(a, ga, p, 0.5);
    CHECK(rec.skipped);
    CHECK(rec.entries.empty());
    std::ostringstream os;
    write_audit_csv(os, {rec});
    CHECK(os.str() == "j,inequality,lhs,rhs,constant\n2,skipped,0,0,0\n");
}

TEST_CASE("assembly") {
    auto g = ref_grid();
    const ScalarField a = sample("x", g), b = sample("y", g);
    const VectorField ga = gradient(a);
    DyadicDecomposition dec = decompose_b(b, gradient(b), 6);
    ScalarField rhs(g);
    for (auto& p : dec.pieces) {
        solve_piece(a, ga, p);
        rhs += jacobian(p.grad_a_j, p.grad_b_j);
    }
    const ScalarField phi = assemble_phi(dec.pieces);
    // the solver is linear
    CHECK(max_abs(phi - solve_dirichlet(rhs).phi) < 1e-12);
    // and the pieces rebuild J(x, y) up to the origin cell of the tail piece
    const ScalarField direct = solve_dirichlet(jacobian(ga, gradient(b))).phi;
    CHECK(max_abs(phi - direct) < 1e-4);

    // energy identity int |grad phi_j|^2 = -int phi_j J(a_j, b_j)
    for (const auto& p : dec.pieces) {
        ScalarField prod = p.phi_j;
        const ScalarField jj = jacobian(p.grad_a_j, p.grad_b_j);
        for (std::size_t n = 0; n < prod.values.size(); ++n) prod.values[n] *= jj.values[n];
        CAPTURE(p.j);
        CHECK(energy(p.grad_phi_j) == doctest::Approx(-integrate(prod)).epsilon(2e-2));
    }
    CHECK_THROWS_AS(assemble_phi({}), ParameterError);
}

TEST_CASE("constant b gives zero") {
    auto g = ref_grid();
    const ScalarField a = sample("x", g), b = sample("const:4", g);
    const VectorField ga = gradient(a);
    DyadicDecomposition dec = decompose_b(b, gradient(b), 4);
    CHECK(dec.c_dec == 0.0);
    CHECK(dec.reconstruction_error == 0.0);
    for (auto& p : dec.pieces) solve_piece(a, ga, p);
    CHECK(max_abs(assemble_phi(dec.pieces)) == 0.0);
}

TEST_CASE("j_max must be resolved") {
    auto g = ref_grid();
    const ScalarField b = sample("y", g);
    CHECK_THROWS_AS(decompose_b(b, 8), ParameterError);
    CHECK_THROWS_AS(decompose_b(b, -1), ParameterError);
    CHECK_NOTHROW(decompose_b(b, 7));
}
