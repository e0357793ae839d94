#pragma once

// The glued family h_alpha: the harmonic field h = x/|x|^2 - x outside
// B_{s_alpha}, glued at r = s_alpha to K f with f = x |x|^alpha, together with
// the data a~_alpha, b~ = y whose Jacobian drives it.
//
// Throughout, x is the first Cartesian coordinate, so h and f are scalar.

#include <iosfwd>
#include <string>
#include <vector>

#include "wente/grid.hpp"
#include "wente/norms.hpp"

namespace wente {

/// sqrt(alpha / (2 + alpha)); ParameterError for alpha <= 0.
double s_alpha(double alpha);

/// s^{-alpha-2} (1 - s^2); ParameterError unless 0 < s < 1.
double k_factor(double s, double alpha);

// Pointwise closed forms (polar coordinates).
double h_value(double r, double theta);
double f_value(double r, double theta, double alpha);
/// (alpha + 2) r^alpha
double a_alpha_value(double r, double alpha);
double glued_value(double r, double theta, double alpha);
double a_tilde_value(double r, double alpha);

struct GluedFamily {
    double alpha = 0.0;
    double s = 0.0;
    double K = 0.0;
    ScalarField h_field;
    VectorField grad_h;  ///< closed-form gradient, one-sided at r = s
    ScalarField a_tilde;
    VectorField grad_a_tilde;
    ScalarField b_tilde;  ///< y
    VectorField grad_b_tilde;

    /// |h(s) - K f(s)| / |h(s)| along theta = 0.
    double continuity_jump() const;
    /// (1 + s^2) - (1 + alpha)(1 - s^2).
    double flux_match_residual() const;
    /// Coefficient c in [d_r h_alpha]_{r=s} = c cos(theta) (outside minus inside).
    double normal_derivative_jump() const;
};

/// Samples the family on `grid`. ParameterError unless 0 < alpha <= 2 and the
/// grid has >= 8 radial nodes in (0, s_alpha] and in [s_alpha, min(2 s_alpha, 1)].
GluedFamily build_glued_family(double alpha, const GridPtr& grid);

/// The Dirichlet solution of Lap(phi) = J(a~_alpha, y) in closed form.
///
/// h_alpha matches values across r = s but its radial derivative flips sign
/// there, so Lap(h_alpha) carries a single layer -2 (1+s^2)/s^2 cos(theta) on
/// the circle r = s. Removing that layer's Dirichlet response gives
///   phi = h_alpha - (1 + s^2) H_s,
///   H_s = cos(theta) * ((1 - s^2)/s^2 r  for r < s;  1/r - r  for r >= s).
double wente_solution_value(double r, double theta, double alpha);
ScalarField wente_solution_field(double alpha, const GridPtr& grid);

struct NormEntry {
    std::string name;
    double value = 0.0;
    bool exact = true;  ///< false: bound (lower or upper, see name)
};

struct NormsRecord {
    double alpha = 0.0;
    double beta = 0.0;
    double s = 0.0;
    double grad_a_sq = 0.0;     ///< int |grad a~|^2 = 4 pi (2+alpha)^2 / alpha
    double lhs_crit = 0.0;      ///< int r^2 |grad h_alpha|^2
    double lhs_crit_lower = 0.0;  ///< pi |log s|
    double rhs_beta = 0.0;      ///< int r^2 |log r|^beta |grad a~|^2
    double outer_unweighted = 0.0;  ///< int_{B_1 \ B_s} |grad h|^2
    double outer_weighted_beta = 0.0;  ///< int_{B_1 \ B_s} r^{2 beta} |grad h|^2
    double outer_crit = 0.0;    ///< int_{B_1 \ B_s} r^2 |grad h|^2

    std::vector<NormEntry> entries() const;
};

/// Closed forms for the glued family; beta in [0, 1].
NormsRecord closed_form_norms(double alpha, double beta);

/// int |grad a~_alpha|^2 by exp-sinh quadrature of the radial profile in the
/// variable v = 2 alpha log(s_alpha / r); the kink at s_alpha is an endpoint.
double grad_a_tilde_quadrature(double alpha);

struct SweepRow {
    double alpha = 0.0;
    double s = 0.0;
    double beta = 0.0;
    RatioReport report;    ///< lhs = ||r grad h_alpha||, rhs = ||grad y|| * ||w_beta grad a~||
    double closed_form_ratio = 0.0;
    /// Same quotient with h_alpha replaced by the computed Dirichlet solution.
    double solved_ratio = 0.0;
};

struct SweepTable {
    double beta = 0.0;
    std::vector<SweepRow> rows;
    double slope = 0.0;  ///< least-squares slope of log R against log |log s_alpha|
    double max_over_min = 0.0;
    bool monotone_increasing = false;  ///< R grows as alpha decreases along the list
};

/// Default sweep alpha = 2^-k, k = 0..8.
std::vector<double> default_alpha_list();

/// Weighted divergence quotient along the family. The weighted norm sits on
/// a~_alpha; J(a, b) = -J(b, a) makes this the same quotient with roles swapped.
SweepTable divergence_sweep(const std::vector<double>& alphas, double beta, const GridPtr& grid);

/// "alpha,s_alpha,beta,lhs,rhs,ratio,closed_form_ratio,solved_ratio,slope"
void write_sweep_csv(std::ostream& os, const SweepTable& table);

}  // namespace wente
