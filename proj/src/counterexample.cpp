#include "wente/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wente/error.hpp"
#include "wente/poisson.hpp"

namespace wente {

namespace {
constexpr double pi = std::numbers::pi;

std::string fmt_alpha(double alpha) {
    std::ostringstream os;
    os.precision(6);
    os << alpha;
    return os.str();
}
}  // namespace

double s_alpha(double alpha) {
    if (!(alpha > 0.0)) throw ParameterError("s_alpha needs alpha > 0");
    return std::sqrt(alpha / (2.0 + alpha));
}

double k_factor(double s, double alpha) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("k_factor needs 0 < s < 1");
    return std::pow(s, -alpha - 2.0) * (1.0 - s * s);
}

double h_value(double r, double theta) { return std::cos(theta) * (1.0 / r - r); }

double f_value(double r, double theta, double alpha) { return std::pow(r, alpha + 1.0) * std::cos(theta); }

double a_alpha_value(double r, double alpha) { return (alpha + 2.0) * std::pow(r, alpha); }

double glued_value(double r, double theta, double alpha) {
    const double s = s_alpha(alpha);
    return r >= s ? h_value(r, theta) : k_factor(s, alpha) * f_value(r, theta, alpha);
}

double a_tilde_value(double r, double alpha) {
    const double s = s_alpha(alpha);
    return k_factor(s, alpha) * a_alpha_value(std::min(r, s), alpha);
}

double GluedFamily::continuity_jump() const {
    const double outside = h_value(s, 0.0);
    const double inside = K * f_value(s, 0.0, alpha);
    return std::abs(outside - inside) / std::abs(outside);
}

double GluedFamily::flux_match_residual() const { return (1.0 + s * s) - (1.0 + alpha) * (1.0 - s * s); }

double GluedFamily::normal_derivative_jump() const {
    // d_r h = -cos(theta)(1 + r^2)/r^2 ; d_r (K f) = K (1 + alpha) r^alpha cos(theta)
    const double outside = -(1.0 + s * s) / (s * s);
    const double inside = K * (1.0 + alpha) * std::pow(s, alpha);
    return outside - inside;
}

GluedFamily build_glued_family(double alpha, const GridPtr& grid) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("glued family needs 0 < alpha <= 2");
    const PolarGrid& g = *grid;
    GluedFamily fam;
    fam.alpha = alpha;
    fam.s = s_alpha(alpha);
    fam.K = k_factor(fam.s, alpha);
    const double s = fam.s;
    const int below = g.count_radii(0.0, s);
    const int above = g.count_radii(s, std::min(2.0 * s, 1.0));
    if (below < 8 || above < 8)
        throw ParameterError("grid does not resolve s_alpha = " + fmt_alpha(s) +
                             " (needs 8 radial nodes on each side); use a deeper or finer grading");

    fam.h_field = ScalarField(grid);
    fam.grad_h = VectorField(grid);
    fam.a_tilde = ScalarField(grid);
    fam.grad_a_tilde = VectorField(grid);
    fam.b_tilde = ScalarField(grid);
    fam.grad_b_tilde = VectorField(grid);

    const double K = fam.K;
    const double a_out = K * (alpha + 2.0) * std::pow(s, alpha);
    for (int i = 0; i < g.n_radial(); ++i) {
        const double r = g.radius(i);
        const double r2 = r * r;
        for (int k = 0; k < g.n_theta(); ++k) {
            const double t = g.theta(k);
            const double x = r * std::cos(t), y = r * std::sin(t);
            const auto n = g.index(i, k);
            fam.b_tilde.values[n] = y;
            fam.grad_b_tilde.vx[n] = 0.0;
            fam.grad_b_tilde.vy[n] = 1.0;
            if (r >= s) {
                fam.h_field.values[n] = h_value(r, t);
                const double r4 = r2 * r2;
                fam.grad_h.vx[n] = (y * y - x * x) / r4 - 1.0;
                fam.grad_h.vy[n] = -2.0 * x * y / r4;
                fam.a_tilde.values[n] = a_out;
            } else {
                const double ra = std::pow(r, alpha);
                fam.h_field.values[n] = K * x * ra;
                fam.grad_h.vx[n] = K * (ra + alpha * x * x * ra / r2);
                fam.grad_h.vy[n] = K * alpha * x * y * ra / r2;
                fam.a_tilde.values[n] = K * (alpha + 2.0) * ra;
                const double c = K * (alpha + 2.0) * alpha * ra / r2;
                fam.grad_a_tilde.vx[n] = c * x;
                fam.grad_a_tilde.vy[n] = c * y;
            }
        }
    }
    return fam;
}

double wente_solution_value(double r, double theta, double alpha) {
    const double s = s_alpha(alpha);
    const double c = 1.0 + s * s;
    const double layer = r >= s ? (1.0 / r - r) : (1.0 - s * s) / (s * s) * r;
    return glued_value(r, theta, alpha) - c * layer * std::cos(theta);
}

ScalarField wente_solution_field(double alpha, const GridPtr& grid) {
    ScalarField out(grid);
    for (int i = 0; i < grid->n_radial(); ++i)
        for (int k = 0; k < grid->n_theta(); ++k)
            out(i, k) = wente_solution_value(grid->radius(i), grid->theta(k), alpha);
    return out;
}

std::vector<NormEntry> NormsRecord::entries() const {
    return {
        {"grad_a_sq", grad_a_sq, true},
        {"lhs_crit", lhs_crit, true},
        {"lhs_crit_lower_bound", lhs_crit_lower, false},
        {"rhs_beta", rhs_beta, true},
        {"outer_unweighted", outer_unweighted, true},
        {"outer_weighted_beta", outer_weighted_beta, true},
        {"outer_crit", outer_crit, true},
    };
}

NormsRecord closed_form_norms(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("closed_form_norms needs 0 < alpha <= 2");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("closed_form_norms needs beta in [0, 1]");
    NormsRecord rec;
    rec.alpha = alpha;
    rec.beta = beta;
    const double s = s_alpha(alpha);
    rec.s = s;
    const double K = k_factor(s, alpha);
    const double s2 = s * s;
    const double log_s = -std::log(s);

    rec.grad_a_sq = 4.0 * pi * (2.0 + alpha) * (2.0 + alpha) / alpha;

    // |grad h|^2 = r^-4 + 1 + 2 cos(2 theta)/r^2 outside; the last term has zero mean.
    rec.outer_unweighted = pi * (1.0 / s2 - s2);
    rec.outer_crit = 2.0 * pi * (log_s + (1.0 - s2 * s2) / 4.0);
    if (beta < 1.0) {
        rec.outer_weighted_beta = 2.0 * pi *
                                  ((std::pow(s, 2.0 * beta - 2.0) - 1.0) / (2.0 - 2.0 * beta) +
                                   (1.0 - std::pow(s, 2.0 * beta + 2.0)) / (2.0 * beta + 2.0));
    } else {
        rec.outer_weighted_beta = rec.outer_crit;
    }
    // Inside, |grad f|^2 = r^{2 alpha} ((1+alpha)^2 cos^2 + sin^2).
    const double inner = pi * ((1.0 + alpha) * (1.0 + alpha) + 1.0) * (1.0 - s2) * (1.0 - s2) / (2.0 * alpha + 4.0);
    rec.lhs_crit = rec.outer_crit + inner;
    rec.lhs_crit_lower = pi * log_s;

    // int_0^s r^{n-1} |log r|^beta dr = n^{-beta-1} Gamma(beta+1, n |log s|), n = 2 alpha + 2.
    const double n = 2.0 * alpha + 2.0;
    const double radial = std::pow(n, -beta - 1.0) * boost::math::tgamma(beta + 1.0, n * log_s);
    rec.rhs_beta = 2.0 * pi * K * K * alpha * alpha * (alpha + 2.0) * (alpha + 2.0) * radial;
    return rec;
}

double grad_a_tilde_quadrature(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("grad_a_tilde_quadrature needs 0 < alpha <= 2");
    const double s = s_alpha(alpha);
    const double c = k_factor(s, alpha) * (alpha + 2.0) * alpha;
    // |grad a~|^2 = c^2 r^{2 alpha - 2} inside B_s. With r = s exp(-v / (2 alpha))
    // the radial integral runs over v in [0, inf) on a unit decay scale.
    const double scale = 0.5 / alpha;
    auto integrand = [&](double v) {
        // r itself underflows for small alpha; evaluate r^{2 alpha} through log r.
        const double log_r = std::log(s) - v * scale;
        return c * c * std::exp(2.0 * alpha * log_r) * scale;
    };
    boost::math::quadrature::exp_sinh<double> es;
    return 2.0 * pi * es.integrate(integrand);
}

std::vector<double> default_alpha_list() {
    std::vector<double> out;
    for (int k = 0; k <= 8; ++k) out.push_back(std::exp2(-k));
    return out;
}

SweepTable divergence_sweep(const std::vector<double>& alphas, double beta, const GridPtr& grid) {
    if (alphas.size() < 2) throw ParameterError("divergence_sweep needs at least two alpha values");
    std::vector<double> sorted = alphas;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    SweepTable table;
    table.beta = beta;
    const Weight lhs_w = Weight::pow(1.0);
    const Weight rhs_w = Weight::crit_beta(beta);
    for (double alpha : sorted) {
        const GluedFamily fam = build_glued_family(alpha, grid);
        const double lhs = weighted_energy(fam.grad_h, lhs_w);
        const double b_norm = weighted_energy(fam.grad_b_tilde, Weight::one());
        const double a_norm = weighted_energy(fam.grad_a_tilde, rhs_w);
        SweepRow row;
        row.alpha = alpha;
        row.s = fam.s;
        row.beta = beta;
        row.report = ratio_report(lhs, b_norm, a_norm,
                                  {"divergence_sweep(alpha=" + fmt_alpha(alpha) + ")", lhs_w.name(), "ONE",
                                   rhs_w.name()});
        const NormsRecord cf = closed_form_norms(alpha, beta);
        row.closed_form_ratio = std::sqrt(cf.lhs_crit) / (std::sqrt(pi) * std::sqrt(cf.rhs_beta));
        const ScalarField phi = solve_dirichlet(jacobian(fam.grad_a_tilde, fam.grad_b_tilde)).phi;
        row.solved_ratio = weighted_energy(gradient(phi), lhs_w) / (b_norm * a_norm);
        table.rows.push_back(std::move(row));
    }

    // Least squares of log R on log |log s|.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(table.rows.size());
    double rmax = 0.0, rmin = INFINITY;
    table.monotone_increasing = true;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const double x = std::log(-std::log(row.s));
        const double y = std::log(row.report.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        rmax = std::max(rmax, row.report.ratio);
        rmin = std::min(rmin, row.report.ratio);
        if (i > 0 && !(row.report.ratio > table.rows[i - 1].report.ratio)) table.monotone_increasing = false;
    }
    table.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    table.max_over_min = rmax / rmin;
    return table;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
    const auto old = os.precision(17);
    os << "alpha,s_alpha,beta,lhs,rhs,ratio,closed_form_ratio,solved_ratio,slope\n";
    for (const auto& row : table.rows)
        os << row.alpha << ',' << row.s << ',' << row.beta << ',' << row.report.lhs << ','
           << row.report.rhs_a * row.report.rhs_b << ',' << row.report.ratio << ',' << row.closed_form_ratio << ','
           << row.solved_ratio << ',' << table.slope << '\n';
    os.precision(old);
}

}  // namespace wente
