#include "wente/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wente/counterexample.hpp"
#include "wente/dyadic.hpp"
#include "wente/error.hpp"
#include "wente/norms.hpp"
#include "wente/poisson.hpp"

namespace wente {

namespace {

constexpr double pi = std::numbers::pi;

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

SuiteRow row(int criterion, std::string id, double value, double threshold, std::string relation) {
    SuiteRow r;
    r.criterion = criterion;
    r.id = std::to_string(criterion) + "." + std::move(id);
    r.value = value;
    r.threshold = threshold;
    r.relation = std::move(relation);
    if (!std::isfinite(value)) {
        r.pass = false;
    } else if (r.relation == "<=") {
        r.pass = value <= threshold;
    } else if (r.relation == ">=") {
        r.pass = value >= threshold;
    } else if (r.relation == "<") {
        r.pass = value < threshold;
    } else if (r.relation == ">") {
        r.pass = value > threshold;
    } else if (r.relation == "|x|<=") {
        r.pass = std::abs(value) <= threshold;
    } else if (r.relation == "==") {
        r.pass = value == threshold;
    }
    return r;
}

// Row for |value - target| <= tol; threshold column shows the target.
SuiteRow within(int criterion, std::string id, double value, double target, double tol) {
    SuiteRow r = row(criterion, std::move(id), value, target, "+-" + num(tol));
    r.pass = std::isfinite(value) && std::abs(value - target) <= tol;
    return r;
}

std::unique_ptr<std::ofstream> open_csv(const ExperimentConfig& cfg, const std::string& name) {
    if (cfg.out_dir.empty()) return nullptr;
    std::filesystem::create_directories(cfg.out_dir);
    auto os = std::make_unique<std::ofstream>(std::filesystem::path(cfg.out_dir) / name);
    if (!*os) throw ParameterError("cannot write " + name + " in " + cfg.out_dir);
    os->precision(17);
    return os;
}

GridPtr grid_with(const ExperimentConfig& cfg, int n_theta, int npl) {
    return make_grid(n_theta, cfg.levels, npl, cfg.core_levels);
}

// Cartesian gradient from d/dr and (1/r) d/dtheta.
void set_polar_gradient(VectorField& v, const PolarGrid& g, int i, int k, double d_r, double d_t) {
    const double c = std::cos(g.theta(k)), s = std::sin(g.theta(k));
    const auto n = g.index(i, k);
    v.vx[n] = c * d_r - s * d_t;
    v.vy[n] = s * d_r + c * d_t;
}

double energy(const VectorField& v) { return weighted_energy(v, Weight::one()); }

Weight b_weight(double alpha) { return alpha < 1.0 ? Weight::pow(alpha) : Weight::crit(); }

// (||r^a phi||_inf^2 + ||r^a grad phi||^2) / (||w grad b||^2 ||grad a||^2).
double weighted_ratio(const ScalarField& phi, const VectorField& grad_phi, const VectorField& grad_a,
                      const VectorField& grad_b, double alpha) {
    const double sup = weighted_sup(phi, alpha);
    const double en = weighted_energy(grad_phi, Weight::pow(alpha));
    const double b = weighted_energy(grad_b, b_weight(alpha));
    const double a = energy(grad_a);
    return (sup * sup + en * en) / (b * b * a * a);
}

// Smooth manufactured solution sum_m c_m (1 - r^2) r^m cos(m theta + p_m) and its Laplacian.
struct Manufactured {
    std::vector<double> c, p;
    ScalarField phi(const GridPtr& g) const {
        ScalarField out(g);
        for (int i = 0; i < g->n_radial(); ++i)
            for (int k = 0; k < g->n_theta(); ++k) {
                const double r = g->radius(i);
                double v = 0.0;
                for (std::size_t m = 0; m < c.size(); ++m)
                    v += c[m] * (1.0 - r * r) * std::pow(r, double(m)) * std::cos(double(m) * g->theta(k) + p[m]);
                out(i, k) = v;
            }
        return out;
    }
    ScalarField rhs(const GridPtr& g) const {
        ScalarField out(g);
        for (int i = 0; i < g->n_radial(); ++i)
            for (int k = 0; k < g->n_theta(); ++k) {
                const double r = g->radius(i);
                double v = 0.0;
                for (std::size_t m = 0; m < c.size(); ++m)
                    v -= 4.0 * double(m + 1) * c[m] * std::pow(r, double(m)) * std::cos(double(m) * g->theta(k) + p[m]);
                out(i, k) = v;
            }
        return out;
    }
};

SampledField draw(const ExperimentConfig& cfg, const GridPtr& grid, std::mt19937_64& rng, int& resampled) {
    for (;;) {
        SampledField f = random_field(cfg, grid, rng);
        if (!f.f.values.empty()) return f;
        ++resampled;
    }
}

}  // namespace

GridPtr ExperimentConfig::grid() const { return make_grid(n_theta, levels, nodes_per_level, core_levels); }

bool SuiteReport::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

bool SuiteReport::criterion_pass(int criterion) const {
    bool any = false;
    for (const auto& r : rows) {
        if (r.criterion != criterion) continue;
        any = true;
        if (!r.pass) return false;
    }
    return any;
}

void SuiteReport::append(const SuiteReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    resampled += other.resampled;
}

void write_summary(std::ostream& os, const SuiteReport& report) {
    for (const auto& r : report.rows) {
        std::ostringstream line;
        line.precision(6);
        line << r.id << ' ' << r.value << ' ' << r.relation << ' ' << r.threshold << ' '
             << (r.pass ? "PASS" : "FAIL");
        os << line.str() << '\n';
    }
    os << "overall " << (report.pass() ? "PASS" : "FAIL") << '\n';
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("fit_slope needs two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    const double slope = fit_slope(x, y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = my + slope * (x[i] - mx);
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

// ---------------------------------------------------------------------------
// Field families

SampledField random_field(const ExperimentConfig& cfg, const GridPtr& grid, std::mt19937_64& rng) {
    const PolarGrid& g = *grid;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    SampledField out{ScalarField(grid), VectorField(grid)};

    if (cfg.family == "random-mode") {
        if (cfg.max_mode < 0 || cfg.radial_terms < 1) throw ParameterError("random-mode needs max_mode >= 0, radial_terms >= 1");
        struct Term {
            int m, n;
            double c, p;
        };
        std::vector<Term> terms;
        for (int m = 0; m <= cfg.max_mode; ++m)
            for (int q = 0; q < cfg.radial_terms; ++q) {
                if (m == 0 && q == 0) continue;
                const double c = normal(rng) / (1.0 + m + q);
                terms.push_back({m, m + 2 * q, c, phase(rng)});
            }
        for (int i = 0; i < g.n_radial(); ++i) {
            const double r = g.radius(i);
            for (int k = 0; k < g.n_theta(); ++k) {
                double v = 0, dr = 0, dt = 0;
                for (const auto& t : terms) {
                    const double arg = t.m * g.theta(k) + t.p;
                    const double rn1 = std::pow(r, t.n - 1);
                    v += t.c * rn1 * r * std::cos(arg);
                    dr += t.c * t.n * rn1 * std::cos(arg);
                    dt -= t.c * t.m * rn1 * std::sin(arg);
                }
                out.f(i, k) = v;
                set_polar_gradient(out.grad, g, i, k, dr, dt);
            }
        }
    } else if (cfg.family == "random-poly") {
        if (cfg.poly_degree < 1) throw ParameterError("random-poly needs degree >= 1");
        struct Term {
            int i, j;
            double c;
        };
        std::vector<Term> terms;
        for (int d = 1; d <= cfg.poly_degree; ++d)
            for (int i = 0; i <= d; ++i) terms.push_back({i, d - i, normal(rng) / d});
        for (int ir = 0; ir < g.n_radial(); ++ir)
            for (int k = 0; k < g.n_theta(); ++k) {
                const double x = g.radius(ir) * std::cos(g.theta(k)), y = g.radius(ir) * std::sin(g.theta(k));
                double v = 0, gx = 0, gy = 0;
                for (const auto& t : terms) {
                    v += t.c * std::pow(x, t.i) * std::pow(y, t.j);
                    if (t.i > 0) gx += t.c * t.i * std::pow(x, t.i - 1) * std::pow(y, t.j);
                    if (t.j > 0) gy += t.c * t.j * std::pow(x, t.i) * std::pow(y, t.j - 1);
                }
                const auto n = g.index(ir, k);
                out.f.values[n] = v;
                out.grad.vx[n] = gx;
                out.grad.vy[n] = gy;
            }
    } else {
        throw ParameterError("unknown field family '" + cfg.family + "' (random-mode | random-poly)");
    }

    const double e = energy(out.grad);
    if (!(e > 0.0)) return {};
    const double scale = 1.0 / e;
    out.f *= scale;
    for (auto& v : out.grad.vx) v *= scale;
    for (auto& v : out.grad.vy) v *= scale;
    return out;
}

std::pair<SampledField, SampledField> adversarial_pair(const GridPtr& grid, int j) {
    if (j < 0) throw ParameterError("adversarial level must be >= 0");
    const PolarGrid& g = *grid;
    const Cutoff chi = cutoff_chi(j);
    const Cutoff zeta = partition_piece(j, j + 1);
    SampledField a{ScalarField(grid), VectorField(grid)};
    SampledField b{ScalarField(grid), VectorField(grid)};
    for (int i = 0; i < g.n_radial(); ++i) {
        const double r = g.radius(i);
        for (int k = 0; k < g.n_theta(); ++k) {
            const double c = std::cos(g.theta(k)), s = std::sin(g.theta(k));
            a.f(i, k) = chi(r);
            set_polar_gradient(a.grad, g, i, k, chi.derivative(r), 0.0);
            b.f(i, k) = zeta(r) * c;
            set_polar_gradient(b.grad, g, i, k, zeta.derivative(r) * c, -zeta(r) * s / r);
        }
    }
    return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// Criterion 1

SuiteReport run_solver_validation(const ExperimentConfig& cfg) {
    const Thresholds& th = cfg.thresholds;
    SuiteReport rep;
    rep.suite = "validate-solver";
    auto csv = open_csv(cfg, "solver_validation.csv");
    if (csv) *csv << "check,nodes_per_level,value\n";
    auto log = [&](const std::string& check, int npl, double v) {
        if (csv) *csv << check << ',' << npl << ',' << v << '\n';
    };

    const GridPtr fine = cfg.grid();
    if (cfg.nodes_per_level % 2 != 0 || cfg.n_theta % 4 != 0)
        throw ParameterError("solver validation halves the grid: nodes_per_level must be even, n_theta a multiple of 4");
    const GridPtr coarse = grid_with(cfg, cfg.n_theta / 2, cfg.nodes_per_level / 2);

    // rhs = 1 against (r^2 - 1)/4.
    {
        ScalarField one(fine), exact(fine);
        for (int i = 0; i < fine->n_radial(); ++i)
            for (int k = 0; k < fine->n_theta(); ++k) {
                one(i, k) = 1.0;
                exact(i, k) = 0.25 * (fine->radius(i) * fine->radius(i) - 1.0);
            }
        const auto sol = solve_dirichlet(one);
        const double err = max_abs(sol.phi - exact);
        log("rhs_one_max_error", cfg.nodes_per_level, err);
        log("rhs_one_boundary_max", cfg.nodes_per_level, sol.report.boundary_max);
        rep.rows.push_back(row(1, "rhs_one_max_error", err, th.rhs_one_max_error, "<="));
    }

    // Oracle equivalence on the same random right-hand side at two resolutions.
    std::mt19937_64 rng(cfg.seed);
    const std::mt19937_64 rng_start = rng;
    double mismatch_fine = 0.0, mismatch_coarse = 0.0;
    {
        std::mt19937_64 r1 = rng_start, r2 = rng_start;
        const SampledField f_fine = draw(cfg, fine, r1, rep.resampled);
        const SampledField f_coarse = draw(cfg, coarse, r2, rep.resampled);
        mismatch_fine = oracle_compare(f_fine.f).relative_l2;
        mismatch_coarse = oracle_compare(f_coarse.f).relative_l2;
        log("oracle_relative_l2", cfg.nodes_per_level, mismatch_fine);
        log("oracle_relative_l2", cfg.nodes_per_level / 2, mismatch_coarse);
        rep.rows.push_back(row(1, "oracle_relative_l2", mismatch_fine, th.oracle_relative_l2, "<="));
        const double order = std::log2(mismatch_coarse / mismatch_fine);
        rep.rows.push_back(row(1, "oracle_halving_order", order, th.convergence_order, ">="));
    }

    // Convergence order of the mode solver on a manufactured solution.
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
        Manufactured ms;
        for (int m = 0; m <= 4; ++m) {
            ms.c.push_back(normal(rng));
            ms.p.push_back(phase(rng));
        }
        const double e_fine = relative_l2(solve_dirichlet(ms.rhs(fine)).phi, ms.phi(fine));
        const double e_coarse = relative_l2(solve_dirichlet(ms.rhs(coarse)).phi, ms.phi(coarse));
        log("manufactured_relative_l2", cfg.nodes_per_level, e_fine);
        log("manufactured_relative_l2", cfg.nodes_per_level / 2, e_coarse);
        rep.rows.push_back(row(1, "solver_convergence_order", std::log2(e_coarse / e_fine), th.convergence_order, ">="));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Criteria 2, 3 (random part), 8 (CLMS)

SuiteReport run_random_suite(const ExperimentConfig& cfg) {
    const Thresholds& th = cfg.thresholds;
    SuiteReport rep;
    rep.suite = "random-suite";
    const GridPtr grid = cfg.grid();
    auto csv = open_csv(cfg, "random_suite.csv");
    if (csv) write_ratio_header(*csv);

    std::mt19937_64 rng(cfg.seed ^ 0x5eedULL);
    double sup_max = 0.0, clms_max = 0.0, l2_gap = 0.0;
    int nesting_violations = 0;
    std::vector<double> t1_max(cfg.alphas.size(), 0.0);

    auto run_pair = [&](const std::string& name, const SampledField& a, const SampledField& b) {
        const ScalarField rhs = jacobian(a.grad, b.grad);
        const ScalarField phi = solve_dirichlet(rhs).phi;
        const VectorField gphi = gradient(phi);
        const double na = energy(a.grad), nb = energy(b.grad);

        const auto sup = ratio_report(max_abs(phi), na, nb, {name, "SUP", "ONE", "ONE"});
        sup_max = std::max(sup_max, sup.ratio);
        const ScalarField mag = magnitude(gphi);
        const auto clms = ratio_report(lorentz(mag, 2.0, 1.0), na, nb, {name, "L21", "ONE", "ONE"});
        clms_max = std::max(clms_max, clms.ratio);
        if (csv) {
            write_ratio_row(*csv, sup);
            write_ratio_row(*csv, clms);
        }
        for (const ScalarField* f : {&phi, &mag}) {
            const double l2 = l2_norm(*f);
            if (l2 > 0.0) l2_gap = std::max(l2_gap, std::abs(lorentz(*f, 2.0, 2.0) - l2) / l2);
            if (lorentz_weak(*f, 2.0) > lorentz(*f, 2.0, 1.0)) ++nesting_violations;
        }
        for (std::size_t q = 0; q < cfg.alphas.size(); ++q) {
            const double alpha = cfg.alphas[q];
            const double sup_w = weighted_sup(phi, alpha);
            const double en = weighted_energy(gphi, Weight::pow(alpha));
            const double bw = weighted_energy(b.grad, b_weight(alpha));
            const auto t1 = ratio_report(sup_w * sup_w + en * en, na * na, bw * bw,
                                         {name + ";alpha=" + num(alpha), "POW(" + num(alpha) + ")", "ONE",
                                          b_weight(alpha).name()});
            t1_max[q] = std::max(t1_max[q], t1.ratio);
            if (csv) write_ratio_row(*csv, t1);
        }
    };

    {
        SampledField x{ScalarField(grid), VectorField(grid)}, y{ScalarField(grid), VectorField(grid)};
        for (int i = 0; i < grid->n_radial(); ++i)
            for (int k = 0; k < grid->n_theta(); ++k) {
                const auto n = grid->index(i, k);
                x.f.values[n] = grid->radius(i) * std::cos(grid->theta(k));
                y.f.values[n] = grid->radius(i) * std::sin(grid->theta(k));
                x.grad.vx[n] = 1.0;
                y.grad.vy[n] = 1.0;
            }
        run_pair("a=x;b=y", x, y);
        const double xy = sup_max;
        rep.rows.push_back(within(2, "xy_sup_ratio", xy, 0.25 / pi, 1e-8));
    }
    for (int s = 0; s < cfg.samples; ++s) {
        const SampledField a = draw(cfg, grid, rng, rep.resampled);
        const SampledField b = draw(cfg, grid, rng, rep.resampled);
        run_pair("sample=" + std::to_string(s), a, b);
    }

    rep.rows.push_back(row(2, "random_pairs", cfg.samples, 100, ">="));
    rep.rows.push_back(row(2, "wente_sup_ratio_max", sup_max, 0.5 / pi + th.wente_sup_slack, "<="));
    for (std::size_t q = 0; q < cfg.alphas.size(); ++q)
        rep.rows.push_back(row(3, "random_weighted_ratio_max(alpha=" + num(cfg.alphas[q]) + ")", t1_max[q], th.weighted_ratio_cap, "<="));
    rep.rows.push_back(row(8, "clms_ratio_max", clms_max, th.clms_cap, "<="));
    rep.rows.push_back(row(8, "lorentz22_vs_l2(random)", l2_gap, th.lorentz_l2, "<="));
    rep.rows.push_back(row(8, "nesting_violations(random)", nesting_violations, 0, "=="));
    return rep;
}

// ---------------------------------------------------------------------------
// Criteria 3 (adversarial part), 4, 7

SuiteReport run_dyadic_audit(const ExperimentConfig& cfg) {
    const Thresholds& th = cfg.thresholds;
    SuiteReport rep;
    rep.suite = "dyadic-audit";
    const GridPtr grid = cfg.grid();

    // Adversarial annulus family.
    auto adv_csv = open_csv(cfg, "adversarial.csv");
    if (adv_csv) *adv_csv << "j,alpha,quantity,b_weight,lhs,rhs,constant\n";
    std::vector<double> js;
    std::vector<std::vector<double>> t1(cfg.alphas.size());
    std::vector<double> pow_c, crit_c;
    for (int j = cfg.adversarial_j_min; j <= cfg.adversarial_j_max; ++j) {
        const auto [a, b] = adversarial_pair(grid, j);
        const ScalarField phi = solve_dirichlet(jacobian(a.grad, b.grad)).phi;
        const VectorField gphi = gradient(phi);
        const double na = energy(a.grad);
        js.push_back(j);
        for (std::size_t q = 0; q < cfg.alphas.size(); ++q) {
            const double alpha = cfg.alphas[q];
            const double c = weighted_ratio(phi, gphi, a.grad, b.grad, alpha);
            t1[q].push_back(c);
            if (adv_csv)
                *adv_csv << j << ',' << alpha << ",weighted_ratio," << b_weight(alpha).name() << ",,," << c << '\n';
        }
        const double lhs = std::pow(weighted_energy(gphi, Weight::pow(1.0)), 2);
        const double bp = std::pow(weighted_energy(b.grad, Weight::pow(1.0)), 2);
        const double bc = std::pow(weighted_energy(b.grad, Weight::crit()), 2);
        pow_c.push_back(lhs / (bp * na * na));
        crit_c.push_back(lhs / (bc * na * na));
        if (adv_csv) {
            *adv_csv << j << ",1,energy,POW(1)," << lhs << ',' << bp * na * na << ',' << pow_c.back() << '\n';
            *adv_csv << j << ",1,energy,CRIT," << lhs << ',' << bc * na * na << ',' << crit_c.back() << '\n';
        }
    }
    auto logs = [](const std::vector<double>& v) {
        std::vector<double> out;
        for (double x : v) out.push_back(std::log(x));
        return out;
    };
    for (std::size_t q = 0; q < cfg.alphas.size(); ++q) {
        const std::string tag = "(alpha=" + num(cfg.alphas[q]) + ")";
        rep.rows.push_back(row(3, "adversarial_weighted_ratio_max" + tag, *std::max_element(t1[q].begin(), t1[q].end()),
                               th.adversarial_cap, "<="));
        rep.rows.push_back(row(3, "adversarial_log_slope" + tag, fit_slope(js, logs(t1[q])), th.flat_slope, "|x|<="));
    }
    rep.rows.push_back(row(4, "pow_both_sides_slope", fit_slope(js, pow_c), 0.0, ">"));
    rep.rows.push_back(row(4, "pow_both_sides_linear_r2", fit_r2(js, pow_c), th.linear_fit_r2, ">="));
    rep.rows.push_back(row(4, "crit_right_log_slope", fit_slope(js, logs(crit_c)), th.flat_slope, "|x|<="));

    // Decomposition contract on b = y and on random fields.
    auto dec_csv = open_csv(cfg, "decomposition.csv");
    if (dec_csv) *dec_csv << "field,j,level_constant,support_lo,support_hi,tail\n";
    double recon = 0.0, support = 0.0, c_dec = 0.0;
    auto check = [&](const std::string& name, const ScalarField& b, const VectorField& gb) {
        const DyadicDecomposition dec = decompose_b(b, gb, cfg.j_max);
        recon = std::max(recon, dec.reconstruction_error);
        support = std::max(support, dec.support_violation);
        c_dec = std::max(c_dec, dec.c_dec);
        if (dec_csv)
            for (const auto& p : dec.pieces)
                *dec_csv << name << ',' << p.j << ',' << p.level_constant << ',' << p.support_lo << ','
                         << p.support_hi << ',' << (p.tail ? 1 : 0) << '\n';
    };
    {
        SampledField y{ScalarField(grid), VectorField(grid)};
        for (int i = 0; i < grid->n_radial(); ++i)
            for (int k = 0; k < grid->n_theta(); ++k) {
                y.f(i, k) = grid->radius(i) * std::sin(grid->theta(k));
                y.grad.vy[grid->index(i, k)] = 1.0;
            }
        check("y", y.f, y.grad);
        std::mt19937_64 rng(cfg.seed ^ 0xd1adULL);
        for (int s = 0; s < 8; ++s) {
            const SampledField b = draw(cfg, grid, rng, rep.resampled);
            check("sample=" + std::to_string(s), b.f, b.grad);
        }
    }
    rep.rows.push_back(row(7, "reconstruction_error", recon, th.reconstruction, "<="));
    rep.rows.push_back(row(7, "support_violation", support, th.support, "<="));
    // Every level of every field sits under one cap.
    rep.rows.push_back(row(7, "c_dec_max_over_levels", c_dec, th.c_dec_cap, "<="));

    // Per-level audit of a = x, b = y.
    if (auto audit_csv = open_csv(cfg, "dyadic_audit.csv")) {
        ScalarField x(grid), y(grid);
        for (int i = 0; i < grid->n_radial(); ++i)
            for (int k = 0; k < grid->n_theta(); ++k) {
                x(i, k) = grid->radius(i) * std::cos(grid->theta(k));
                y(i, k) = grid->radius(i) * std::sin(grid->theta(k));
            }
        const VectorField gx = gradient(x);
        DyadicDecomposition dec = decompose_b(y, cfg.j_max);
        std::vector<AuditRecord> records;
        for (auto& p : dec.pieces) {
            solve_piece(x, gx, p);
            for (double alpha : {0.5, 1.0}) records.push_back(audit_piece(x, gx, p, alpha));
        }
        write_audit_csv(*audit_csv, records);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Criteria 5, 6

SuiteReport run_counterexample(const ExperimentConfig& cfg) {
    const Thresholds& th = cfg.thresholds;
    SuiteReport rep;
    rep.suite = "counterexample";
    const GridPtr grid = cfg.grid();
    const std::vector<double> alphas = cfg.sweep_alphas.empty() ? default_alpha_list() : cfg.sweep_alphas;

    for (double beta : cfg.betas) {
        const SweepTable t = divergence_sweep(alphas, beta, grid);
        if (auto csv = open_csv(cfg, "sweep_beta_" + num(beta) + ".csv")) write_sweep_csv(*csv, t);
        const std::string tag = "(beta=" + num(beta) + ")";
        if (beta < 1.0) {
            rep.rows.push_back(row(5, "monotone" + tag, t.monotone_increasing ? 1.0 : 0.0, 1.0, "=="));
            rep.rows.push_back(within(5, "log_log_slope" + tag, t.slope, 0.5 * (1.0 - beta), th.sweep_slope_tolerance));
        } else {
            rep.rows.push_back(row(5, "max_over_min" + tag, t.max_over_min, th.sweep_bounded_factor, "<="));
        }
    }

    auto cf_csv = open_csv(cfg, "closed_forms.csv");
    if (cf_csv) *cf_csv << "alpha,beta,name,value,exact,grid_quadrature,exp_sinh_quadrature\n";
    double quad_err = 0.0, jump = 0.0, flux = 0.0;
    for (double alpha : alphas) {
        const GluedFamily fam = build_glued_family(alpha, grid);
        jump = std::max(jump, fam.continuity_jump());
        flux = std::max(flux, std::abs(fam.flux_match_residual()));
        const NormsRecord cf = closed_form_norms(alpha, 0.5);
        const double ts = grad_a_tilde_quadrature(alpha);
        quad_err = std::max(quad_err, std::abs(ts / cf.grad_a_sq - 1.0));
        if (cf_csv) {
            const double on_grid = integrate(squared_magnitude(fam.grad_a_tilde));
            for (const auto& e : cf.entries()) {
                *cf_csv << alpha << ',' << cf.beta << ',' << e.name << ',' << e.value << ',' << (e.exact ? 1 : 0);
                if (e.name == "grad_a_sq") *cf_csv << ',' << on_grid << ',' << ts;
                else *cf_csv << ",,";
                *cf_csv << '\n';
            }
        }
    }
    rep.rows.push_back(row(6, "grad_a_sq_quadrature_relative", quad_err, th.closed_form_relative, "<="));

    // Dirichlet solve of J(a~, y) against h_alpha at two resolutions.
    auto solve_csv = open_csv(cfg, "solve_check.csv");
    if (solve_csv) *solve_csv << "alpha,nodes_per_level,relative_l2_to_h_alpha,relative_l2_to_layer_corrected\n";
    const GridPtr refined = grid_with(cfg, cfg.n_theta * 2, cfg.nodes_per_level * 2);
    double worst_ref = 0.0, worst_ratio = 0.0;
    for (double alpha : {1.0, 2.0 / 3.0, 0.25}) {
        double errs[2];
        int slot = 0;
        for (const GridPtr& gp : {grid, refined}) {
            const GluedFamily fam = build_glued_family(alpha, gp);
            const ScalarField phi = solve_dirichlet(jacobian(fam.grad_a_tilde, fam.grad_b_tilde)).phi;
            errs[slot] = relative_l2(phi, fam.h_field);
            if (solve_csv)
                *solve_csv << alpha << ',' << gp->grading().nodes_per_level << ',' << errs[slot] << ','
                           << relative_l2(phi, wente_solution_field(alpha, gp)) << '\n';
            ++slot;
        }
        worst_ref = std::max(worst_ref, errs[0]);
        worst_ratio = std::max(worst_ratio, errs[1] / errs[0]);
    }
    rep.rows.push_back(row(6, "solve_vs_h_alpha_relative_l2", worst_ref, th.h_alpha_relative_l2, "<="));
    rep.rows.push_back(row(6, "solve_vs_h_alpha_refinement_ratio", worst_ratio, 1.0, "<"));
    rep.rows.push_back(row(6, "continuity_jump", jump, th.gluing_residual, "<="));
    rep.rows.push_back(row(6, "flux_residual", flux, th.gluing_residual, "<="));
    return rep;
}

// ---------------------------------------------------------------------------
// Criteria 8 (closed forms), 9

SuiteReport run_lorentz_check(const ExperimentConfig& cfg) {
    const Thresholds& th = cfg.thresholds;
    SuiteReport rep;
    rep.suite = "lorentz-check";
    const GridPtr grid = cfg.grid();
    auto csv = open_csv(cfg, "lorentz.csv");
    if (csv) *csv << "check,value,expected\n";
    auto log = [&](const std::string& check, double v, double e) {
        if (csv) *csv << check << ',' << v << ',' << e << '\n';
    };

    ScalarField one(grid), inv_r(grid);
    for (int i = 0; i < grid->n_radial(); ++i)
        for (int k = 0; k < grid->n_theta(); ++k) {
            one(i, k) = 1.0;
            inv_r(i, k) = 1.0 / grid->radius(i);
        }
    const double sqpi = std::sqrt(pi);
    const double l21 = lorentz(one, 2.0, 1.0), l2w = lorentz_weak(one, 2.0), inv = lorentz_weak(inv_r, 2.0);
    log("const_L21", l21, 2.0 * sqpi);
    log("const_L2inf", l2w, sqpi);
    log("inv_r_L2inf", inv, sqpi);
    rep.rows.push_back(row(8, "const_L21_relative", std::abs(l21 / (2.0 * sqpi) - 1.0), th.lorentz_exact, "<="));
    rep.rows.push_back(row(8, "const_L2inf_relative", std::abs(l2w / sqpi - 1.0), th.lorentz_exact, "<="));
    rep.rows.push_back(row(8, "inv_r_L2inf_relative", std::abs(inv / sqpi - 1.0), th.lorentz_one_over_r, "<="));

    std::mt19937_64 rng(cfg.seed ^ 0x10e7ULL);
    double gap = 0.0;
    int violations = 0;
    int resampled = 0;
    std::vector<ScalarField> fields{one, inv_r};
    for (int s = 0; s < 16; ++s) {
        SampledField f = draw(cfg, grid, rng, resampled);
        fields.push_back(f.f);
        fields.push_back(magnitude(f.grad));
    }
    for (const auto& f : fields) {
        const double l2 = l2_norm(f);
        const double l22 = lorentz(f, 2.0, 2.0);
        gap = std::max(gap, std::abs(l22 - l2) / l2);
        if (lorentz_weak(f, 2.0) > lorentz(f, 2.0, 1.0)) ++violations;
    }
    rep.resampled += resampled;
    log("lorentz22_vs_l2_max_relative", gap, 0.0);
    rep.rows.push_back(row(8, "lorentz22_vs_l2", gap, th.lorentz_l2, "<="));
    rep.rows.push_back(row(8, "nesting_violations", violations, 0, "=="));

    // CRIT / DGR on r = 2^-t, t in [1, 40].
    const Weight crit = Weight::crit(), dgr = Weight::dgr();
    double worst = 0.0;
    for (int n = 0; n <= 390; ++n) {
        const double r = std::exp2(-(1.0 + 0.1 * n));
        worst = std::max(worst, crit(r) / dgr(r));
    }
    log("crit_over_dgr_max", worst, th.weight_ratio);
    rep.rows.push_back(row(9, "crit_over_dgr_max", worst, th.weight_ratio, "<="));
    return rep;
}

SuiteReport run_all(const ExperimentConfig& cfg) {
    SuiteReport rep;
    rep.suite = "all";
    rep.append(run_solver_validation(cfg));
    rep.append(run_random_suite(cfg));
    rep.append(run_dyadic_audit(cfg));
    rep.append(run_counterexample(cfg));
    rep.append(run_lorentz_check(cfg));
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const SuiteRow& a, const SuiteRow& b) { return a.criterion < b.criterion; });
    return rep;
}

}  // namespace wente
