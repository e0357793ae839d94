#include "wente/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "wente/error.hpp"
#include "wente/norms.hpp"
#include "wente/poisson.hpp"

namespace wente {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
double smoothstep_slope(double t) { return 6.0 * t * (1.0 - t); }

double dyadic(int j) { return std::exp2(-j); }

// Area-weighted mean of f over lo <= r <= hi.
double band_mean(const ScalarField& f, double lo, double hi) {
    const PolarGrid& g = *f.grid;
    double s = 0.0, area = 0.0;
    for (int i = 0; i < g.n_radial(); ++i) {
        const double r = g.radius(i);
        if (r < lo || r > hi) continue;
        for (int k = 0; k < g.n_theta(); ++k) {
            const double w = g.quad_weight(g.index(i, k));
            s += f(i, k) * w;
            area += w;
        }
    }
    return area > 0.0 ? s / area : 0.0;
}

double band_energy(const VectorField& v, double lo, double hi) {
    return integrate_band(squared_magnitude(v), lo, hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Cutoffs

Cutoff::Cutoff(double r0, double r1, double r2, double r3) : r0_(r0), r1_(r1), r2_(r2), r3_(r3) {}

double Cutoff::operator()(double r) const {
    if (r1_ > 0.0) {
        if (r <= r0_) return 0.0;
        if (r < r1_) return smoothstep((r - r0_) / (r1_ - r0_));
    }
    if (r <= r2_) return 1.0;
    if (r >= r3_) return 0.0;
    return 1.0 - smoothstep((r - r2_) / (r3_ - r2_));
}

double Cutoff::derivative(double r) const {
    if (r1_ > 0.0) {
        if (r <= r0_) return 0.0;
        if (r < r1_) return smoothstep_slope((r - r0_) / (r1_ - r0_)) / (r1_ - r0_);
    }
    if (r <= r2_ || r >= r3_) return 0.0;
    return -smoothstep_slope((r - r2_) / (r3_ - r2_)) / (r3_ - r2_);
}

double Cutoff::support_lo() const { return r1_ > 0.0 ? r0_ : 0.0; }
double Cutoff::support_hi() const { return std::min(r3_, 1.0); }

Cutoff cutoff_chi(int j) {
    if (j < 0) throw ParameterError("cutoff level must be >= 0");
    return Cutoff(0.0, 0.0, dyadic(j + 1), dyadic(j));
}

Cutoff cutoff_psi(int j) {
    if (j < 0) throw ParameterError("cutoff level must be >= 0");
    return Cutoff(dyadic(j + 3), dyadic(j + 2), dyadic(j), dyadic(j) + dyadic(j + 3));
}

Cutoff partition_piece(int j, int j_max) {
    if (j < 0 || j > j_max) throw ParameterError("partition level out of range");
    const double lo = j == j_max ? 0.0 : dyadic(j + 2);
    const double mid = j == j_max ? 0.0 : dyadic(j + 1);
    const double hi_start = j == 0 ? inf : dyadic(j + 1);
    const double hi_end = j == 0 ? inf : dyadic(j);
    if (j == j_max && j == 0) return Cutoff(0.0, 0.0, inf, inf);
    return Cutoff(lo, mid, hi_start, hi_end);
}

// ---------------------------------------------------------------------------
// Decomposition of b

DyadicDecomposition decompose_b(const ScalarField& b, int j_max) { return decompose_b(b, gradient(b), j_max); }

DyadicDecomposition decompose_b(const ScalarField& b, const VectorField& grad_b, int j_max) {
    require_same_grid(b.grid, grad_b.grid);
    const PolarGrid& g = *b.grid;
    if (j_max < 0 || j_max > g.deepest_level() - 1)
        throw ParameterError("j_max = " + std::to_string(j_max) + " is not resolved by a grid with " +
                             std::to_string(g.deepest_level()) + " levels (need j_max <= levels - 1)");

    std::vector<double> means(static_cast<std::size_t>(j_max + 1));
    for (int j = 0; j <= j_max; ++j) means[static_cast<std::size_t>(j)] = band_mean(b, dyadic(j + 1), dyadic(j));

    DyadicDecomposition dec;
    dec.j_max = j_max;
    VectorField sum(b.grid);
    const double total = std::sqrt(integrate(squared_magnitude(grad_b)));

    for (int j = 0; j <= j_max; ++j) {
        const Cutoff zeta = partition_piece(j, j_max);
        const double m = means[static_cast<std::size_t>(j)];
        const bool last = j == j_max;
        const double corr = last ? 0.0 : means[static_cast<std::size_t>(j + 1)] - m;
        const double offset = j == 0 ? m : 0.0;
        const Cutoff chi_next = cutoff_chi(j + 1);

        DyadicPiece piece;
        piece.j = j;
        piece.tail = last;
        piece.support_lo = last ? 0.0 : dyadic(j + 2);
        piece.support_hi = dyadic(j);
        piece.b_j = ScalarField(b.grid);
        piece.grad_b_j = VectorField(b.grid);
        for (int i = 0; i < g.n_radial(); ++i) {
            const double r = g.radius(i);
            const double z = zeta(r), dz = zeta.derivative(r);
            const double c = last ? 0.0 : chi_next(r);
            const double dc = last ? 0.0 : chi_next.derivative(r);
            for (int k = 0; k < g.n_theta(); ++k) {
                const auto n = g.index(i, k);
                const double cs = std::cos(g.theta(k)), sn = std::sin(g.theta(k));
                const double centred = b.values[n] - m;
                piece.b_j.values[n] = z * centred + corr * c + offset;
                const double radial = centred * dz + corr * dc;
                piece.grad_b_j.vx[n] = z * grad_b.vx[n] + radial * cs;
                piece.grad_b_j.vy[n] = z * grad_b.vy[n] + radial * sn;
            }
        }
        sum += piece.grad_b_j;

        const double band = band_energy(grad_b, piece.support_lo, piece.support_hi);
        const double own = integrate(squared_magnitude(piece.grad_b_j));
        piece.level_constant = band > 0.0 ? own / band : 0.0;
        dec.c_dec = std::max(dec.c_dec, piece.level_constant);

        for (int i = 0; i < g.n_radial(); ++i) {
            const double r = g.radius(i);
            if (r >= piece.support_lo && r <= piece.support_hi) continue;
            for (int k = 0; k < g.n_theta(); ++k) {
                const auto n = g.index(i, k);
                const double mag = std::hypot(piece.grad_b_j.vx[n], piece.grad_b_j.vy[n]);
                if (total > 0.0) dec.support_violation = std::max(dec.support_violation, mag / total);
            }
        }
        dec.pieces.push_back(std::move(piece));
    }

    sum -= grad_b;
    dec.reconstruction_error = total > 0.0 ? std::sqrt(integrate(squared_magnitude(sum))) / total : 0.0;
    return dec;
}

// ---------------------------------------------------------------------------
// Localization of a

LocalizedA localize_a(const ScalarField& a, int j) { return localize_a(a, gradient(a), j); }

LocalizedA localize_a(const ScalarField& a, const VectorField& grad_a, int j) {
    require_same_grid(a.grid, grad_a.grid);
    const PolarGrid& g = *a.grid;
    const Cutoff psi = cutoff_psi(j);
    const double lo = psi.support_lo(), hi = psi.support_hi();

    LocalizedA out;
    out.a_j = ScalarField(a.grid);
    out.grad_a_j = VectorField(a.grid);
    const double local = band_energy(grad_a, lo, hi);
    if (!(local > 0.0)) return out;

    out.c_j = band_mean(a, lo, hi);
    for (int i = 0; i < g.n_radial(); ++i) {
        const double r = g.radius(i);
        const double p = psi(r), dp = psi.derivative(r);
        for (int k = 0; k < g.n_theta(); ++k) {
            const auto n = g.index(i, k);
            const double centred = a.values[n] - out.c_j;
            out.a_j.values[n] = p * centred;
            out.grad_a_j.vx[n] = p * grad_a.vx[n] + centred * dp * std::cos(g.theta(k));
            out.grad_a_j.vy[n] = p * grad_a.vy[n] + centred * dp * std::sin(g.theta(k));
        }
    }
    out.constant = integrate(squared_magnitude(out.grad_a_j)) / local;
    return out;
}

void solve_piece(const ScalarField& a, const VectorField& grad_a, DyadicPiece& piece) {
    LocalizedA loc = localize_a(a, grad_a, piece.j);
    piece.c_j = loc.c_j;
    piece.localization_constant = loc.constant;
    piece.a_j = std::move(loc.a_j);
    piece.grad_a_j = std::move(loc.grad_a_j);
    const ScalarField rhs = jacobian(piece.grad_a_j, piece.grad_b_j);
    piece.phi_j = solve_dirichlet(rhs).phi;
    piece.grad_phi_j = gradient(piece.phi_j);
    piece.solved = true;
}

// ---------------------------------------------------------------------------
// Audit

const AuditEntry* AuditRecord::find(const std::string& id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

AuditRecord audit_piece(const ScalarField& a, const VectorField& grad_a, const DyadicPiece& piece, double alpha) {
    if (!piece.solved) throw ParameterError("audit_piece needs a solved piece");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("audit alpha must lie in [0, 1]");
    const PolarGrid& g = *a.grid;
    AuditRecord rec;
    rec.j = piece.j;
    rec.alpha = alpha;

    const double b_energy = integrate(squared_magnitude(piece.grad_b_j));
    if (!(b_energy > 0.0)) {
        rec.skipped = true;
        return rec;
    }
    auto add = [&](std::string id, double lhs, double rhs) {
        rec.entries.push_back({std::move(id), lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0});
    };

    const Cutoff psi = cutoff_psi(piece.j);
    const double a_local = band_energy(grad_a, psi.support_lo(), psi.support_hi());
    const double phi_energy = integrate(squared_magnitude(piece.grad_phi_j));
    add("localized_wente", phi_energy, b_energy * a_local);

    const double a_j_norm = weighted_energy(piece.grad_a_j, Weight::one());
    const double b_pow = weighted_energy(piece.grad_b_j, Weight::pow(alpha));
    add("weighted_sup", weighted_sup(piece.phi_j, alpha), a_j_norm * b_pow);

    const double phi_pow = weighted_energy(piece.grad_phi_j, Weight::pow(alpha));
    if (alpha < 1.0) {
        add("weighted_energy", phi_pow * phi_pow, a_j_norm * a_j_norm * b_pow * b_pow);
    } else {
        const double b_crit = weighted_energy(piece.grad_b_j, Weight::crit());
        add("weighted_energy", phi_pow * phi_pow, a_j_norm * a_j_norm * b_crit * b_crit);
        add("weighted_energy_pow", phi_pow * phi_pow, a_j_norm * a_j_norm * b_pow * b_pow);
    }

    // Newton potential of the localized right-hand side on rings r >= 2^{-j+1}:
    // |u~(x)| <= C / (|x| - 2^-j) ||grad a_j|| || |x| grad b_j ||.
    const double inner = std::exp2(1 - piece.j);
    if (inner < 1.0) {
        const ScalarField rhs = jacobian(piece.grad_a_j, piece.grad_b_j);
        const int ring_step = std::max(1, g.grading().nodes_per_level / 4);
        const int angle_step = std::max(1, g.n_theta() / 16);
        std::vector<std::size_t> targets;
        std::vector<double> radii;
        for (int i = g.n_radial() - 1; i >= 0 && g.radius(i) >= inner; i -= ring_step)
            for (int k = 0; k < g.n_theta(); k += angle_step) {
                targets.push_back(g.index(i, k));
                radii.push_back(g.radius(i));
            }
        const std::vector<double> u = newton_potential_at(rhs, targets);
        const double scale = std::exp2(-piece.j);
        const double b_lin = weighted_energy(piece.grad_b_j, Weight::pow(1.0));
        double worst = -1.0, worst_lhs = 0.0, worst_rhs = 0.0;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const double lhs = std::abs(u[t]);
            const double bound = a_j_norm * b_lin / (radii[t] - scale);
            if (bound > 0.0 && lhs / bound > worst) {
                worst = lhs / bound;
                worst_lhs = lhs;
                worst_rhs = bound;
            }
        }
        add("tail_decay", worst_lhs, worst_rhs);
    }
    return rec;
}

ScalarField assemble_phi(const std::vector<DyadicPiece>& pieces) {
    if (pieces.empty()) throw ParameterError("assemble_phi needs at least one piece");
    ScalarField out(pieces.front().b_j.grid);
    for (const auto& p : pieces) {
        if (!p.solved) throw ParameterError("assemble_phi needs solved pieces");
        out += p.phi_j;
    }
    return out;
}

void write_audit_csv(std::ostream& os, const std::vector<AuditRecord>& records) {
    const auto old = os.precision(17);
    os << "j,inequality,lhs,rhs,constant\n";
    for (const auto& rec : records) {
        if (rec.skipped) {
            os << rec.j << ",skipped,0,0,0\n";
            continue;
        }
        for (const auto& e : rec.entries) os << rec.j << ',' << e.id << ',' << e.lhs << ',' << e.rhs << ',' << e.constant << '\n';
    }
    os.precision(old);
}

}  // namespace wente
