#include "wente/poisson.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "ring_fft.hpp"
#include "wente/error.hpp"

namespace wente {

namespace {

constexpr double inv_two_pi = 0.5 / std::numbers::pi;

using cplx = std::complex<double>;

// Ring-by-ring forward transform; coefficients stored [ring][mode].
std::vector<cplx> ring_modes(const ScalarField& f) {
    const PolarGrid& g = *f.grid;
    const auto& fft = g.ring_fft();
    const auto nm = static_cast<std::size_t>(fft.modes());
    std::vector<cplx> out(static_cast<std::size_t>(g.n_radial()) * nm);
    for (int i = 0; i < g.n_radial(); ++i)
        fft.forward(std::span<const double>(f.values.data() + g.index(i, 0), static_cast<std::size_t>(g.n_theta())),
                    std::span<cplx>(out.data() + static_cast<std::size_t>(i) * nm, nm));
    return out;
}

ScalarField from_ring_modes(const GridPtr& grid, const std::vector<cplx>& modes) {
    const auto& fft = grid->ring_fft();
    const auto nm = static_cast<std::size_t>(fft.modes());
    ScalarField out(grid);
    for (int i = 0; i < grid->n_radial(); ++i)
        fft.backward(std::span<const cplx>(modes.data() + static_cast<std::size_t>(i) * nm, nm),
                     std::span<double>(out.values.data() + grid->index(i, 0), static_cast<std::size_t>(grid->n_theta())));
    return out;
}

double interior_residual(const ScalarField& phi, const ScalarField& rhs) {
    const PolarGrid& g = *phi.grid;
    const ScalarField lap = laplacian(phi);
    double s = 0.0;
    for (int i = 1; i + 1 < g.n_radial(); ++i)
        for (int k = 0; k < g.n_theta(); ++k) {
            const double d = lap(i, k) - rhs(i, k);
            s += d * d * g.quad_weight(g.index(i, k));
        }
    return std::sqrt(s);
}

// Near-field cells: the point rule for log|x - y| loses accuracy next to the
// singularity, so the kernel is averaged over the source cell instead.
constexpr int near_rings = 2;
constexpr int near_angles = 2;
constexpr int sub = 6;

double cell_averaged_log(const PolarGrid& g, int it, int is, int dk) {
    const auto r = g.radii();
    const int nr = g.n_radial();
    const double lo = is == 0 ? 0.0 : 0.5 * (r[static_cast<std::size_t>(is - 1)] + r[static_cast<std::size_t>(is)]);
    const double hi = is == nr - 1 ? 1.0 : 0.5 * (r[static_cast<std::size_t>(is)] + r[static_cast<std::size_t>(is + 1)]);
    const double dt = g.dtheta();
    const double rt = r[static_cast<std::size_t>(it)];
    double acc = 0.0, area = 0.0;
    for (int a = 0; a < sub; ++a) {
        const double rr = lo + (hi - lo) * (a + 0.5) / sub;
        for (int b = 0; b < sub; ++b) {
            const double t = dt * (dk + (b + 0.5) / sub - 0.5);
            const double d2 = rt * rt + rr * rr - 2.0 * rt * rr * std::cos(t);
            acc += 0.5 * std::log(d2) * rr;
            area += rr;
        }
    }
    return acc / area;
}

}  // namespace

DirichletSolution solve_dirichlet(const ScalarField& rhs) {
    const GridPtr& grid = rhs.grid;
    const PolarGrid& g = *grid;
    const int nr = g.n_radial();
    const int nm = g.ring_fft().modes();
    const auto r = g.radii();
    const auto stride = static_cast<std::size_t>(nm);

    std::vector<cplx> rhs_m = ring_modes(rhs);
    std::vector<cplx> phi_m(rhs_m.size(), cplx(0.0));

    // Unknowns are rings 0..nr-2; ring nr-1 is the Dirichlet boundary.
    const int n = nr - 1;
    std::vector<double> lower(static_cast<std::size_t>(n)), diag(static_cast<std::size_t>(n)),
        upper(static_cast<std::size_t>(n));
    std::vector<double> cprime(static_cast<std::size_t>(n));
    std::vector<cplx> d(static_cast<std::size_t>(n));

    for (int m = 0; m < nm; ++m) {
        const double m2 = static_cast<double>(m) * m;
        if (m == 0) {
            const double r_half = 0.5 * (r[0] + r[1]);
            lower[0] = 0.0;
            diag[0] = -1.0;
            upper[0] = 1.0;
            d[0] = rhs_m[0] * (0.5 * r_half * (r[1] - r[0]));
        } else {
            lower[0] = 0.0;
            diag[0] = 1.0;
            upper[0] = -std::pow(r[0] / r[1], m);
            d[0] = 0.0;
        }
        for (int i = 1; i < n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const double h1 = r[iu] - r[iu - 1];
            const double h2 = r[iu + 1] - r[iu];
            const double ri = r[iu];
            lower[iu] = 2.0 / (h1 * (h1 + h2)) - h2 / (h1 * (h1 + h2)) / ri;
            diag[iu] = -2.0 / (h1 * h2) + (h2 - h1) / (h1 * h2) / ri - m2 / (ri * ri);
            upper[iu] = 2.0 / (h2 * (h1 + h2)) + h1 / (h2 * (h1 + h2)) / ri;
            d[iu] = rhs_m[iu * stride + static_cast<std::size_t>(m)];
        }
        // phi at ring nr-1 is zero, so upper[n-1] drops out.

        // Thomas elimination.
        double piv = diag[0];
        if (std::abs(piv) < 1e-300) throw SolverError("zero pivot at mode " + std::to_string(m));
        cprime[0] = upper[0] / piv;
        d[0] /= piv;
        for (int i = 1; i < n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            piv = diag[iu] - lower[iu] * cprime[iu - 1];
            if (!(std::abs(piv) > 0.0) || !std::isfinite(piv))
                throw SolverError("singular radial system at mode " + std::to_string(m) + ", ring " +
                                  std::to_string(i));
            cprime[iu] = upper[iu] / piv;
            d[iu] = (d[iu] - lower[iu] * d[iu - 1]) / piv;
        }
        for (int i = n - 2; i >= 0; --i) {
            const auto iu = static_cast<std::size_t>(i);
            d[iu] -= cprime[iu] * d[iu + 1];
        }
        for (int i = 0; i < n; ++i)
            phi_m[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(m)] = d[static_cast<std::size_t>(i)];
    }

    DirichletSolution out{from_ring_modes(grid, phi_m), {}};
    for (int k = 0; k < g.n_theta(); ++k) out.phi(nr - 1, k) = 0.0;
    out.report.residual_l2 = interior_residual(out.phi, rhs);
    double bmax = 0.0;
    for (double v : boundary_trace(out.phi)) bmax = std::max(bmax, std::abs(v));
    out.report.boundary_max = bmax;
    return out;
}

ScalarField newton_potential(const ScalarField& rhs) {
    const PolarGrid& g = *rhs.grid;
    const int nr = g.n_radial();
    const int nt = g.n_theta();
    const auto r = g.radii();
    const auto w = g.radial_weights();
    const double dt = g.dtheta();

    // The kernel depends only on (target ring, source ring, angle offset).
    std::vector<double> cos_k(static_cast<std::size_t>(nt));
    for (int k = 0; k < nt; ++k) cos_k[static_cast<std::size_t>(k)] = std::cos(g.theta(k));

    // Source masses rhs * area.
    std::vector<double> mass(g.size());
    for (int i = 0; i < nr; ++i)
        for (int k = 0; k < nt; ++k)
            mass[g.index(i, k)] = rhs(i, k) * w[static_cast<std::size_t>(i)] * dt;

    ScalarField out(rhs.grid);
    std::vector<double> kernel(static_cast<std::size_t>(nt));
    for (int it = 0; it < nr; ++it) {
        const double rt = r[static_cast<std::size_t>(it)];
        for (int is = 0; is < nr; ++is) {
            const double rs = r[static_cast<std::size_t>(is)];
            bool empty = true;
            for (int k = 0; k < nt && empty; ++k) empty = mass[g.index(is, k)] == 0.0;
            if (empty) continue;
            for (int dk = 0; dk < nt; ++dk) {
                const double d2 = rt * rt + rs * rs - 2.0 * rt * rs * cos_k[static_cast<std::size_t>(dk)];
                kernel[static_cast<std::size_t>(dk)] = 0.5 * std::log(d2);
            }
            if (std::abs(is - it) <= near_rings) {
                for (int dk = -near_angles; dk <= near_angles; ++dk)
                    kernel[static_cast<std::size_t>((dk + nt) % nt)] = cell_averaged_log(g, it, is, dk);
            }
            if (is == it) {
                const double cell_radius = std::sqrt(w[static_cast<std::size_t>(it)] * dt / std::numbers::pi);
                kernel[0] = std::log(cell_radius) - 0.5;
            }
            const double* src = mass.data() + g.index(is, 0);
            double* dst = out.values.data() + g.index(it, 0);
            for (int kt = 0; kt < nt; ++kt) {
                double acc = 0.0;
                for (int ks = 0; ks < nt; ++ks) {
                    int dk = kt - ks;
                    if (dk < 0) dk += nt;
                    acc += kernel[static_cast<std::size_t>(dk)] * src[ks];
                }
                dst[kt] += acc;
            }
        }
    }
    out *= inv_two_pi;
    return out;
}

std::vector<double> newton_potential_at(const ScalarField& rhs, std::span<const std::size_t> targets) {
    const PolarGrid& g = *rhs.grid;
    const int nr = g.n_radial();
    const int nt = g.n_theta();
    std::vector<double> xs(g.size()), ys(g.size());
    for (int i = 0; i < nr; ++i)
        for (int k = 0; k < nt; ++k) {
            xs[g.index(i, k)] = g.radius(i) * std::cos(g.theta(k));
            ys[g.index(i, k)] = g.radius(i) * std::sin(g.theta(k));
        }
    std::vector<std::size_t> sources;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (rhs.values[n] != 0.0) sources.push_back(n);

    std::vector<double> out(targets.size(), 0.0);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const std::size_t target = targets[t];
        double acc = 0.0;
        for (std::size_t s : sources) {
            const double m = rhs.values[s] * g.quad_weight(s);
            if (s == target) {
                acc += (std::log(std::sqrt(g.quad_weight(s) / std::numbers::pi)) - 0.5) * m;
            } else {
                const double dx = xs[target] - xs[s], dy = ys[target] - ys[s];
                acc += 0.5 * std::log(dx * dx + dy * dy) * m;
            }
        }
        out[t] = acc * inv_two_pi;
    }
    return out;
}

ScalarField harmonic_correction(const GridPtr& grid, std::span<const double> boundary) {
    const PolarGrid& g = *grid;
    if (static_cast<int>(boundary.size()) != g.n_theta())
        throw GridMismatchError("boundary data needs one value per angle");
    const auto& fft = g.ring_fft();
    const auto nm = static_cast<std::size_t>(fft.modes());
    std::vector<cplx> coeff(nm);
    fft.forward(boundary, coeff);
    std::vector<cplx> modes(static_cast<std::size_t>(g.n_radial()) * nm);
    for (int i = 0; i < g.n_radial(); ++i) {
        const double r = g.radius(i);
        double rm = 1.0;
        for (std::size_t m = 0; m < nm; ++m) {
            modes[static_cast<std::size_t>(i) * nm + m] = coeff[m] * rm;
            rm *= r;
        }
    }
    ScalarField out = from_ring_modes(grid, modes);
    // The outer ring reproduces the data exactly.
    for (int k = 0; k < g.n_theta(); ++k) out(g.n_radial() - 1, k) = boundary[static_cast<std::size_t>(k)];
    return out;
}

OracleComparison oracle_compare(const ScalarField& rhs) {
    OracleComparison c;
    c.direct = solve_dirichlet(rhs).phi;
    c.potential = newton_potential(rhs);
    c.harmonic = harmonic_correction(rhs.grid, boundary_trace(c.potential));
    c.relative_l2 = relative_l2(c.potential - c.harmonic, c.direct);
    return c;
}

}  // namespace wente
