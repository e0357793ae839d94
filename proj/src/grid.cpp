#include "wente/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>

#include "ring_fft.hpp"
#include "wente/error.hpp"

namespace wente {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Weights w_i with sum_i w_i g(r_i) = int_0^{r_max} g(r) r dr whenever g is a
// cubic on each interval's 4-node window. The window for [r_i, r_{i+1}] is
// nodes i-1..i+2, shifted inward at both ends. On [0, r_0] g is frozen at
// g(r_0): extrapolating the cubic there gives sign-changing weights.
std::vector<double> cubic_radial_weights(const std::vector<double>& r) {
    const int n = static_cast<int>(r.size());
    std::vector<double> w(r.size(), 0.0);
    // 3-point Gauss-Legendre on [-1, 1]; integrand L_m(r) * r has degree 4.
    const std::array<double, 3> gx{-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    const std::array<double, 3> gw{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    auto accumulate = [&](double lo, double hi, int start) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (int q = 0; q < 3; ++q) {
            const double x = mid + half * gx[static_cast<std::size_t>(q)];
            for (int m = 0; m < 4; ++m) {
                double basis = 1.0;
                for (int l = 0; l < 4; ++l) {
                    if (l == m) continue;
                    basis *= (x - r[static_cast<std::size_t>(start + l)]) /
                             (r[static_cast<std::size_t>(start + m)] - r[static_cast<std::size_t>(start + l)]);
                }
                w[static_cast<std::size_t>(start + m)] += half * gw[static_cast<std::size_t>(q)] * basis * x;
            }
        }
    };

    w[0] += 0.5 * r[0] * r[0];
    for (int i = 0; i + 1 < n; ++i) {
        const int start = std::clamp(i - 1, 0, n - 4);
        accumulate(r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(i + 1)], start);
    }
    return w;
}

}  // namespace

PolarGrid::PolarGrid(int n_theta, std::vector<double> radii, Grading grading)
    : n_theta_(n_theta), radii_(std::move(radii)), grading_(grading) {
    if (n_theta_ < 8 || n_theta_ % 2 != 0)
        throw ParameterError("n_theta must be even and >= 8, got " + std::to_string(n_theta_));
    if (radii_.size() < 4) throw ParameterError("polar grid needs at least 4 radial nodes");
    if (!(radii_.front() > 0.0)) throw ParameterError("innermost radius must be positive");
    if (radii_.back() != 1.0) throw ParameterError("outermost radius must equal 1");
    for (std::size_t i = 1; i < radii_.size(); ++i)
        if (!(radii_[i] > radii_[i - 1])) throw ParameterError("radii must be strictly increasing");

    radial_weights_ = cubic_radial_weights(radii_);
    const double dt = dtheta();
    quad_weights_.resize(size());
    for (int i = 0; i < n_radial(); ++i)
        for (int k = 0; k < n_theta_; ++k)
            quad_weights_[index(i, k)] = radial_weights_[static_cast<std::size_t>(i)] * dt;
    fft_ = std::make_unique<detail::RingFft>(n_theta_);
}

PolarGrid::~PolarGrid() = default;

double PolarGrid::theta(int k) const { return two_pi * k / n_theta_; }
double PolarGrid::dtheta() const { return two_pi / n_theta_; }

int PolarGrid::count_radii(double lo, double hi) const {
    return static_cast<int>(std::count_if(radii_.begin(), radii_.end(),
                                          [&](double r) { return r >= lo && r <= hi; }));
}

bool PolarGrid::same_layout(const PolarGrid& other) const {
    return this == &other || (n_theta_ == other.n_theta_ && radii_ == other.radii_);
}

GridPtr make_grid(int n_theta, int levels, int nodes_per_level, int core_levels) {
    if (n_theta < 8 || n_theta % 2 != 0)
        throw ParameterError("n_theta must be even and >= 8, got " + std::to_string(n_theta));
    if (levels < 1) throw ParameterError("levels must be >= 1, got " + std::to_string(levels));
    if (nodes_per_level < 4)
        throw ParameterError("nodes_per_level must be >= 4, got " + std::to_string(nodes_per_level));
    if (core_levels < 0) throw ParameterError("core_levels must be >= 0");

    // Node k sits at 2^(-k/npl): dyadic radii are hit exactly.
    const int count = (levels + 1 + core_levels) * nodes_per_level;
    std::vector<double> radii(static_cast<std::size_t>(count + 1));
    for (int k = 0; k <= count; ++k)
        radii[static_cast<std::size_t>(count - k)] =
            std::exp2(-static_cast<double>(k) / nodes_per_level);

    Grading g;
    g.kind = Grading::Kind::geometric;
    g.ratio = std::exp2(-1.0 / nodes_per_level);
    g.levels = levels;
    g.nodes_per_level = nodes_per_level;
    g.core_levels = core_levels;
    return std::make_shared<const PolarGrid>(n_theta, std::move(radii), g);
}

GridPtr make_uniform_grid(int n_theta, int n_radial) {
    if (n_radial < 4) throw ParameterError("uniform grid needs n_radial >= 4");
    std::vector<double> radii(static_cast<std::size_t>(n_radial));
    for (int i = 1; i <= n_radial; ++i)
        radii[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) / n_radial;
    Grading g;
    g.kind = Grading::Kind::uniform;
    return std::make_shared<const PolarGrid>(n_theta, std::move(radii), g);
}

// ---------------------------------------------------------------------------
// Fields

ScalarField::ScalarField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw GridMismatchError("field size does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t n = 0; n < values.size(); ++n) values[n] += o.values[n];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t n = 0; n < values.size(); ++n) values[n] -= o.values[n];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& v : values) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(GridPtr g)
    : grid(std::move(g)), vx(grid->size(), 0.0), vy(grid->size(), 0.0) {}

VectorField& VectorField::operator+=(const VectorField& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t n = 0; n < vx.size(); ++n) {
        vx[n] += o.vx[n];
        vy[n] += o.vy[n];
    }
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t n = 0; n < vx.size(); ++n) {
        vx[n] -= o.vx[n];
        vy[n] -= o.vy[n];
    }
    return *this;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b || !a->same_layout(*b)) throw GridMismatchError("fields live on different grids");
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

// Multiplies mode m of every ring by `factor(m)`; subtracting the first sample
// keeps constant rings exactly constant.
template <class Factor>
void ring_spectral_op(const PolarGrid& g, std::span<const double> in, std::span<double> out, Factor factor) {
    const int nt = g.n_theta();
    const auto& fft = g.ring_fft();
    std::vector<double> ring(static_cast<std::size_t>(nt));
    std::vector<std::complex<double>> modes(static_cast<std::size_t>(fft.modes()));
    for (int i = 0; i < g.n_radial(); ++i) {
        const auto base = g.index(i, 0);
        const double shift = in[base];
        for (int k = 0; k < nt; ++k) ring[static_cast<std::size_t>(k)] = in[base + static_cast<std::size_t>(k)] - shift;
        fft.forward(ring, modes);
        for (int m = 0; m < fft.modes(); ++m) modes[static_cast<std::size_t>(m)] *= factor(m);
        fft.backward(modes, std::span<double>(out.data() + base, static_cast<std::size_t>(nt)));
    }
}

}  // namespace

void polar_derivatives(const ScalarField& f, std::vector<double>& d_r, std::vector<double>& d_t) {
    const PolarGrid& g = *f.grid;
    const int nr = g.n_radial();
    const int nt = g.n_theta();
    const auto r = g.radii();
    d_r.assign(g.size(), 0.0);
    d_t.assign(g.size(), 0.0);

    auto at = [&](int i, int k) { return f.values[g.index(i, k)]; };
    for (int k = 0; k < nt; ++k) {
        {
            const double h1 = r[1] - r[0], h2 = r[2] - r[1];
            const double c = (2 * h1 + h2) / (h1 * (h1 + h2));
            const double d = -h1 / (h2 * (h1 + h2));
            d_r[g.index(0, k)] = c * (at(1, k) - at(0, k)) + d * (at(2, k) - at(1, k));
        }
        for (int i = 1; i + 1 < nr; ++i) {
            const double h1 = r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i - 1)];
            const double h2 = r[static_cast<std::size_t>(i + 1)] - r[static_cast<std::size_t>(i)];
            const double a = h1 / (h2 * (h1 + h2));
            const double b = h2 / (h1 * (h1 + h2));
            d_r[g.index(i, k)] = a * (at(i + 1, k) - at(i, k)) + b * (at(i, k) - at(i - 1, k));
        }
        {
            const int n = nr - 1;
            const double h1 = r[static_cast<std::size_t>(n - 1)] - r[static_cast<std::size_t>(n - 2)];
            const double h2 = r[static_cast<std::size_t>(n)] - r[static_cast<std::size_t>(n - 1)];
            const double e = (h1 + 2 * h2) / (h2 * (h1 + h2));
            const double ff = -h2 / (h1 * (h1 + h2));
            d_r[g.index(n, k)] = e * (at(n, k) - at(n - 1, k)) + ff * (at(n - 1, k) - at(n - 2, k));
        }
    }

    const int nyquist = nt / 2;
    ring_spectral_op(g, f.values, d_t, [&](int m) {
        return m == nyquist ? std::complex<double>(0.0) : std::complex<double>(0.0, m);
    });
    for (int i = 0; i < nr; ++i)
        for (int k = 0; k < nt; ++k) d_t[g.index(i, k)] /= r[static_cast<std::size_t>(i)];
}

VectorField gradient(const ScalarField& f) {
    std::vector<double> d_r, d_t;
    polar_derivatives(f, d_r, d_t);
    const PolarGrid& g = *f.grid;
    VectorField out(f.grid);
    for (int k = 0; k < g.n_theta(); ++k) {
        const double c = std::cos(g.theta(k)), s = std::sin(g.theta(k));
        for (int i = 0; i < g.n_radial(); ++i) {
            const auto n = g.index(i, k);
            out.vx[n] = c * d_r[n] - s * d_t[n];
            out.vy[n] = s * d_r[n] + c * d_t[n];
        }
    }
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    const PolarGrid& g = *f.grid;
    const auto r = g.radii();
    ScalarField out(f.grid);
    std::vector<double> d_tt(g.size());
    ring_spectral_op(g, f.values, d_tt, [](int m) { return std::complex<double>(-double(m) * m); });
    for (int i = 1; i + 1 < g.n_radial(); ++i) {
        const double h1 = r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i - 1)];
        const double h2 = r[static_cast<std::size_t>(i + 1)] - r[static_cast<std::size_t>(i)];
        const double ri = r[static_cast<std::size_t>(i)];
        const double cm = 2.0 / (h1 * (h1 + h2)) - h2 / (h1 * (h1 + h2)) / ri;
        const double cp = 2.0 / (h2 * (h1 + h2)) + h1 / (h2 * (h1 + h2)) / ri;
        const double c0 = -2.0 / (h1 * h2) + (h2 - h1) / (h1 * h2) / ri;
        for (int k = 0; k < g.n_theta(); ++k) {
            out(i, k) = cm * f(i - 1, k) + c0 * f(i, k) + cp * f(i + 1, k) +
                        d_tt[g.index(i, k)] / (ri * ri);
        }
    }
    return out;
}

double integrate(const ScalarField& f) {
    const auto w = f.grid->quad_weights();
    double s = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n) s += f.values[n] * w[n];
    return s;
}

double integrate_band(const ScalarField& f, double lo, double hi) {
    const PolarGrid& g = *f.grid;
    double s = 0.0;
    for (int i = 0; i < g.n_radial(); ++i) {
        const double r = g.radius(i);
        if (r < lo || r > hi) continue;
        for (int k = 0; k < g.n_theta(); ++k) s += f(i, k) * g.quad_weight(g.index(i, k));
    }
    return s;
}

ScalarField jacobian(const VectorField& ga, const VectorField& gb) {
    require_same_grid(ga.grid, gb.grid);
    ScalarField out(ga.grid);
    for (std::size_t n = 0; n < out.values.size(); ++n)
        out.values[n] = ga.vx[n] * gb.vy[n] - ga.vy[n] * gb.vx[n];
    return out;
}

ScalarField jacobian(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    return jacobian(gradient(a), gradient(b));
}

ScalarField squared_magnitude(const VectorField& v) {
    ScalarField out(v.grid);
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = v.vx[n] * v.vx[n] + v.vy[n] * v.vy[n];
    return out;
}

ScalarField magnitude(const VectorField& v) {
    ScalarField out = squared_magnitude(v);
    for (auto& x : out.values) x = std::sqrt(x);
    return out;
}

std::vector<double> boundary_trace(const ScalarField& f) {
    const PolarGrid& g = *f.grid;
    const int i = g.n_radial() - 1;
    std::vector<double> out(static_cast<std::size_t>(g.n_theta()));
    for (int k = 0; k < g.n_theta(); ++k) out[static_cast<std::size_t>(k)] = f(i, k);
    return out;
}

double l2_norm(const ScalarField& f) {
    const auto w = f.grid->quad_weights();
    double s = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n) s += f.values[n] * f.values[n] * w[n];
    return std::sqrt(s);
}

double relative_l2(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    return l2_norm(a - b) / l2_norm(b);
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

void write_csv(std::ostream& os, const ScalarField& f) {
    const PolarGrid& g = *f.grid;
    const auto old = os.precision(17);
    os << "r,theta,value\n";
    for (int i = 0; i < g.n_radial(); ++i)
        for (int k = 0; k < g.n_theta(); ++k) os << g.radius(i) << ',' << g.theta(k) << ',' << f(i, k) << '\n';
    os.precision(old);
}

}  // namespace wente
