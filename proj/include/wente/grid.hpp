#pragma once

// Discrete unit disk: a tensor-product polar grid (equispaced angles times
// graded radii) with fields, spectral/finite-difference differentiation and
// quadrature on it.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace wente {

namespace detail {
class RingFft;
}

struct Grading {
    enum class Kind { uniform, geometric };
    Kind kind = Kind::geometric;
    double ratio = 0.0;        ///< consecutive radius ratio (geometric only)
    int levels = 0;            ///< deepest resolved dyadic level
    int nodes_per_level = 0;   ///< radial nodes per dyadic annulus
    int core_levels = 0;       ///< extra dyadic levels below the resolved range
};

class PolarGrid;
using GridPtr = std::shared_ptr<const PolarGrid>;

/// Polar grid on B_1. Node (i, k) sits at radius radii()[i] and angle
/// 2*pi*k/n_theta; flat storage is ring-major, index = i*n_theta + k.
/// Immutable after construction.
class PolarGrid {
public:
    PolarGrid(int n_theta, std::vector<double> radii, Grading grading);
    ~PolarGrid();
    PolarGrid(const PolarGrid&) = delete;
    PolarGrid& operator=(const PolarGrid&) = delete;

    int n_theta() const { return n_theta_; }
    int n_radial() const { return static_cast<int>(radii_.size()); }
    std::size_t size() const { return radii_.size() * static_cast<std::size_t>(n_theta_); }

    std::span<const double> radii() const { return radii_; }
    double radius(int i) const { return radii_[static_cast<std::size_t>(i)]; }
    double theta(int k) const;
    double dtheta() const;

    /// Weights w_i with sum_i w_i g(r_i) ~ int_0^1 g(r) r dr (exact for cubic g).
    std::span<const double> radial_weights() const { return radial_weights_; }
    /// Per-node area weights, flat; they sum to pi.
    std::span<const double> quad_weights() const { return quad_weights_; }
    double quad_weight(std::size_t node) const { return quad_weights_[node]; }

    const Grading& grading() const { return grading_; }
    int deepest_level() const { return grading_.levels; }

    std::size_t index(int i, int k) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta_) +
               static_cast<std::size_t>(k);
    }

    /// Number of radial nodes with lo <= r <= hi.
    int count_radii(double lo, double hi) const;

    bool same_layout(const PolarGrid& other) const;

    const detail::RingFft& ring_fft() const { return *fft_; }

private:
    int n_theta_;
    std::vector<double> radii_;
    std::vector<double> radial_weights_;
    std::vector<double> quad_weights_;
    Grading grading_;
    std::unique_ptr<detail::RingFft> fft_;
};

/// Geometrically graded grid: ratio 2^(-1/nodes_per_level), so every dyadic
/// annulus A_j = B_{2^-j} \ B_{2^-j-1} holds exactly nodes_per_level nodes for
/// j <= levels, continued at the same ratio through `core_levels` further
/// annuli. Throws ParameterError unless n_theta >= 8 is even, levels >= 1,
/// nodes_per_level >= 4.
GridPtr make_grid(int n_theta, int levels, int nodes_per_level, int core_levels = 4);

/// Uniform radii i/n_radial, i = 1..n_radial. Used by refinement studies.
GridPtr make_uniform_grid(int n_theta, int n_radial);

struct ScalarField {
    GridPtr grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(GridPtr g);
    ScalarField(GridPtr g, std::vector<double> v);

    double& operator()(int i, int k) { return values[grid->index(i, k)]; }
    double operator()(int i, int k) const { return values[grid->index(i, k)]; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Cartesian components (v_x, v_y) at every node.
struct VectorField {
    GridPtr grid;
    std::vector<double> vx;
    std::vector<double> vy;

    VectorField() = default;
    explicit VectorField(GridPtr g);

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
};

/// Throws GridMismatchError when the two grids differ.
void require_same_grid(const GridPtr& a, const GridPtr& b);

/// Spectral in theta, 3-point nonuniform differences in r (one-sided at the
/// innermost and outermost ring), converted to Cartesian components.
VectorField gradient(const ScalarField& f);

/// d/dr and (1/r) d/dtheta separately.
void polar_derivatives(const ScalarField& f, std::vector<double>& d_r, std::vector<double>& d_t);

/// Discrete Laplacian on interior rings (first and last ring set to 0).
ScalarField laplacian(const ScalarField& f);

double integrate(const ScalarField& f);

/// Integral over the radial band lo <= r <= hi (node-wise selection).
double integrate_band(const ScalarField& f, double lo, double hi);

/// J(a,b) = d_x a d_y b - d_y a d_x b. Antisymmetric bit for bit.
ScalarField jacobian(const ScalarField& a, const ScalarField& b);
ScalarField jacobian(const VectorField& grad_a, const VectorField& grad_b);

ScalarField magnitude(const VectorField& v);
ScalarField squared_magnitude(const VectorField& v);

/// Values on the outer circle r = 1, one per angle.
std::vector<double> boundary_trace(const ScalarField& f);

/// Relative L2 distance ||a - b|| / ||b|| under the grid quadrature.
double relative_l2(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& f);
double max_abs(const ScalarField& f);

/// CSV with header "r,theta,value".
void write_csv(std::ostream& os, const ScalarField& f);

}  // namespace wente
