#pragma once

#include <span>
#include <vector>

#include "wente/grid.hpp"

namespace wente {

struct SolveReport {
    double residual_l2 = 0.0;   ///< discrete ||Lap(phi) - rhs|| over interior rings
    double boundary_max = 0.0;  ///< max |phi| on the unit circle
};

struct DirichletSolution {
    ScalarField phi;
    SolveReport report;
};

/// Solves Lap(phi) = rhs on B_1 with phi = 0 on the unit circle.
///
/// Each angular Fourier mode m is an independent radial two-point problem
///   phi_m'' + phi_m'/r - m^2 phi_m / r^2 = rhs_m
/// discretized with 3-point nonuniform differences. The missing condition at
/// the innermost node r_0 is a two-point regularity closure: for m >= 1,
/// phi_m(r_0) = (r_0/r_1)^m phi_m(r_1); for m = 0 the flux balance over
/// [0, (r_0+r_1)/2] with rhs frozen at r_0.
DirichletSolution solve_dirichlet(const ScalarField& rhs);

/// (1/2pi) sum_k log|x_i - y_k| rhs_k w_k at every node. The self term uses
/// the mean of log|x_i - y| over the disk with the node's area, log R - 1/2.
/// O(N^2); meant as an oracle.
ScalarField newton_potential(const ScalarField& rhs);

/// Same sum evaluated only at the given flat node indices.
std::vector<double> newton_potential_at(const ScalarField& rhs, std::span<const std::size_t> targets);

/// Harmonic extension of per-angle boundary data: sum_m g_m r^|m| e^{i m theta}.
ScalarField harmonic_correction(const GridPtr& grid, std::span<const double> boundary);

struct OracleComparison {
    ScalarField direct;     ///< solve_dirichlet(rhs)
    ScalarField potential;  ///< Newton potential u~
    ScalarField harmonic;   ///< v with v = u~ on the unit circle
    double relative_l2 = 0.0;  ///< ||direct - (u~ - v)|| / ||direct||
};

/// Compares the mode solver against the potential-minus-harmonic construction.
OracleComparison oracle_compare(const ScalarField& rhs);

}  // namespace wente
