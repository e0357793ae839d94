#pragma once

// Analytic field descriptors. A descriptor is a sum of terms joined by '+',
// each written [coef*]name[:p1[,p2]]:
//
//   one            1
//   const:c        c
//   x, y           Cartesian coordinates
//   r2             r^2
//   rpow:b         r^b
//   rpowcos:b[,m]  r^b cos(m theta), m defaults to 1
//   log            log r
//   cos:m, sin:m   cos(m theta), sin(m theta)
//   monomial:i,j   x^i y^j
//   h              x/r^2 - x
//   f:a            x r^a
//   a_alpha:a      (a + 2) r^a
//   psi:j, chi:j   dyadic cutoffs
//   h_alpha:a      glued counterexample field
//   a_tilde:a      its driving coefficient
//
// Example: "0.5*x+monomial:2,1+2*cos:3".

#include <string>
#include <vector>

#include "wente/grid.hpp"

namespace wente {

struct FieldTerm {
    double coef = 1.0;
    std::string name;
    std::vector<double> params;
};

/// Parses a descriptor; ParameterError on unknown names or wrong arity.
std::vector<FieldTerm> parse_descriptor(const std::string& descriptor);

/// Evaluates the descriptor at one point.
double evaluate(const std::vector<FieldTerm>& terms, double r, double theta);

/// Samples on every node. EvaluationError naming the node when a value is not finite.
ScalarField sample(const std::string& descriptor, const GridPtr& grid);

/// Names accepted by parse_descriptor.
std::vector<std::string> catalog();

}  // namespace wente
