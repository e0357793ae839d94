#pragma once

// Dyadic localization around the origin: b is split into pieces b_j whose
// gradients live on the doubled annuli B_{2^-j} \ B_{2^-j-2}, a is cut off
// and recentred near each annulus, and every piece is solved and audited
// against the per-level inequalities.

#include <iosfwd>
#include <string>
#include <vector>

#include "wente/grid.hpp"

namespace wente {

/// C^1 radial profile: 0 below r0, smoothstep up to 1 on [r0, r1], 1 on
/// [r1, r2], smoothstep down to 0 on [r2, r3], 0 above r3. r1 = 0 means "1 from
/// the origin"; r2 = +inf means "1 to the boundary".
class Cutoff {
public:
    Cutoff(double r0, double r1, double r2, double r3);

    double operator()(double r) const;
    double derivative(double r) const;
    /// Closed support intersected with (0, 1].
    double support_lo() const;
    double support_hi() const;

private:
    double r0_, r1_, r2_, r3_;
};

/// 1 on r <= 2^-j-1, 0 on r >= 2^-j; |chi'| <= 3 * 2^j.
Cutoff cutoff_chi(int j);

/// 1 on [2^-j-2, 2^-j]; ramps on [2^-j-3, 2^-j-2] and [2^-j, 2^-j + 2^-j-3].
Cutoff cutoff_psi(int j);

/// Partition of unity {zeta_j} used by decompose_b: zeta_0 = 1 - chi_1,
/// zeta_j = chi_j - chi_{j+1}, and zeta_J = chi_J for the last level J.
Cutoff partition_piece(int j, int j_max);

struct AuditEntry {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;  ///< lhs / rhs
};

struct AuditRecord {
    int j = 0;
    double alpha = 0.0;
    bool skipped = false;  ///< degenerate piece (no b_j energy)
    std::vector<AuditEntry> entries;

    const AuditEntry* find(const std::string& id) const;
};

struct DyadicPiece {
    int j = 0;
    double support_lo = 0.0;  ///< grad b_j vanishes outside [support_lo, support_hi]
    double support_hi = 0.0;
    bool tail = false;        ///< absorbs every level below j (support widened to the origin)

    ScalarField b_j;
    VectorField grad_b_j;
    double level_constant = 0.0;  ///< int |grad b_j|^2 / int over the support band of |grad b|^2

    // Filled by solve_piece.
    bool solved = false;
    double c_j = 0.0;
    ScalarField a_j;
    VectorField grad_a_j;
    double localization_constant = 0.0;
    ScalarField phi_j;
    VectorField grad_phi_j;

    AuditRecord audit;
};

struct DyadicDecomposition {
    std::vector<DyadicPiece> pieces;
    int j_max = 0;
    double reconstruction_error = 0.0;  ///< relative L2 of sum grad b_j - grad b
    double support_violation = 0.0;     ///< max |grad b_j| off its band / ||grad b||_2
    double c_dec = 0.0;                 ///< max over levels of level_constant
};

/// Splits grad b over levels 0..j_max. Throws ParameterError unless
/// 0 <= j_max <= grid levels - 1.
///
/// With m_j the mean of b over A_j:
///   b_0 = zeta_0 (b - m_0) + m_0 + (m_1 - m_0) chi_1
///   b_j = zeta_j (b - m_j) + (m_{j+1} - m_j) chi_{j+1}
///   b_J = zeta_J (b - m_J)
/// The sum telescopes to b; gradients use the product rule with exact cutoff
/// derivatives, so grad b_j is exactly zero off B_{2^-j} \ B_{2^-j-2}.
DyadicDecomposition decompose_b(const ScalarField& b, int j_max);
DyadicDecomposition decompose_b(const ScalarField& b, const VectorField& grad_b, int j_max);

struct LocalizedA {
    ScalarField a_j;
    VectorField grad_a_j;
    double c_j = 0.0;
    double constant = 0.0;  ///< int |grad a_j|^2 / int_{C_j} |grad a|^2
};

/// a_j = psi_j (a - c_j) with c_j the mean of a over C_j = spt(psi_j).
LocalizedA localize_a(const ScalarField& a, int j);
LocalizedA localize_a(const ScalarField& a, const VectorField& grad_a, int j);

/// Localizes a, solves Lap(phi_j) = J(a_j, b_j) with zero boundary values.
void solve_piece(const ScalarField& a, const VectorField& grad_a, DyadicPiece& piece);

/// Measured constants of the per-level inequalities for a solved piece.
AuditRecord audit_piece(const ScalarField& a, const VectorField& grad_a, const DyadicPiece& piece, double alpha);

/// Sum of phi_j over the pieces.
ScalarField assemble_phi(const std::vector<DyadicPiece>& pieces);

/// "j,inequality,lhs,rhs,constant"
void write_audit_csv(std::ostream& os, const std::vector<AuditRecord>& records);

}  // namespace wente
