#pragma once

#include <iosfwd>
#include <string>

#include "wente/grid.hpp"

namespace wente {

/// Radial weights w(r) used in the weighted energies.
class Weight {
public:
    enum class Kind {
        one,        ///< 1
        pow,        ///< r^{2 alpha}
        crit,       ///< r^2 |log r|
        crit_beta,  ///< r^2 |log r|^beta
        dgr,        ///< r^2 log^2(1 + 1/r) log(1 + log(1/r))
    };

    static Weight one() { return Weight(Kind::one, 0.0); }
    static Weight pow(double alpha) { return Weight(Kind::pow, alpha); }
    static Weight crit() { return Weight(Kind::crit, 1.0); }
    static Weight crit_beta(double beta) { return Weight(Kind::crit_beta, beta); }
    static Weight dgr() { return Weight(Kind::dgr, 0.0); }

    Kind kind() const { return kind_; }
    double parameter() const { return param_; }
    double operator()(double r) const;
    std::string name() const;

private:
    Weight(Kind k, double p) : kind_(k), param_(p) {}
    Kind kind_;
    double param_;
};

/// sqrt( integral of w(r) |v|^2 ).
double weighted_energy(const VectorField& v, const Weight& w);

/// max over nodes of r^alpha |f|.
double weighted_sup(const ScalarField& f, double alpha);

/// Lorentz (p,q) quasinorm of the step function that takes value f_n on a
/// set of measure w_n:
///   p^{1/q} ( int_0^inf t^q |{|f| >= t}|^{q/p} dt/t )^{1/q},
/// integrated exactly on the steps of the distribution function.
double lorentz(const ScalarField& f, double p, double q);

/// sup_t t |{|f| >= t}|^{1/p} on the same step surrogate.
double lorentz_weak(const ScalarField& f, double p);

struct RatioReport {
    std::string experiment;
    std::string lhs_weight;
    std::string a_weight;
    std::string b_weight;
    double lhs = 0.0;
    double rhs_a = 0.0;
    double rhs_b = 0.0;
    double ratio = 0.0;  ///< lhs / (rhs_a * rhs_b)
};

struct RatioMeta {
    std::string experiment;
    std::string lhs_weight;
    std::string a_weight;
    std::string b_weight;
};

/// Throws DegenerateInputError when a_norm * b_norm is not positive, and
/// ParameterError on negative inputs.
RatioReport ratio_report(double lhs_value, double a_norm, double b_norm, RatioMeta meta = {});

/// "experiment,lhs_weight,a_weight,b_weight,lhs,rhs_a,rhs_b,ratio"
void write_ratio_header(std::ostream& os);
void write_ratio_row(std::ostream& os, const RatioReport& r);

}  // namespace wente
