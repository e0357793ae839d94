#include "wente/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

#include "wente/error.hpp"

namespace wente {

double Weight::operator()(double r) const {
    const double abs_log = r >= 1.0 ? 0.0 : -std::log(r);
    switch (kind_) {
    case Kind::one:
        return 1.0;
    case Kind::pow:
        return param_ == 0.0 ? 1.0 : std::pow(r, 2.0 * param_);
    case Kind::crit:
        return r * r * abs_log;
    case Kind::crit_beta:
        if (param_ == 0.0) return r * r;
        return r * r * std::pow(abs_log, param_);
    case Kind::dgr: {
        const double l = std::log1p(1.0 / r);
        return r * r * l * l * std::log1p(abs_log);
    }
    }
    return 0.0;
}

std::string Weight::name() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::one: os << "ONE"; break;
    case Kind::pow: os << "POW(" << param_ << ")"; break;
    case Kind::crit: os << "CRIT"; break;
    case Kind::crit_beta: os << "CRITBETA(" << param_ << ")"; break;
    case Kind::dgr: os << "DGR"; break;
    }
    return os.str();
}

double weighted_energy(const VectorField& v, const Weight& w) {
    const PolarGrid& g = *v.grid;
    double s = 0.0;
    for (int i = 0; i < g.n_radial(); ++i) {
        const double wr = w(g.radius(i));
        if (wr == 0.0) continue;
        for (int k = 0; k < g.n_theta(); ++k) {
            const auto n = g.index(i, k);
            s += wr * (v.vx[n] * v.vx[n] + v.vy[n] * v.vy[n]) * g.quad_weight(n);
        }
    }
    return std::sqrt(s);
}

double weighted_sup(const ScalarField& f, double alpha) {
    const PolarGrid& g = *f.grid;
    double m = 0.0;
    for (int i = 0; i < g.n_radial(); ++i) {
        const double ra = alpha == 0.0 ? 1.0 : std::pow(g.radius(i), alpha);
        for (int k = 0; k < g.n_theta(); ++k) m = std::max(m, ra * std::abs(f(i, k)));
    }
    return m;
}

namespace {

// Distinct |f| levels in decreasing order with the measure of {|f| >= level}.
std::vector<std::pair<double, double>> distribution_steps(const ScalarField& f) {
    std::vector<std::pair<double, double>> nodes(f.values.size());
    const auto w = f.grid->quad_weights();
    for (std::size_t n = 0; n < f.values.size(); ++n) nodes[n] = {std::abs(f.values[n]), w[n]};
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::pair<double, double>> steps;
    double measure = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        measure += nodes[n].second;
        if (n + 1 == nodes.size() || nodes[n + 1].first != nodes[n].first) {
            if (nodes[n].first > 0.0) steps.emplace_back(nodes[n].first, measure);
        }
    }
    return steps;
}

}  // namespace

double lorentz(const ScalarField& f, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
        throw ParameterError("lorentz needs finite positive p, q");
    const auto steps = distribution_steps(f);
    // On (v_{k+1}, v_k] the distribution function equals M_k.
    double acc = 0.0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const double hi = steps[k].first;
        const double lo = k + 1 < steps.size() ? steps[k + 1].first : 0.0;
        acc += std::pow(steps[k].second, q / p) * (std::pow(hi, q) - std::pow(lo, q)) / q;
    }
    return std::pow(p, 1.0 / q) * std::pow(acc, 1.0 / q);
}

double lorentz_weak(const ScalarField& f, double p) {
    if (!(p > 0.0)) throw ParameterError("lorentz_weak needs p > 0");
    double best = 0.0;
    for (const auto& [level, measure] : distribution_steps(f))
        best = std::max(best, level * std::pow(measure, 1.0 / p));
    return best;
}

RatioReport ratio_report(double lhs_value, double a_norm, double b_norm, RatioMeta meta) {
    if (lhs_value < 0.0 || a_norm < 0.0 || b_norm < 0.0)
        throw ParameterError("ratio_report inputs must be non-negative");
    const double denom = a_norm * b_norm;
    if (!(denom > 0.0)) throw DegenerateInputError("ratio_report: zero denominator");
    RatioReport r;
    r.experiment = std::move(meta.experiment);
    r.lhs_weight = std::move(meta.lhs_weight);
    r.a_weight = std::move(meta.a_weight);
    r.b_weight = std::move(meta.b_weight);
    r.lhs = lhs_value;
    r.rhs_a = a_norm;
    r.rhs_b = b_norm;
    r.ratio = lhs_value / denom;
    return r;
}

void write_ratio_header(std::ostream& os) {
    os << "experiment,lhs_weight,a_weight,b_weight,lhs,rhs_a,rhs_b,ratio\n";
}

void write_ratio_row(std::ostream& os, const RatioReport& r) {
    const auto old = os.precision(17);
    os << r.experiment << ',' << r.lhs_weight << ',' << r.a_weight << ',' << r.b_weight << ',' << r.lhs << ','
       << r.rhs_a << ',' << r.rhs_b << ',' << r.ratio << '\n';
    os.precision(old);
}

}  // namespace wente
