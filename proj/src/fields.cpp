#include "wente/fields.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "wente/counterexample.hpp"
#include "wente/dyadic.hpp"
#include "wente/error.hpp"

namespace wente {

namespace {

struct Entry {
    int min_params;
    int max_params;
};

const std::map<std::string, Entry>& table() {
    static const std::map<std::string, Entry> t = {
        {"one", {0, 0}},     {"const", {1, 1}},    {"x", {0, 0}},        {"y", {0, 0}},
        {"r2", {0, 0}},      {"rpow", {1, 1}},     {"rpowcos", {1, 2}},  {"log", {0, 0}},
        {"cos", {1, 1}},     {"sin", {1, 1}},      {"monomial", {2, 2}}, {"h", {0, 0}},
        {"f", {1, 1}},       {"a_alpha", {1, 1}},  {"psi", {1, 1}},      {"chi", {1, 1}},
        {"h_alpha", {1, 1}}, {"a_tilde", {1, 1}},
    };
    return t;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& s, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ParameterError("bad number '" + s + "' in '" + context + "'");
    return v;
}

int to_level(double v, const std::string& name) {
    if (v < 0.0 || v != std::floor(v)) throw ParameterError(name + " needs a non-negative integer level");
    return static_cast<int>(v);
}

double term_value(const FieldTerm& t, double r, double th) {
    const double x = r * std::cos(th), y = r * std::sin(th);
    const auto& p = t.params;
    const std::string& n = t.name;
    if (n == "one") return 1.0;
    if (n == "const") return p[0];
    if (n == "x") return x;
    if (n == "y") return y;
    if (n == "r2") return r * r;
    if (n == "rpow") return std::pow(r, p[0]);
    if (n == "rpowcos") return std::pow(r, p[0]) * std::cos((p.size() > 1 ? p[1] : 1.0) * th);
    if (n == "log") return std::log(r);
    if (n == "cos") return std::cos(p[0] * th);
    if (n == "sin") return std::sin(p[0] * th);
    if (n == "monomial") return std::pow(x, p[0]) * std::pow(y, p[1]);
    if (n == "h") return h_value(r, th);
    if (n == "f") return f_value(r, th, p[0]);
    if (n == "a_alpha") return a_alpha_value(r, p[0]);
    if (n == "psi") return cutoff_psi(to_level(p[0], n))(r);
    if (n == "chi") return cutoff_chi(to_level(p[0], n))(r);
    if (n == "h_alpha") return glued_value(r, th, p[0]);
    if (n == "a_tilde") return a_tilde_value(r, p[0]);
    throw ParameterError("unknown field '" + n + "'");
}

}  // namespace

std::vector<FieldTerm> parse_descriptor(const std::string& descriptor) {
    std::vector<FieldTerm> terms;
    std::stringstream ss(descriptor);
    std::string piece;
    while (std::getline(ss, piece, '+')) {
        piece = trim(piece);
        if (piece.empty()) throw ParameterError("empty term in '" + descriptor + "'");
        FieldTerm t;
        const auto star = piece.find('*');
        if (star != std::string::npos) {
            t.coef = to_number(trim(piece.substr(0, star)), descriptor);
            piece = trim(piece.substr(star + 1));
        }
        const auto colon = piece.find(':');
        t.name = trim(piece.substr(0, colon));
        if (colon != std::string::npos) {
            std::stringstream ps(piece.substr(colon + 1));
            std::string item;
            while (std::getline(ps, item, ',')) t.params.push_back(to_number(trim(item), descriptor));
        }
        const auto it = table().find(t.name);
        if (it == table().end()) throw ParameterError("unknown field '" + t.name + "' in '" + descriptor + "'");
        const int np = static_cast<int>(t.params.size());
        if (np < it->second.min_params || np > it->second.max_params)
            throw ParameterError("field '" + t.name + "' takes " + std::to_string(it->second.min_params) +
                                 (it->second.max_params != it->second.min_params
                                      ? "-" + std::to_string(it->second.max_params)
                                      : std::string()) +
                                 " parameters, got " + std::to_string(np));
        if (t.name == "psi" || t.name == "chi") to_level(t.params[0], t.name);
        terms.push_back(std::move(t));
    }
    if (terms.empty()) throw ParameterError("empty field descriptor");
    return terms;
}

double evaluate(const std::vector<FieldTerm>& terms, double r, double theta) {
    double v = 0.0;
    for (const auto& t : terms) v += t.coef * term_value(t, r, theta);
    return v;
}

ScalarField sample(const std::string& descriptor, const GridPtr& grid) {
    const auto terms = parse_descriptor(descriptor);
    ScalarField out(grid);
    for (int i = 0; i < grid->n_radial(); ++i)
        for (int k = 0; k < grid->n_theta(); ++k) {
            const double r = grid->radius(i), th = grid->theta(k);
            const double v = evaluate(terms, r, th);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "field '" << descriptor << "' is not finite at node (" << i << ", " << k << "), r = " << r
                   << ", theta = " << th;
                throw EvaluationError(os.str());
            }
            out(i, k) = v;
        }
    return out;
}

std::vector<std::string> catalog() {
    std::vector<std::string> out;
    for (const auto& [name, _] : table()) out.push_back(name);
    return out;
}

}  // namespace wente
