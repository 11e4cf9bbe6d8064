#include "efimov/trig_poly.hpp"

#include <cmath>
#include <cstdlib>

#include "efimov/errors.hpp"

namespace efimov {

double AxisFactor::eval(double x) const {
    double v = constant;
    for (const auto& t : terms) {
        const double a = static_cast<double>(t.harmonic) * x;
        v += t.coef * (t.is_sin ? std::sin(a) : std::cos(a));
    }
    return v;
}

double AxisFactor::max_abs_bound() const {
    double b = std::abs(constant);
    for (const auto& t : terms) b += std::abs(t.coef);
    return b;
}

double TrigPolySpec::operator()(const TorusPoint& q) const {
    double v = constant;
    for (const auto& t : terms) {
        const double a = static_cast<double>(t.harmonic) * q[static_cast<std::size_t>(t.axis - 1)];
        v += t.coef * (t.is_sin ? std::sin(a) : std::cos(a));
    }
    for (const auto& p : products)
        v += p.coef * p.factors[0].eval(q.c1) * p.factors[1].eval(q.c2) * p.factors[2].eval(q.c3);
    return v;
}

double TrigPolySpec::max_abs_bound() const {
    double b = std::abs(constant);
    for (const auto& t : terms) b += std::abs(t.coef);
    for (const auto& p : products) {
        b += std::abs(p.coef) * p.factors[0].max_abs_bound() * p.factors[1].max_abs_bound() *
             p.factors[2].max_abs_bound();
    }
    return b;
}

int TrigPolySpec::max_degree() const {
    int d = 0;
    for (const auto& t : terms) d = std::max(d, t.harmonic);
    for (const auto& p : products)
        for (const auto& f : p.factors)
            for (const auto& t : f.terms) d = std::max(d, t.harmonic);
    return d;
}

void TrigPolySpec::validate_structure() const {
    for (const auto& t : terms) {
        if (t.axis < 1 || t.axis > 3) throw schema_error("trig term axis must be 1..3");
        if (t.harmonic < 1) throw schema_error("trig term harmonic must be >= 1");
    }
    for (const auto& p : products)
        for (const auto& f : p.factors)
            for (const auto& t : f.terms)
                if (t.harmonic < 1) throw schema_error("product factor harmonic must be >= 1");
}

void TrigPolySpec::validate_parity(double tol) const {
    if (!parity) return;
    // deterministic sample set: low-discrepancy-ish lattice, no RNG needed
    const int samples = 64;
    const double scale = max_abs_bound() + 1.0;
    for (int s = 0; s < samples; ++s) {
        const double a = -3.0 + 6.07 * std::fmod(0.381966011 * (s + 1), 1.0);
        const double b = -3.0 + 6.07 * std::fmod(0.246979604 * (s + 1), 1.0);
        const double c = -3.0 + 6.07 * std::fmod(0.133974596 * (s + 1), 1.0);
        const TorusPoint q{a, b, c};
        const double f = (*this)(q);
        for (int axis = 0; axis < 3; ++axis) {
            TorusPoint qf = q;
            (axis == 0 ? qf.c1 : axis == 1 ? qf.c2 : qf.c3) *= -1.0;
            const double g = (*this)(qf);
            const double want = ((*parity)[static_cast<std::size_t>(axis)] == Parity::Even) ? f : -f;
            if (std::abs(g - want) > tol * scale) {
                throw schema_error("declared parity violated on axis " + std::to_string(axis + 1));
            }
        }
    }
}

TrigPolySpec TrigPolySpec::constant_spec(double c) {
    TrigPolySpec s;
    s.constant = c;
    s.parity = std::array<Parity, 3>{Parity::Even, Parity::Even, Parity::Even};
    return s;
}

TrigPolySpec TrigPolySpec::sin_product(int n, double c) {
    TrigPolySpec s;
    TrigProduct p;
    p.coef = c;
    for (auto& f : p.factors) {
        f.constant = 0.0;
        f.terms.push_back({n, true, 1.0});
    }
    s.products.push_back(p);
    s.parity = std::array<Parity, 3>{Parity::Odd, Parity::Odd, Parity::Odd};
    return s;
}

TrigPolySpec TrigPolySpec::scaled(double c) const {
    TrigPolySpec s = *this;
    s.constant *= c;
    for (auto& t : s.terms) t.coef *= c;
    for (auto& p : s.products) p.coef *= c;
    return s;
}

namespace {

Parity parse_parity(const nlohmann::json& j, const std::string& where) {
    const std::string s = j.get<std::string>();
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    throw schema_error(where + ": parity must be \"even\" or \"odd\"");
}

AxisFactor factor_from_json(const nlohmann::json& j, const std::string& where) {
    AxisFactor f;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "constant" && it.key() != "terms")
            throw schema_error(where + ": unknown key \"" + it.key() + "\"");
    }
    if (j.contains("constant")) f.constant = j.at("constant").get<double>();
    if (j.contains("terms")) {
        for (const auto& tj : j.at("terms")) {
            AxisFactor::Term t;
            for (auto it = tj.begin(); it != tj.end(); ++it) {
                if (it.key() != "harmonic" && it.key() != "kind" && it.key() != "coef")
                    throw schema_error(where + ": unknown key \"" + it.key() + "\"");
            }
            t.harmonic = tj.at("harmonic").get<int>();
            const std::string kind = tj.at("kind").get<std::string>();
            if (kind != "cos" && kind != "sin") throw schema_error(where + ": kind must be cos|sin");
            t.is_sin = (kind == "sin");
            t.coef = tj.at("coef").get<double>();
            f.terms.push_back(t);
        }
    }
    return f;
}

nlohmann::json factor_to_json(const AxisFactor& f) {
    nlohmann::json j;
    j["constant"] = f.constant;
    auto arr = nlohmann::json::array();
    for (const auto& t : f.terms) {
        arr.push_back({{"harmonic", t.harmonic},
                       {"kind", t.is_sin ? "sin" : "cos"},
                       {"coef", t.coef}});
    }
    j["terms"] = arr;
    return j;
}

}  // namespace

TrigPolySpec TrigPolySpec::from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw schema_error(where + ": expected an object");
    TrigPolySpec s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "constant" && k != "terms" && k != "products" && k != "parity")
            throw schema_error(where + ": unknown key \"" + k + "\"");
    }
    if (j.contains("constant")) s.constant = j.at("constant").get<double>();
    if (j.contains("terms")) {
        for (const auto& tj : j.at("terms")) {
            TrigTerm t;
            for (auto it = tj.begin(); it != tj.end(); ++it) {
                const std::string& k = it.key();
                if (k != "axis" && k != "harmonic" && k != "kind" && k != "coef")
                    throw schema_error(where + ".terms: unknown key \"" + k + "\"");
            }
            t.axis = tj.at("axis").get<int>();
            t.harmonic = tj.at("harmonic").get<int>();
            const std::string kind = tj.at("kind").get<std::string>();
            if (kind != "cos" && kind != "sin")
                throw schema_error(where + ".terms: kind must be cos|sin");
            t.is_sin = (kind == "sin");
            t.coef = tj.at("coef").get<double>();
            s.terms.push_back(t);
        }
    }
    if (j.contains("products")) {
        for (const auto& pj : j.at("products")) {
            for (auto it = pj.begin(); it != pj.end(); ++it) {
                if (it.key() != "coef" && it.key() != "factors")
                    throw schema_error(where + ".products: unknown key \"" + it.key() + "\"");
            }
            TrigProduct p;
            if (pj.contains("coef")) p.coef = pj.at("coef").get<double>();
            const auto& fs = pj.at("factors");
            if (!fs.is_array() || fs.size() != 3)
                throw schema_error(where + ".products: factors must be an array of 3");
            for (int a = 0; a < 3; ++a)
                p.factors[static_cast<std::size_t>(a)] =
                    factor_from_json(fs[static_cast<std::size_t>(a)], where + ".products.factors");
            s.products.push_back(p);
        }
    }
    if (j.contains("parity")) {
        const auto& pj = j.at("parity");
        if (!pj.is_array() || pj.size() != 3)
            throw schema_error(where + ": parity must be an array of 3");
        std::array<Parity, 3> par{};
        for (int a = 0; a < 3; ++a)
            par[static_cast<std::size_t>(a)] = parse_parity(pj[static_cast<std::size_t>(a)], where);
        s.parity = par;
    }
    s.validate_structure();
    return s;
}

nlohmann::json TrigPolySpec::to_json() const {
    nlohmann::json j;
    j["constant"] = constant;
    auto terms_arr = nlohmann::json::array();
    for (const auto& t : terms) {
        terms_arr.push_back({{"axis", t.axis},
                             {"harmonic", t.harmonic},
                             {"kind", t.is_sin ? "sin" : "cos"},
                             {"coef", t.coef}});
    }
    j["terms"] = terms_arr;
    if (!products.empty()) {
        auto prod_arr = nlohmann::json::array();
        for (const auto& p : products) {
            nlohmann::json pj;
            pj["coef"] = p.coef;
            pj["factors"] = {factor_to_json(p.factors[0]), factor_to_json(p.factors[1]),
                             factor_to_json(p.factors[2])};
            prod_arr.push_back(pj);
        }
        j["products"] = prod_arr;
    }
    if (parity) {
        auto par = nlohmann::json::array();
        for (const auto p : *parity) par.push_back(p == Parity::Even ? "even" : "odd");
        j["parity"] = par;
    }
    return j;
}

}  // namespace efimov
