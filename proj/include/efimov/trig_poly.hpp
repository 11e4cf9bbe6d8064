#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efimov/torus.hpp"

namespace efimov {

enum class Parity { Even, Odd };

// One additive term a * cos(m q_axis) or a * sin(m q_axis).
struct TrigTerm {
    int axis = 1;       // 1..3
    int harmonic = 1;   // m >= 1
    bool is_sin = false;
    double coef = 0.0;
};

// One-dimensional factor: constant + sum of cos/sin harmonics in one variable.
struct AxisFactor {
    double constant = 0.0;
    struct Term {
        int harmonic = 1;
        bool is_sin = false;
        double coef = 0.0;
    };
    std::vector<Term> terms;

    double eval(double x) const;
    double max_abs_bound() const;
};

// Separable product c * f1(q1) f2(q2) f3(q3).
struct TrigProduct {
    double coef = 1.0;
    std::array<AxisFactor, 3> factors;
};

// Finite trigonometric polynomial on the 3-torus: the only admissible format
// for coefficient functions. Evaluation is exact; all second partials exist in
// closed form, and values on the minimizer set are exact (no interpolation).
struct TrigPolySpec {
    double constant = 0.0;
    std::vector<TrigTerm> terms;
    std::vector<TrigProduct> products;
    // Declared parity per axis; required for the one-particle coupling v1.
    std::optional<std::array<Parity, 3>> parity;

    double operator()(const TorusPoint& q) const;
    // Upper bound on |f| over the torus (sum of |coefficients|).
    double max_abs_bound() const;
    // Largest per-axis harmonic appearing (0 when constant).
    int max_degree() const;

    // Structural validation: axis range, harmonic >= 1. Throws schema_error.
    void validate_structure() const;
    // Numerical parity validation against the declared parity by sampling;
    // throws schema_error on violation. No-op when no parity is declared.
    void validate_parity(double tol = 1e-12) const;

    static TrigPolySpec constant_spec(double c);
    // c * sin(n q1) sin(n q2) sin(n q3) — vanishes on the whole minimizer set.
    static TrigPolySpec sin_product(int n, double c = 1.0);
    TrigPolySpec scaled(double c) const;

    static TrigPolySpec from_json(const nlohmann::json& j, const std::string& where);
    nlohmann::json to_json() const;
};

}  // namespace efimov
