#pragma once

#include "efimov/torus.hpp"
#include "efimov/trig_poly.hpp"

#include <nlohmann/json.hpp>

namespace efimov {

// Couplings, lattice index, and the three coefficient functions of the
// three-sector operator family H(K). v1 must carry a declared per-axis parity
// (validated numerically at construction).
struct ModelParams {
    double l1 = 1.0;
    double l2 = 1.0;
    int n = 1;
    TrigPolySpec w0 = TrigPolySpec::constant_spec(1.0);
    TrigPolySpec v0 = TrigPolySpec::constant_spec(0.0);
    TrigPolySpec v1 = TrigPolySpec::constant_spec(1.0);

    // Throws schema_error on invalid couplings, malformed specs, missing or
    // violated v1 parity declaration.
    void validate() const;

    static ModelParams from_json(const nlohmann::json& j, const std::string& where);
    nlohmann::json to_json() const;
};

struct WFunctions {
    double w1 = 0.0;  // w1(K;p)   = l1 e(p) + l2 e(K-p) + 1
    double w2 = 0.0;  // w2(K;p,q) = l1 e(p) + l1 e(q) + l2 e(K-p-q)
    double Ek = 0.0;  // E_K(p)    = l1 e(p) + l2 e(K-p)
};

WFunctions w_functions(const TorusPoint& K, const TorusPoint& p, const TorusPoint& q,
                       const ModelParams& params);

double w1_value(const TorusPoint& K, const TorusPoint& p, const ModelParams& params);
double w2_value(const TorusPoint& K, const TorusPoint& p, const TorusPoint& q,
                const ModelParams& params);
// Dispersion of the one-particle branch: E_k(q) = l1 e(q) + l2 e(k-q).
double branch_energy(const TorusPoint& k, const TorusPoint& q, const ModelParams& params);

}  // namespace efimov
