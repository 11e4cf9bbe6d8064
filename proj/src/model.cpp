#include "efimov/model.hpp"

#include "efimov/errors.hpp"

namespace efimov {

void ModelParams::validate() const {
    if (!(l1 > 0.0)) throw schema_error("params.l1 must be > 0");
    if (!(l2 > 0.0)) throw schema_error("params.l2 must be > 0");
    if (n < 1) throw schema_error("params.n must be >= 1");
    w0.validate_structure();
    v0.validate_structure();
    v1.validate_structure();
    if (!v1.parity) throw schema_error("params.v1 must declare per-axis parity");
    v1.validate_parity();
    w0.validate_parity();
    v0.validate_parity();
}

ModelParams ModelParams::from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw schema_error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "l1" && k != "l2" && k != "n" && k != "w0" && k != "v0" && k != "v1")
            throw schema_error(where + ": unknown key \"" + k + "\"");
    }
    ModelParams p;
    if (j.contains("l1")) p.l1 = j.at("l1").get<double>();
    if (j.contains("l2")) p.l2 = j.at("l2").get<double>();
    if (j.contains("n")) p.n = j.at("n").get<int>();
    if (j.contains("w0")) p.w0 = TrigPolySpec::from_json(j.at("w0"), where + ".w0");
    if (j.contains("v0")) p.v0 = TrigPolySpec::from_json(j.at("v0"), where + ".v0");
    if (j.contains("v1")) p.v1 = TrigPolySpec::from_json(j.at("v1"), where + ".v1");
    p.validate();
    return p;
}

nlohmann::json ModelParams::to_json() const {
    nlohmann::json j;
    j["l1"] = l1;
    j["l2"] = l2;
    j["n"] = n;
    j["w0"] = w0.to_json();
    j["v0"] = v0.to_json();
    j["v1"] = v1.to_json();
    return j;
}

WFunctions w_functions(const TorusPoint& K, const TorusPoint& p, const TorusPoint& q,
                       const ModelParams& params) {
    WFunctions w;
    const double ep = epsilon(p, params.n);
    const double eq = epsilon(q, params.n);
    w.Ek = params.l1 * ep + params.l2 * epsilon(K - p, params.n);
    w.w1 = w.Ek + 1.0;
    w.w2 = params.l1 * ep + params.l1 * eq + params.l2 * epsilon(K - p - q, params.n);
    return w;
}

double w1_value(const TorusPoint& K, const TorusPoint& p, const ModelParams& params) {
    return params.l1 * epsilon(p, params.n) + params.l2 * epsilon(K - p, params.n) + 1.0;
}

double w2_value(const TorusPoint& K, const TorusPoint& p, const TorusPoint& q,
                const ModelParams& params) {
    return params.l1 * epsilon(p, params.n) + params.l1 * epsilon(q, params.n) +
           params.l2 * epsilon(K - p - q, params.n);
}

double branch_energy(const TorusPoint& k, const TorusPoint& q, const ModelParams& params) {
    return params.l1 * epsilon(q, params.n) + params.l2 * epsilon(k - q, params.n);
}

}  // namespace efimov
