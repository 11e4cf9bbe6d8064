#include "cli/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>

#include "efimov/errors.hpp"

namespace efimov::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands{
    "classify",       "calibrate",  "friedrichs-spectrum", "essential-spectrum",
    "count",          "oracle-check", "expansion-fit",     "u-coefficient",
    "s-r-limit",      "efimov-verify", "singular-part"};

// Accumulates human-readable violations with json-path prefixes.
struct Checker {
    std::vector<std::string> violations;

    void add(const std::string& msg) { violations.push_back(msg); }

    void known_keys(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
        if (!j.is_object()) {
            add(where + ": expected an object");
            return;
        }
        for (const auto& [k, v] : j.items())
            if (!allowed.count(k)) add(where + ": unknown key \"" + k + "\"");
    }

    bool number(const json& j, const std::string& where, double& out) {
        if (!j.is_number()) {
            add(where + ": expected a number");
            return false;
        }
        out = j.get<double>();
        return true;
    }
    bool integer(const json& j, const std::string& where, int& out) {
        if (!j.is_number_integer()) {
            add(where + ": expected an integer");
            return false;
        }
        out = j.get<int>();
        return true;
    }
    bool boolean(const json& j, const std::string& where, bool& out) {
        if (!j.is_boolean()) {
            add(where + ": expected a boolean");
            return false;
        }
        out = j.get<bool>();
        return true;
    }
    bool text(const json& j, const std::string& where, std::string& out) {
        if (!j.is_string()) {
            add(where + ": expected a string");
            return false;
        }
        out = j.get<std::string>();
        return true;
    }
    bool point(const json& j, const std::string& where, TorusPoint& out) {
        if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
            !j[2].is_number()) {
            add(where + ": expected an array of 3 numbers");
            return false;
        }
        out = TorusPoint(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
        return true;
    }
    bool number_list(const json& j, const std::string& where, std::vector<double>& out) {
        if (!j.is_array() || j.empty()) {
            add(where + ": expected a non-empty array of numbers");
            return false;
        }
        std::vector<double> v;
        for (const auto& e : j) {
            if (!e.is_number()) {
                add(where + ": expected numbers only");
                return false;
            }
            v.push_back(e.get<double>());
        }
        out = std::move(v);
        return true;
    }
    bool int_list(const json& j, const std::string& where, std::vector<int>& out) {
        if (!j.is_array() || j.empty()) {
            add(where + ": expected a non-empty array of integers");
            return false;
        }
        std::vector<int> v;
        for (const auto& e : j) {
            if (!e.is_number_integer()) {
                add(where + ": expected integers only");
                return false;
            }
            v.push_back(e.get<int>());
        }
        out = std::move(v);
        return true;
    }
};

void parse_grid(const json& j, GridConfig& g, Checker& c) {
    c.known_keys(j, "grid", {"N", "shift", "refine_depth", "delta", "cells_per_octave"});
    if (!j.is_object()) return;
    if (j.contains("N") && c.integer(j["N"], "grid.N", g.N) && (g.N < 2 || g.N > 128))
        c.add("grid.N: must lie in 2..128");
    if (j.contains("shift")) c.boolean(j["shift"], "grid.shift", g.shift);
    if (j.contains("refine_depth") &&
        c.integer(j["refine_depth"], "grid.refine_depth", g.refine_depth) &&
        (g.refine_depth < 0 || g.refine_depth > 20))
        c.add("grid.refine_depth: must lie in 0..20");
    if (j.contains("delta")) {
        double d = 0.0;
        if (c.number(j["delta"], "grid.delta", d)) {
            if (!(d > 0.0))
                c.add("grid.delta: must be positive");
            else
                g.delta = d;
        }
    }
    if (j.contains("cells_per_octave") &&
        c.integer(j["cells_per_octave"], "grid.cells_per_octave", g.cells_per_octave) &&
        (g.cells_per_octave < 1 || g.cells_per_octave > 8))
        c.add("grid.cells_per_octave: must lie in 1..8");
}

void parse_output(const json& j, OutputConfig& o, Checker& c) {
    c.known_keys(j, "output", {"format", "path", "svg"});
    if (!j.is_object()) return;
    if (j.contains("format")) {
        std::string f;
        if (c.text(j["format"], "output.format", f)) {
            if (f != "csv" && f != "json")
                c.add("output.format: must be \"csv\" or \"json\"");
            else
                o.format = f;
        }
    }
    if (j.contains("path")) {
        std::string p;
        if (c.text(j["path"], "output.path", p)) o.path = p;
    }
    if (j.contains("svg")) {
        std::string p;
        if (c.text(j["svg"], "output.svg", p)) o.svg = p;
    }
}

}  // namespace

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw schema_error(std::string("config: malformed JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.digest = fnv1a_digest(text);
    Checker c;

    c.known_keys(j, "config",
                 {"command", "params", "model", "grid", "classify", "calibrate",
                  "friedrichs-spectrum", "essential-spectrum", "count", "oracle-check",
                  "expansion-fit", "u-coefficient", "s-r-limit", "efimov-verify",
                  "singular-part", "output"});
    if (!j.is_object()) throw schema_error("config: top level must be a JSON object");

    if (j.contains("command")) {
        std::string cmd;
        if (c.text(j["command"], "command", cmd)) {
            if (!kCommands.count(cmd))
                c.add("command: unknown command \"" + cmd + "\"");
            else
                cfg.command = cmd;
        }
    }

    if (j.contains("params")) {
        try {
            cfg.params = ModelParams::from_json(j["params"], "params");
            cfg.params.validate();
        } catch (const schema_error& e) {
            c.add(e.what());
        }
    }

    if (j.contains("model")) {
        const json& m = j["model"];
        c.known_keys(m, "model", {"kind", "coupling_scale"});
        if (m.is_object()) {
            if (m.contains("kind")) {
                std::string k;
                if (c.text(m["kind"], "model.kind", k)) {
                    if (k != "resonance" && k != "zero-eigenvalue" && k != "regular" &&
                        k != "custom")
                        c.add("model.kind: must be resonance, zero-eigenvalue, regular or custom");
                    else
                        cfg.model_kind = k;
                }
            }
            if (m.contains("coupling_scale") &&
                c.number(m["coupling_scale"], "model.coupling_scale", cfg.coupling_scale) &&
                !(cfg.coupling_scale > 0.0 && cfg.coupling_scale < 1.0))
                c.add("model.coupling_scale: must lie in (0, 1)");
        }
    }

    if (j.contains("grid")) parse_grid(j["grid"], cfg.grid, c);
    if (j.contains("output")) parse_output(j["output"], cfg.output, c);

    if (j.contains("classify")) {
        const json& b = j["classify"];
        c.known_keys(b, "classify", {"tol"});
        if (b.is_object() && b.contains("tol") &&
            c.number(b["tol"], "classify.tol", cfg.classify.tol) && !(cfg.classify.tol > 0.0))
            c.add("classify.tol: must be positive");
    }
    if (j.contains("calibrate")) c.known_keys(j["calibrate"], "calibrate", {});
    if (j.contains("friedrichs-spectrum")) {
        const json& b = j["friedrichs-spectrum"];
        c.known_keys(b, "friedrichs-spectrum", {"k_list"});
        if (b.is_object() && b.contains("k_list")) {
            if (!b["k_list"].is_array() || b["k_list"].empty()) {
                c.add("friedrichs-spectrum.k_list: expected a non-empty array of points");
            } else {
                std::vector<TorusPoint> ks;
                bool ok = true;
                for (std::size_t i = 0; i < b["k_list"].size(); ++i) {
                    TorusPoint p;
                    if (c.point(b["k_list"][i], "friedrichs-spectrum.k_list", p))
                        ks.push_back(p);
                    else
                        ok = false;
                }
                if (ok) cfg.friedrichs_spectrum.k_list = std::move(ks);
            }
        }
    }
    if (j.contains("essential-spectrum")) {
        const json& b = j["essential-spectrum"];
        c.known_keys(b, "essential-spectrum", {"K", "p_resolution"});
        if (b.is_object()) {
            if (b.contains("K")) c.point(b["K"], "essential-spectrum.K", cfg.essential_spectrum.K);
            if (b.contains("p_resolution") &&
                c.integer(b["p_resolution"], "essential-spectrum.p_resolution",
                          cfg.essential_spectrum.p_resolution) &&
                (cfg.essential_spectrum.p_resolution < 1 ||
                 cfg.essential_spectrum.p_resolution > 16))
                c.add("essential-spectrum.p_resolution: must lie in 1..16");
        }
    }
    if (j.contains("count")) {
        const json& b = j["count"];
        c.known_keys(b, "count", {"K", "z_list"});
        if (b.is_object()) {
            if (b.contains("K")) c.point(b["K"], "count.K", cfg.count.K);
            if (b.contains("z_list"))
                c.number_list(b["z_list"], "count.z_list", cfg.count.z_list);
        }
    }
    if (j.contains("oracle-check")) {
        const json& b = j["oracle-check"];
        c.known_keys(b, "oracle-check", {"K", "z_list"});
        if (b.is_object()) {
            if (b.contains("K")) c.point(b["K"], "oracle-check.K", cfg.oracle_check.K);
            if (b.contains("z_list"))
                c.number_list(b["z_list"], "oracle-check.z_list", cfg.oracle_check.z_list);
        }
    }
    if (j.contains("expansion-fit")) {
        const json& b = j["expansion-fit"];
        c.known_keys(b, "expansion-fit", {"K", "p_prime"});
        if (b.is_object()) {
            if (b.contains("K")) c.point(b["K"], "expansion-fit.K", cfg.expansion_fit.K);
            if (b.contains("p_prime"))
                c.point(b["p_prime"], "expansion-fit.p_prime", cfg.expansion_fit.p_prime);
        }
    }
    if (j.contains("u-coefficient")) {
        const json& b = j["u-coefficient"];
        c.known_keys(b, "u-coefficient", {"gamma_list", "lmax", "theta_max"});
        if (b.is_object()) {
            if (b.contains("gamma_list"))
                c.number_list(b["gamma_list"], "u-coefficient.gamma_list",
                              cfg.u_coefficient.gamma_list);
            if (b.contains("lmax") &&
                c.integer(b["lmax"], "u-coefficient.lmax", cfg.u_coefficient.lmax) &&
                (cfg.u_coefficient.lmax < 0 || cfg.u_coefficient.lmax > 64))
                c.add("u-coefficient.lmax: must lie in 0..64");
            if (b.contains("theta_max") &&
                c.number(b["theta_max"], "u-coefficient.theta_max",
                         cfg.u_coefficient.theta_max) &&
                !(cfg.u_coefficient.theta_max > 0.0 && cfg.u_coefficient.theta_max <= 200.0))
                c.add("u-coefficient.theta_max: must lie in (0, 200]");
        }
    }
    if (j.contains("s-r-limit")) {
        const json& b = j["s-r-limit"];
        c.known_keys(b, "s-r-limit", {"gamma", "r_list", "lmax", "nodes_per_unit"});
        if (b.is_object()) {
            if (b.contains("gamma") &&
                c.number(b["gamma"], "s-r-limit.gamma", cfg.s_r_limit.gamma) &&
                !(cfg.s_r_limit.gamma > 0.0))
                c.add("s-r-limit.gamma: must be positive");
            if (b.contains("r_list"))
                c.number_list(b["r_list"], "s-r-limit.r_list", cfg.s_r_limit.r_list);
            if (b.contains("lmax") &&
                c.integer(b["lmax"], "s-r-limit.lmax", cfg.s_r_limit.lmax) &&
                (cfg.s_r_limit.lmax < 0 || cfg.s_r_limit.lmax > 64))
                c.add("s-r-limit.lmax: must lie in 0..64");
            if (b.contains("nodes_per_unit") &&
                c.integer(b["nodes_per_unit"], "s-r-limit.nodes_per_unit",
                          cfg.s_r_limit.nodes_per_unit) &&
                (cfg.s_r_limit.nodes_per_unit < 1 || cfg.s_r_limit.nodes_per_unit > 64))
                c.add("s-r-limit.nodes_per_unit: must lie in 1..64");
        }
    }
    if (j.contains("efimov-verify")) {
        const json& b = j["efimov-verify"];
        c.known_keys(b, "efimov-verify", {"K", "z_list", "gamma", "lmax", "theta_max"});
        if (b.is_object()) {
            if (b.contains("K")) c.point(b["K"], "efimov-verify.K", cfg.efimov_verify.K);
            if (b.contains("z_list"))
                c.number_list(b["z_list"], "efimov-verify.z_list", cfg.efimov_verify.z_list);
            if (b.contains("gamma") &&
                c.number(b["gamma"], "efimov-verify.gamma", cfg.efimov_verify.gamma) &&
                !(cfg.efimov_verify.gamma > 0.0))
                c.add("efimov-verify.gamma: must be positive");
            if (b.contains("lmax") &&
                c.integer(b["lmax"], "efimov-verify.lmax", cfg.efimov_verify.lmax) &&
                (cfg.efimov_verify.lmax < 0 || cfg.efimov_verify.lmax > 64))
                c.add("efimov-verify.lmax: must lie in 0..64");
            if (b.contains("theta_max") &&
                c.number(b["theta_max"], "efimov-verify.theta_max",
                         cfg.efimov_verify.theta_max) &&
                !(cfg.efimov_verify.theta_max > 0.0 && cfg.efimov_verify.theta_max <= 200.0))
                c.add("efimov-verify.theta_max: must lie in (0, 200]");
        }
    }
    if (j.contains("singular-part")) {
        const json& b = j["singular-part"];
        c.known_keys(b, "singular-part",
                     {"gamma", "z_list", "depth_list", "delta", "cells_per_octave", "method",
                      "top_k"});
        if (b.is_object()) {
            auto& s = cfg.singular_part;
            if (b.contains("gamma") && c.number(b["gamma"], "singular-part.gamma", s.gamma) &&
                !(s.gamma > 0.0))
                c.add("singular-part.gamma: must be positive");
            if (b.contains("z_list") &&
                c.number_list(b["z_list"], "singular-part.z_list", s.z_list)) {
                for (double z : s.z_list)
                    if (!(z > 0.0)) {
                        c.add("singular-part.z_list: entries are |z| and must be positive");
                        break;
                    }
            }
            if (b.contains("depth_list") &&
                c.int_list(b["depth_list"], "singular-part.depth_list", s.depth_list)) {
                for (int d : s.depth_list)
                    if (d < 1 || d > 20) {
                        c.add("singular-part.depth_list: entries must lie in 1..20");
                        break;
                    }
            }
            if (b.contains("delta") && c.number(b["delta"], "singular-part.delta", s.delta) &&
                !(s.delta > 0.0))
                c.add("singular-part.delta: must be positive");
            if (b.contains("cells_per_octave") &&
                c.integer(b["cells_per_octave"], "singular-part.cells_per_octave",
                          s.cells_per_octave) &&
                (s.cells_per_octave < 1 || s.cells_per_octave > 8))
                c.add("singular-part.cells_per_octave: must lie in 1..8");
            if (b.contains("method")) {
                std::string m;
                if (c.text(b["method"], "singular-part.method", m)) {
                    if (m != "inertia" && m != "lanczos")
                        c.add("singular-part.method: must be \"inertia\" or \"lanczos\"");
                    else
                        s.method = m;
                }
            }
            if (b.contains("top_k") && c.integer(b["top_k"], "singular-part.top_k", s.top_k) &&
                (s.top_k < 1 || s.top_k > 64))
                c.add("singular-part.top_k: must lie in 1..64");
        }
    }

    if (j.contains("singular-part") && cfg.singular_part.depth_list.size() != 1 &&
        cfg.singular_part.depth_list.size() != cfg.singular_part.z_list.size())
        c.add("singular-part.depth_list: must have one entry or match z_list length");

    if (!c.violations.empty()) {
        std::string msg = "config: " + std::to_string(c.violations.size()) + " violation(s):";
        for (const auto& v : c.violations) msg += "\n  - " + v;
        throw schema_error(msg);
    }
    return cfg;
}

}  // namespace efimov::cli
