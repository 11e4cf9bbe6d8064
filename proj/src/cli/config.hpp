#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "efimov/model.hpp"
#include "efimov/torus.hpp"

namespace efimov::cli {

// FNV-1a 64-bit digest of the raw config bytes; embedded in every output
// file so results are traceable to the exact configuration.
std::string fnv1a_digest(const std::string& bytes);

struct GridConfig {
    int N = 8;
    bool shift = true;
    int refine_depth = 6;
    std::optional<double> delta;  // default pi/(4n) at build time
    int cells_per_octave = 2;
};

struct OutputConfig {
    std::optional<std::string> format;  // "csv" | "json"; per-command default otherwise
    std::optional<std::string> path;
    std::optional<std::string> svg;
};

struct ClassifyBlock {
    double tol = 1e-6;
};

struct FriedrichsBlock {
    std::vector<TorusPoint> k_list{TorusPoint()};
};

struct EssentialBlock {
    TorusPoint K;
    int p_resolution = 4;
};

struct CountBlock {
    TorusPoint K;
    std::vector<double> z_list{-0.1, -0.01, -0.001, -0.0001};
};

struct OracleBlock {
    TorusPoint K;
    std::vector<double> z_list;  // empty -> branch-aware automatic selection
};

struct ExpansionBlock {
    TorusPoint K;
    TorusPoint p_prime;
};

struct UBlock {
    std::vector<double> gamma_list{0.5, 1.0, 2.0};
    int lmax = 12;
    double theta_max = 50.0;
};

struct SRBlock {
    double gamma = 1.0;
    std::vector<double> r_list{10.0, 20.0, 40.0};
    int lmax = 12;
    int nodes_per_unit = 8;
};

struct VerifyBlock {
    TorusPoint K;
    std::vector<double> z_list{-0.1, -0.01, -0.001, -0.0001};
    double gamma = 1.0;
    int lmax = 12;
    double theta_max = 50.0;
};

struct SingularBlock {
    double gamma = 1.0;
    std::vector<double> z_list{1e-4};
    std::vector<int> depth_list{8};  // broadcast when a single entry
    double delta = 0.7853981633974483;  // pi/4
    int cells_per_octave = 1;
    std::string method = "inertia";  // "inertia" | "lanczos"
    int top_k = 16;
};

struct ExperimentConfig {
    std::optional<std::string> command;  // must match the invoked command when present
    ModelParams params;
    std::string model_kind = "custom";  // resonance | zero-eigenvalue | regular | custom
    double coupling_scale = 0.9;
    GridConfig grid;
    ClassifyBlock classify;
    FriedrichsBlock friedrichs_spectrum;
    EssentialBlock essential_spectrum;
    CountBlock count;
    OracleBlock oracle_check;
    ExpansionBlock expansion_fit;
    UBlock u_coefficient;
    SRBlock s_r_limit;
    VerifyBlock efimov_verify;
    SingularBlock singular_part;
    OutputConfig output;
    std::string digest;  // of the raw bytes
};

// Parses and validates; collects every schema violation (not just the first)
// and throws a single schema_error listing them all.
ExperimentConfig parse_config(const std::string& text);

}  // namespace efimov::cli
