#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/emit.hpp"
#include "efimov/errors.hpp"

using namespace efimov;
using namespace efimov::cli;

namespace {
bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}
}  // namespace

TEST_CASE("config digest: reference vectors and sensitivity") {
    CHECK(fnv1a_digest("") == "cbf29ce484222325");
    CHECK(fnv1a_digest("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_digest("foobar") == "85944171f73967e8");
    CHECK(fnv1a_digest("{}") != fnv1a_digest("{ }"));
}

TEST_CASE("empty config parses to the documented defaults") {
    const ExperimentConfig cfg = parse_config("{}");
    CHECK_FALSE(cfg.command.has_value());
    CHECK(cfg.params.l1 == 1.0);
    CHECK(cfg.params.l2 == 1.0);
    CHECK(cfg.params.n == 1);
    CHECK(cfg.model_kind == "custom");
    CHECK(cfg.grid.N == 8);
    CHECK(cfg.grid.shift);
    CHECK(cfg.grid.refine_depth == 6);
    CHECK_FALSE(cfg.grid.delta.has_value());
    CHECK(cfg.grid.cells_per_octave == 2);
    CHECK_FALSE(cfg.output.format.has_value());
    CHECK(cfg.count.z_list.size() == 4);
    CHECK(cfg.singular_part.delta == doctest::Approx(0.7853981633974483));
    CHECK(cfg.digest == fnv1a_digest("{}"));
}

TEST_CASE("explicit fields land where they should") {
    const std::string text = R"({
        "command": "count",
        "params": {"l1": 1.5, "l2": 0.5, "n": 2},
        "model": {"kind": "resonance", "coupling_scale": 0.8},
        "grid": {"N": 6, "shift": false, "refine_depth": 2, "delta": 0.4, "cells_per_octave": 3},
        "count": {"K": [0.1, -0.2, 0.3], "z_list": [-1.0, -0.5]},
        "output": {"format": "json", "path": "runs/out.json", "svg": "runs/out.svg"}
    })";
    const ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.command == std::string("count"));
    CHECK(cfg.params.l1 == 1.5);
    CHECK(cfg.params.n == 2);
    CHECK(cfg.model_kind == "resonance");
    CHECK(cfg.coupling_scale == 0.8);
    CHECK(cfg.grid.N == 6);
    CHECK_FALSE(cfg.grid.shift);
    CHECK(cfg.grid.delta == doctest::Approx(0.4));
    CHECK(cfg.count.K.c1 == doctest::Approx(0.1));
    CHECK(cfg.count.z_list == std::vector<double>{-1.0, -0.5});
    CHECK(cfg.output.format == std::string("json"));
    CHECK(cfg.output.path == std::string("runs/out.json"));
}

TEST_CASE("malformed JSON is a schema error") {
    CHECK_THROWS_WITH_AS((void)parse_config("{nope"),
                         doctest::Contains("malformed"), schema_error);
}

TEST_CASE("every violation is collected into one report") {
    const std::string text = R"({
        "command": "frobnicate",
        "grids": {},
        "params": {"l1": -1},
        "grid": {"N": 500},
        "model": {"kind": "weird"}
    })";
    try {
        (void)parse_config(text);
        FAIL("expected a schema_error");
    } catch (const schema_error& e) {
        const std::string w = e.what();
        CHECK(contains(w, "violation"));
        CHECK(contains(w, "command"));
        CHECK(contains(w, "unknown key \"grids\""));
        CHECK(contains(w, "l1"));
        CHECK(contains(w, "grid.N"));
        CHECK(contains(w, "model.kind"));
    }
}

TEST_CASE("coupling parity declarations are enforced at parse time") {
    const std::string text = R"({
        "params": {"v1": {"terms": [{"axis": 1, "harmonic": 1, "kind": "sin", "coef": 1.0}],
                          "parity": ["even", "even", "even"]}}
    })";
    CHECK_THROWS_WITH_AS((void)parse_config(text),
                         doctest::Contains("parity"), schema_error);
}

TEST_CASE("per-command default formats") {
    for (const char* c : {"classify", "calibrate", "essential-spectrum", "expansion-fit",
                          "efimov-verify"})
        CHECK(default_format(c) == "json");
    for (const char* c : {"friedrichs-spectrum", "count", "oracle-check", "u-coefficient",
                          "s-r-limit", "singular-part"})
        CHECK(default_format(c) == "csv");
}

TEST_CASE("a config pinned to another command is rejected") {
    const ExperimentConfig cfg = parse_config(R"({"command": "classify"})");
    CHECK_THROWS_WITH_AS((void)run_command("count", cfg),
                         doctest::Contains("command"), schema_error);
}

TEST_CASE("classify smoke: calibrated regular model on a small grid") {
    const ExperimentConfig cfg = parse_config(R"({
        "command": "classify",
        "model": {"kind": "regular"},
        "grid": {"N": 4, "refine_depth": 3}
    })");
    const CommandResult res = run_command("classify", cfg);
    CHECK(res.results.at("kind") == "regular");
    CHECK(res.results.at("delta00").get<double>() > 0.0);
    CHECK_FALSE(res.table.has_value());   // no tabular form
    REQUIRE(res.warnings.size() == 1);    // params.v1 etc. ignored for built models
    CHECK(contains(res.warnings[0], "ignored"));
}

TEST_CASE("count smoke: table shape and a sane count") {
    // weak coupling keeps the discrete branch close to the band, so z = -0.5
    // is safely below the branch bottom
    const ExperimentConfig cfg = parse_config(R"({
        "command": "count",
        "params": {"v1": {"constant": 0.1, "parity": ["even", "even", "even"]}},
        "grid": {"N": 4, "refine_depth": 3},
        "count": {"K": [0, 0, 0], "z_list": [-0.5]}
    })");
    const CommandResult res = run_command("count", cfg);
    REQUIRE(res.table.has_value());
    CHECK(res.table->columns ==
          std::vector<std::string>{"K1", "K2", "K3", "z", "N", "grid_id", "method"});
    REQUIRE(res.table->rows.size() == 1);
    CHECK(res.table->rows[0][6] == "bs-inertia");
    REQUIRE(res.results.is_array());
    CHECK(res.results[0].at("N").get<int>() >= 0);
}

TEST_CASE("u-coefficient smoke: pinned value flows through the command layer") {
    const ExperimentConfig cfg = parse_config(R"({
        "command": "u-coefficient",
        "u-coefficient": {"gamma_list": [1.0]}
    })");
    const CommandResult res = run_command("u-coefficient", cfg);
    REQUIRE(res.results.is_array());
    CHECK(res.results[0].at("U").get<double>() ==
          doctest::Approx(0.065841974464831005).epsilon(1e-8));
    REQUIRE(res.table.has_value());
    CHECK(res.table->columns == std::vector<std::string>{"gamma", "U"});
    CHECK_FALSE(res.plot.has_value());  // a one-point sweep has nothing to plot
}

TEST_CASE("rendering is deterministic and carries the provenance header") {
    const std::string text = R"({
        "command": "u-coefficient",
        "u-coefficient": {"gamma_list": [0.5, 1.0]}
    })";
    const ExperimentConfig cfg = parse_config(text);
    const CommandResult res = run_command("u-coefficient", cfg);

    const std::string csv1 = render_csv("u-coefficient", cfg.digest, res.warnings, *res.table);
    const std::string csv2 = render_csv("u-coefficient", cfg.digest, res.warnings, *res.table);
    CHECK(csv1 == csv2);
    CHECK(contains(csv1, "# command u-coefficient"));
    CHECK(contains(csv1, "# config " + cfg.digest));
    CHECK(contains(csv1, "gamma,U"));

    const std::string js1 = render_json("u-coefficient", cfg.digest, res.warnings, res.results);
    const std::string js2 = render_json("u-coefficient", cfg.digest, res.warnings, res.results);
    CHECK(js1 == js2);
    CHECK(contains(js1, "\"command\": \"u-coefficient\""));
    CHECK(contains(js1, cfg.digest));

    REQUIRE(res.plot.has_value());
    const std::string svg1 = render_svg(*res.plot);
    CHECK(svg1 == render_svg(*res.plot));
    CHECK(contains(svg1, "<svg"));
    CHECK(contains(svg1, "</svg>"));
    CHECK(contains(svg1, "asymptotic coefficient"));
}

TEST_CASE("full-precision formatting survives a round trip") {
    for (double v : {0.1, 1.0 / 3.0, 6.02e23, -2.2250738585072014e-308, 0.0}) {
        const std::string s = format_full(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_g6(0.0625) == "0.0625");
}
