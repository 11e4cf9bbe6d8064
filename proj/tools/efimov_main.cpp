#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/emit.hpp"
#include "efimov/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw efimov::io_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Everything written into files is a pure function of the config bytes;
// timing and notes go to stderr so reruns stay byte-identical.
int run(const std::string& command, const std::string& config_path, const std::string& out_dir,
        bool svg) {
    using namespace efimov;
    using namespace efimov::cli;
    const std::string text = slurp(config_path);
    const ExperimentConfig cfg = parse_config(text);
    const CommandResult res = run_command(command, cfg);

    const std::string fmt = cfg.output.format ? *cfg.output.format : default_format(command);
    if (fmt == "csv" && !res.table)
        throw schema_error("output.format: \"" + command +
                           "\" has no csv representation; use json");
    const std::filesystem::path dir(out_dir);
    const std::filesystem::path out =
        dir / (cfg.output.path ? *cfg.output.path : command + "." + fmt);
    const std::string content =
        fmt == "csv" ? render_csv(command, cfg.digest, res.warnings, *res.table)
                     : render_json(command, cfg.digest, res.warnings, res.results);
    write_file(out.string(), content);
    std::cout << "wrote " << out.string() << "\n";

    if (svg) {
        if (res.plot) {
            const std::filesystem::path sp =
                dir / (cfg.output.svg ? *cfg.output.svg : command + ".svg");
            write_file(sp.string(), render_svg(*res.plot));
            std::cout << "wrote " << sp.string() << "\n";
        } else {
            std::cerr << "note: --svg ignored, " << command
                      << " has no plot representation\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral counting and threshold asymptotics for a three-sector lattice "
                 "operator family"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool svg = false;

    const std::pair<const char*, const char*> commands[] = {
        {"classify", "classify the coupling threshold (resonance / zero-eigenvalue / regular)"},
        {"calibrate", "critical coupling of a shape on the configured grid"},
        {"friedrichs-spectrum", "essential band and discrete levels of the one-particle family"},
        {"essential-spectrum", "two-sheeted essential spectrum of the full operator at fixed K"},
        {"count", "eigenvalue count below z via the block-operator reduction"},
        {"oracle-check", "cross-check the reduction against direct diagonalization"},
        {"expansion-fit", "threshold expansion order and coefficient along a ray"},
        {"u-coefficient", "asymptotic coefficient U(gamma) of the limiting kernel"},
        {"s-r-limit", "finite-window counts converging to 2 r U(gamma)"},
        {"efimov-verify", "count sweep against the predicted logarithmic slope"},
        {"singular-part", "counts for the exactly-solvable singular kernel at small |z|"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (default: .)");
        sub->add_flag("--svg", svg, "also emit an SVG plot when the command has one");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const auto t0 = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        rc = run(command, config_path, out_dir, svg);
    } catch (const efimov::schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
    } catch (const efimov::numerical_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 3;
    } catch (const efimov::dimension_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 4;
    } catch (const efimov::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::fprintf(stderr, "wall time %.3f s\n", dt.count());
    return rc;
}
