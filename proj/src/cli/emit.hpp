#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace efimov::cli {

// All numeric text in output files goes through these so reruns are
// byte-identical. CSV carries full precision; SVG coordinates do not need it.
std::string format_full(double v);  // %.17g
std::string format_g6(double v);    // %.6g

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    bool step = false;  // horizontal-step polyline instead of point-to-point
    std::string label;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    // Dashed guide with this slope, anchored at the first point of series 0.
    std::optional<double> reference_slope;
    std::string reference_label;
};

// What a command hands back to the driver. `results` is the JSON payload;
// `table` exists when the command has a tabular (CSV) representation.
struct CommandResult {
    nlohmann::json results;
    std::optional<CsvTable> table;
    std::vector<std::string> warnings;
    std::optional<SvgPlot> plot;
};

std::string render_csv(const std::string& command, const std::string& digest,
                       const std::vector<std::string>& warnings, const CsvTable& table);

std::string render_json(const std::string& command, const std::string& digest,
                        const std::vector<std::string>& warnings,
                        const nlohmann::json& results);

std::string render_svg(const SvgPlot& plot);

// Throws io_error on failure. Parent directories are created as needed.
void write_file(const std::string& path, const std::string& content);

}  // namespace efimov::cli
