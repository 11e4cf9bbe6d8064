#include "cli/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "efimov/errors.hpp"

namespace efimov::cli {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string render_csv(const std::string& command, const std::string& digest,
                       const std::vector<std::string>& warnings, const CsvTable& table) {
    std::ostringstream out;
    out << "# command " << command << "\n";
    out << "# config " << digest << "\n";
    for (const auto& w : warnings) out << "# warning: " << w << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

std::string render_json(const std::string& command, const std::string& digest,
                        const std::vector<std::string>& warnings,
                        const nlohmann::json& results) {
    nlohmann::json envelope;
    envelope["command"] = command;
    envelope["config_digest"] = digest;
    envelope["warnings"] = warnings;
    envelope["results"] = results;
    return envelope.dump(2) + "\n";
}

namespace {

// Fixed plot geometry; the renderer is intentionally plain so output bytes
// depend only on the data.
constexpr double kW = 640.0, kH = 480.0;
constexpr double kL = 64.0, kR = 24.0, kT = 36.0, kB = 56.0;

const char* kPalette[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw numerical_guard_error("svg plot: no finite data points");
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double padx = 0.06 * (xmax - xmin), pady = 0.08 * (ymax - ymin);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;

    auto X = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
    auto Y = [&](double y) { return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out << "<rect x=\"" << format_g6(kL) << "\" y=\"" << format_g6(kT) << "\" width=\""
        << format_g6(kW - kL - kR) << "\" height=\"" << format_g6(kH - kT - kB)
        << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << format_g6(kW / 2) << "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << xml_escape(plot.title) << "</text>\n";
    out << "<text x=\"" << format_g6(kW / 2) << "\" y=\"" << format_g6(kH - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(plot.x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << format_g6(kH / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 "
        << format_g6(kH / 2) << ")\">" << xml_escape(plot.y_label) << "</text>\n";

    // Corner tick labels only; enough to read values off a data file anyway.
    out << "<text x=\"" << format_g6(kL) << "\" y=\"" << format_g6(kH - kB + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << format_g6(xmin + padx) << "</text>\n";
    out << "<text x=\"" << format_g6(kW - kR) << "\" y=\"" << format_g6(kH - kB + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << format_g6(xmax - padx) << "</text>\n";
    out << "<text x=\"" << format_g6(kL - 6) << "\" y=\"" << format_g6(Y(ymin + pady) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << format_g6(ymin + pady) << "</text>\n";
    out << "<text x=\"" << format_g6(kL - 6) << "\" y=\"" << format_g6(Y(ymax - pady) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << format_g6(ymax - pady) << "</text>\n";

    if (plot.reference_slope && !plot.series.empty() && !plot.series[0].x.empty()) {
        const double x0 = plot.series[0].x.front(), y0 = plot.series[0].y.front();
        const double slope = *plot.reference_slope;
        const double x1 = xmax - padx;
        const double y1 = y0 + slope * (x1 - x0);
        out << "<line x1=\"" << format_g6(X(x0)) << "\" y1=\"" << format_g6(Y(y0))
            << "\" x2=\"" << format_g6(X(x1)) << "\" y2=\"" << format_g6(Y(y1))
            << "\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
        if (!plot.reference_label.empty())
            out << "<text x=\"" << format_g6(X(x1) - 4) << "\" y=\"" << format_g6(Y(y1) - 6)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" "
                   "fill=\"#888\">"
                << xml_escape(plot.reference_label) << "</text>\n";
    }

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const auto& s = plot.series[si];
        const char* color = kPalette[si % 4];
        if (s.x.size() >= 2) {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << " ";
                if (s.step && i) {
                    // horizontal run at the previous level, then the riser
                    out << format_g6(X(s.x[i])) << "," << format_g6(Y(s.y[i - 1])) << " ";
                }
                out << format_g6(X(s.x[i])) << "," << format_g6(Y(s.y[i]));
            }
            out << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << "<circle cx=\"" << format_g6(X(s.x[i])) << "\" cy=\""
                << format_g6(Y(s.y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        if (!s.label.empty())
            out << "<text x=\"" << format_g6(kL + 8) << "\" y=\""
                << format_g6(kT + 16 + 14 * static_cast<double>(si))
                << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
                << xml_escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    try {
        const fs::path p(path);
        if (p.has_parent_path() && !p.parent_path().empty())
            fs::create_directories(p.parent_path());
    } catch (const fs::filesystem_error& e) {
        throw io_error(std::string("cannot create output directory for ") + path + ": " +
                       e.what());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open output file " + path);
    out << content;
    out.flush();
    if (!out) throw io_error("failed writing output file " + path);
}

}  // namespace efimov::cli
