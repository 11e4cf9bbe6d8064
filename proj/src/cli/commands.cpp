#include "cli/commands.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "efimov/asymptotics.hpp"
#include "efimov/counting.hpp"
#include "efimov/errors.hpp"
#include "efimov/friedrichs.hpp"
#include "efimov/model.hpp"
#include "efimov/quadrature.hpp"
#include "efimov/trig_poly.hpp"

namespace efimov::cli {

namespace {

using nlohmann::json;

json point_json(const TorusPoint& p) { return json::array({p.c1, p.c2, p.c3}); }

QuadratureGrid build_configured_grid(const ExperimentConfig& cfg) {
    const double delta =
        cfg.grid.delta ? *cfg.grid.delta : M_PI / (4.0 * static_cast<double>(cfg.params.n));
    return lambda_refined_grid(cfg.grid.N, cfg.grid.shift, cfg.grid.refine_depth, delta,
                               cfg.params.n, cfg.grid.cells_per_octave);
}

// Canonical-family kinds replace the coefficient functions and calibrate the
// coupling on the configured grid; "custom" uses params as given.
ModelParams effective_model(const ExperimentConfig& cfg, const QuadratureGrid& grid,
                            std::vector<std::string>& warnings) {
    if (cfg.model_kind == "custom") return cfg.params;
    warnings.push_back("model.kind=" + cfg.model_kind +
                       ": coefficient functions are built and calibrated on the configured "
                       "grid; params.w0/v0/v1 are ignored");
    if (cfg.model_kind == "resonance")
        return resonance_model(cfg.params.l1, cfg.params.l2, cfg.params.n, grid);
    if (cfg.model_kind == "zero-eigenvalue")
        return zero_eigenvalue_model(cfg.params.l1, cfg.params.l2, cfg.params.n, grid);
    return regular_model(cfg.params.l1, cfg.params.l2, cfg.params.n, grid, cfg.coupling_scale);
}

// The limiting kernel depends only on the couplings; grid and coefficient
// functions never enter. Used by u-coefficient and s-r-limit.
void warn_kind_ignored(const ExperimentConfig& cfg, std::vector<std::string>& warnings) {
    if (cfg.model_kind != "custom")
        warnings.push_back("model.kind ignored: this command depends only on the couplings");
}

// singular-part needs v1 only through its values on the minimizer set (the
// kernel constant is coupling-independent), so kinds map to bare shapes.
ModelParams singular_shape_model(const ExperimentConfig& cfg,
                                 std::vector<std::string>& warnings) {
    if (cfg.model_kind == "custom") return cfg.params;
    ModelParams p = cfg.params;
    p.w0 = TrigPolySpec::constant_spec(1.0);
    p.v0 = TrigPolySpec::constant_spec(0.0);
    p.v1 = cfg.model_kind == "zero-eigenvalue" ? TrigPolySpec::sin_product(p.n)
                                               : TrigPolySpec::constant_spec(1.0);
    warnings.push_back("model.kind=" + cfg.model_kind +
                       ": applied as a coefficient shape only; the singular-part constant is "
                       "coupling-independent");
    return p;
}

std::string kind_string(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::ZeroResonance: return "resonance";
        case ThresholdKind::ZeroEigenvalue: return "zero-eigenvalue";
        default: return "regular";
    }
}

json classification_json(const ThresholdClass& tc) {
    json v1l = json::array();
    for (const auto& [pt, val] : tc.v1_on_lambda)
        v1l.push_back(json{{"point", point_json(pt)}, {"value", val}});
    return json{{"kind", kind_string(tc.kind)},
                {"delta00", tc.delta00},
                {"g_eigenvalue", tc.g_eigenvalue},
                {"v1_on_lambda", v1l},
                {"error_estimate", tc.delta00_error}};
}

CommandResult cmd_classify(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    res.results = classification_json(classify_threshold(params, grid, cfg.classify.tol));
    return res;
}

CommandResult cmd_calibrate(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    TrigPolySpec shape = cfg.params.v1;
    if (cfg.model_kind == "zero-eigenvalue")
        shape = TrigPolySpec::sin_product(cfg.params.n);
    else if (cfg.model_kind != "custom")
        shape = TrigPolySpec::constant_spec(1.0);
    const Calibration cal = calibrate_resonance(shape, cfg.params, grid);
    res.results = json{{"lambda_star", cal.lambda_star},
                       {"uncertainty", cal.uncertainty},
                       {"kind", cfg.model_kind}};
    return res;
}

CommandResult cmd_friedrichs_spectrum(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    CsvTable table;
    table.columns = {"k1", "k2", "k3", "band_min", "band_max", "side", "z"};
    json rows = json::array();
    for (const TorusPoint& k : cfg.friedrichs_spectrum.k_list) {
        const EssentialBand band = essential_band(k, params);
        const auto evs = discrete_spectrum_h(k, params, grid);
        json evj = json::array();
        auto row_head = [&]() {
            return std::vector<std::string>{format_full(k.c1),      format_full(k.c2),
                                            format_full(k.c3),      format_full(band.Emin),
                                            format_full(band.Emax)};
        };
        if (evs.empty()) {
            auto row = row_head();
            row.push_back("none");
            row.push_back("");
            table.rows.push_back(std::move(row));
        }
        for (const auto& ev : evs) {
            const bool below = ev.side == SpectralSide::Below;
            auto row = row_head();
            row.push_back(below ? "below" : "above");
            row.push_back(format_full(ev.z));
            table.rows.push_back(std::move(row));
            evj.push_back(json{{"z", ev.z}, {"side", below ? "below" : "above"}});
        }
        rows.push_back(json{{"k", point_json(k)},
                            {"band", json::array({band.Emin, band.Emax})},
                            {"eigenvalues", evj}});
    }
    res.results = rows;
    res.table = std::move(table);
    return res;
}

CommandResult cmd_essential_spectrum(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    const EssentialSpectrumH es = essential_spectrum_H(cfg.essential_spectrum.K, params, grid,
                                                       cfg.essential_spectrum.p_resolution);
    json branches = json::array();
    for (const auto& b : es.branches)
        branches.push_back(json{{"p", point_json(b.p)},
                                {"z", b.z},
                                {"shifted", b.shifted},
                                {"side", b.side == SpectralSide::Below ? "below" : "above"}});
    json hull = json::array();
    for (const auto& [a, b] : es.intervals) hull.push_back(json::array({a, b}));
    res.results = json{{"band", json::array({es.band_min, es.band_max})},
                       {"branches", branches},
                       {"hull", hull}};
    return res;
}

CommandResult cmd_count(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    const TorusPoint& K = cfg.count.K;
    const std::string gid = grid.id();
    CsvTable table;
    table.columns = {"K1", "K2", "K3", "z", "N", "grid_id", "method"};
    json rows = json::array();
    SvgPlot plot;
    plot.title = "eigenvalue count below z";
    plot.x_label = "|log z|";
    plot.y_label = "N(K, z)";
    SvgSeries series;
    series.label = "counts";
    for (double z : cfg.count.z_list) {
        const int N = bs_count(K, z, params, grid);
        table.rows.push_back({format_full(K.c1), format_full(K.c2), format_full(K.c3),
                              format_full(z), std::to_string(N), gid, "bs-inertia"});
        rows.push_back(json{{"K", point_json(K)},
                            {"z", z},
                            {"N", N},
                            {"grid_id", gid},
                            {"method", "bs-inertia"}});
        if (z < 0.0) {
            series.x.push_back(std::fabs(std::log(-z)));
            series.y.push_back(static_cast<double>(N));
        }
    }
    res.results = rows;
    res.table = std::move(table);
    if (series.x.size() >= 2) {
        plot.series.push_back(std::move(series));
        res.plot = std::move(plot);
    }
    return res;
}

CommandResult cmd_oracle_check(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    const TorusPoint& K = cfg.oracle_check.K;
    std::vector<double> zs = cfg.oracle_check.z_list;
    if (zs.empty()) {
        // below the lowest finite-lattice branch every validity guard holds,
        // so the reduction and the direct count are both well-defined
        const double bottom = finite_branch_bottom(K, params, grid);
        for (double off : {0.0, 0.3, 1.0, 3.0, 10.0}) zs.push_back(bottom - 0.01 - off);
    }
    CsvTable table;
    table.columns = {"K1", "K2", "K3", "z", "count_reduction", "count_direct", "equal"};
    json rows = json::array();
    bool all_equal = true;
    for (double z : zs) {
        const int nb = bs_count(K, z, params, grid);
        const int nd = oracle_negative_count(K, z, params, grid);
        const bool eq = nb == nd;
        all_equal = all_equal && eq;
        if (!eq)
            res.warnings.push_back("count mismatch at z=" + format_full(z) + ": reduction " +
                                   std::to_string(nb) + " vs direct " + std::to_string(nd));
        table.rows.push_back({format_full(K.c1), format_full(K.c2), format_full(K.c3),
                              format_full(z), std::to_string(nb), std::to_string(nd),
                              eq ? "1" : "0"});
        rows.push_back(json{{"K", point_json(K)},
                            {"z", z},
                            {"count_reduction", nb},
                            {"count_direct", nd},
                            {"equal", eq}});
    }
    res.results = json{{"rows", rows}, {"all_equal", all_equal}};
    res.table = std::move(table);
    return res;
}

CommandResult cmd_expansion_fit(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    const ExpansionFit fit =
        threshold_expansion_fit(params, cfg.expansion_fit.K, cfg.expansion_fit.p_prime, grid);
    json out{{"exponent", fit.exponent},
             {"leading_coeff", fit.leading_coeff},
             {"loglog_rms", fit.loglog_rms},
             {"t_values", fit.t_values},
             {"delta_values", fit.delta_values}};
    if (fit.has_predicted) out["predicted_coeff"] = fit.predicted_coeff;
    res.results = out;
    return res;
}

CommandResult cmd_u_coefficient(const ExperimentConfig& cfg) {
    CommandResult res;
    warn_kind_ignored(cfg, res.warnings);
    CsvTable table;
    table.columns = {"gamma", "U"};
    json rows = json::array();
    SvgSeries series;
    series.label = "U(gamma)";
    for (double gamma : cfg.u_coefficient.gamma_list) {
        const UCoefficient u = u_coefficient(gamma, cfg.params, cfg.u_coefficient.lmax,
                                             cfg.u_coefficient.theta_max);
        table.rows.push_back({format_full(gamma), format_full(u.value)});
        rows.push_back(json{{"gamma", gamma}, {"U", u.value}, {"mode_measure", u.mode_measure}});
        series.x.push_back(gamma);
        series.y.push_back(u.value);
    }
    res.results = rows;
    res.table = std::move(table);
    if (series.x.size() >= 2) {
        SvgPlot plot;
        plot.title = "asymptotic coefficient";
        plot.x_label = "gamma";
        plot.y_label = "U(gamma)";
        plot.series.push_back(std::move(series));
        res.plot = std::move(plot);
    }
    return res;
}

CommandResult cmd_s_r_limit(const ExperimentConfig& cfg) {
    CommandResult res;
    warn_kind_ignored(cfg, res.warnings);
    const double gamma = cfg.s_r_limit.gamma;
    const UCoefficient u = u_coefficient(gamma, cfg.params, cfg.s_r_limit.lmax);
    CsvTable table;
    table.columns = {"gamma", "r", "count", "count_per_2r", "u_gamma", "relative_gap"};
    json rows = json::array();
    for (double r : cfg.s_r_limit.r_list) {
        const WindowCount wc =
            s_r_count(gamma, r, cfg.params, cfg.s_r_limit.lmax, cfg.s_r_limit.nodes_per_unit);
        const double gap = wc.per_unit / u.value - 1.0;
        table.rows.push_back({format_full(gamma), format_full(r), std::to_string(wc.total),
                              format_full(wc.per_unit), format_full(u.value),
                              format_full(gap)});
        rows.push_back(json{{"gamma", gamma},
                            {"r", r},
                            {"count", wc.total},
                            {"count_per_2r", wc.per_unit},
                            {"u_gamma", u.value},
                            {"relative_gap", gap},
                            {"per_mode", wc.per_mode}});
    }
    res.results = rows;
    res.table = std::move(table);
    return res;
}

CommandResult cmd_efimov_verify(const ExperimentConfig& cfg) {
    CommandResult res;
    const QuadratureGrid grid = build_configured_grid(cfg);
    const ModelParams params = effective_model(cfg, grid, res.warnings);
    const ThresholdClass tc = classify_threshold(params, grid, cfg.classify.tol);
    if (tc.kind != ThresholdKind::ZeroResonance) {
        res.results = json{{"status", "FAIL-PRECONDITION"},
                           {"reason", "threshold classification is \"" + kind_string(tc.kind) +
                                          "\", not a zero-energy resonance"},
                           {"classification", classification_json(tc)}};
        return res;
    }
    const auto& vb = cfg.efimov_verify;
    std::vector<double> abs_z;
    std::vector<int> counts;
    for (double z : vb.z_list) {
        if (!(z < 0.0))
            throw schema_error("efimov-verify.z_list: entries must be negative (below the "
                               "threshold)");
        abs_z.push_back(-z);
        counts.push_back(bs_count(vb.K, z, params, grid));
    }
    const UCoefficient u = u_coefficient(vb.gamma, params, vb.lmax, vb.theta_max);
    const SlopeFit fit = efimov_slope_fit(abs_z, counts, u.value);
    bool all_same = true;
    for (int c : counts) all_same = all_same && c == counts.front();
    if (all_same)
        res.warnings.push_back(
            "counts identical at every sampled z; the logarithmic regime sets in at far "
            "smaller |z| than this grid resolves");
    res.results = json{{"status", "OK"},
                       {"slope", fit.slope},
                       {"u1", fit.u_reference},
                       {"relative_gap", fit.relative_gap},
                       {"z_values", vb.z_list},
                       {"counts", counts},
                       {"grid_meta", json{{"id", grid.id()}, {"nodes", grid.size()}}}};
    SvgPlot plot;
    plot.title = "counts against |log z|";
    plot.x_label = "|log z|";
    plot.y_label = "N(K, z)";
    SvgSeries series;
    series.label = "counts";
    for (std::size_t i = 0; i < abs_z.size(); ++i) {
        series.x.push_back(std::fabs(std::log(abs_z[i])));
        series.y.push_back(static_cast<double>(counts[i]));
    }
    plot.series.push_back(std::move(series));
    plot.reference_slope = u.value;
    plot.reference_label = "slope U(gamma)";
    res.plot = std::move(plot);
    return res;
}

CommandResult cmd_singular_part(const ExperimentConfig& cfg) {
    CommandResult res;
    const ModelParams params = singular_shape_model(cfg, res.warnings);
    const auto& sb = cfg.singular_part;
    const CountMethod method =
        sb.method == "lanczos" ? CountMethod::LanczosTopK : CountMethod::DenseInertia;
    const UCoefficient u = u_coefficient(sb.gamma, params);
    CsvTable table;
    table.columns = {"gamma",     "abs_z",   "depth",        "M",     "count",
                     "count_per_log", "u_gamma", "relative_gap", "method"};
    json rows = json::array();
    SvgSeries series;
    series.label = "counts";
    for (std::size_t i = 0; i < sb.z_list.size(); ++i) {
        const double az = sb.z_list[i];
        const int depth =
            sb.depth_list.size() == 1 ? sb.depth_list[0] : sb.depth_list[i];
        const SingularPartResult r = singular_part_count(
            sb.gamma, az, params, depth, sb.delta, sb.cells_per_octave, method, sb.top_k);
        const double log_z = std::fabs(std::log(az));
        const double per_log = static_cast<double>(r.count) / log_z;
        const double gap = per_log / u.value - 1.0;
        table.rows.push_back({format_full(sb.gamma), format_full(az), std::to_string(depth),
                              std::to_string(r.nodes), std::to_string(r.count),
                              format_full(per_log), format_full(u.value), format_full(gap),
                              sb.method});
        json row{{"gamma", sb.gamma}, {"abs_z", az},
                 {"depth", depth},    {"M", r.nodes},
                 {"count", r.count},  {"count_per_log", per_log},
                 {"u_gamma", u.value}, {"relative_gap", gap},
                 {"method", sb.method}};
        if (!r.top_eigenvalues.empty()) row["top_eigenvalues"] = r.top_eigenvalues;
        rows.push_back(std::move(row));
        series.x.push_back(log_z);
        series.y.push_back(static_cast<double>(r.count));
    }
    res.results = rows;
    res.table = std::move(table);
    if (series.x.size() >= 2) {
        SvgPlot plot;
        plot.title = "singular-part counts against |log z|";
        plot.x_label = "|log z|";
        plot.y_label = "count";
        plot.series.push_back(std::move(series));
        plot.reference_slope = u.value;
        plot.reference_label = "slope U(gamma)";
        res.plot = std::move(plot);
    }
    return res;
}

}  // namespace

std::string default_format(const std::string& command) {
    if (command == "classify" || command == "calibrate" || command == "essential-spectrum" ||
        command == "expansion-fit" || command == "efimov-verify")
        return "json";
    return "csv";
}

CommandResult run_command(const std::string& command, const ExperimentConfig& cfg) {
    if (cfg.command && *cfg.command != command)
        throw schema_error("config names command \"" + *cfg.command +
                           "\" but \"" + command + "\" was invoked");
    if (command == "classify") return cmd_classify(cfg);
    if (command == "calibrate") return cmd_calibrate(cfg);
    if (command == "friedrichs-spectrum") return cmd_friedrichs_spectrum(cfg);
    if (command == "essential-spectrum") return cmd_essential_spectrum(cfg);
    if (command == "count") return cmd_count(cfg);
    if (command == "oracle-check") return cmd_oracle_check(cfg);
    if (command == "expansion-fit") return cmd_expansion_fit(cfg);
    if (command == "u-coefficient") return cmd_u_coefficient(cfg);
    if (command == "s-r-limit") return cmd_s_r_limit(cfg);
    if (command == "efimov-verify") return cmd_efimov_verify(cfg);
    if (command == "singular-part") return cmd_singular_part(cfg);
    throw schema_error("unknown command \"" + command + "\"");
}

}  // namespace efimov::cli
