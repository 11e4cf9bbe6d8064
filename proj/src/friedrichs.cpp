#include "efimov/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "efimov/errors.hpp"
#include "efimov/linalg.hpp"
#include "efimov/parallel.hpp"

namespace efimov {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double band_min_closed_form(const TorusPoint& k, const ModelParams& params) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double c = std::cos(params.n * k[i]);
        s += params.l1 + params.l2 -
             std::sqrt(params.l1 * params.l1 + params.l2 * params.l2 +
                       2.0 * params.l1 * params.l2 * c);
    }
    return s;
}

double band_max_closed_form(const TorusPoint& k, const ModelParams& params) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double c = std::cos(params.n * k[i]);
        s += params.l1 + params.l2 +
             std::sqrt(params.l1 * params.l1 + params.l2 * params.l2 +
                       2.0 * params.l1 * params.l2 * c);
    }
    return s;
}

EssentialBand essential_band(const TorusPoint& k, const ModelParams& params) {
    const int R = 16 * params.n;
    const double h = 2.0 * kPi / R;

    const auto value = [&](const TorusPoint& q) { return branch_energy(k, q, params); };
    const auto gradient = [&](const TorusPoint& q) -> Eigen::Vector3d {
        // d/dq [l1 eps(q) + l2 eps(k - q)]
        return params.l1 * epsilon_gradient(q, params.n) -
               params.l2 * epsilon_gradient(k - q, params.n);
    };
    const auto hessian = [&](const TorusPoint& q) -> Eigen::Matrix3d {
        return params.l1 * epsilon_hessian(q, params.n) +
               params.l2 * epsilon_hessian(k - q, params.n);
    };

    // Coarse midpoint scan, keep values for basin selection.
    std::vector<TorusPoint> pts;
    std::vector<double> vals;
    pts.reserve(static_cast<std::size_t>(R) * R * R);
    vals.reserve(pts.capacity());
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j)
            for (int m = 0; m < R; ++m) {
                TorusPoint q(-kPi + (i + 0.5) * h, -kPi + (j + 0.5) * h, -kPi + (m + 0.5) * h);
                pts.push_back(q);
                vals.push_back(value(q));
            }

    // sign = +1: minimize; sign = -1: maximize.
    const auto polish = [&](double sign) {
        std::vector<std::size_t> order(pts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return sign * vals[a] < sign * vals[b];
        });
        // three best scan points in distinct basins
        std::vector<TorusPoint> seeds;
        for (std::size_t idx : order) {
            bool separated = true;
            for (const auto& s : seeds)
                if (torus_distance(pts[idx], s) < 2.0 * h) separated = false;
            if (separated) seeds.push_back(pts[idx]);
            if (seeds.size() == 3) break;
        }

        TorusPoint best_q = seeds.front();
        double best_v = value(best_q);
        for (const auto& seed : seeds) {
            TorusPoint q = seed;
            double fq = value(q);
            double step = h;
            for (int it = 0; it < 200 && step > 1e-14; ++it) {
                Eigen::Vector3d g = sign * gradient(q);
                const double gn = g.norm();
                if (gn < 1e-13) break;
                TorusPoint trial = TorusPoint::from_vec(q.vec() - (step / gn) * g);
                const double ft = value(trial);
                if (sign * ft < sign * fq) {
                    q = trial;
                    fq = ft;
                    step *= 1.2;
                } else {
                    step *= 0.5;
                }
            }
            // Newton polish near the stationary point
            for (int it = 0; it < 12; ++it) {
                Eigen::Vector3d g = gradient(q);
                if (g.norm() < 1e-15) break;
                Eigen::Matrix3d H = hessian(q);
                Eigen::FullPivLU<Eigen::Matrix3d> lu(H);
                if (!lu.isInvertible()) break;
                Eigen::Vector3d delta = lu.solve(-g);
                TorusPoint trial = TorusPoint::from_vec(q.vec() + delta);
                const double ft = value(trial);
                if (sign * ft <= sign * fq + 1e-15) {
                    q = trial;
                    fq = ft;
                } else {
                    break;
                }
                if (delta.norm() < 1e-15) break;
            }
            if (sign * fq < sign * best_v) {
                best_v = fq;
                best_q = q;
            }
        }
        return std::make_pair(best_q, best_v);
    };

    EssentialBand band;
    band.k = k;
    auto [qmin, vmin] = polish(+1.0);
    auto [qmax, vmax] = polish(-1.0);
    band.argmin = qmin;
    band.Emin = vmin;
    band.argmax = qmax;
    band.Emax = vmax;
    return band;
}

std::vector<double> v1_squared_on_grid(const ModelParams& params, const QuadratureGrid& grid) {
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double v = params.v1(grid.nodes[i]);
        out[i] = v * v;
    });
    return out;
}

ResolventQuadrature resolvent_quadrature(const QuadratureGrid& grid,
                                         const std::vector<double>& v1_squared,
                                         const ModelParams& params, const TorusPoint& shift,
                                         double z) {
    if (v1_squared.size() != grid.size())
        throw dimension_guard_error("resolvent_quadrature: v1 cache size mismatch");

    const auto sizes = grid.axis_sizes();
    const int n = params.n;
    const double l1 = params.l1, l2 = params.l2;

    // Per-axis trig tables: eps(t) and eps(shift - t) both expand into
    // cos(n t_a) and sin(n t_a) with per-axis constants.
    std::array<std::vector<double>, 3> ct, st;
    for (std::size_t a = 0; a < 3; ++a) {
        ct[a].resize(sizes[a]);
        st[a].resize(sizes[a]);
        for (std::size_t i = 0; i < sizes[a]; ++i) {
            ct[a][i] = std::cos(n * grid.axis_nodes[a][i]);
            st[a][i] = std::sin(n * grid.axis_nodes[a][i]);
        }
    }
    std::array<double, 3> cs{}, ss{};
    for (std::size_t a = 0; a < 3; ++a) {
        cs[a] = std::cos(n * shift[a]);
        ss[a] = std::sin(n * shift[a]);
    }

    const std::size_t s1 = sizes[0], s2 = sizes[1], s3 = sizes[2];
    std::vector<double> slab_sum(s1, 0.0);
    std::vector<double> slab_min(s1, std::numeric_limits<double>::infinity());
    std::vector<double> slab_max(s1, -std::numeric_limits<double>::infinity());

    parallel_for(s1, [&](std::size_t i1) {
        // Neumaier accumulation within the slab, fixed (i2, i3) order.
        double sum = 0.0, comp = 0.0;
        double dmin = std::numeric_limits<double>::infinity();
        double dmax = -std::numeric_limits<double>::infinity();
        const double e1 = 1.0 - ct[0][i1];
        // cos(n (shift - t))_a = cs_a * ct_a + ss_a * st_a
        const double f1 = 1.0 - (cs[0] * ct[0][i1] + ss[0] * st[0][i1]);
        const double w1a = grid.axis_weights[0][i1];
        for (std::size_t i2 = 0; i2 < s2; ++i2) {
            const double e12 = e1 + 1.0 - ct[1][i2];
            const double f12 = f1 + 1.0 - (cs[1] * ct[1][i2] + ss[1] * st[1][i2]);
            const double w12 = w1a * grid.axis_weights[1][i2];
            const std::size_t row = (i1 * s2 + i2) * s3;
            for (std::size_t i3 = 0; i3 < s3; ++i3) {
                const double eps_t = e12 + 1.0 - ct[2][i3];
                const double eps_s = f12 + 1.0 - (cs[2] * ct[2][i3] + ss[2] * st[2][i3]);
                const double denom = l1 * eps_t + l2 * eps_s - z;
                dmin = std::min(dmin, denom);
                dmax = std::max(dmax, denom);
                const double term = w12 * grid.axis_weights[2][i3] * v1_squared[row + i3] / denom;
                const double t = sum + term;
                if (std::abs(sum) >= std::abs(term))
                    comp += (sum - t) + term;
                else
                    comp += (term - t) + sum;
                sum = t;
            }
        }
        slab_sum[i1] = sum + comp;
        slab_min[i1] = dmin;
        slab_max[i1] = dmax;
    });

    ResolventQuadrature out;
    out.sum = neumaier_sum(slab_sum);
    out.min_denominator = *std::min_element(slab_min.begin(), slab_min.end());
    out.max_denominator = *std::max_element(slab_max.begin(), slab_max.end());
    return out;
}

namespace {

double delta_from_sum(const TorusPoint& k, double z, const ModelParams& params,
                      const ResolventQuadrature& rs) {
    if (rs.min_denominator < 0.0 && rs.max_denominator > 0.0)
        throw numerical_guard_error(
            "fredholm_delta: spectral parameter inside the essential band on this grid");
    const double scale = 1.0 + std::abs(z) + params.l1 + params.l2;
    if (std::min(std::abs(rs.min_denominator), std::abs(rs.max_denominator)) < 1e-14 * scale)
        throw numerical_guard_error("fredholm_delta: quadrature denominator degenerates");
    return params.l2 * epsilon(k, params.n) + 1.0 - z - 0.5 * rs.sum;
}

}  // namespace

double fredholm_delta(const TorusPoint& k, double z, const ModelParams& params,
                      const QuadratureGrid& grid) {
    const double emin = band_min_closed_form(k, params);
    const double emax = band_max_closed_form(k, params);
    if (z > emin + 1e-12 && z < emax - 1e-12)
        throw numerical_guard_error("fredholm_delta: z lies inside the essential band");
    const auto v1sq = v1_squared_on_grid(params, grid);
    const auto rs = resolvent_quadrature(grid, v1sq, params, k, z);
    return delta_from_sum(k, z, params, rs);
}

double delta_via_w2(const TorusPoint& K, const TorusPoint& p, double z,
                    const ModelParams& params, const QuadratureGrid& grid) {
    // Delta(K - p; z - l1 eps(p)) with denominators written as w2(K;p,t) - z,
    // node-for-node identical to fredholm_delta at the shifted arguments.
    return fredholm_delta(K - p, z - params.l1 * epsilon(p, params.n), params, grid);
}

namespace {

QuadratureGrid coarsened_sibling(const QuadratureGrid& grid) {
    if (!grid.refinement.empty() && grid.refinement.front().levels >= 1) {
        std::vector<RefinePatch> patches = grid.refinement;
        for (auto& p : patches) p.levels -= 1;
        if (patches.front().levels == 0) patches.clear();
        return build_grid(grid.base_resolution, grid.shift, patches, grid.lambda_n,
                          grid.cells_per_octave);
    }
    const int N = std::max(2, grid.base_resolution / 2);
    if (N == grid.base_resolution)
        throw numerical_guard_error("refinement protocol: grid cannot be coarsened further");
    return build_grid(N, grid.shift, grid.refinement, grid.lambda_n, grid.cells_per_octave);
}

}  // namespace

DeltaRefined fredholm_delta_refined(const TorusPoint& k, double z, const ModelParams& params,
                                    const QuadratureGrid& grid, double rtol) {
    DeltaRefined r;
    r.value = fredholm_delta(k, z, params, grid);
    const QuadratureGrid sibling = coarsened_sibling(grid);
    r.coarser = fredholm_delta(k, z, params, sibling);
    r.extrapolated = 2.0 * r.value - r.coarser;
    r.error_estimate = std::abs(r.value - r.coarser);
    if (r.error_estimate > rtol * std::max(1.0, std::abs(r.value)))
        throw numerical_guard_error("fredholm_delta_refined: grid too coarse for requested z");
    return r;
}

std::vector<DiscreteEigenvalue> discrete_spectrum_h(const TorusPoint& k,
                                                    const ModelParams& params,
                                                    const QuadratureGrid& grid) {
    const double emin = band_min_closed_form(k, params);
    const double emax = band_max_closed_form(k, params);
    const double eta = 1e-9 * (1.0 + params.l1 + params.l2);
    const auto v1sq = v1_squared_on_grid(params, grid);
    const auto delta = [&](double z) {
        return delta_from_sum(k, z, params, resolvent_quadrature(grid, v1sq, params, k, z));
    };

    const auto bisect = [&](double lo, double hi) {
        // invariant: Delta(lo) > 0 > Delta(hi) (Delta is decreasing in z)
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (delta(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    std::vector<DiscreteEigenvalue> out;

    // below the band
    const double z_hi = emin - eta;
    if (delta(z_hi) < 0.0) {
        // Delta ~ -z as z -> -infinity, so doubling the offset always finds
        // the sign change; the cap is a crude bound from the coupling norm.
        const double bound = params.v1.max_abs_bound();
        const double off_cap =
            64.0 * (params.l1 + params.l2) + 64.0 + 140.0 * (1.0 + bound * bound);
        double off = 20.0 * (params.l1 + params.l2);
        while (delta(emin - off) < 0.0) {
            off *= 2.0;
            if (off > off_cap)
                throw numerical_guard_error(
                    "discrete_spectrum_h: no sign change on the bracket below the band");
        }
        out.push_back({bisect(emin - off, z_hi), SpectralSide::Below});
    }

    // above the band
    const double z_lo_above = emax + eta;
    if (delta(z_lo_above) > 0.0) {
        double off = 1.0;
        const double off_cap = 64.0 * (params.l1 + params.l2) + 64.0;
        while (delta(emax + off) > 0.0) {
            off *= 2.0;
            if (off > off_cap)
                throw numerical_guard_error(
                    "discrete_spectrum_h: no sign change on the bracket above the band");
        }
        out.push_back({bisect(z_lo_above, emax + off), SpectralSide::Above});
    }

    return out;
}

ThresholdClass classify_threshold(const ModelParams& params, const QuadratureGrid& grid,
                                  double tol) {
    if (tol <= 0.0) throw schema_error("classify_threshold: tol must be positive");
    ThresholdClass out;

    const auto refined = fredholm_delta_refined(TorusPoint(), 0.0, params, grid);
    out.delta00 = refined.value;
    out.delta00_error = std::max(refined.error_estimate, 1e-15);

    const auto v1sq = v1_squared_on_grid(params, grid);
    const auto rs = resolvent_quadrature(grid, v1sq, params, TorusPoint(), 0.0);
    if (rs.min_denominator <= 0.0)
        throw numerical_guard_error(
            "classify_threshold: grid node hits the minimizer set (use a shifted grid)");
    out.g_eigenvalue = 0.5 * rs.sum;

    const auto lambda = lambda_set(params.n);
    const double v_tol = 1e-9 * (1.0 + params.v1.max_abs_bound());
    for (const auto& q : lambda.points) {
        const double v = params.v1(q);
        out.v1_on_lambda.emplace_back(q, v);
        if (std::abs(v) > v_tol) out.lambda0.push_back(q);
    }

    const double tol_eff = std::max(tol, 10.0 * out.delta00_error);
    const double mag = std::abs(out.delta00);
    if (mag <= tol_eff) {
        out.kind = out.lambda0.empty() ? ThresholdKind::ZeroEigenvalue
                                       : ThresholdKind::ZeroResonance;
    } else if (mag <= 2.0 * tol_eff) {
        throw numerical_guard_error(
            "classify_threshold: indeterminate at this grid resolution (|Delta(0;0)| within "
            "2x of the effective tolerance)");
    } else {
        out.kind = ThresholdKind::RegularPoint;
    }
    return out;
}

Calibration calibrate_resonance(const TrigPolySpec& v1_shape, const ModelParams& params,
                                const QuadratureGrid& grid) {
    v1_shape.validate_structure();

    const auto weighted = [&](const QuadratureGrid& g) {
        std::vector<double> shape_sq(g.size());
        parallel_for(g.size(), [&](std::size_t i) {
            const double v = v1_shape(g.nodes[i]);
            shape_sq[i] = v * v;
        });
        const auto rs = resolvent_quadrature(g, shape_sq, params, TorusPoint(), 0.0);
        if (rs.min_denominator <= 0.0)
            throw numerical_guard_error(
                "calibrate_resonance: grid node hits the minimizer set (use a shifted grid)");
        return rs.sum;  // Int shape^2 / ((l1+l2) eps)
    };

    const double I = weighted(grid);
    if (!(I > 0.0))
        throw numerical_guard_error("calibrate_resonance: coupling shape vanishes on the grid");
    const double lambda_star = std::sqrt(2.0 / I);

    const double I_coarse = weighted(coarsened_sibling(grid));
    if (!(I_coarse > 0.0) || std::abs(I - I_coarse) > 0.5 * I)
        throw numerical_guard_error("calibrate_resonance: refinement protocol diverges");
    Calibration cal;
    cal.lambda_star = lambda_star;
    cal.uncertainty = std::abs(lambda_star - std::sqrt(2.0 / I_coarse));
    return cal;
}

namespace {

ModelParams calibrated_model(double l1, double l2, int n, const QuadratureGrid& grid,
                             const TrigPolySpec& shape, double scale) {
    ModelParams params;
    params.l1 = l1;
    params.l2 = l2;
    params.n = n;
    const Calibration cal = calibrate_resonance(shape, params, grid);
    params.v1 = shape.scaled(scale * cal.lambda_star);
    params.validate();
    return params;
}

}  // namespace

ModelParams resonance_model(double l1, double l2, int n, const QuadratureGrid& grid) {
    TrigPolySpec shape = TrigPolySpec::constant_spec(1.0);
    shape.parity = {Parity::Even, Parity::Even, Parity::Even};
    return calibrated_model(l1, l2, n, grid, shape, 1.0);
}

ModelParams zero_eigenvalue_model(double l1, double l2, int n, const QuadratureGrid& grid) {
    return calibrated_model(l1, l2, n, grid, TrigPolySpec::sin_product(n), 1.0);
}

ModelParams regular_model(double l1, double l2, int n, const QuadratureGrid& grid,
                          double coupling_scale) {
    if (!(coupling_scale > 0.0) || coupling_scale >= 1.0)
        throw schema_error("regular_model: coupling scale must lie in (0, 1)");
    TrigPolySpec shape = TrigPolySpec::constant_spec(1.0);
    shape.parity = {Parity::Even, Parity::Even, Parity::Even};
    return calibrated_model(l1, l2, n, grid, shape, coupling_scale);
}

double resonance_vector_f1(const ModelParams& params, double f0, const TorusPoint& q) {
    const double e = epsilon(q, params.n);
    return -params.v1(q) * f0 / (std::sqrt(2.0) * (params.l1 + params.l2) * e);
}

ResonanceVectorReport resonance_vector(const ModelParams& params, double f0,
                                       const QuadratureGrid& grid) {
    const auto cls = classify_threshold(params, grid, 1e-6);
    if (cls.kind == ThresholdKind::RegularPoint)
        throw numerical_guard_error(
            "resonance_vector: model classifies as a regular point (no threshold vector)");

    ResonanceVectorReport rep;
    rep.f0 = f0;

    rep.residual_r0 =
        f0 + (1.0 / std::sqrt(2.0)) * integrate(grid, [&](const TorusPoint& t) {
            return params.v1(t) * resonance_vector_f1(params, f0, t);
        });

    // pointwise second-row residual on an irrational (minimizer-avoiding) lattice
    const double phi1 = 0.7548776662466927;  // plastic-number fractional rotations
    const double phi2 = 0.5698402909980532;
    const double phi3 = 0.3247179572447460;
    double max_r1 = 0.0;
    for (int j = 1; j <= 1000; ++j) {
        const auto frac = [](double x) { return x - std::floor(x); };
        TorusPoint q(-kPi + 2.0 * kPi * frac(j * phi1), -kPi + 2.0 * kPi * frac(j * phi2),
                     -kPi + 2.0 * kPi * frac(j * phi3));
        const double r1 = params.v1(q) * f0 / std::sqrt(2.0) +
                          (params.l1 + params.l2) * epsilon(q, params.n) *
                              resonance_vector_f1(params, f0, q);
        max_r1 = std::max(max_r1, std::abs(r1));
    }
    rep.max_residual_r1 = max_r1;

    rep.l1_estimate = integrate(
        grid, [&](const TorusPoint& t) { return std::abs(resonance_vector_f1(params, f0, t)); });
    if (!std::isfinite(rep.l1_estimate))
        throw numerical_guard_error("resonance_vector: grid node hits the minimizer set");

    // squared-norm growth over deepening refinement
    const int base_levels =
        grid.refinement.empty() ? 2 : std::max(2, grid.refinement.front().levels);
    const double delta = grid.refinement.empty() ? (kPi / (4.0 * params.n))
                                                 : grid.refinement.front().delta;
    for (int L = base_levels; L < base_levels + 4; ++L) {
        const auto g = lambda_refined_grid(grid.base_resolution, grid.shift, L, delta, params.n,
                                           grid.cells_per_octave);
        rep.l2_by_depth.push_back(integrate(g, [&](const TorusPoint& t) {
            const double f = resonance_vector_f1(params, f0, t);
            return f * f;
        }));
    }
    const std::size_t last = rep.l2_by_depth.size() - 1;
    rep.l2_divergence = rep.l2_by_depth[last] >= 1.5 * rep.l2_by_depth[last - 1];
    return rep;
}

ExpansionFit threshold_expansion_fit(const ModelParams& params, const TorusPoint& K,
                                     const TorusPoint& p_prime, const QuadratureGrid& grid) {
    if (distance_to_lambda(K, params.n) > 1e-9 || distance_to_lambda(p_prime, params.n) > 1e-9)
        throw schema_error("threshold_expansion_fit: K and p' must lie on the minimizer set");
    const auto cls = classify_threshold(params, grid, 1e-6);
    if (cls.kind == ThresholdKind::RegularPoint)
        throw numerical_guard_error(
            "threshold_expansion_fit: model classifies as a regular point");

    const auto v1sq = v1_squared_on_grid(params, grid);

    ExpansionFit fit;
    for (int j = 0; j < 8; ++j) {
        const double t = 0.1 * std::pow(2.0, -j);
        const TorusPoint p(p_prime.c1 + t, p_prime.c2, p_prime.c3);
        // Delta(K - p; -l1 eps(p)) = w1(K;p) - (1/2) Int v1^2 / w2(K;p,.)
        const auto rs = resolvent_quadrature(grid, v1sq, params, K - p,
                                             -params.l1 * epsilon(p, params.n));
        if (rs.min_denominator <= 0.0)
            throw numerical_guard_error("threshold_expansion_fit: w2 denominator not positive");
        const double d = w1_value(K, p, params) - 0.5 * rs.sum;
        if (!(d > 0.0))
            throw numerical_guard_error(
                "threshold_expansion_fit: nonpositive determinant sample (fit unstable)");
        fit.t_values.push_back(t);
        fit.delta_values.push_back(d);
    }

    // exponent from the small-t half in log-log coordinates
    std::vector<double> lx, ly;
    for (int j = 4; j < 8; ++j) {
        lx.push_back(std::log(fit.t_values[j]));
        ly.push_back(std::log(fit.delta_values[j]));
    }
    const LineFit ll = fit_line(lx, ly);
    fit.exponent = ll.slope;
    fit.loglog_rms = ll.rms_residual;
    if (ll.rms_residual > 0.05)
        throw numerical_guard_error("threshold_expansion_fit: log-log regression unstable");

    // leading coefficient from a two-term power fit in the detected regime
    const auto two_term_fit = [&](double e1, double e2) {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < fit.t_values.size(); ++i) {
            const double x1 = std::pow(fit.t_values[i], e1);
            const double x2 = std::pow(fit.t_values[i], e2);
            a11 += x1 * x1;
            a12 += x1 * x2;
            a22 += x2 * x2;
            b1 += x1 * fit.delta_values[i];
            b2 += x2 * fit.delta_values[i];
        }
        const double det = a11 * a22 - a12 * a12;
        return (b1 * a22 - b2 * a12) / det;
    };
    if (std::abs(fit.exponent - 1.0) < 0.25)
        fit.leading_coeff = two_term_fit(1.0, 2.0);
    else if (std::abs(fit.exponent - 2.0) < 0.25)
        fit.leading_coeff = two_term_fit(2.0, 4.0);
    else
        fit.leading_coeff = std::exp(ll.intercept);

    if (cls.kind == ThresholdKind::ZeroResonance) {
        double sum_v1sq = 0.0;
        for (const auto& q : cls.lambda0) {
            const double v = params.v1(q);
            sum_v1sq += v * v;
        }
        const double m = (params.l1 * params.l1 + 2.0 * params.l1 * params.l2) /
                         (params.l1 + params.l2);
        fit.predicted_coeff = 2.0 * kPi * kPi * sum_v1sq /
                              (params.n * params.n *
                               std::pow(params.l1 + params.l2, 1.5)) *
                              std::sqrt(m);
        fit.has_predicted = true;
    }
    return fit;
}

}  // namespace efimov
