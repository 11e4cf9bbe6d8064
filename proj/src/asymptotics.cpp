#include "efimov/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "efimov/counting.hpp"
#include "efimov/errors.hpp"
#include "efimov/linalg.hpp"
#include "efimov/parallel.hpp"
#include "efimov/torus.hpp"

namespace efimov {

namespace {

constexpr double kPi = 3.14159265358979323846;

double coupling_b(const ModelParams& p) { return p.l2 / (p.l1 + p.l2); }

double front_constant(const ModelParams& p) {
    return (p.l1 + p.l2) / std::sqrt(p.l1 * p.l1 + 2.0 * p.l1 * p.l2);
}

// sinh(theta * a) / sinh(pi * theta), stable for large theta, with the
// theta = 0 limit a / pi.
double sinh_ratio(double theta, double a) {
    if (theta < 1e-8) return a / kPi;
    if (theta > 30.0) {
        // both sinh overflow-prone; use exp difference form
        const double num = std::exp(theta * (a - kPi)) - std::exp(-theta * (a + kPi));
        return num / (1.0 - std::exp(-2.0 * kPi * theta));
    }
    return std::sinh(theta * a) / std::sinh(kPi * theta);
}

}  // namespace

double s_kernel(double y, double t, const ModelParams& params) {
    if (std::abs(t) > 1.0 + 1e-12) throw schema_error("s_kernel: |t| must be <= 1");
    const double b = coupling_b(params);
    return front_constant(params) / (4.0 * kPi * kPi) / (std::cosh(y) + b * t);
}

double s_hat(double theta, double t, const ModelParams& params) {
    if (theta < 0.0) theta = -theta;  // even symbol
    if (theta > 200.0) throw schema_error("s_hat: theta out of the supported range");
    if (std::abs(t) > 1.0 + 1e-12) throw schema_error("s_hat: |t| must be <= 1");
    t = std::clamp(t, -1.0, 1.0);
    const double b = coupling_b(params);
    const double bt = b * t;
    const double root = std::sqrt(1.0 - bt * bt);
    return front_constant(params) / (2.0 * kPi) * sinh_ratio(theta, std::acos(bt)) / root;
}

double lambda0_closed_form(double theta, const ModelParams& params) {
    if (theta < 0.0) theta = -theta;
    const double b = coupling_b(params);
    const double phi_m = std::acos(b);
    const double phi_p = kPi - phi_m;
    const double pref =
        (params.l1 + params.l2) * (params.l1 + params.l2) /
        (params.l2 * std::sqrt(params.l1 * params.l1 + 2.0 * params.l1 * params.l2));
    if (theta < 1e-8) return pref * (phi_p * phi_p - phi_m * phi_m) / (2.0 * kPi);
    if (theta > 30.0) {
        // (cosh(th a) - cosh(th c)) / (th sinh(pi th)) with a=phi_p > c=phi_m
        const double num = std::exp(theta * (phi_p - kPi)) + std::exp(-theta * (phi_p + kPi)) -
                           std::exp(theta * (phi_m - kPi)) - std::exp(-theta * (phi_m + kPi));
        return pref * num / (theta * (1.0 - std::exp(-2.0 * kPi * theta)));
    }
    return pref * (std::cosh(theta * phi_p) - std::cosh(theta * phi_m)) /
           (theta * std::sinh(kPi * theta));
}

namespace {

// lam_l for all l <= lmax at one theta with a prebuilt rule and Legendre table.
std::vector<double> lambda_with_rule(double theta, const ModelParams& params, int lmax,
                                     const GaussLegendre& gl,
                                     const std::vector<std::vector<double>>& legendre) {
    std::vector<double> lam(lmax + 1, 0.0);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double sv = 2.0 * kPi * gl.weights[i] * s_hat(theta, gl.nodes[i], params);
        for (int l = 0; l <= lmax; ++l) lam[l] += sv * legendre[i][l];
    }
    return lam;
}

std::vector<std::vector<double>> legendre_table(const std::vector<double>& t, int lmax) {
    std::vector<std::vector<double>> P(t.size(), std::vector<double>(lmax + 1));
    for (std::size_t i = 0; i < t.size(); ++i) {
        P[i][0] = 1.0;
        if (lmax >= 1) P[i][1] = t[i];
        for (int k = 1; k < lmax; ++k)
            P[i][k + 1] = ((2.0 * k + 1.0) * t[i] * P[i][k] - k * P[i][k - 1]) / (k + 1.0);
    }
    return P;
}

}  // namespace

std::vector<double> lambda_spectrum(double theta, const ModelParams& params, int lmax,
                                    int nodes) {
    if (lmax < 0 || lmax > 64) throw schema_error("lambda_spectrum: lmax out of range");
    if (nodes <= 0) nodes = std::max(4 * (lmax + 1), 64);
    const GaussLegendre gl = gauss_legendre(nodes);
    const GaussLegendre gl2 = gauss_legendre(2 * nodes);
    const auto tab = legendre_table(gl.nodes, lmax);
    const auto tab2 = legendre_table(gl2.nodes, lmax);
    const auto lam = lambda_with_rule(theta, params, lmax, gl, tab);
    const auto lam2 = lambda_with_rule(theta, params, lmax, gl2, tab2);
    for (int l = 0; l <= lmax; ++l)
        if (std::abs(lam[l] - lam2[l]) > 1e-10)
            throw numerical_guard_error("lambda_spectrum: quadrature not converged at this order");
    return lam2;
}

UCoefficient u_coefficient(double gamma, const ModelParams& params, int lmax,
                           double theta_max) {
    if (!(gamma > 0.0)) throw schema_error("u_coefficient: gamma must be positive");
    if (lmax < 0 || lmax > 64) throw schema_error("u_coefficient: lmax out of range");
    if (!(theta_max > 0.0) || theta_max > 200.0)
        throw schema_error("u_coefficient: theta_max out of range");

    const int nodes = std::max(4 * (lmax + 1), 64);
    const GaussLegendre gl = gauss_legendre(2 * nodes);
    const auto tab = legendre_table(gl.nodes, lmax);
    const auto lam_at = [&](double th) {
        return lambda_with_rule(th, params, lmax, gl, tab);
    };

    // spot-check the quadrature order before trusting the scan
    for (double th : {0.0, 0.2 * theta_max, 0.7 * theta_max})
        (void)lambda_spectrum(th, params, lmax, nodes);

    const auto lam0 = lam_at(0.0);
    if (lam0[lmax] >= gamma)
        throw numerical_guard_error(
            "u_coefficient: mode cutoff too small (last mode still active at theta = 0)");
    if (lambda0_closed_form(theta_max, params) >= gamma)
        throw numerical_guard_error("u_coefficient: theta_max too small (mode 0 still active)");

    const int S = 4096;
    const double h = theta_max / S;
    UCoefficient out;
    out.mode_measure.assign(lmax + 1, 0.0);
    out.crossings.assign(lmax + 1, {});

    std::vector<bool> active(lmax + 1);
    for (int l = 0; l <= lmax; ++l) active[l] = lam0[l] > gamma;
    std::vector<double> last_on(lmax + 1, 0.0);  // start of the current active interval

    for (int i = 1; i <= S; ++i) {
        const double th = i * h;
        const auto cur = lam_at(th);
        for (int l = 0; l <= lmax; ++l) {
            const bool now = cur[l] > gamma;
            if (now == active[l]) continue;
            // bisect the crossing inside (th - h, th)
            double lo = th - h, hi = th;
            for (int it = 0; it < 60 && hi - lo > 1e-12 * theta_max; ++it) {
                const double mid = 0.5 * (lo + hi);
                const bool mid_state = lam_at(mid)[l] > gamma;
                if (mid_state == active[l])
                    lo = mid;
                else
                    hi = mid;
            }
            const double cross = 0.5 * (lo + hi);
            out.crossings[l].push_back(cross);
            if (active[l])
                out.mode_measure[l] += cross - last_on[l];
            else
                last_on[l] = cross;
            active[l] = now;
        }
    }
    for (int l = 0; l <= lmax; ++l)
        if (active[l]) out.mode_measure[l] += theta_max - last_on[l];

    double u = 0.0;
    for (int l = 0; l <= lmax; ++l) u += (2.0 * l + 1.0) * out.mode_measure[l];
    out.value = u / (2.0 * kPi);
    return out;
}

int sphere_nystrom_count(double gamma, double theta, const ModelParams& params,
                         int polar_nodes) {
    if (polar_nodes < 4 || polar_nodes > 64)
        throw schema_error("sphere_nystrom_count: polar_nodes out of range");
    const int na = 2 * polar_nodes;
    const GaussLegendre gl = gauss_legendre(polar_nodes);

    const std::size_t M = static_cast<std::size_t>(polar_nodes) * na;
    std::vector<Eigen::Vector3d> omega(M);
    std::vector<double> w(M);
    for (int i = 0; i < polar_nodes; ++i) {
        const double mu = gl.nodes[i];
        const double rho = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < na; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / na;
            const std::size_t idx = static_cast<std::size_t>(i) * na + j;
            omega[idx] = {rho * std::cos(phi), rho * std::sin(phi), mu};
            w[idx] = gl.weights[i] * (2.0 * kPi / na);
        }
    }

    Eigen::MatrixXd A(M, M);
    parallel_for(M, [&](std::size_t j) {
        for (std::size_t i = 0; i < M; ++i) {
            const double dot = std::clamp(omega[i].dot(omega[j]), -1.0, 1.0);
            A(i, j) = std::sqrt(w[i] * w[j]) * s_hat(theta, dot, params);
        }
    });
    return count_above(std::move(A), gamma);
}

WindowCount s_r_count(double gamma, double r, const ModelParams& params, int lmax,
                      int nodes_per_unit) {
    if (!(gamma > 0.0)) throw schema_error("s_r_count: gamma must be positive");
    if (!(r > 0.0)) throw schema_error("s_r_count: window length must be positive");
    if (lmax < 0 || lmax > 64) throw schema_error("s_r_count: lmax out of range");
    if (nodes_per_unit < 1) throw schema_error("s_r_count: nodes_per_unit must be >= 1");

    const auto counts_at = [&](int npu) {
        const std::size_t P = static_cast<std::size_t>(std::llround(r * npu));
        if (P < 2 || P > 20000)
            throw dimension_guard_error("s_r_count: window discretization out of range");
        const double h = 1.0 / npu;

        // radial kernels k_l on the Toeplitz stencil, all modes in one sweep
        const int qn = 64;
        const GaussLegendre gl = gauss_legendre(qn);
        const auto tab = legendre_table(gl.nodes, lmax);
        std::vector<std::vector<double>> k(lmax + 1, std::vector<double>(P, 0.0));
        for (std::size_t d = 0; d < P; ++d) {
            const double y = d * h;
            for (int i = 0; i < qn; ++i) {
                const double sv = 2.0 * kPi * gl.weights[i] * s_kernel(y, gl.nodes[i], params);
                for (int l = 0; l <= lmax; ++l) k[l][d] += sv * tab[i][l];
            }
        }

        std::vector<int> per_mode(lmax + 1, 0);
        for (int l = 0; l <= lmax; ++l) {
            Eigen::MatrixXd A(P, P);
            for (std::size_t j = 0; j < P; ++j)
                for (std::size_t i = 0; i < P; ++i)
                    A(i, j) = h * k[l][i >= j ? i - j : j - i];
            const Eigen::VectorXd ev = sym_eigenvalues(A);
            int c = 0;
            for (Eigen::Index e = 0; e < ev.size(); ++e)
                if (ev[e] > gamma) ++c;
            per_mode[l] = c;
        }
        return per_mode;
    };

    const auto per_mode = counts_at(nodes_per_unit);
    const auto doubled = counts_at(2 * nodes_per_unit);
    if (per_mode != doubled)
        throw numerical_guard_error("s_r_count: counts not stable under resolution doubling");
    if (per_mode[lmax] > 0)
        throw numerical_guard_error("s_r_count: mode cutoff too small (last mode contributes)");

    WindowCount out;
    out.per_mode = per_mode;
    for (int l = 0; l <= lmax; ++l) out.total += (2 * l + 1) * per_mode[l];
    out.per_unit = out.total / (2.0 * r);
    return out;
}

BallGrid graded_ball_grid(int depth, double delta, int cells_per_octave) {
    if (depth < 1 || depth > 20) throw schema_error("graded_ball_grid: depth out of range");
    if (!(delta > 0.0)) throw schema_error("graded_ball_grid: delta must be positive");
    if (cells_per_octave < 1 || cells_per_octave > 8)
        throw schema_error("graded_ball_grid: cells_per_octave out of range");

    std::vector<double> bnds{0.0};
    for (int j = 0; j <= depth * cells_per_octave; ++j) {
        const double x = delta * std::pow(2.0, -static_cast<double>(j) / cells_per_octave);
        bnds.push_back(x);
        bnds.push_back(-x);
    }
    std::sort(bnds.begin(), bnds.end());
    std::vector<double> mids, ws;
    for (std::size_t i = 0; i + 1 < bnds.size(); ++i) {
        mids.push_back(0.5 * (bnds[i] + bnds[i + 1]));
        ws.push_back(bnds[i + 1] - bnds[i]);
    }

    BallGrid g;
    const std::size_t s = mids.size();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t m = 0; m < s; ++m) {
                const Eigen::Vector3d p(mids[i], mids[j], mids[m]);
                if (p.squaredNorm() < delta * delta) {
                    g.points.push_back(p);
                    g.weights.push_back(ws[i] * ws[j] * ws[m]);
                }
            }
    return g;
}

SingularPartResult singular_part_count(double gamma, double abs_z, const ModelParams& params,
                                       int depth, double delta, int cells_per_octave,
                                       CountMethod method, int top_k) {
    if (!(gamma > 0.0)) throw schema_error("singular_part_count: gamma must be positive");
    if (!(abs_z > 0.0)) throw schema_error("singular_part_count: |z| must be positive");

    // no singular part when v1 vanishes on the whole minimizer set
    const auto lambda = lambda_set(params.n);
    const double v_tol = 1e-9 * (1.0 + params.v1.max_abs_bound());
    bool any = false;
    for (const auto& q : lambda.points)
        if (std::abs(params.v1(q)) > v_tol) any = true;
    if (!any) return {};

    const BallGrid grid = graded_ball_grid(depth, delta, cells_per_octave);
    const std::size_t M = grid.points.size();
    if (M > 22000)
        throw dimension_guard_error("singular_part_count: ball grid too large for a dense kernel");
    if (method == CountMethod::DenseInertia && M > 15000)
        throw dimension_guard_error(
            "singular_part_count: grid too large for the factorization path (use Lanczos)");

    const double l1 = params.l1, l2 = params.l2, nn = params.n;
    const double a2 = 2.0 * abs_z / (nn * nn);
    const double m = (l1 * l1 + 2.0 * l1 * l2) / (l1 + l2);
    const double c = std::pow(l1 + l2, 1.5) / (2.0 * kPi * kPi);

    std::vector<double> r2(M), f(M);
    for (std::size_t i = 0; i < M; ++i) {
        r2[i] = grid.points[i].squaredNorm();
        f[i] = std::pow(m * r2[i] + a2, -0.25) * std::sqrt(grid.weights[i]);
    }

    Eigen::MatrixXd A(M, M);
    parallel_for(M, [&](std::size_t j) {
        const Eigen::Vector3d pj = grid.points[j];
        const double cj = c * f[j];
        const double bj = (l1 + l2) * r2[j] + a2;
        double* col = A.data() + j * M;
        for (std::size_t i = 0; i < M; ++i) {
            const double den = (l1 + l2) * r2[i] + 2.0 * l2 * grid.points[i].dot(pj) + bj;
            col[i] = cj * f[i] / den;
        }
    });

    SingularPartResult out;
    out.nodes = M;
    if (method == CountMethod::DenseInertia) {
        out.count = count_above(std::move(A), gamma);
    } else {
        const int k = std::min<int>(top_k, static_cast<int>(M) - 1);
        const LanczosResult lan = lanczos_top_eigenvalues(A, k);
        int cnt = 0;
        for (double v : lan.values)
            if (v > gamma) ++cnt;
        if (cnt == k)
            throw numerical_guard_error(
                "singular_part_count: every probed eigenvalue exceeds gamma (raise top_k)");
        out.count = cnt;
        out.top_eigenvalues.assign(lan.values.begin(),
                                   lan.values.begin() + std::min<std::size_t>(6, lan.values.size()));
    }
    return out;
}

SlopeFit efimov_slope_fit(const std::vector<double>& abs_z, const std::vector<int>& counts,
                          double u_reference) {
    if (abs_z.size() != counts.size())
        throw dimension_guard_error("efimov_slope_fit: length mismatch");
    if (abs_z.size() < 3)
        throw numerical_guard_error("efimov_slope_fit: need at least 3 spectral parameters");
    if (!(u_reference > 0.0)) throw schema_error("efimov_slope_fit: reference must be positive");

    std::vector<double> x, y;
    for (std::size_t i = 0; i < abs_z.size(); ++i) {
        if (!(abs_z[i] > 0.0)) throw schema_error("efimov_slope_fit: |z| must be positive");
        x.push_back(std::abs(std::log(abs_z[i])));
        y.push_back(static_cast<double>(counts[i]));
    }
    const double span = *std::max_element(x.begin(), x.end()) -
                        *std::min_element(x.begin(), x.end());
    if (span < 2.0 * std::log(10.0))
        throw numerical_guard_error("efimov_slope_fit: |z| span below two decades");

    const LineFit lf = fit_line(x, y);
    SlopeFit out;
    out.slope = lf.slope;
    out.intercept = lf.intercept;
    out.u_reference = u_reference;
    out.relative_gap = (lf.slope - u_reference) / u_reference;
    return out;
}

}  // namespace efimov
