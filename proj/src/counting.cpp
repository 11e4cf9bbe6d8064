#include "efimov/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "efimov/errors.hpp"
#include "efimov/friedrichs.hpp"
#include "efimov/linalg.hpp"
#include "efimov/parallel.hpp"

namespace efimov {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Per-flat-node trig tables: cos/sin of n*t_i per axis, eps(t_i), plus the
// K-rotated combinations cos/sin(n K_a - n t_{i,a}). Everything the pairwise
// w2 evaluation needs without calling libm in the inner loops.
struct NodeTables {
    std::array<std::vector<double>, 3> c, s;    // cos(n t_a), sin(n t_a)
    std::array<std::vector<double>, 3> P, Q;    // cos(n K_a - n t_a), sin(n K_a - n t_a)
    std::vector<double> eps;                    // eps(t_i)
    std::vector<double> weight;                 // W_i
};

NodeTables build_node_tables(const TorusPoint& K, const ModelParams& params,
                             const QuadratureGrid& grid) {
    const auto sizes = grid.axis_sizes();
    const std::size_t M = grid.size();
    const int n = params.n;

    std::array<std::vector<double>, 3> ac, as;
    for (std::size_t a = 0; a < 3; ++a) {
        ac[a].resize(sizes[a]);
        as[a].resize(sizes[a]);
        for (std::size_t i = 0; i < sizes[a]; ++i) {
            ac[a][i] = std::cos(n * grid.axis_nodes[a][i]);
            as[a][i] = std::sin(n * grid.axis_nodes[a][i]);
        }
    }
    std::array<double, 3> cK{}, sK{};
    for (std::size_t a = 0; a < 3; ++a) {
        cK[a] = std::cos(n * K[a]);
        sK[a] = std::sin(n * K[a]);
    }

    NodeTables t;
    t.eps.resize(M);
    t.weight = grid.weights;
    for (std::size_t a = 0; a < 3; ++a) {
        t.c[a].resize(M);
        t.s[a].resize(M);
        t.P[a].resize(M);
        t.Q[a].resize(M);
    }
    const std::size_t s2 = sizes[1], s3 = sizes[2];
    parallel_for(M, [&](std::size_t i) {
        const std::size_t i3 = i % s3;
        const std::size_t i2 = (i / s3) % s2;
        const std::size_t i1 = i / (s2 * s3);
        const std::array<std::size_t, 3> ia{i1, i2, i3};
        double e = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            const double ca = ac[a][ia[a]];
            const double sa = as[a][ia[a]];
            t.c[a][i] = ca;
            t.s[a][i] = sa;
            t.P[a][i] = cK[a] * ca + sK[a] * sa;  // cos(nK - nt)
            t.Q[a][i] = sK[a] * ca - cK[a] * sa;  // sin(nK - nt)
            e += 1.0 - ca;
        }
        t.eps[i] = e;
    });
    return t;
}

// w2(K; t_j, t_q) - z over all q for fixed j, written into `row`; returns the
// row minimum. eps(K - t_j - t_q) expands through the tables.
double w2_row_minus_z(const NodeTables& t, const ModelParams& params, double z,
                      std::size_t j, std::vector<double>& row) {
    const std::size_t M = t.eps.size();
    const double base = params.l1 * t.eps[j] - z + 3.0 * params.l2;
    const double l1 = params.l1, l2 = params.l2;
    std::array<double, 3> pj{}, qj{};
    for (std::size_t a = 0; a < 3; ++a) {
        pj[a] = t.P[a][j];
        qj[a] = t.Q[a][j];
    }
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < M; ++q) {
        // cos(n(K - t_j - t_q)) per axis = P_j * c_q + Q_j * s_q
        const double csum = pj[0] * t.c[0][q] + qj[0] * t.s[0][q] + pj[1] * t.c[1][q] +
                            qj[1] * t.s[1][q] + pj[2] * t.c[2][q] + qj[2] * t.s[2][q];
        const double val = base + l1 * t.eps[q] - l2 * csum;
        row[q] = val;
        mn = std::min(mn, val);
    }
    return mn;
}

double w1_of_node(const NodeTables& t, const ModelParams& params, std::size_t j) {
    // l1 eps(t_j) + l2 eps(K - t_j) + 1
    double epsK = 3.0 - (t.P[0][j] + t.P[1][j] + t.P[2][j]);
    return params.l1 * t.eps[j] + params.l2 * epsK + 1.0;
}

int inertia_count(Eigen::MatrixXd A, bool above) {
    const Inertia in = ldlt_inertia(std::move(A));
    if (in.near_singular) return -1;
    return above ? in.positive : in.negative;
}

}  // namespace

int count_above(Eigen::MatrixXd A, double gamma) {
    Eigen::MatrixXd B = A;
    B.diagonal().array() -= gamma;
    int c = inertia_count(std::move(B), true);
    if (c >= 0) return c;
    A.diagonal().array() -= gamma + 1e-9;  // tie: nudge the threshold off the eigenvalue
    c = inertia_count(std::move(A), true);
    if (c < 0) throw numerical_guard_error("count_above: threshold ties an eigenvalue twice");
    return c;
}

int count_below(Eigen::MatrixXd A, double z) {
    Eigen::MatrixXd B = A;
    B.diagonal().array() -= z;
    int c = inertia_count(std::move(B), false);
    if (c >= 0) return c;
    A.diagonal().array() -= z - 1e-9;
    c = inertia_count(std::move(A), false);
    if (c < 0) throw numerical_guard_error("count_below: threshold ties an eigenvalue twice");
    return c;
}

BlockOperatorAssembly assemble_bs_operator(const TorusPoint& K, double z,
                                           const ModelParams& params,
                                           const QuadratureGrid& grid) {
    const std::size_t M = grid.size();
    if (M + 1 > 26000)
        throw dimension_guard_error("assemble_bs_operator: dense block operator too large");

    const NodeTables t = build_node_tables(K, params, grid);
    std::vector<double> v1(M), v1sq(M);
    parallel_for(M, [&](std::size_t i) {
        v1[i] = params.v1(grid.nodes[i]);
        v1sq[i] = v1[i] * v1[i];
    });

    // Delta_j = w1(K;t_j) - z - (1/2) sum_q W_q v1^2(t_q) / (w2(K;t_j,t_q) - z)
    BlockOperatorAssembly out;
    out.delta.assign(M, 0.0);
    std::vector<double> row_min(M, 0.0);
    parallel_for(M, [&](std::size_t j) {
        std::vector<double> row(M);
        row_min[j] = w2_row_minus_z(t, params, z, j, row);
        double sum = 0.0, comp = 0.0;
        for (std::size_t q = 0; q < M; ++q) {
            const double term = t.weight[q] * v1sq[q] / row[q];
            const double s = sum + term;
            if (std::abs(sum) >= std::abs(term))
                comp += (sum - s) + term;
            else
                comp += (term - s) + sum;
            sum = s;
        }
        out.delta[j] = w1_of_node(t, params, j) - z - 0.5 * (sum + comp);
    });

    out.min_w2_minus_z = *std::min_element(row_min.begin(), row_min.end());
    if (out.min_w2_minus_z <= 0.0)
        throw numerical_guard_error(
            "assemble_bs_operator: z not below the two-particle levels (w2 - z <= 0)");
    out.min_delta = *std::min_element(out.delta.begin(), out.delta.end());
    if (out.min_delta <= 0.0)
        throw numerical_guard_error(
            "assemble_bs_operator: z not below the branch bottom (Delta_j <= 0)");

    std::vector<double> g(M);
    for (std::size_t i = 0; i < M; ++i)
        g[i] = v1[i] * std::sqrt(t.weight[i] / (2.0 * out.delta[i]));

    const std::size_t dim = M + 1;
    out.T.resize(dim, dim);
    out.T(0, 0) = 1.0 + z - params.w0(K);
    {
        std::vector<double> border(M);
        parallel_for(M, [&](std::size_t j) {
            border[j] = -params.v0(grid.nodes[j]) * std::sqrt(t.weight[j] / out.delta[j]);
        });
        for (std::size_t j = 0; j < M; ++j) {
            out.T(0, 1 + j) = border[j];
            out.T(1 + j, 0) = border[j];
        }
    }
    // column-parallel fill (column-major storage)
    parallel_for(M, [&](std::size_t j) {
        std::array<double, 3> pj{}, qj{};
        for (std::size_t a = 0; a < 3; ++a) {
            pj[a] = t.P[a][j];
            qj[a] = t.Q[a][j];
        }
        const double base = params.l1 * t.eps[j] - z + 3.0 * params.l2;
        const double gj = g[j];
        double* col = out.T.data() + (1 + j) * dim + 1;
        for (std::size_t i = 0; i < M; ++i) {
            const double csum = pj[0] * t.c[0][i] + qj[0] * t.s[0][i] + pj[1] * t.c[1][i] +
                                qj[1] * t.s[1][i] + pj[2] * t.c[2][i] + qj[2] * t.s[2][i];
            const double w2mz = base + params.l1 * t.eps[i] - params.l2 * csum;
            col[i] = g[i] * gj / w2mz;
        }
    });
    return out;
}

int bs_count(const TorusPoint& K, double z, const ModelParams& params,
             const QuadratureGrid& grid) {
    BlockOperatorAssembly assembly = assemble_bs_operator(K, z, params, grid);
    return count_above(std::move(assembly.T), 1.0);
}

double finite_branch_bottom(const TorusPoint& K, const ModelParams& params,
                            const QuadratureGrid& grid) {
    const std::size_t M = grid.size();
    const NodeTables t = build_node_tables(K, params, grid);
    std::vector<double> v1sq(M);
    parallel_for(M, [&](std::size_t i) {
        const double v = params.v1(grid.nodes[i]);
        v1sq[i] = v * v;
    });

    std::vector<double> bottom(M, 0.0);
    parallel_for(M, [&](std::size_t j) {
        std::vector<double> row(M);
        const double m_j = w2_row_minus_z(t, params, 0.0, j, row);  // min_q w2(K;t_j,t_q)
        const double w1j = w1_of_node(t, params, j);
        const auto phi = [&](double lam) {
            double sum = 0.0;
            for (std::size_t q = 0; q < M; ++q) sum += t.weight[q] * v1sq[q] / (row[q] - lam);
            return w1j - lam - 0.5 * sum;
        };
        const double eta = 1e-9 * (1.0 + params.l1 + params.l2);
        if (phi(m_j - eta) >= 0.0) {
            bottom[j] = m_j;
            return;
        }
        double lo = m_j - 20.0 * (params.l1 + params.l2) - 1.0;
        if (phi(lo) < 0.0)
            throw numerical_guard_error("finite_branch_bottom: bracket failure below w2 levels");
        double hi = m_j - eta;
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (phi(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        bottom[j] = 0.5 * (lo + hi);
    });
    return *std::min_element(bottom.begin(), bottom.end());
}

DirectOperator assemble_direct_H(const TorusPoint& K, const ModelParams& params,
                                 const QuadratureGrid& grid) {
    const std::size_t M = grid.size();
    const std::size_t pairs = M * (M + 1) / 2;
    const std::size_t dim = 1 + M + pairs;
    if (dim > 25000)
        throw dimension_guard_error("assemble_direct_H: direct operator dimension exceeds 25000");

    const NodeTables t = build_node_tables(K, params, grid);
    std::vector<double> v1(M), v0(M);
    for (std::size_t i = 0; i < M; ++i) {
        v1[i] = params.v1(grid.nodes[i]);
        v0[i] = params.v0(grid.nodes[i]);
    }

    DirectOperator out;
    out.one_particle = M;
    out.two_particle = pairs;
    out.H = Eigen::MatrixXd::Zero(dim, dim);

    out.H(0, 0) = params.w0(K);
    for (std::size_t j = 0; j < M; ++j) {
        const double b = v0[j] * std::sqrt(t.weight[j]);
        out.H(0, 1 + j) = b;
        out.H(1 + j, 0) = b;
        out.H(1 + j, 1 + j) = w1_of_node(t, params, j);
    }

    // symmetrized pair sector: (a, b) with a <= b, packed row-wise
    const auto pair_index = [M](std::size_t a, std::size_t b) {
        return a * M - a * (a - 1) / 2 + (b - a);
    };
    std::vector<double> w2row(M);
    for (std::size_t a = 0; a < M; ++a) {
        w2_row_minus_z(t, params, 0.0, a, w2row);
        for (std::size_t b = a; b < M; ++b) {
            const std::size_t p = 1 + M + pair_index(a, b);
            out.H(p, p) = w2row[b];
            if (a == b) {
                const double c = v1[a] * std::sqrt(t.weight[a]);
                out.H(1 + a, p) = c;
                out.H(p, 1 + a) = c;
            } else {
                const double ca = v1[b] * std::sqrt(t.weight[b] / 2.0);
                const double cb = v1[a] * std::sqrt(t.weight[a] / 2.0);
                out.H(1 + a, p) = ca;
                out.H(p, 1 + a) = ca;
                out.H(1 + b, p) = cb;
                out.H(p, 1 + b) = cb;
            }
        }
    }
    return out;
}

int oracle_negative_count(const TorusPoint& K, double z, const ModelParams& params,
                          const QuadratureGrid& grid) {
    DirectOperator d = assemble_direct_H(K, params, grid);
    return count_below(std::move(d.H), z);
}

namespace {

// Extremum over s of l1 (2 -/+ 2|cos(n s / 2)|) + l2 (1 - cos(n (Ka - s))):
// the inner extremum of l1(eps(a) + eps(b)) over a + b = s sits at a = s/2
// modulo pi/n, which collapses to the |cos| form. 1-d scan plus golden polish.
double axis_band_extreme(double l1, double l2, int n, double Ka, bool want_max) {
    const auto f = [&](double s) {
        const double inner = 2.0 * std::abs(std::cos(0.5 * n * s));
        const double two_body = want_max ? l1 * (2.0 + inner) : l1 * (2.0 - inner);
        return two_body + l2 * (1.0 - std::cos(n * (Ka - s)));
    };
    const int R = 4096;
    double best_s = 0.0;
    double best = want_max ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (int i = 0; i < R; ++i) {
        const double s = -kPi + (i + 0.5) * 2.0 * kPi / R;
        const double v = f(s);
        if (want_max ? v > best : v < best) {
            best = v;
            best_s = s;
        }
    }
    // golden-section polish in the bracketing cell pair
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_s - 2.0 * kPi / R, hi = best_s + 2.0 * kPi / R;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const bool keep_left = want_max ? (f1 > f2) : (f1 < f2);
        if (keep_left) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    const double polished = f(0.5 * (lo + hi));
    return want_max ? std::max(best, polished) : std::min(best, polished);
}

}  // namespace

EssentialSpectrumH essential_spectrum_H(const TorusPoint& K, const ModelParams& params,
                                        const QuadratureGrid& grid, int p_resolution) {
    if (p_resolution < 1 || p_resolution > 16)
        throw schema_error("essential_spectrum_H: p_resolution must lie in 1..16");

    EssentialSpectrumH out;
    double m_K = 0.0, M_K = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        m_K += axis_band_extreme(params.l1, params.l2, params.n, K[a], false);
        M_K += axis_band_extreme(params.l1, params.l2, params.n, K[a], true);
    }
    out.band_min = m_K;
    out.band_max = M_K;

    const int R = p_resolution;
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j)
            for (int m = 0; m < R; ++m) {
                const TorusPoint p(-kPi + (i + 0.5) * 2.0 * kPi / R,
                                   -kPi + (j + 0.5) * 2.0 * kPi / R,
                                   -kPi + (m + 0.5) * 2.0 * kPi / R);
                const double shift = params.l1 * epsilon(p, params.n);
                for (const auto& ev : discrete_spectrum_h(K - p, params, grid)) {
                    out.branches.push_back({p, ev.z, ev.z + shift, ev.side});
                    if (ev.side == SpectralSide::Below)
                        out.branch_samples_below.push_back(ev.z + shift);
                    else
                        out.branch_samples_above.push_back(ev.z + shift);
                }
            }
    std::sort(out.branch_samples_below.begin(), out.branch_samples_below.end());
    std::sort(out.branch_samples_above.begin(), out.branch_samples_above.end());

    std::vector<std::pair<double, double>> raw;
    if (!out.branch_samples_below.empty())
        raw.emplace_back(out.branch_samples_below.front(), out.branch_samples_below.back());
    raw.emplace_back(m_K, M_K);
    if (!out.branch_samples_above.empty())
        raw.emplace_back(out.branch_samples_above.front(), out.branch_samples_above.back());
    std::sort(raw.begin(), raw.end());
    for (const auto& iv : raw) {
        if (!out.intervals.empty() && iv.first <= out.intervals.back().second + 1e-12)
            out.intervals.back().second = std::max(out.intervals.back().second, iv.second);
        else
            out.intervals.push_back(iv);
    }
    return out;
}

WeylCounts weyl_inequality_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 double g1, double g2) {
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw dimension_guard_error("weyl_inequality_check: shape mismatch");
    const auto strict_above = [](const Eigen::VectorXd& ev, double g) {
        int c = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev[i] > g) ++c;
        return c;
    };
    WeylCounts w;
    w.sum_count = strict_above(sym_eigenvalues(A + B), g1 + g2);
    w.a_count = strict_above(sym_eigenvalues(A), g1);
    w.b_count = strict_above(sym_eigenvalues(B), g2);
    w.holds = w.sum_count <= w.a_count + w.b_count;
    return w;
}

}  // namespace efimov
