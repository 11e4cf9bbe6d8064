#include "efimov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "efimov/errors.hpp"
#include "efimov/parallel.hpp"

namespace efimov {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

struct AxisGrid {
    std::vector<double> nodes;
    std::vector<double> widths;
};

// Composite midpoint grid on the circle from a boundary set: base equispaced
// boundaries plus dyadic patch boundaries. Cells are the arcs between
// consecutive boundaries (cyclically); nodes are arc midpoints.
AxisGrid build_axis(int N, bool shift, const std::vector<double>& patch_centers, double delta,
                    int levels, int cpo) {
    const double h = kTwoPi / static_cast<double>(N);
    // shift on: boundaries on the lattice, nodes at half-cell offsets
    // shift off: boundaries offset by h/2, nodes on the lattice
    const double off = shift ? 0.0 : 0.5 * h;
    std::vector<double> bnds;
    bnds.reserve(static_cast<std::size_t>(N) + patch_centers.size() * (2u * static_cast<std::size_t>(levels * cpo + 1) + 1u));
    for (int j = 0; j < N; ++j) bnds.push_back(reduce_angle(-kPi + off + j * h));
    for (double c : patch_centers) {
        bnds.push_back(reduce_angle(c));
        for (int j = 0; j <= levels * cpo; ++j) {
            const double r = delta * std::pow(2.0, -static_cast<double>(j) / cpo);
            bnds.push_back(reduce_angle(c + r));
            bnds.push_back(reduce_angle(c - r));
        }
    }
    std::sort(bnds.begin(), bnds.end());
    // merge coincident boundaries
    std::vector<double> uniq;
    uniq.reserve(bnds.size());
    for (double b : bnds) {
        if (uniq.empty() || b - uniq.back() > 1e-12) uniq.push_back(b);
    }
    // wraparound duplicate: first and last may be the same boundary mod 2pi
    if (uniq.size() >= 2 && (uniq.front() + kTwoPi) - uniq.back() <= 1e-12) uniq.pop_back();
    if (uniq.size() < 2) throw schema_error("axis grid degenerate: fewer than 2 boundaries");

    AxisGrid g;
    const std::size_t m = uniq.size();
    g.nodes.reserve(m);
    g.widths.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = uniq[i];
        const double hi = (i + 1 < m) ? uniq[i + 1] : uniq[0] + kTwoPi;
        g.nodes.push_back(reduce_angle(0.5 * (lo + hi)));
        g.widths.push_back(hi - lo);
    }
    return g;
}

void check_lambda_clearance(const AxisGrid& g, int lambda_n) {
    // every node must keep >= 0.499 of its own cell width away from every
    // per-axis Lambda coordinate
    const double step = kTwoPi / static_cast<double>(lambda_n);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double d = std::abs(std::remainder(g.nodes[i], step));
        if (d < 0.499 * g.widths[i]) {
            throw schema_error(
                "shifted grid places a node too close to a minimizer coordinate; "
                "choose N commensurate with n or refine around the minimizer set");
        }
    }
}

}  // namespace

double neumaier_sum(const std::vector<double>& x) {
    double s = 0.0, comp = 0.0;
    for (double v : x) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            comp += (s - t) + v;
        else
            comp += (v - t) + s;
        s = t;
    }
    return s + comp;
}

std::string QuadratureGrid::id() const {
    char buf[128];
    const int levels = refinement.empty() ? 0 : refinement.front().levels;
    const double delta = refinement.empty() ? 0.0 : refinement.front().delta;
    std::snprintf(buf, sizeof buf, "N%d%s-d%d-c%d-r%.6g-n%d-P%zu", base_resolution,
                  shift ? "s" : "u", levels, cells_per_octave, delta, lambda_n,
                  refinement.size());
    return buf;
}

QuadratureGrid build_grid(int N, bool shift, const std::vector<RefinePatch>& refine,
                          int lambda_n, int cells_per_octave) {
    if (N < 2) throw schema_error("grid base resolution must be >= 2");
    if (lambda_n < 1) throw schema_error("grid lambda_n must be >= 1");
    if (cells_per_octave < 1) throw schema_error("cells_per_octave must be >= 1");

    double delta = 0.0;
    int levels = 0;
    std::array<std::vector<double>, 3> centers;
    if (!refine.empty()) {
        delta = refine.front().delta;
        levels = refine.front().levels;
        for (const auto& p : refine) {
            if (!(p.delta > 0.0) || p.levels < 1)
                throw schema_error("refinement patch needs delta > 0 and levels >= 1");
            if (std::abs(p.delta - delta) > 1e-12 || p.levels != levels)
                throw schema_error("refinement patches must share delta and levels");
        }
        if (delta >= kPi) throw schema_error("refinement delta must be < pi");
        // collect distinct per-axis center coordinates
        for (int a = 0; a < 3; ++a) {
            std::vector<double>& cs = centers[static_cast<std::size_t>(a)];
            for (const auto& p : refine) {
                const double c = p.center[static_cast<std::size_t>(a)];
                bool found = false;
                for (double e : cs)
                    if (circle_distance(e, c) <= 1e-9) { found = true; break; }
                if (!found) cs.push_back(c);
            }
            std::sort(cs.begin(), cs.end());
            for (std::size_t i = 0; i < cs.size(); ++i) {
                const double next = (i + 1 < cs.size()) ? cs[i + 1] : cs[0] + kTwoPi;
                if (next - cs[i] < 2.0 * delta - 1e-12)
                    throw schema_error("refinement patches overlap; reduce delta");
            }
        }
        const std::size_t tensor =
            centers[0].size() * centers[1].size() * centers[2].size();
        if (tensor != refine.size())
            throw schema_error(
                "refinement patch centers must form a per-axis tensor-product set");
    }

    QuadratureGrid g;
    g.base_resolution = N;
    g.shift = shift;
    g.refinement = refine;
    g.cells_per_octave = cells_per_octave;
    g.lambda_n = lambda_n;

    std::array<AxisGrid, 3> ag;
    for (int a = 0; a < 3; ++a) {
        ag[static_cast<std::size_t>(a)] = build_axis(
            N, shift, centers[static_cast<std::size_t>(a)], delta, levels, cells_per_octave);
        if (shift) check_lambda_clearance(ag[static_cast<std::size_t>(a)], lambda_n);
        g.axis_nodes[static_cast<std::size_t>(a)] = ag[static_cast<std::size_t>(a)].nodes;
        g.axis_weights[static_cast<std::size_t>(a)] = ag[static_cast<std::size_t>(a)].widths;
        // per-axis total must be 2*pi
        const double total = neumaier_sum(ag[static_cast<std::size_t>(a)].widths);
        if (std::abs(total - kTwoPi) > 1e-12 * kTwoPi)
            throw numerical_guard_error("axis weights do not sum to 2*pi");
    }

    const std::size_t s1 = ag[0].nodes.size(), s2 = ag[1].nodes.size(), s3 = ag[2].nodes.size();
    g.nodes.resize(s1 * s2 * s3);
    g.weights.resize(s1 * s2 * s3);
    for (std::size_t i1 = 0; i1 < s1; ++i1) {
        for (std::size_t i2 = 0; i2 < s2; ++i2) {
            const std::size_t rowbase = (i1 * s2 + i2) * s3;
            const double w12 = ag[0].widths[i1] * ag[1].widths[i2];
            for (std::size_t i3 = 0; i3 < s3; ++i3) {
                TorusPoint& p = g.nodes[rowbase + i3];
                p.c1 = ag[0].nodes[i1];
                p.c2 = ag[1].nodes[i2];
                p.c3 = ag[2].nodes[i3];
                g.weights[rowbase + i3] = w12 * ag[2].widths[i3];
            }
        }
    }
    return g;
}

QuadratureGrid lambda_refined_grid(int N, bool shift, int levels, double delta, int n,
                                   int cells_per_octave) {
    std::vector<RefinePatch> patches;
    if (levels > 0) {
        if (!(delta > 0.0)) delta = kPi / (4.0 * n);
        const auto lam = lambda_set(n);
        patches.reserve(lam.points.size());
        for (const auto& p : lam.points) patches.push_back({p, delta, levels});
    }
    return build_grid(N, shift, patches, n, cells_per_octave);
}

double integrate(const QuadratureGrid& grid,
                 const std::function<double(const TorusPoint&)>& f) {
    std::vector<double> terms(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        terms[i] = grid.weights[i] * f(grid.nodes[i]);
    });
    return neumaier_sum(terms);
}

}  // namespace efimov
