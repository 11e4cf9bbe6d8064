#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "efimov/torus.hpp"

namespace efimov {

// Compensated (Neumaier) summation in fixed index order. All quadrature
// reductions go through this so results do not depend on the thread count.
double neumaier_sum(const std::vector<double>& x);

// A dyadically graded refinement patch: the cube [c - delta, c + delta]^3
// (per-axis, circle-periodic) is partitioned into subcells whose per-axis
// widths halve toward the center; `levels` octaves deep, cells_per_octave
// subdivisions per octave (grid-level setting).
struct RefinePatch {
    TorusPoint center;
    double delta = 0.0;
    int levels = 0;
};

// Midpoint tensor grid over the 3-torus with optional graded refinement.
// Nodes are cell midpoints; weights are cell volumes. The flat node index is
// i = (i1 * s2 + i2) * s3 + i3 over the per-axis grids.
//
// Construction constraints (throw schema_error when violated):
//  - base resolution N >= 2;
//  - patch centers must form a per-axis tensor-product set with a common
//    delta and level count (the minimizer set Lambda(n) always does), and
//    distinct per-axis centers must be >= 2*delta apart (disjoint patches);
//  - when shift is set, every node must be at per-axis distance >= 0.499 of
//    its local cell width from every Lambda(lambda_n) coordinate. With the
//    half-cell offset this holds automatically when N is commensurate with
//    lambda_n or when all Lambda points carry a refinement patch; otherwise
//    construction is rejected rather than silently violating the invariant.
struct QuadratureGrid {
    int base_resolution = 0;
    bool shift = false;
    std::vector<RefinePatch> refinement;
    int cells_per_octave = 2;
    int lambda_n = 1;  // which Lambda(n) the node-avoidance invariant refers to

    std::array<std::vector<double>, 3> axis_nodes;
    std::array<std::vector<double>, 3> axis_weights;
    std::vector<TorusPoint> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    std::array<std::size_t, 3> axis_sizes() const {
        return {axis_nodes[0].size(), axis_nodes[1].size(), axis_nodes[2].size()};
    }

    // Stable identifier used in output provenance.
    std::string id() const;
};

QuadratureGrid build_grid(int N, bool shift, const std::vector<RefinePatch>& refine,
                          int lambda_n, int cells_per_octave = 2);

// Grid with one patch (depth `levels`, half-width delta; default pi/(4 n))
// around every point of Lambda(n). levels == 0 means no refinement.
QuadratureGrid lambda_refined_grid(int N, bool shift, int levels, double delta, int n,
                                   int cells_per_octave = 2);

// Quadrature sum over the grid with compensated accumulation; node
// evaluations run in parallel, the reduction order is fixed.
double integrate(const QuadratureGrid& grid,
                 const std::function<double(const TorusPoint&)>& f);

}  // namespace efimov
