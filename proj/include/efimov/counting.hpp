#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "efimov/friedrichs.hpp"
#include "efimov/model.hpp"
#include "efimov/quadrature.hpp"
#include "efimov/torus.hpp"

namespace efimov {

// ---- eigenvalue counting for dense symmetric matrices ----

// Number of eigenvalues strictly above gamma, via LDL^T inertia. When the
// factorization reports a block within the tie tolerance of singular the
// count is re-run at gamma + 1e-9 (counts are requested at thresholds that
// are not eigenvalues; the nudge resolves the ambiguity deterministically).
int count_above(Eigen::MatrixXd A, double gamma);

// Number of eigenvalues strictly below z (same retry policy, nudging down).
int count_below(Eigen::MatrixXd A, double z);

// ---- Birman-Schwinger block operator ----

// The compact block operator T(K,z) whose eigenvalues above 1 are in
// bijection with the eigenvalues of H(K) below z:
//   [0,0]     1 + z - w0(K)
//   [0,1+j]   -v0(t_j) sqrt(W_j / Delta_j)
//   [1+i,1+j] g_i g_j / (w2(K; t_i, t_j) - z),  g_i = v1(t_i) sqrt(W_i / (2 Delta_i))
// with Delta_j = Delta(K - t_j; z - l1 eps(t_j)) evaluated on the same grid.
// Valid (and guarded) only when every Delta_j > 0 and every w2 - z > 0.
struct BlockOperatorAssembly {
    Eigen::MatrixXd T;          // (1 + M) x (1 + M)
    std::vector<double> delta;  // Delta_j per node
    double min_delta = 0.0;
    double min_w2_minus_z = 0.0;
};

BlockOperatorAssembly assemble_bs_operator(const TorusPoint& K, double z,
                                           const ModelParams& params,
                                           const QuadratureGrid& grid);

// N(K, z) = n(1, T(K,z)): the counting function itself.
int bs_count(const TorusPoint& K, double z, const ModelParams& params,
             const QuadratureGrid& grid);

// Largest admissible spectral parameter for the reduction on this grid:
// min over j of (bottom of the bordered one-particle block at K - t_j,
// shifted by l1 eps(t_j)), capped by the smallest two-particle level
// min_{i,j} w2. Delta_j(z) > 0 for all j iff z is strictly below this.
double finite_branch_bottom(const TorusPoint& K, const ModelParams& params,
                            const QuadratureGrid& grid);

// ---- direct finite-lattice operator (oracle) ----

// H(K) discretized on the same quadrature nodes: one zero-sector state, M
// one-particle states, M(M+1)/2 symmetrized two-particle states. Dimension
// is guarded (<= 25000); this is the brute-force cross-check, not the
// production path.
struct DirectOperator {
    Eigen::MatrixXd H;
    std::size_t one_particle = 0;   // M
    std::size_t two_particle = 0;   // M (M + 1) / 2
};

DirectOperator assemble_direct_H(const TorusPoint& K, const ModelParams& params,
                                 const QuadratureGrid& grid);

// Number of eigenvalues of the direct operator strictly below z.
int oracle_negative_count(const TorusPoint& K, double z, const ModelParams& params,
                          const QuadratureGrid& grid);

// ---- essential spectrum of H(K) ----

// Two-particle branches { discrete level of h(K - p) + l1 eps(p) : p } sampled
// over a uniform p-grid, plus the three-particle band [m_K, M_K] computed by
// the exact per-axis reduction of w2 (inner extremum over p + q = s is
// attained at a = s/2 modulo pi/n, collapsing each axis to a 1-d problem).
struct BranchSample {
    TorusPoint p;
    double z = 0.0;        // discrete level of h(K - p)
    double shifted = 0.0;  // z + l1 eps(p), the branch energy
    SpectralSide side = SpectralSide::Below;
};

struct EssentialSpectrumH {
    std::vector<std::pair<double, double>> intervals;  // merged hull
    double band_min = 0.0;  // m_K
    double band_max = 0.0;  // M_K
    std::vector<BranchSample> branches;
    std::vector<double> branch_samples_below;  // sorted sampled branch energies
    std::vector<double> branch_samples_above;
};

EssentialSpectrumH essential_spectrum_H(const TorusPoint& K, const ModelParams& params,
                                        const QuadratureGrid& grid, int p_resolution);

// n(g1 + g2, A + B) <= n(g1, A) + n(g2, B) for symmetric A, B (the count
// subadditivity both reductions lean on). Returns the three counts.
struct WeylCounts {
    int sum_count = 0;   // n(g1 + g2, A + B)
    int a_count = 0;     // n(g1, A)
    int b_count = 0;     // n(g2, B)
    bool holds = false;
};
WeylCounts weyl_inequality_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 double g1, double g2);

}  // namespace efimov
