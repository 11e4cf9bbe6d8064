#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "efimov/model.hpp"

namespace efimov {

// The eigenvalue-accumulation asymptotics near the threshold are governed by
// a dilation-invariant integral operator; everything in this module works
// with its symbol and truncations. Conventions (b = l2/(l1+l2)):
//   spatial kernel   S(y, t)     = (l1+l2) / (4 pi^2 sqrt(l1^2+2 l1 l2)) / (cosh y + b t)
//   Fourier symbol   S^(th, t)   = (l1+l2) / (2 pi sqrt(l1^2+2 l1 l2))
//                                  * sinh(th * arccos(b t)) / (sinh(pi th) sqrt(1 - b^2 t^2))
//   angular modes    lam_l(th)   = 2 pi Int_{-1}^{1} S^(th, t) P_l(t) dt   (multiplicity 2l+1)
//   counting density U(gamma)    = (1/2pi) Int_0^inf sum_l (2l+1) [lam_l(th) > gamma] dth

double s_kernel(double y, double t, const ModelParams& params);
double s_hat(double theta, double t, const ModelParams& params);  // theta = 0: pointwise limit

// lam_0 in closed form (arccos substitution): independent oracle for the
// Gauss-Legendre route.
double lambda0_closed_form(double theta, const ModelParams& params);

// lam_l(theta) for l = 0..lmax in one pass (Gauss-Legendre, `nodes` points;
// a doubled-node check must agree to 1e-10 or a numerical_guard_error is
// thrown).
std::vector<double> lambda_spectrum(double theta, const ModelParams& params, int lmax,
                                    int nodes = 0);

// ---- U(gamma) ----

struct UCoefficient {
    double value = 0.0;
    // per mode l: measure of {theta : lam_l(theta) > gamma} and the bisected
    // crossing points (the active-mode count is a step function of theta;
    // U itself is continuous in gamma).
    std::vector<double> mode_measure;
    std::vector<std::vector<double>> crossings;
};

// Requires gamma > 0, lam_lmax(0) < gamma (otherwise lmax is insufficient and
// the truncation would drop active modes) and lam_0(theta_max) < gamma.
UCoefficient u_coefficient(double gamma, const ModelParams& params, int lmax = 12,
                           double theta_max = 50.0);

// Independent oracle: Nystrom discretization of the kernel S^(theta, <w,w'>)
// on the 2-sphere (product Gauss grid), counting eigenvalues above gamma.
// Equals sum_l (2l+1)[lam_l(theta) > gamma] for exact arithmetic.
int sphere_nystrom_count(double gamma, double theta, const ModelParams& params,
                         int polar_nodes = 24);

// ---- finite-window truncation S_r ----

// S_r acts on L^2(0, r) x L^2(S^2); per angular mode l the radial kernel is
// k_l(x - x') = 2 pi Int S(x - x', t) P_l(t) dt, discretized on the uniform
// midpoint grid x_i = (i + 1/2)/nodes_per_unit. n(gamma, S_r) ~ 2 r U(gamma)
// as r grows. A doubled-resolution recount must agree (else guard error).
struct WindowCount {
    int total = 0;
    std::vector<int> per_mode;      // count for each l (before multiplicity)
    double per_unit = 0.0;          // total / (2r), the quantity converging to U
};
WindowCount s_r_count(double gamma, double r, const ModelParams& params, int lmax = 12,
                      int nodes_per_unit = 8);

// ---- singular part of the block operator at small |z| ----

// Nystrom count for the exactly-solvable singular part: kernel
//   c * f(p) f(p') / ( (l1+l2)(|p|^2 + |p'|^2) + 2 l2 <p, p'> + a^2 ),
//   f(p) = (m |p|^2 + a^2)^{-1/4},  m = (l1^2 + 2 l1 l2)/(l1+l2),
//   a^2  = 2 |z| / n^2,             c = (l1+l2)^{3/2} / (2 pi^2),
// on a dyadically graded ball grid of half-width delta around the origin.
// Across the minimizer set the blocks couple through a rank-one matrix, so
// the count equals the single-block count with the full constant; it is 0
// when v1 vanishes on the minimizer set (no singular part).
enum class CountMethod { DenseInertia, LanczosTopK };

struct SingularPartResult {
    int count = 0;
    std::size_t nodes = 0;
    std::vector<double> top_eigenvalues;
};

SingularPartResult singular_part_count(double gamma, double abs_z, const ModelParams& params,
                                       int depth, double delta, int cells_per_octave = 1,
                                       CountMethod method = CountMethod::DenseInertia,
                                       int top_k = 16);

// Graded ball grid used above (exposed for tests): per-axis boundaries
// {0, +-delta 2^{-j/cpo}}, tensor product, restricted to |x| < delta.
struct BallGrid {
    std::vector<Eigen::Vector3d> points;
    std::vector<double> weights;
};
BallGrid graded_ball_grid(int depth, double delta, int cells_per_octave = 1);

// ---- slope extraction ----

// Least-squares slope of counts against |log z|; the asymptotics predict
// slope -> U(gamma). Requires >= 3 points spanning at least 2 decades.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double u_reference = 0.0;
    double relative_gap = 0.0;
};
SlopeFit efimov_slope_fit(const std::vector<double>& abs_z, const std::vector<int>& counts,
                          double u_reference);

}  // namespace efimov
