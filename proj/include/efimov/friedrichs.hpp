#pragma once

#include <vector>

#include "efimov/model.hpp"
#include "efimov/quadrature.hpp"
#include "efimov/torus.hpp"

namespace efimov {

// ---- essential band of the one-particle family h(k) ----

struct EssentialBand {
    TorusPoint k;
    double Emin = 0.0;
    double Emax = 0.0;
    TorusPoint argmin;
    TorusPoint argmax;
};

// Global min/max of E_k over the torus: coarse scan (16 n per axis), then
// descent/ascent with the closed-form gradient from the three best basins,
// finished by Newton polish with the closed-form Hessian.
EssentialBand essential_band(const TorusPoint& k, const ModelParams& params);

// ---- Fredholm determinant ----

// Delta(k; z) = l2 e(k) + 1 - z - (1/2) Int v1^2(t) / (E_k(t) - z) dt on the
// given grid (plain same-grid quadrature; this is the primitive every
// counting identity relies on). Throws numerical_guard_error when z lies in
// the open essential band (non-integrable) or a quadrature denominator
// degenerates.
double fredholm_delta(const TorusPoint& k, double z, const ModelParams& params,
                      const QuadratureGrid& grid);

// Equivalent form Delta(K - p; z - l1 e(p)) written through w1/w2 so that the
// singular set of the integrand stays on the minimizer set:
//   w1(K;p) - z - (1/2) Int v1^2(t) / (w2(K;p,t) - z) dt.
// This is the expression assembled into the counting kernel (same grid).
double delta_via_w2(const TorusPoint& K, const TorusPoint& p, double z,
                    const ModelParams& params, const QuadratureGrid& grid);

// Two-depth refinement protocol: value on the grid, value on the once-
// coarsened sibling, first-order Richardson extrapolation and the
// disagreement as error estimate. Throws numerical_guard_error when the two
// depths disagree by more than rtol (grid too coarse).
struct DeltaRefined {
    double value = 0.0;         // same-grid value (depth L)
    double coarser = 0.0;       // depth L-1 value
    double extrapolated = 0.0;  // 2 v_L - v_{L-1}
    double error_estimate = 0.0;
};
DeltaRefined fredholm_delta_refined(const TorusPoint& k, double z, const ModelParams& params,
                                    const QuadratureGrid& grid, double rtol = 0.05);

// ---- discrete spectrum of h(k) ----

enum class SpectralSide { Below, Above };

struct DiscreteEigenvalue {
    double z = 0.0;
    SpectralSide side = SpectralSide::Below;
};

// Roots of Delta(k; .) outside [Emin, Emax] by bracketing + bisection to
// absolute tolerance 1e-12. At most one root per side (Delta is strictly
// decreasing in z). Signals bracket failure when Delta has no sign change on
// [Emin - 20(l1+l2), Emin).
std::vector<DiscreteEigenvalue> discrete_spectrum_h(const TorusPoint& k,
                                                    const ModelParams& params,
                                                    const QuadratureGrid& grid);

// ---- threshold classification ----

enum class ThresholdKind { ZeroResonance, ZeroEigenvalue, RegularPoint };

struct ThresholdClass {
    ThresholdKind kind = ThresholdKind::RegularPoint;
    double delta00 = 0.0;        // Delta(0;0) on the grid
    double delta00_error = 0.0;  // two-depth disagreement
    double g_eigenvalue = 0.0;   // (1/(2(l1+l2))) Int v1^2/eps — the rank-one eigenvalue
    std::vector<std::pair<TorusPoint, double>> v1_on_lambda;
    std::vector<TorusPoint> lambda0;  // minimizers where v1 != 0
};

// Trichotomy: |Delta(0;0)| <= tol_eff with v1 somewhere nonzero on the
// minimizer set -> ZeroResonance; with v1 vanishing there -> ZeroEigenvalue;
// otherwise RegularPoint. tol_eff = max(tol, 10 * error estimate); throws
// numerical_guard_error("indeterminate...") when |delta00| lands within 2x of
// tol_eff just above it (can't tell critical from regular at this grid).
ThresholdClass classify_threshold(const ModelParams& params, const QuadratureGrid& grid,
                                  double tol);

// ---- calibration ----

struct Calibration {
    double lambda_star = 0.0;
    double uncertainty = 0.0;  // from the two-depth protocol
};

// Unique positive root of Delta(0;0; lambda * v1_shape) = 0 on this grid:
// lambda* = sqrt(2 / Int v1_shape^2 /((l1+l2) eps)). Computed on the same
// grid, so downstream Delta(0;0) vanishes to machine precision by
// construction.
Calibration calibrate_resonance(const TrigPolySpec& v1_shape, const ModelParams& params,
                                const QuadratureGrid& grid);

// Canonical model builders (w0 = 1, v0 = 0), calibrated on the given grid:
// critical constant coupling, critical coupling vanishing on the minimizer
// set, and the subcritical scale*lambda* variant.
ModelParams resonance_model(double l1, double l2, int n, const QuadratureGrid& grid);
ModelParams zero_eigenvalue_model(double l1, double l2, int n, const QuadratureGrid& grid);
ModelParams regular_model(double l1, double l2, int n, const QuadratureGrid& grid,
                          double coupling_scale = 0.9);

// ---- threshold (resonance) vector ----

// f1(q) = -v1(q) f0 / (sqrt(2) (l1+l2) eps(q))
double resonance_vector_f1(const ModelParams& params, double f0, const TorusPoint& q);

struct ResonanceVectorReport {
    double f0 = 0.0;
    double residual_r0 = 0.0;      // f0 + (1/sqrt 2) Int v1 f1 (quadrature)
    double max_residual_r1 = 0.0;  // max over samples of the pointwise residual
    double l1_estimate = 0.0;      // Int |f1| on the given grid
    std::vector<double> l2_by_depth;  // Int |f1|^2 over deepening refinements
    bool l2_divergence = false;       // growth ratio >= 1.5 at the deepest step
};

// Requires a critical model (ZeroResonance or ZeroEigenvalue); throws
// numerical_guard_error for RegularPoint inputs.
ResonanceVectorReport resonance_vector(const ModelParams& params, double f0,
                                       const QuadratureGrid& grid);

// ---- threshold expansion fit ----

struct ExpansionFit {
    double exponent = 0.0;
    double leading_coeff = 0.0;
    double predicted_coeff = 0.0;  // resonance class only
    bool has_predicted = false;
    double loglog_rms = 0.0;
    std::vector<double> t_values;
    std::vector<double> delta_values;
};

// Evaluates Delta(K-p; -l1 e(p)) along p = p' + t e1, t = 0.1 * 2^{-j},
// j = 0..7. Exponent from a log-log fit on the small-t half; the leading
// coefficient from a linear least-squares fit in the (t, t^2) basis when the
// exponent is near 1 (the plain log-log intercept extrapolates to t = 1 and
// inflates the coefficient by the exponent error), or in (t^2, t^4) when near
// 2. predicted value: 2 pi^2/(n^2 (l1+l2)^{3/2}) * sum_{q' in Lambda_0}
// v1^2(q') * sqrt((l1^2+2 l1 l2)/(l1+l2)).
ExpansionFit threshold_expansion_fit(const ModelParams& params, const TorusPoint& K,
                                     const TorusPoint& p_prime, const QuadratureGrid& grid);

// Closed-form band endpoints (separable per axis); used for guards and as an
// independent oracle for essential_band:
// Emin/Emax = sum_i [ l1 + l2 -/+ sqrt(l1^2 + l2^2 + 2 l1 l2 cos(n k_i)) ].
double band_min_closed_form(const TorusPoint& k, const ModelParams& params);
double band_max_closed_form(const TorusPoint& k, const ModelParams& params);

// ---- shared quadrature primitives ----

// v1(t_i)^2 at every grid node (parallel, cached by callers that evaluate
// many spectral parameters on one grid).
std::vector<double> v1_squared_on_grid(const ModelParams& params, const QuadratureGrid& grid);

// S = sum_i W_i * v1sq_i / (l1 eps(t_i) + l2 eps(shift - t_i) - z), evaluated
// with per-axis trig tables over the tensor structure and compensated
// summation. min/max denominator are reported so callers can detect a
// spectral parameter inside (or on) the band before trusting the sum.
struct ResolventQuadrature {
    double sum = 0.0;
    double min_denominator = 0.0;
    double max_denominator = 0.0;
};
ResolventQuadrature resolvent_quadrature(const QuadratureGrid& grid,
                                         const std::vector<double>& v1_squared,
                                         const ModelParams& params, const TorusPoint& shift,
                                         double z);

}  // namespace efimov
