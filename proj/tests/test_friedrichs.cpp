#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "efimov/errors.hpp"
#include "efimov/friedrichs.hpp"
#include "efimov/model.hpp"
#include "efimov/linalg.hpp"
#include "efimov/quadrature.hpp"
#include "efimov/torus.hpp"

using namespace efimov;

namespace {
constexpr double kPi = 3.14159265358979323846;

TorusPoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    return {u(rng), u(rng), u(rng)};
}
}  // namespace

TEST_CASE("with v1 = 0 the determinant reduces to its affine part") {
    ModelParams params;
    params.l1 = 1.4;
    params.l2 = 0.6;
    params.v1 = TrigPolySpec::constant_spec(0.0);
    const QuadratureGrid grid = build_grid(4, true, {}, 1);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        const TorusPoint k = random_point(rng);
        const double z = -0.5 - i * 0.1;
        CHECK(fredholm_delta(k, z, params, grid) ==
              doctest::Approx(params.l2 * epsilon(k, 1) + 1.0 - z).epsilon(1e-14));
    }
}

TEST_CASE("the determinant is strictly decreasing in z below the band") {
    const QuadratureGrid grid = build_grid(4, true, {}, 1);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uc(0.4, 2.0);
    for (int m = 0; m < 10; ++m) {
        ModelParams params;
        params.l1 = uc(rng);
        params.l2 = uc(rng);
        params.v1 = TrigPolySpec::constant_spec(uc(rng));
        for (int i = 0; i < 50; ++i) {
            const TorusPoint k = random_point(rng);
            const double zlo = band_min_closed_form(k, params);
            std::uniform_real_distribution<double> uz(zlo - 5.0, zlo - 0.05);
            double z1 = uz(rng), z2 = uz(rng);
            if (z1 > z2) std::swap(z1, z2);
            if (z2 - z1 < 1e-6) continue;
            CHECK(fredholm_delta(k, z1, params, grid) >
                  fredholm_delta(k, z2, params, grid));
        }
    }
}

TEST_CASE("determinant is invariant under minimizer-set shifts of k") {
    ModelParams params;
    params.n = 2;
    const QuadratureGrid grid = build_grid(4, true, {}, 2);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        const TorusPoint k = random_point(rng);
        const double z = band_min_closed_form(k, params) - 0.3 - i * 0.05;
        const double base = fredholm_delta(k, z, params, grid);
        for (const TorusPoint& lam : lambda_set(2).points)
            CHECK(fredholm_delta(k + lam, z, params, grid) ==
                  doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("the w2 form of the determinant matches the shifted evaluation") {
    ModelParams params;
    params.l1 = 0.8;
    params.l2 = 1.7;
    const QuadratureGrid grid = build_grid(3, false, {}, 1);
    std::mt19937_64 rng(37);
    for (int i = 0; i < 20; ++i) {
        const TorusPoint K = random_point(rng), p = random_point(rng);
        const double z = -7.0 - i * 0.5;  // far below every branch
        const double via = delta_via_w2(K, p, z, params, grid);
        CHECK(via == fredholm_delta(K - p, z - params.l1 * epsilon(p, 1), params, grid));
        // explicit w2-denominator sum over the same nodes
        double sum = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double v = params.v1(grid.nodes[j]);
            sum += grid.weights[j] * v * v / (w2_value(K, p, grid.nodes[j], params) - z);
        }
        CHECK(via == doctest::Approx(w1_value(K, p, params) - z - 0.5 * sum).epsilon(1e-12));
    }
}

TEST_CASE("band scan agrees with the separable closed form") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uc(0.3, 2.5);
    for (int m = 0; m < 8; ++m) {
        ModelParams params;
        params.l1 = uc(rng);
        params.l2 = uc(rng);
        params.n = (m % 2) + 1;
        for (int i = 0; i < 8; ++i) {
            const TorusPoint k = random_point(rng);
            const EssentialBand band = essential_band(k, params);
            CHECK(band.Emin ==
                  doctest::Approx(band_min_closed_form(k, params)).epsilon(1e-9));
            CHECK(band.Emax ==
                  doctest::Approx(band_max_closed_form(k, params)).epsilon(1e-9));
            CHECK(branch_energy(k, band.argmin, params) ==
                  doctest::Approx(band.Emin).epsilon(1e-9));
            CHECK(branch_energy(k, band.argmax, params) ==
                  doctest::Approx(band.Emax).epsilon(1e-9));
        }
    }
}

TEST_CASE("evaluation inside the open band is refused") {
    ModelParams params;
    const QuadratureGrid grid = build_grid(4, true, {}, 1);
    const TorusPoint k(0.5, -1.0, 2.0);
    const double mid =
        0.5 * (band_min_closed_form(k, params) + band_max_closed_form(k, params));
    CHECK_THROWS_AS((void)fredholm_delta(k, mid, params, grid), numerical_guard_error);
}

TEST_CASE("discrete levels match the bordered-matrix eigenvalues on the same grid") {
    const QuadratureGrid grid = lambda_refined_grid(4, true, 1, kPi / 4.0, 1);
    const std::size_t M = grid.size();
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> uc(0.2, 1.5);
    int below_seen = 0, above_seen = 0;
    for (int trial = 0; trial < 12; ++trial) {
        ModelParams params;
        params.l1 = uc(rng);
        params.l2 = uc(rng);
        params.v1 = TrigPolySpec::constant_spec(1.0 + uc(rng));
        const TorusPoint k = random_point(rng);

        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1 + M, 1 + M);
        h(0, 0) = params.l2 * epsilon(k, 1) + 1.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double b =
                params.v1(grid.nodes[j]) * std::sqrt(grid.weights[j] / 2.0);
            h(0, 1 + j) = -b;
            h(1 + j, 0) = -b;
            h(1 + j, 1 + j) = branch_energy(k, grid.nodes[j], params);
        }
        const Eigen::VectorXd evals = sym_eigenvalues(h);

        const EssentialBand band = essential_band(k, params);
        const auto evs = discrete_spectrum_h(k, params, grid);
        for (const auto& ev : evs) {
            if (ev.side == SpectralSide::Below) {
                ++below_seen;
                CHECK(ev.z < band.Emin);
                CHECK(ev.z == doctest::Approx(evals(0)).epsilon(1e-9));
            } else {
                ++above_seen;
                CHECK(ev.z > band.Emax);
                CHECK(ev.z == doctest::Approx(evals(static_cast<Eigen::Index>(M)))
                                  .epsilon(1e-9));
            }
        }
    }
    CHECK(below_seen > 0);
    CHECK(above_seen > 0);
}

TEST_CASE("threshold trichotomy on the three canonical models") {
    const QuadratureGrid grid = lambda_refined_grid(6, true, 4, kPi / 4.0, 1);
    const ModelParams res = resonance_model(1.0, 1.0, 1, grid);
    const ModelParams zei = zero_eigenvalue_model(1.0, 1.0, 1, grid);
    const ModelParams reg = regular_model(1.0, 1.0, 1, grid, 0.9);

    const ThresholdClass tr = classify_threshold(res, grid, 1e-6);
    CHECK(tr.kind == ThresholdKind::ZeroResonance);
    CHECK(std::abs(tr.delta00) <= 1e-12);
    CHECK(tr.g_eigenvalue == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(!tr.lambda0.empty());

    const ThresholdClass tz = classify_threshold(zei, grid, 1e-6);
    CHECK(tz.kind == ThresholdKind::ZeroEigenvalue);
    CHECK(tz.g_eigenvalue == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(tz.lambda0.empty());  // v1 vanishes on the whole minimizer set

    const ThresholdClass tg = classify_threshold(reg, grid, 1e-6);
    CHECK(tg.kind == ThresholdKind::RegularPoint);
    CHECK(tg.delta00 > 0.0);  // subcritical coupling keeps the determinant positive
}

TEST_CASE("calibration scaling relations") {
    const QuadratureGrid grid = lambda_refined_grid(6, true, 4, kPi / 4.0, 1);
    ModelParams params;
    const TrigPolySpec shape = TrigPolySpec::constant_spec(1.0);
    const Calibration base = calibrate_resonance(shape, params, grid);
    CHECK(base.lambda_star > 0.0);
    CHECK(base.uncertainty >= 0.0);
    CHECK(base.uncertainty < 0.05 * base.lambda_star);

    // scaling the shape by c scales the critical coupling by 1/c
    const Calibration half = calibrate_resonance(shape.scaled(2.0), params, grid);
    CHECK(half.lambda_star == doctest::Approx(base.lambda_star / 2.0).epsilon(1e-12));

    // scaling both couplings by c scales it by sqrt(c)
    ModelParams scaled = params;
    scaled.l1 *= 3.0;
    scaled.l2 *= 3.0;
    const Calibration up = calibrate_resonance(shape, scaled, grid);
    CHECK(up.lambda_star ==
          doctest::Approx(base.lambda_star * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("threshold vector: quadrature residual, integrability, L2 divergence") {
    const QuadratureGrid grid = lambda_refined_grid(6, true, 5, kPi / 4.0, 1);
    const ModelParams res = resonance_model(1.0, 1.0, 1, grid);
    const ResonanceVectorReport rep = resonance_vector(res, 1.0, grid);
    CHECK(std::abs(rep.residual_r0) <= 1e-10);
    CHECK(rep.max_residual_r1 <= 1e-10);
    CHECK(rep.l1_estimate > 0.0);
    CHECK(std::isfinite(rep.l1_estimate));
    REQUIRE(rep.l2_by_depth.size() >= 2);
    CHECK(rep.l2_divergence);  // resonance vector is L1 but not L2
    CHECK(rep.l2_by_depth.back() > 1.5 * rep.l2_by_depth.front());

    const ModelParams zei = zero_eigenvalue_model(1.0, 1.0, 1, grid);
    const ResonanceVectorReport rz = resonance_vector(zei, 1.0, grid);
    CHECK(!rz.l2_divergence);  // quadratic vanishing of v1 makes it square-summable

    const ModelParams reg = regular_model(1.0, 1.0, 1, grid, 0.9);
    CHECK_THROWS_AS((void)resonance_vector(reg, 1.0, grid), numerical_guard_error);
}

TEST_CASE("threshold expansion exponents: linear at a resonance, quadratic at an eigenvalue") {
    const QuadratureGrid grid = lambda_refined_grid(8, true, 10, kPi / 4.0, 1, 2);
    const ModelParams res = resonance_model(1.0, 1.0, 1, grid);
    const ExpansionFit fr = threshold_expansion_fit(res, TorusPoint(), TorusPoint(), grid);
    CHECK(fr.exponent == doctest::Approx(1.0).epsilon(0.1));
    CHECK(fr.has_predicted);
    CHECK(fr.leading_coeff == doctest::Approx(fr.predicted_coeff).epsilon(0.1));
    CHECK(fr.t_values.size() == 8);

    const ModelParams zei = zero_eigenvalue_model(1.0, 1.0, 1, grid);
    const ExpansionFit fz = threshold_expansion_fit(zei, TorusPoint(), TorusPoint(), grid);
    CHECK(fz.exponent == doctest::Approx(2.0).epsilon(0.1));
    CHECK(!fz.has_predicted);

    // the ray origin must sit on the minimizer set
    CHECK_THROWS_AS(
        (void)threshold_expansion_fit(res, TorusPoint(), TorusPoint(0.3, 0.0, 0.0), grid),
        schema_error);
}

TEST_CASE("two-depth refinement: estimate tightens and extrapolation is consistent") {
    ModelParams params;
    params.v1 = TrigPolySpec::constant_spec(0.7);
    const TorusPoint k(0.9, -0.4, 1.7);
    const double z = band_min_closed_form(k, params) - 0.8;
    const QuadratureGrid coarse = lambda_refined_grid(6, true, 3, kPi / 4.0, 1);
    const QuadratureGrid fine = lambda_refined_grid(12, true, 6, kPi / 4.0, 1);
    const DeltaRefined a = fredholm_delta_refined(k, z, params, coarse);
    const DeltaRefined b = fredholm_delta_refined(k, z, params, fine);
    CHECK(b.error_estimate <= a.error_estimate);
    CHECK(std::abs(b.value - b.extrapolated) <= std::abs(b.value - a.coarser) + 1e-12);
    CHECK(a.value == doctest::Approx(b.value).epsilon(0.02));
}
