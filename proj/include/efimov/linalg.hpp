#pragma once

#include <vector>

#include <Eigen/Dense>

namespace efimov {

// Inertia of a dense symmetric matrix from the Bunch-Kaufman LDL^T
// factorization (LAPACK dsytrf): eigenvalue counts by sign without a full
// eigensolve. `near_singular` is set when a D-block is within tie_tol (times
// the matrix scale) of singular — the caller is expected to shift and retry.
struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    bool near_singular = false;
};

// A is taken by value (the factorization overwrites it).
Inertia ldlt_inertia(Eigen::MatrixXd A, double tie_tol = 1e-10);

// All eigenvalues, ascending (Eigen self-adjoint solver).
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& A);

// Largest k eigenvalues by Lanczos with full reorthogonalization,
// deterministic start vector. Returns Ritz values (descending) and their
// residual bounds. Intended for matrices too large for a dense eigensolve
// when only the top of the spectrum matters.
struct LanczosResult {
    std::vector<double> values;
    std::vector<double> residuals;
    int iterations = 0;
};
LanczosResult lanczos_top_eigenvalues(const Eigen::MatrixXd& A, int k, int max_iter = 160,
                                      double rtol = 1e-9);

// Least squares fit y ~ a + b x; returns {a, b, rms residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Gauss-Legendre nodes/weights on [-1, 1] via the Golub-Welsch eigenproblem.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

}  // namespace efimov
