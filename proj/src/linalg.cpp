#include "efimov/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <lapacke.h>

#include "efimov/errors.hpp"

namespace efimov {

Inertia ldlt_inertia(Eigen::MatrixXd A, double tie_tol) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    if (A.cols() != A.rows()) throw std::invalid_argument("ldlt_inertia: square matrix required");
    Inertia out;
    if (n == 0) return out;
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);

    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    const lapack_int info =
        LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, A.data(), n, ipiv.data());
    if (info < 0) throw numerical_guard_error("dsytrf: illegal argument");
    // info > 0 means an exactly singular D block; handled by the walk below.

    const double tol1 = tie_tol * scale;
    for (lapack_int k = 0; k < n;) {
        if (ipiv[static_cast<std::size_t>(k)] > 0) {
            const double d = A(k, k);
            if (std::abs(d) <= tol1) {
                ++out.zero;
                out.near_singular = true;
            } else if (d > 0.0) {
                ++out.positive;
            } else {
                ++out.negative;
            }
            ++k;
        } else {
            // 2x2 block on rows k, k+1 (lower storage)
            const double a = A(k, k);
            const double c = A(k + 1, k + 1);
            const double b = A(k + 1, k);
            const double det = a * c - b * b;
            const double tr = a + c;
            const double block_scale = std::max({std::abs(a), std::abs(c), std::abs(b), tol1});
            if (std::abs(det) <= tol1 * block_scale) {
                // one eigenvalue ~0, the other has the sign of the trace
                ++out.zero;
                out.near_singular = true;
                if (tr > 0.0)
                    ++out.positive;
                else
                    ++out.negative;
            } else if (det < 0.0) {
                ++out.positive;
                ++out.negative;
            } else if (tr > 0.0) {
                out.positive += 2;
            } else {
                out.negative += 2;
            }
            k += 2;
        }
    }
    return out;
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numerical_guard_error("symmetric eigensolve failed");
    return es.eigenvalues();
}

LanczosResult lanczos_top_eigenvalues(const Eigen::MatrixXd& A, int k, int max_iter,
                                      double rtol) {
    const Eigen::Index n = A.rows();
    LanczosResult out;
    if (n == 0 || k <= 0) return out;
    if (n <= 2 * k + 8 || n < 64) {
        // small problem: dense solve is cheaper and exact
        Eigen::VectorXd ev = sym_eigenvalues(A);
        for (Eigen::Index i = n - 1; i >= std::max<Eigen::Index>(0, n - k); --i) {
            out.values.push_back(ev[i]);
            out.residuals.push_back(0.0);
        }
        return out;
    }

    max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
    Eigen::MatrixXd V(n, max_iter + 1);
    std::vector<double> alpha, beta;
    V.col(0).setOnes();
    V.col(0) /= V.col(0).norm();

    std::vector<double> prev_top(static_cast<std::size_t>(k), 1e300);
    int m = 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = A.selfadjointView<Eigen::Lower>() * V.col(it);
        const double a = V.col(it).dot(w);
        alpha.push_back(a);
        w -= a * V.col(it);
        if (it > 0) w -= beta.back() * V.col(it - 1);
        // full reorthogonalization (twice for robustness)
        for (int pass = 0; pass < 2; ++pass)
            w -= V.leftCols(it + 1) * (V.leftCols(it + 1).transpose() * w);
        const double b = w.norm();
        m = it + 1;
        if (b < 1e-14) break;
        beta.push_back(b);
        V.col(it + 1) = w / b;

        if (m >= 2 * k && (m % 4 == 0 || it + 1 == max_iter)) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) T(i, i) = alpha[static_cast<std::size_t>(i)];
            for (int i = 0; i + 1 < m; ++i)
                T(i + 1, i) = T(i, i + 1) = beta[static_cast<std::size_t>(i)];
            ts.compute(T, Eigen::EigenvaluesOnly);
            bool converged = true;
            for (int j = 0; j < k; ++j) {
                const double v = ts.eigenvalues()[m - 1 - j];
                if (std::abs(v - prev_top[static_cast<std::size_t>(j)]) >
                    rtol * std::max(1.0, std::abs(v)))
                    converged = false;
                prev_top[static_cast<std::size_t>(j)] = v;
            }
            if (converged) break;
        }
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m && i < static_cast<int>(beta.size()); ++i)
        T(i + 1, i) = T(i, i + 1) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double bl = beta.empty() ? 0.0 : beta.back();
    for (int j = 0; j < k && j < m; ++j) {
        out.values.push_back(es.eigenvalues()[m - 1 - j]);
        out.residuals.push_back(std::abs(bl * es.eigenvectors()(m - 1, m - 1 - j)));
    }
    out.iterations = m;
    return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

GaussLegendre gauss_legendre(int n) {
    if (n < 1 || n > 512) throw std::invalid_argument("gauss_legendre: order out of range");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        gl.nodes[i] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        gl.weights[i] = 2.0 * v0 * v0;
    }
    return gl;
}

}  // namespace efimov
