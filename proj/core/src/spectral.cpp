#include "partfilt/spectral.hpp"

#include <cmath>

#include "partfilt/errors.hpp"

namespace pf {

EigenSystem dense_eig(const Laplacian& lap, int n_max) {
    if (lap.n > n_max)
        throw ScaleError("dense_eig: n=" + std::to_string(lap.n) +
                         " exceeds n_max=" + std::to_string(n_max) +
                         "; use the polynomial path");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.L.dense());
    if (solver.info() != Eigen::Success)
        throw NumericError("dense_eig: eigensolver failed to converge");
    EigenSystem eig{solver.eigenvectors(), solver.eigenvalues()};
    for (int j = 0; j < eig.U.cols(); ++j) {
        for (int i = 0; i < eig.U.rows(); ++i) {
            if (eig.U(i, j) != 0.0) {
                if (eig.U(i, j) < 0.0) eig.U.col(j) = -eig.U.col(j);
                break;
            }
        }
    }
    return eig;
}

Eigen::VectorXd exact_spectral_filter(const EigenSystem& eig,
                                      const std::function<double(double)>& f,
                                      const Eigen::VectorXd& x) {
    if (x.size() != eig.U.rows())
        throw ShapeError("exact_spectral_filter: vector length mismatch");
    Eigen::VectorXd flam(eig.lambda.size());
    for (int i = 0; i < eig.lambda.size(); ++i) {
        flam[i] = f(eig.lambda[i]);
        if (!std::isfinite(flam[i]))
            throw NumericError("exact_spectral_filter: non-finite f(lambda)");
    }
    return eig.U * (flam.asDiagonal() * (eig.U.transpose() * x));
}

double l_seminorm(const Laplacian& lap, const Eigen::VectorXd& x) {
    if (x.size() != lap.n) throw ShapeError("l_seminorm: length mismatch");
    const double q = x.dot(lap.L * x);
    if (q < -1e-12)
        throw NumericError("l_seminorm: quadratic form " + std::to_string(q) +
                           " < -1e-12; L not PSD");
    return std::sqrt(std::max(q, 0.0));
}

double l_operator_seminorm(const EigenSystem& eig, const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(eig.lambda.size());
    if (M.rows() != n || M.cols() != n)
        throw ShapeError("l_operator_seminorm: matrix must be n x n");
    Eigen::VectorXd sqrt_lam(n), inv_sqrt_lam(n);
    for (int i = 0; i < n; ++i) {
        const double lam = std::max(eig.lambda[i], 0.0);
        sqrt_lam[i] = std::sqrt(lam);
        inv_sqrt_lam[i] = lam > kNullspaceTol ? 1.0 / sqrt_lam[i] : 0.0;
    }
    // S M S^+ with S = U sqrt(Lambda) U^T, S^+ zero on ker(L).
    const Eigen::MatrixXd inner =
        sqrt_lam.asDiagonal() * (eig.U.transpose() * M * eig.U) *
        inv_sqrt_lam.asDiagonal();
    return inner.jacobiSvd().singularValues()[0];
}

double l_operator_seminorm(const Laplacian& lap, const Eigen::MatrixXd& M,
                           int n_max) {
    return l_operator_seminorm(dense_eig(lap, n_max), M);
}

}  // namespace pf
