#pragma once

#include <Eigen/Dense>
#include <functional>

#include "partfilt/laplacian.hpp"

namespace pf {

constexpr int kDefaultEigMax = 2048;

/// Eigenvalues below this are treated as the Laplacian nullspace when
/// forming seminorm-restricted operators.
constexpr double kNullspaceTol = 1e-10;

/// Dense eigendecomposition of L with ascending eigenvalues and a fixed
/// sign convention (first nonzero component of each eigenvector positive).
struct EigenSystem {
    Eigen::MatrixXd U;       // orthonormal columns
    Eigen::VectorXd lambda;  // ascending
};

EigenSystem dense_eig(const Laplacian& lap, int n_max = kDefaultEigMax);

/// U diag(f(lambda)) U^T x  (exact spectral filtering).
Eigen::VectorXd exact_spectral_filter(const EigenSystem& eig,
                                      const std::function<double(double)>& f,
                                      const Eigen::VectorXd& x);

/// sqrt(x^T L x); clamps tiny negative quadratic forms to zero.
double l_seminorm(const Laplacian& lap, const Eigen::VectorXd& x);

/// sup over ||x||_L = 1 of ||M x||_L, restricted to range(L):
/// the largest singular value of S M S^+ with S = L^{1/2}.
double l_operator_seminorm(const EigenSystem& eig, const Eigen::MatrixXd& M);
double l_operator_seminorm(const Laplacian& lap, const Eigen::MatrixXd& M,
                           int n_max = kDefaultEigMax);

}  // namespace pf
