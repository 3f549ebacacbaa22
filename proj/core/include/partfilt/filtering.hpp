#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "partfilt/coarsen.hpp"
#include "partfilt/laplacian.hpp"

namespace pf {

enum class BasisKind { kMonomial, kChebyshev, kBernstein, kJacobi };

BasisKind parse_basis_kind(const std::string& name);
std::string basis_name(BasisKind kind);

/// Polynomial basis of max degree K. Monomial/Chebyshev/Jacobi act on
/// Delta = L - I (spectrum in [-1, 1)); Bernstein acts on L/2 in [0, 1].
struct PolyBasis {
    BasisKind kind = BasisKind::kChebyshev;
    int K = 10;
    double jacobi_a = 1.0;
    double jacobi_b = 1.0;
};

/// K+1 precomputed basis terms T_k applied to a feature matrix.
struct PropagatedStack {
    PolyBasis basis;
    std::vector<Eigen::MatrixXd> slices;  // each n x d

    int K() const { return static_cast<int>(slices.size()) - 1; }
    int n() const { return slices.empty() ? 0 : int(slices[0].rows()); }
    int d() const { return slices.empty() ? 0 : int(slices[0].cols()); }
};

/// Evaluates the scalar basis terms T_0..T_K at a Laplacian eigenvalue
/// (same recurrences as the matrix path; used by the spectral oracle).
std::vector<double> scalar_basis(const PolyBasis& basis, double lambda);

PropagatedStack propagate_basis(const Laplacian& lap, const Eigen::MatrixXd& X,
                                const PolyBasis& basis);

/// Z = sum_k theta_k * slice_k   (one filter for the whole graph).
Eigen::MatrixXd graphwise_filter(const Eigen::VectorXd& theta,
                                 const PropagatedStack& stack);

/// Z[i,:] = sum_k theta_full(i,k) * slice_k[i,:]  (one filter per node).
Eigen::MatrixXd nodewise_filter(const Eigen::MatrixXd& theta_full,
                                const PropagatedStack& stack);

/// Unified partition-wise filter: Z = sum_k diag(C^+ Theta_{:,k}) slice_k.
/// theta rows are per-supernode coefficients (1/|V_i| factor absorbed).
Eigen::MatrixXd partitionwise_filter(const CoarseningOperator& op,
                                     const Eigen::MatrixXd& theta,
                                     const PropagatedStack& stack);

/// Literal per-partition evaluation with raw coefficients theta_ik
/// (the averaging 1/|V_i| applied explicitly); test oracle only.
Eigen::MatrixXd partitionwise_reference(const Partition& p,
                                        const Eigen::MatrixXd& theta_raw,
                                        const PropagatedStack& stack);

/// Binary stack cache ("PFST"): basis tag, K, n, d, slices row-major f64.
void save_stack(const PropagatedStack& stack, const std::string& path);
PropagatedStack load_stack(const std::string& path);

/// Adjoint of propagate_basis: given gradients w.r.t. every slice,
/// returns the gradient w.r.t. X.
Eigen::MatrixXd propagate_basis_adjoint(const Laplacian& lap,
                                        const PolyBasis& basis,
                                        const std::vector<Eigen::MatrixXd>& gs);

}  // namespace pf
