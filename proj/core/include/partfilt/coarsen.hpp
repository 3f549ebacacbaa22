#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "partfilt/graph.hpp"
#include "partfilt/laplacian.hpp"
#include "partfilt/spectral.hpp"

namespace pf {

/// Node -> supernode assignment. Supernode ids are contiguous in [0, n')
/// and every id occurs at least once.
struct Partition {
    std::vector<int> assign;
    int n_prime = 0;
    std::vector<int> sizes;  // members per supernode

    int n() const { return static_cast<int>(assign.size()); }
    double ratio() const { return 1.0 - double(n_prime) / double(n()); }

    static Partition identity(int n);
    static Partition single(int n);
    static Partition from_assign(std::vector<int> assign);

    void validate() const;
};

/// Coarsening matrix C (rows 1/m_i on members), its closed-form
/// pseudo-inverse C^+ = C^T diag(m), and the block-mean projector
/// Pi = C^+ C, all applied matrix-free.
struct CoarseningOperator {
    Partition part;

    /// C x: per-supernode mean (n -> n').
    Eigen::MatrixXd apply_C(const Eigen::MatrixXd& x) const;
    /// C^+ y: broadcast supernode values back to nodes (n' -> n).
    Eigen::MatrixXd apply_Cplus(const Eigen::MatrixXd& y) const;
    /// Pi x = C^+ C x: per-block mean broadcast (n -> n).
    Eigen::MatrixXd apply_Pi(const Eigen::MatrixXd& x) const;

    Eigen::MatrixXd dense_C() const;
    Eigen::MatrixXd dense_Cplus() const;
    Eigen::MatrixXd dense_Pi() const;
};

CoarseningOperator coarsening_operator(Partition p);

enum class CoarsenMethod { kLocalVariation, kHeavyEdge };

CoarsenMethod parse_coarsen_method(const std::string& name);

/// Coarsens g down to n' = floor((1-r)*n) supernodes. Deterministic for
/// a fixed seed; never merges across connected components unless the
/// component count exceeds n'.
Partition coarsen(const Graph& g, double r, CoarsenMethod method,
                  int subspace_dim = 10, std::uint64_t seed = 0);

/// RSA constant over span(subspace): sup of ||(I - Pi) x||_L over
/// ||x||_L = 1, x in the subspace, nullspace-of-L directions excluded.
double rsa_constant(const Laplacian& lap, const CoarseningOperator& op,
                    const Eigen::MatrixXd& subspace);

/// Leading-eigenvector subspace used by default for RSA measurements.
Eigen::MatrixXd leading_subspace(const Laplacian& lap, int dim,
                                 int n_max = kDefaultEigMax);

/// Sampled lower bound on the RSA constant for graphs beyond the dense
/// oracle limit (max over random subspace directions).
double rsa_lower_bound(const Laplacian& lap, const CoarseningOperator& op,
                       const Eigen::MatrixXd& subspace, int samples,
                       std::uint64_t seed);

struct BoundAudit {
    double lhs = 0.0;         // ||Delta^k x - Pi Delta Pi Delta^{k-1} x||_L
    double rhs = 0.0;         // eps * ||x||_L * (||Delta||_L + ||Pi Delta||_L)
    double lhs_k_step = 0.0;  // ||Delta^k x - (Pi Delta Pi)^k x||_L
    double epsilon = 0.0;
};

/// Audits the propagation bound for one signal x and order k.
BoundAudit theorem_bound_audit(const Laplacian& lap,
                               const CoarseningOperator& op,
                               const Eigen::VectorXd& x, int k,
                               const Eigen::MatrixXd& subspace);

void save_partition(const Partition& p, const std::string& path);
Partition load_partition(const std::string& path);

}  // namespace pf
