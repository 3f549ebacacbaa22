#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "partfilt/graph.hpp"

namespace pf {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

/// Seeded Erdos-Renyi graph used across the verification suites.
Graph random_er_graph(int n, double p, std::uint64_t seed);

// One entry per acceptance-style property; each is self-contained and
// prints nothing (the caller formats pass/fail lines).
CheckResult check_partition_filter_equivalence();   // Eq.5 vs Eq.6 sweep
CheckResult check_reduction_extremes();             // r extremes, bit-exact
CheckResult check_propagation_bound();              // inequality audit
CheckResult check_bound_subspace_sweep();           // lhs vs subspace dim
CheckResult check_rsa_identity_and_barbell();       // eps oracle checks
CheckResult check_basis_oracle_agreement();         // recurrences vs Eq. 2
CheckResult check_gradients();                      // finite differences
CheckResult check_separating_transforms();          // Prop. 3.4 sweeps
CheckResult check_csbm_hybrid();                    // Prop. 3.1 experiment
CheckResult check_cora_reproduction(const std::string& data_dir);

/// One timing sample of the filtering pipelines at fixed n.
struct BenchPoint {
    int n = 0;
    std::int64_t edges = 0;
    double t_partitionwise = 0.0;  // seconds: shared stack + filter
    double t_nodewise_ref = 0.0;   // seconds: literal per-node evaluation
};

/// Times partition-wise filtering against the literal node-wise
/// reference across an edge-count sweep at fixed n.
std::vector<BenchPoint> run_complexity_bench(int n, int K, int c,
                                             const std::vector<double>& probs,
                                             std::uint64_t seed = 0);

CheckResult check_complexity_shape();                // bench slope criteria

// Smaller structural property suites (module invariants).
CheckResult check_laplacian_properties();
CheckResult check_coarsening_operator_properties();
CheckResult check_rsa_monotonicity();
CheckResult check_kmeans_properties();
CheckResult check_filter_linearity();
CheckResult check_determinism();

/// Runs every suite above (Cora only when data_dir is non-empty).
std::vector<CheckResult> run_verification(const std::string& data_dir = "");

}  // namespace pf
