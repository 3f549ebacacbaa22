#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "partfilt/graph.hpp"
#include "partfilt/model.hpp"

namespace pf {

/// Two-community contextual stochastic block model with a homophilic
/// regime (p0 > q0) and a heterophilic regime (p1 < q1). The regime of
/// the lower-id endpoint decides which edge probability applies.
struct CsbmParams {
    int n = 400;
    Eigen::VectorXd mu;  // class-0 feature mean
    Eigen::VectorXd nu;  // class-1 feature mean
    double sigma = 1.0;
    double p0 = 0.2, q0 = 0.02;  // homophilic regime
    double p1 = 0.02, q1 = 0.2;  // heterophilic regime
    double homo_fraction = 0.5;  // P
    std::uint64_t seed = 0;

    void validate() const;
};

struct CsbmGraph {
    Graph graph;
    std::vector<int> regime;  // 0 = homophilic, 1 = heterophilic per node
};

CsbmGraph csbm_generate(const CsbmParams& params);

void save_regime_tags(const CsbmGraph& g, const std::string& path);

struct ParadigmResult {
    std::string paradigm;
    double train_acc = 0.0;
    double test_acc = 0.0;
    std::int64_t filter_params = 0;  // filter coefficient count only
};

struct SeparabilityReport {
    std::uint64_t seed = 0;
    std::vector<ParadigmResult> results;

    const ParadigmResult& by_name(const std::string& name) const;
};

/// Trains graph-wise, node-wise, hybrid (shared filter on homophilic
/// nodes, per-node on heterophilic ones) and partition-wise (r = 0.5)
/// variants on the same generated graph.
SeparabilityReport hybrid_experiment(const CsbmParams& params,
                                     const TrainConfig& config);

}  // namespace pf
