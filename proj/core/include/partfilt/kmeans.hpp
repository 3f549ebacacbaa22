#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace pf {

struct KmeansResult {
    std::vector<int> assign;
    Eigen::MatrixXd centroids;  // c x dim
    double objective = 0.0;     // sum of squared distances
    int iterations = 0;
};

/// Lloyd iterations with seeded k-means++ initialization. Stops at
/// max_iter or an assignment fixpoint; empty clusters are repaired by
/// stealing the globally farthest point; ties break to the lowest id.
KmeansResult kmeans(const Eigen::MatrixXd& z, int c, std::uint64_t seed,
                    int max_iter = 100);

}  // namespace pf
