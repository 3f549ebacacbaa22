#include "partfilt/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "partfilt/errors.hpp"
#include "partfilt/rng.hpp"

namespace pf {

namespace {

double sq_dist(const Eigen::MatrixXd& z, int i, const Eigen::MatrixXd& cent,
               int j) {
    return (z.row(i) - cent.row(j)).squaredNorm();
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& z, int c, Rng& rng) {
    const int n = int(z.rows());
    Eigen::MatrixXd cent(c, z.cols());
    cent.row(0) = z.row(int(rng.uniform_int(n)));
    Eigen::VectorXd d2(n);
    for (int i = 0; i < n; ++i) d2[i] = (z.row(i) - cent.row(0)).squaredNorm();
    for (int j = 1; j < c; ++j) {
        const double total = d2.sum();
        int pick = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (int i = 0; i < n; ++i) {
                target -= d2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = int(rng.uniform_int(n));
        }
        cent.row(j) = z.row(pick);
        for (int i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], (z.row(i) - cent.row(j)).squaredNorm());
    }
    return cent;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& z, int c, std::uint64_t seed,
                    int max_iter) {
    const int n = int(z.rows());
    if (c < 1) throw ArgumentError("kmeans: c must be >= 1");
    if (n < c)
        throw ArgumentError("kmeans: n=" + std::to_string(n) + " < c=" +
                            std::to_string(c));
    Rng rng(seed);
    KmeansResult res;
    res.centroids = kmeanspp_init(z, c, rng);
    res.assign.assign(n, 0);

    for (int it = 0; it < max_iter; ++it) {
        bool changed = it == 0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = sq_dist(z, i, res.centroids, 0);
            for (int j = 1; j < c; ++j) {
                const double d = sq_dist(z, i, res.centroids, j);
                if (d < bd) {  // strict: ties keep the lowest cluster id
                    bd = d;
                    best = j;
                }
            }
            if (res.assign[i] != best) {
                res.assign[i] = best;
                changed = true;
            }
        }
        // empty-cluster repair: steal the globally farthest point
        for (int j = 0; j < c; ++j) {
            if (std::count(res.assign.begin(), res.assign.end(), j) > 0)
                continue;
            int far = -1;
            double fd = -1.0;
            for (int i = 0; i < n; ++i) {
                if (std::count(res.assign.begin(), res.assign.end(),
                               res.assign[i]) <= 1)
                    continue;
                const double d = sq_dist(z, i, res.centroids, res.assign[i]);
                if (d > fd) {
                    fd = d;
                    far = i;
                }
            }
            if (far >= 0) {
                res.assign[far] = j;
                changed = true;
            }
        }
        res.iterations = it + 1;
        // recompute centroids
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(c, z.cols());
        std::vector<int> counts(c, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(res.assign[i]) += z.row(i);
            ++counts[res.assign[i]];
        }
        for (int j = 0; j < c; ++j)
            if (counts[j] > 0) res.centroids.row(j) = sums.row(j) / counts[j];
        if (!changed) break;
    }

    res.objective = 0.0;
    for (int i = 0; i < n; ++i)
        res.objective += sq_dist(z, i, res.centroids, res.assign[i]);
    return res;
}

}  // namespace pf
