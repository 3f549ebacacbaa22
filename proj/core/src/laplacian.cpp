#include "partfilt/laplacian.hpp"

#include <cmath>
#include <tuple>
#include <vector>

namespace pf {

Laplacian normalized_laplacian(const Graph& g) {
    g.validate();
    Laplacian lap;
    lap.n = g.n;
    const auto deg = g.degrees();
    lap.degree.resize(g.n);
    std::vector<double> dinv_sqrt(g.n, 0.0);
    for (int i = 0; i < g.n; ++i) {
        lap.degree[i] = deg[i];
        if (deg[i] > 0) dinv_sqrt[i] = 1.0 / std::sqrt(double(deg[i]));
    }

    std::vector<std::tuple<int, int, double>> trip;
    trip.reserve(g.edges.size() * 2 + g.n);
    for (int i = 0; i < g.n; ++i) trip.emplace_back(i, i, 1.0);
    for (const auto& [u, v] : g.edges) {
        if (u == v) continue;  // self-loops contribute degree only
        const double w = -dinv_sqrt[u] * dinv_sqrt[v];
        trip.emplace_back(u, v, w);
        trip.emplace_back(v, u, w);
    }
    lap.L = Csr::from_triplets(g.n, g.n, trip);

    // Delta = L - I; isolated rows become zero (their L row is identity).
    std::vector<std::tuple<int, int, double>> dtrip;
    dtrip.reserve(trip.size());
    for (int r = 0; r < lap.L.rows; ++r)
        for (std::int64_t k = lap.L.row_ptr[r]; k < lap.L.row_ptr[r + 1]; ++k) {
            const int c = lap.L.col_idx[k];
            const double v = lap.L.vals[k] - (r == c ? 1.0 : 0.0);
            if (v != 0.0 || r == c) dtrip.emplace_back(r, c, v);
        }
    lap.delta = Csr::from_triplets(g.n, g.n, dtrip);
    return lap;
}

}  // namespace pf
