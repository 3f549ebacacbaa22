#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

namespace pf {

/// Compressed sparse row matrix with sorted column indices.
/// Row-by-row SpMV keeps the accumulation order deterministic.
struct Csr {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> row_ptr;  // size rows+1
    std::vector<int> col_idx;
    std::vector<double> vals;

    Csr() = default;
    Csr(int r, int c) : rows(r), cols(c), row_ptr(r + 1, 0) {}

    /// Build from (row, col, value) triplets; duplicates are summed,
    /// columns sorted within each row.
    static Csr from_triplets(int rows, int cols,
                             std::vector<std::tuple<int, int, double>> trip) {
        std::sort(trip.begin(), trip.end());
        Csr m(rows, cols);
        m.col_idx.reserve(trip.size());
        m.vals.reserve(trip.size());
        std::size_t i = 0;
        for (int r = 0; r < rows; ++r) {
            while (i < trip.size() && std::get<0>(trip[i]) == r) {
                const int c = std::get<1>(trip[i]);
                double v = 0.0;
                while (i < trip.size() && std::get<0>(trip[i]) == r &&
                       std::get<1>(trip[i]) == c) {
                    v += std::get<2>(trip[i]);
                    ++i;
                }
                m.col_idx.push_back(c);
                m.vals.push_back(v);
            }
            m.row_ptr[r + 1] = static_cast<std::int64_t>(m.col_idx.size());
        }
        return m;
    }

    std::size_t nnz() const { return vals.size(); }

    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y(rows);
        for (int r = 0; r < rows; ++r) {
            double acc = 0.0;
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                acc += vals[k] * x[col_idx[k]];
            y[r] = acc;
        }
        return y;
    }

    Eigen::MatrixXd operator*(const Eigen::MatrixXd& x) const {
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rows, x.cols());
        for (int r = 0; r < rows; ++r)
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                y.row(r) += vals[k] * x.row(col_idx[k]);
        return y;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                d(r, col_idx[k]) += vals[k];
        return d;
    }
};

}  // namespace pf
