#pragma once

#include <Eigen/Dense>

#include "partfilt/csr.hpp"
#include "partfilt/graph.hpp"

namespace pf {

/// Symmetric normalized Laplacian L = I - D^{-1/2} A D^{-1/2} and its
/// shift Delta = L - I. Rows of isolated nodes equal the identity row
/// (D^{-1/2} entry taken as 0), so their Delta row is zero.
struct Laplacian {
    int n = 0;
    Csr L;
    Csr delta;
    Eigen::VectorXd degree;
};

Laplacian normalized_laplacian(const Graph& g);

}  // namespace pf
