#include <doctest.h>

#include <partfilt/csr.hpp>
#include <partfilt/rng.hpp>

using pf::Csr;

TEST_SUITE("csr") {

TEST_CASE("from_triplets sums duplicates and sorts columns") {
    // [TRIVIAL] hand-checked 3x3 with a duplicated entry
    const Csr m = Csr::from_triplets(
        3, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {1, 1, -1.0}, {0, 2, 0.5}});
    CHECK(m.nnz() == 3);
    Eigen::MatrixXd d = m.dense();
    CHECK(d(0, 0) == 2.0);
    CHECK(d(0, 2) == 1.5);
    CHECK(d(1, 1) == -1.0);
    CHECK(d(2, 0) == 0.0);
    // columns sorted within row 0
    CHECK(m.col_idx[0] < m.col_idx[1]);
}

TEST_CASE("sparse products agree with the dense oracle") {
    // [DERIVED] random sparse matrix vs Eigen dense multiply
    pf::Rng rng(7);
    std::vector<std::tuple<int, int, double>> trip;
    const int rows = 17, cols = 13;
    for (int t = 0; t < 60; ++t)
        trip.emplace_back(int(rng.uniform_int(rows)),
                          int(rng.uniform_int(cols)), rng.normal());
    const Csr m = Csr::from_triplets(rows, cols, trip);
    const Eigen::MatrixXd d = m.dense();

    Eigen::VectorXd x(cols);
    for (int i = 0; i < cols; ++i) x[i] = rng.normal();
    CHECK(((m * x) - (d * x)).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXd xm(cols, 4);
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < 4; ++j) xm(i, j) = rng.normal();
    CHECK(((m * xm) - (d * xm)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("empty matrix multiplies to zero") {
    const Csr m(4, 4);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
    CHECK((m * x).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
