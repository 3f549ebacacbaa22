#include <doctest.h>

#include <partfilt/laplacian.hpp>
#include <partfilt/spectral.hpp>
#include <partfilt/verify.hpp>

using namespace pf;

TEST_SUITE("spectral") {

TEST_CASE("dense_eig returns an orthonormal reconstruction") {
    const Graph g = random_er_graph(20, 0.3, 1);
    const Laplacian lap = normalized_laplacian(g);
    const EigenSystem eig = dense_eig(lap);
    const Eigen::MatrixXd L = lap.L.dense();
    CHECK((eig.U * eig.U.transpose() -
           Eigen::MatrixXd::Identity(g.n, g.n))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    CHECK((eig.U * eig.lambda.asDiagonal() * eig.U.transpose() - L)
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    for (int i = 1; i < g.n; ++i) CHECK(eig.lambda[i] >= eig.lambda[i - 1]);
}

TEST_CASE("sign convention makes repeated decompositions identical") {
    const Graph g = random_er_graph(16, 0.3, 2);
    const Laplacian lap = normalized_laplacian(g);
    const EigenSystem a = dense_eig(lap);
    const EigenSystem b = dense_eig(lap);
    CHECK((a.U - b.U).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact filter with trivial response functions") {
    const Graph g = random_er_graph(15, 0.3, 3);
    const Laplacian lap = normalized_laplacian(g);
    const EigenSystem eig = dense_eig(lap);
    Eigen::VectorXd x(g.n);
    for (int i = 0; i < g.n; ++i) x[i] = std::sin(i + 1.0);
    // f = 1 is the identity, f = lambda is L itself
    const Eigen::VectorXd id =
        exact_spectral_filter(eig, [](double) { return 1.0; }, x);
    CHECK((id - x).cwiseAbs().maxCoeff() <= 1e-10);
    const Eigen::VectorXd lx =
        exact_spectral_filter(eig, [](double l) { return l; }, x);
    CHECK((lx - lap.L * x).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("seminorm equals the quadratic form") {
    const Graph g = random_er_graph(12, 0.4, 4);
    const Laplacian lap = normalized_laplacian(g);
    Eigen::VectorXd x(g.n);
    for (int i = 0; i < g.n; ++i) x[i] = std::cos(0.7 * i);
    const double direct = std::sqrt(x.dot(lap.L.dense() * x));
    CHECK(l_seminorm(lap, x) == doctest::Approx(direct).epsilon(1e-12));
    // constant-in-degree-scaled direction lies in the nullspace
    Eigen::VectorXd null_dir(g.n);
    for (int i = 0; i < g.n; ++i) null_dir[i] = std::sqrt(lap.degree[i]);
    CHECK(l_seminorm(lap, null_dir) <= 1e-7);
}

TEST_CASE("operator seminorm of I is 1 and of L is lambda_max") {
    const Graph g = random_er_graph(14, 0.4, 5);
    const Laplacian lap = normalized_laplacian(g);
    const EigenSystem eig = dense_eig(lap);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(g.n, g.n);
    CHECK(l_operator_seminorm(eig, I) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(l_operator_seminorm(eig, lap.L.dense()) ==
          doctest::Approx(eig.lambda.maxCoeff()).epsilon(1e-9));
}

TEST_CASE("operator seminorm bounds the ratio on random signals") {
    // [DERIVED] sup property: ||Mx||_L <= s ||x||_L on range(L)
    const Graph g = random_er_graph(18, 0.3, 6);
    const Laplacian lap = normalized_laplacian(g);
    const EigenSystem eig = dense_eig(lap);
    const Eigen::MatrixXd M = lap.delta.dense() * 0.8;
    const double s = l_operator_seminorm(eig, M);
    for (int t = 0; t < 30; ++t) {
        Eigen::VectorXd x(g.n);
        for (int i = 0; i < g.n; ++i)
            x[i] = std::sin(3.1 * t + 1.7 * i);
        const double nx = l_seminorm(lap, x);
        if (nx < 1e-10) continue;
        CHECK(l_seminorm(lap, Eigen::VectorXd(M * x)) <= s * nx + 1e-8);
    }
}

}  // TEST_SUITE
