#include <doctest.h>

#include <partfilt/laplacian.hpp>
#include <partfilt/spectral.hpp>
#include <partfilt/verify.hpp>

using namespace pf;

TEST_SUITE("laplacian") {

TEST_CASE("4-cycle has the known spectrum {0, 1, 1, 2}") {
    // [DERIVED] hand-computed eigenvalues of the normalized Laplacian
    const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const Laplacian lap = normalized_laplacian(g);
    const EigenSystem eig = dense_eig(lap);
    CHECK(eig.lambda[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eig.lambda[1] == doctest::Approx(1.0));
    CHECK(eig.lambda[2] == doctest::Approx(1.0));
    CHECK(eig.lambda[3] == doctest::Approx(2.0));
}

TEST_CASE("entries match the explicit normalization formula") {
    // [DERIVED] independent loop over edges with 1/sqrt(d_u d_v)
    const Graph g = make_graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
    const Laplacian lap = normalized_laplacian(g);
    const auto deg = g.degrees();
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(g.n, g.n);
    for (int i = 0; i < g.n; ++i) expect(i, i) = 1.0;  // isolated rows too
    for (const auto& [u, v] : g.edges) {
        const double w = 1.0 / std::sqrt(double(deg[u]) * double(deg[v]));
        expect(u, v) = -w;
        expect(v, u) = -w;
    }
    CHECK((lap.L.dense() - expect).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((lap.delta.dense() -
           (expect - Eigen::MatrixXd::Identity(g.n, g.n)))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
}

TEST_CASE("isolated nodes keep an identity row and a zero delta row") {
    const Graph g = make_graph(3, {{0, 1}});
    const Laplacian lap = normalized_laplacian(g);
    const Eigen::MatrixXd L = lap.L.dense();
    CHECK(L(2, 2) == 1.0);
    CHECK(L.row(2).cwiseAbs().sum() == 1.0);
    CHECK(lap.delta.dense().row(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("randomized structural properties") {
    const CheckResult res = check_laplacian_properties();
    INFO(res.detail);
    CHECK(res.pass);
}

}  // TEST_SUITE
