#include <doctest.h>

#include <partfilt/errors.hpp>
#include <partfilt/kmeans.hpp>
#include <partfilt/rng.hpp>
#include <partfilt/verify.hpp>

using namespace pf;

TEST_SUITE("kmeans") {

TEST_CASE("argument validation") {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 2);
    CHECK_THROWS_AS(kmeans(z, 0, 1), ArgumentError);
    CHECK_THROWS_AS(kmeans(z, 4, 1), ArgumentError);  // c > n
}

TEST_CASE("c = 1 yields the global mean") {
    Rng rng(1);
    Eigen::MatrixXd z(7, 2);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 2; ++j) z(i, j) = rng.normal();
    const KmeansResult km = kmeans(z, 1, 9);
    CHECK((km.centroids.row(0) - z.colwise().mean()).cwiseAbs().maxCoeff() <=
          1e-12);
    for (int a : km.assign) CHECK(a == 0);
}

TEST_CASE("c = n puts every point in its own cluster") {
    Eigen::MatrixXd z(4, 1);
    z << 0.0, 10.0, 20.0, 30.0;
    const KmeansResult km = kmeans(z, 4, 3);
    CHECK(km.objective <= 1e-12);
    std::vector<int> sorted = km.assign;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("duplicate points do not leave clusters empty") {
    Eigen::MatrixXd z(6, 1);
    z << 1.0, 1.0, 1.0, 1.0, 1.0, 9.0;
    const KmeansResult km = kmeans(z, 3, 5);
    std::vector<int> counts(3, 0);
    for (int a : km.assign) ++counts[a];
    for (int c : counts) CHECK(c > 0);
}

TEST_CASE("structure, objective and exhaustive oracle") {
    const CheckResult res = check_kmeans_properties();
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("same seed reproduces the same clustering") {
    Rng rng(7);
    Eigen::MatrixXd z(25, 3);
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 3; ++j) z(i, j) = rng.normal();
    const KmeansResult a = kmeans(z, 4, 42);
    const KmeansResult b = kmeans(z, 4, 42);
    CHECK(a.assign == b.assign);
    CHECK((a.centroids - b.centroids).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
