#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <partfilt/coarsen.hpp>
#include <partfilt/rng.hpp>
#include <partfilt/verify.hpp>

using namespace pf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "partfilt_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("coarsen") {

TEST_CASE("partition constructors and validation") {
    const Partition id = Partition::identity(4);
    CHECK(id.n_prime == 4);
    CHECK(id.ratio() == 0.0);
    const Partition single = Partition::single(4);
    CHECK(single.n_prime == 1);
    CHECK(single.ratio() == doctest::Approx(0.75));
    const Partition p = Partition::from_assign({0, 1, 0, 2});
    CHECK(p.sizes == std::vector<int>{2, 1, 1});
    // id 2 never occurs -> empty supernode
    CHECK_THROWS_AS(Partition::from_assign({0, 1, 3}), ArgumentError);
    CHECK_THROWS_AS(Partition::from_assign({0, -1}), ArgumentError);
}

TEST_CASE("closed-form pseudo-inverse matches the SVD oracle") {
    // [DERIVED] C^+ = C^T diag(m) must equal the Moore-Penrose inverse
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
        const int n = 5 + int(rng.uniform_int(12));
        std::vector<int> assign(n);
        for (int i = 0; i < n; ++i) assign[i] = i % (2 + t % 4);
        const CoarseningOperator op =
            coarsening_operator(Partition::from_assign(assign));
        const Eigen::MatrixXd C = op.dense_C();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            C, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd inv_s = svd.singularValues();
        for (int i = 0; i < inv_s.size(); ++i)
            inv_s[i] = inv_s[i] > 1e-12 ? 1.0 / inv_s[i] : 0.0;
        const Eigen::MatrixXd pinv = svd.matrixV() * inv_s.asDiagonal() *
                                     svd.matrixU().transpose();
        CHECK((op.dense_Cplus() - pinv).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("operator identities hold on random partitions") {
    const CheckResult res = check_coarsening_operator_properties();
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("coarsen hits the target supernode count") {
    const Graph g = random_er_graph(40, 0.2, 21);
    for (double r : {0.25, 0.5, 0.75}) {
        const Partition p =
            coarsen(g, r, CoarsenMethod::kLocalVariation, 10, 0);
        CHECK(p.n_prime == std::max(1, int(std::floor((1.0 - r) * g.n))));
        p.validate();
    }
    const Partition heavy = coarsen(g, 0.5, CoarsenMethod::kHeavyEdge, 10, 0);
    CHECK(heavy.n_prime == 20);
    CHECK(coarsen(g, 0.0, CoarsenMethod::kLocalVariation).n_prime == g.n);
    const double r_max = double(g.n - 1) / g.n;
    CHECK(coarsen(g, r_max, CoarsenMethod::kLocalVariation).n_prime == 1);
    CHECK_THROWS_AS(coarsen(g, 1.0, CoarsenMethod::kLocalVariation),
                    ArgumentError);
    CHECK_THROWS_AS(coarsen(g, -0.1, CoarsenMethod::kLocalVariation),
                    ArgumentError);
}

TEST_CASE("components only merge when the target forces it") {
    // two 4-cliques, no bridge
    std::vector<std::pair<int, int>> edges;
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                edges.emplace_back(4 * b + i, 4 * b + j);
    const Graph g = make_graph(8, edges);

    const Partition p = coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 8, 0);
    for (const auto& [u, v] : std::vector<std::pair<int, int>>{{0, 4}})
        CHECK(p.assign[u] != p.assign[v]);  // components stay separate

    // n' = 1 forces a cross-component merge
    const Partition one =
        coarsen(g, 7.0 / 8.0, CoarsenMethod::kLocalVariation, 8, 0);
    CHECK(one.n_prime == 1);
}

TEST_CASE("local variation beats heavy-edge on the barbell eps") {
    const CheckResult res = check_rsa_identity_and_barbell();
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("rsa constant is zero iff nothing is lost") {
    const CheckResult res = check_rsa_monotonicity();
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("sampled lower bound never exceeds the exact constant") {
    Rng rng(31);
    for (int t = 0; t < 8; ++t) {
        const Graph g = random_er_graph(24, 0.25, 300 + t);
        const Laplacian lap = normalized_laplacian(g);
        const Partition p =
            coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 10, 0);
        const CoarseningOperator op = coarsening_operator(p);
        const Eigen::MatrixXd sub = leading_subspace(lap, 8);
        const double exact = rsa_constant(lap, op, sub);
        const double lower = rsa_lower_bound(lap, op, sub, 40, t);
        CHECK(lower <= exact + 1e-9);
    }
}

TEST_CASE("bound audit produces consistent fields") {
    const Graph g = random_er_graph(24, 0.25, 41);
    const Laplacian lap = normalized_laplacian(g);
    const Partition p = coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 10, 0);
    const CoarseningOperator op = coarsening_operator(p);
    Eigen::VectorXd x(g.n);
    for (int i = 0; i < g.n; ++i) x[i] = std::sin(i * 0.9);
    const Eigen::MatrixXd full = Eigen::MatrixXd::Identity(g.n, g.n);
    const BoundAudit a1 = theorem_bound_audit(lap, op, x, 1, full);
    CHECK(a1.lhs >= 0.0);
    CHECK(a1.epsilon >= 0.0);
    CHECK(a1.lhs <= a1.rhs + 1e-8);
    // k = 1: one-step and k-step approximants coincide
    CHECK(a1.lhs == doctest::Approx(a1.lhs_k_step).epsilon(1e-12));
    CHECK_THROWS_AS(theorem_bound_audit(lap, op, x, 0, full), ArgumentError);
}

TEST_CASE("partition file roundtrip and mismatch detection") {
    const Partition p = Partition::from_assign({0, 1, 1, 2, 0});
    const auto path = temp_file("part.txt");
    save_partition(p, path.string());
    const Partition q = load_partition(path.string());
    CHECK(q.assign == p.assign);
    CHECK(q.n_prime == p.n_prime);

    std::ofstream out(path);
    out << "#n_prime 5\n0\n1\n1\n";  // declared count disagrees
    out.close();
    CHECK_THROWS_AS(load_partition(path.string()), ParseError);
}

TEST_CASE("parse_coarsen_method") {
    CHECK(parse_coarsen_method("local_variation") ==
          CoarsenMethod::kLocalVariation);
    CHECK(parse_coarsen_method("heavy_edge") == CoarsenMethod::kHeavyEdge);
    CHECK_THROWS_AS(parse_coarsen_method("metis"), ArgumentError);
}

}  // TEST_SUITE
