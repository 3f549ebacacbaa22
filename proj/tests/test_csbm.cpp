#include <doctest.h>

#include <cmath>
#include <partfilt/csbm.hpp>
#include <partfilt/verify.hpp>

using namespace pf;

TEST_SUITE("csbm") {

TEST_CASE("parameter validation") {
    CsbmParams p;
    p.n = 1;
    CHECK_THROWS_AS(p.validate(), ArgumentError);
    p = CsbmParams{};
    p.mu = Eigen::Vector2d(1, 0);
    p.nu = Eigen::Vector2d(-1, 0);
    p.p0 = 0.01;  // homophilic regime needs p0 > q0
    CHECK_THROWS_AS(p.validate(), ArgumentError);
    p = CsbmParams{};
    p.mu = Eigen::Vector2d(1, 0);
    p.nu = Eigen::Vector2d(-1, 0);
    p.q1 = 0.01;  // heterophilic regime needs p1 < q1
    CHECK_THROWS_AS(p.validate(), ArgumentError);
}

TEST_CASE("homophilic node count is exactly round(P * n)") {
    CsbmParams p;
    p.n = 101;
    p.homo_fraction = 0.3;
    p.seed = 9;
    const CsbmGraph g = csbm_generate(p);
    int homo = 0;
    for (int r : g.regime)
        if (r == 0) ++homo;
    CHECK(homo == int(std::llround(0.3 * 101)));
}

TEST_CASE("pure homophilic extreme gives two cliques by class") {
    // [TRIVIAL] p0 = 1, q0 = 0, P = 1: deterministic edge set
    CsbmParams p;
    p.n = 30;
    p.p0 = 1.0;
    p.q0 = 0.0;
    p.homo_fraction = 1.0;
    p.seed = 3;
    const CsbmGraph g = csbm_generate(p);
    const auto& labels = *g.graph.labels;
    std::size_t expected = 0;
    for (int i = 0; i < p.n; ++i)
        for (int j = i + 1; j < p.n; ++j)
            if (labels[i] == labels[j]) ++expected;
    CHECK(g.graph.edges.size() == expected);
    CHECK(edge_homophily(g.graph) == 1.0);
    int count = 0;
    g.graph.components(&count);
    CHECK(count == 2);
}

TEST_CASE("feature means follow the class labels") {
    CsbmParams p;
    p.n = 4000;
    p.sigma = 0.5;
    p.seed = 11;
    const CsbmGraph g = csbm_generate(p);
    double m0 = 0, m1 = 0;
    int c0 = 0, c1 = 0;
    for (int i = 0; i < p.n; ++i) {
        if ((*g.graph.labels)[i] == 0) {
            m0 += (*g.graph.features)(i, 0);
            ++c0;
        } else {
            m1 += (*g.graph.features)(i, 0);
            ++c1;
        }
    }
    CHECK(m0 / c0 == doctest::Approx(0.5).epsilon(0.1));
    CHECK(m1 / c1 == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("generation is seed-deterministic") {
    const CheckResult res = check_determinism();
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("hybrid experiment report exposes all four paradigms") {
    CsbmParams p;
    p.n = 80;
    p.seed = 21;
    TrainConfig cfg;
    cfg.lr = 0.05;
    cfg.weight_decay = 0.0;
    cfg.dropout = 0.0;
    cfg.max_epochs = 20;
    cfg.patience = 20;
    cfg.K = 4;
    cfg.basis = PolyBasis{BasisKind::kChebyshev, 4};
    cfg.hidden = {};
    const SeparabilityReport rep = hybrid_experiment(p, cfg);
    CHECK(rep.results.size() == 4);
    const auto& gw = rep.by_name("graph_wise");
    const auto& nw = rep.by_name("node_wise");
    const auto& hy = rep.by_name("hybrid");
    CHECK(gw.filter_params == 5);          // K + 1
    CHECK(nw.filter_params == 80 * 5);     // n (K + 1)
    CHECK(gw.filter_params < hy.filter_params);
    CHECK(hy.filter_params < nw.filter_params);
    CHECK_THROWS_AS(rep.by_name("unknown"), ArgumentError);
}

}  // TEST_SUITE
