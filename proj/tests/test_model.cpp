#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <partfilt/laplacian.hpp>
#include <partfilt/model.hpp>
#include <partfilt/verify.hpp>

using namespace pf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "partfilt_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

Eigen::MatrixXd random_matrix(Rng& rng, int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
    return m;
}

/// Two-blob toy graph whose labels are linearly separable from features.
Graph toy_graph(int n, std::uint64_t seed) {
    Rng rng(seed);
    Graph g = random_er_graph(n, 0.2, seed);
    Eigen::MatrixXd x(n, 2);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = i % 2;
        x(i, 0) = (labels[i] == 0 ? 2.0 : -2.0) + 0.3 * rng.normal();
        x(i, 1) = 0.3 * rng.normal();
    }
    g.features = x;
    g.labels = labels;
    g.num_classes = 2;
    return g;
}

TrainConfig small_config() {
    TrainConfig cfg;
    cfg.lr = 0.05;
    cfg.weight_decay = 0.0;
    cfg.dropout = 0.0;
    cfg.max_epochs = 60;
    cfg.patience = 60;
    cfg.K = 3;
    cfg.basis = PolyBasis{BasisKind::kChebyshev, 3};
    cfg.hidden = {};
    cfg.kmeans_first_epoch = 30;
    cfg.kmeans_refresh = 10;
    cfg.seed = 4;
    return cfg;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("classwise_filter matches the per-row loop") {
    Rng rng(1);
    const int n = 9, c = 3;
    const Eigen::MatrixXd z = random_matrix(rng, n, c);
    ClasswiseParams params;
    for (int j = 0; j < c; ++j) params.W.push_back(random_matrix(rng, c, c));
    std::vector<int> assign(n);
    for (int i = 0; i < n; ++i) assign[i] = i % c;
    const Eigen::MatrixXd out = classwise_filter(z, assign, params);
    for (int i = 0; i < n; ++i)
        CHECK((out.row(i) - z.row(i) * params.W[assign[i]])
                  .cwiseAbs()
                  .maxCoeff() <= 1e-13);
}

TEST_CASE("make_split partitions the node set") {
    const Split s = make_split(100, 0.6, 0.2, 13);
    CHECK(s.train.size() == 60);
    CHECK(s.val.size() == 20);
    CHECK(s.test.size() == 20);
    std::vector<int> all;
    for (const auto* part : {&s.train, &s.val, &s.test})
        all.insert(all.end(), part->begin(), part->end());
    std::sort(all.begin(), all.end());
    for (int i = 0; i < 100; ++i) CHECK(all[i] == i);
    CHECK_THROWS_AS(make_split(10, 0.8, 0.4, 1), ArgumentError);
    // same seed, same split
    const Split t = make_split(100, 0.6, 0.2, 13);
    CHECK(t.train == s.train);
}

TEST_CASE("pack and unpack are inverse bijections") {
    Rng rng(3);
    const Graph g = toy_graph(12, 5);
    TrainConfig cfg = small_config();
    cfg.hidden = {4};
    const Partition part = Partition::from_assign(
        {0, 0, 1, 1, 2, 2, 0, 1, 2, 0, 1, 2});
    CpfModel model(coarsening_operator(part), cfg, 2, 2);
    const Eigen::VectorXd flat = model.pack(model.params());
    CHECK(flat.size() == model.num_parameters());
    Eigen::VectorXd perturbed = flat;
    for (int i = 0; i < perturbed.size(); ++i) perturbed[i] += rng.normal();
    model.unpack(perturbed, model.params());
    CHECK((model.pack(model.params()) - perturbed).cwiseAbs().maxCoeff() ==
          0.0);
    // decay mask: zero exactly on bias entries
    const Eigen::VectorXd mask = model.decay_mask();
    std::int64_t zeros = 0;
    for (int i = 0; i < mask.size(); ++i)
        if (mask[i] == 0.0) ++zeros;
    std::int64_t bias_count = 0;
    for (const auto& b : model.params().mlp.biases) bias_count += b.size();
    CHECK(zeros == bias_count);
}

TEST_CASE("forward produces logits of the right shape") {
    const Graph g = toy_graph(10, 6);
    const Laplacian lap = normalized_laplacian(g);
    TrainConfig cfg = small_config();
    CpfModel model(
        coarsening_operator(coarsen(g, 0.5, CoarsenMethod::kLocalVariation)),
        cfg, 2, 2);
    const ForwardCache cache = model.forward(*g.features, lap, false, nullptr);
    CHECK(cache.logits.rows() == g.n);
    CHECK(cache.logits.cols() == 2);
    CHECK(cache.z.rows() == g.n);
    // initial loss is near ln(2) for balanced random logits
    std::vector<int> all(g.n);
    for (int i = 0; i < g.n; ++i) all[i] = i;
    const double loss = model.loss_only(cache, *g.labels, all);
    CHECK(loss > 0.0);
    CHECK(loss < 2.0);
}

TEST_CASE("analytic gradients match finite differences") {
    const CheckResult res = check_gradients();
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("training fits a separable toy problem") {
    const Graph g = toy_graph(24, 7);
    const Laplacian lap = normalized_laplacian(g);
    TrainConfig cfg = small_config();
    CpfModel model(
        coarsening_operator(coarsen(g, 0.5, CoarsenMethod::kLocalVariation)),
        cfg, 2, 2);
    const Split split = make_split(g.n, 0.5, 0.25, 3);
    const TrainResult result = train(model, g, lap, split);
    CHECK(result.log.size() <= std::size_t(cfg.max_epochs));
    CHECK(evaluate(model, g, lap, split.train) >= 0.9);
    CHECK(result.best_val_acc >= 0.5);
    // loss decreased over training
    CHECK(result.log.back().train_loss < result.log.front().train_loss);
}

TEST_CASE("checkpoint roundtrip restores parameters bit-exactly") {
    const Graph g = toy_graph(16, 8);
    const Laplacian lap = normalized_laplacian(g);
    TrainConfig cfg = small_config();
    cfg.max_epochs = 25;
    const Partition part = coarsen(g, 0.5, CoarsenMethod::kLocalVariation);
    CpfModel model(coarsening_operator(part), cfg, 2, 2);
    const Split split = make_split(g.n, 0.5, 0.25, 5);
    train(model, g, lap, split);

    const auto path = temp_file("model.pfmd");
    save_checkpoint(model, path.string());
    CpfModel fresh(coarsening_operator(part), cfg, 2, 2);
    load_checkpoint(fresh, path.string());
    CHECK((model.pack(model.params()) - fresh.pack(fresh.params()))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(fresh.classwise_active() == model.classwise_active());
    CHECK(fresh.cluster_assign() == model.cluster_assign());

    // checkpoints are bound to their partition
    const Partition other = Partition::single(g.n);
    CpfModel wrong(coarsening_operator(other), cfg, 2, 2);
    CHECK_THROWS_AS(load_checkpoint(wrong, path.string()), ArgumentError);

    std::ofstream bad(path, std::ios::binary);
    bad << "JUNKJUNK";
    bad.close();
    CHECK_THROWS_AS(load_checkpoint(fresh, path.string()), ParseError);
}

TEST_CASE("metrics csv has one row per epoch") {
    std::vector<EpochLog> log(5);
    for (int i = 0; i < 5; ++i) log[i].epoch = i + 1;
    const auto path = temp_file("metrics.csv");
    save_metrics_csv(log, path.string());
    std::ifstream in(path);
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);  // header + 5 epochs
}

TEST_CASE("separating transform preconditions") {
    Eigen::VectorXd z1(2), z2(2), z3(2);
    z1 << 0.0, 0.0;
    z2 << 3.0, 0.0;
    z3 << 1.0, 0.0;
    // d12 > d13: invalid input ordering
    CHECK_THROWS_AS(construct_separating_W(z1, z2, z3), ArgumentError);
    CHECK_THROWS_AS(construct_separating_pair(z1, z2, z3), ArgumentError);
    // collinear differences admit no single reversing map
    z2 << 1.0, 0.0;
    z3 << 2.0, 0.0;
    CHECK_THROWS_AS(construct_separating_W(z1, z2, z3), ArgumentError);
    // d12 = 0 is degenerate
    CHECK_THROWS_AS(construct_separating_W(z1, z1, z3), ArgumentError);
}

TEST_CASE("separating transforms reverse the inequality") {
    const CheckResult res = check_separating_transforms();
    INFO(res.detail);
    CHECK(res.pass);
}

}  // TEST_SUITE
