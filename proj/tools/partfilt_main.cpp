// partfilt: coarsening-guided partition-wise polynomial graph filtering.
//
// Subcommands: coarsen, propagate, train, eval, csbm, sweep-r, verify,
// bench. All subcommands accept --seed, --out-dir and --config (flat
// key=value file; command-line flags override config values).
// Exit codes: 0 ok, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "partfilt/coarsen.hpp"
#include "partfilt/csbm.hpp"
#include "partfilt/errors.hpp"
#include "partfilt/filtering.hpp"
#include "partfilt/graph.hpp"
#include "partfilt/laplacian.hpp"
#include "partfilt/model.hpp"
#include "partfilt/report.hpp"
#include "partfilt/spectral.hpp"
#include "partfilt/verify.hpp"

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--seed", opts.seed, "RNG seed");
    sub->add_option("--out-dir", opts.out_dir, "output directory");
    sub->set_config("--config", "", "flat key=value config file");
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

struct TrainOpts {
    double lr = 0.01;
    double weight_decay = 5e-4;
    double dropout = 0.5;
    int epochs = 1000;
    int patience = 200;
    int K = 10;
    double r = 0.5;
    std::string basis = "chebyshev";
    double jacobi_a = 1.0, jacobi_b = 1.0;
    std::string method = "local_variation";
    int subspace_dim = 10;
    std::vector<int> hidden = {64};
    std::string order = "medium";
    int kmeans_refresh = 10;
    int kmeans_first = 20;
    double train_frac = 0.6, val_frac = 0.2;
};

void add_train_opts(CLI::App* sub, TrainOpts& t) {
    sub->add_option("--lr", t.lr, "learning rate");
    sub->add_option("--weight-decay", t.weight_decay, "L2 weight decay");
    sub->add_option("--dropout", t.dropout, "dropout probability");
    sub->add_option("--epochs", t.epochs, "max epochs");
    sub->add_option("--patience", t.patience, "early-stopping patience");
    sub->add_option("--K", t.K, "polynomial order");
    sub->add_option("--r", t.r, "coarsening ratio");
    sub->add_option("--basis", t.basis,
                    "chebyshev | monomial | bernstein | jacobi");
    sub->add_option("--jacobi-a", t.jacobi_a, "Jacobi alpha");
    sub->add_option("--jacobi-b", t.jacobi_b, "Jacobi beta");
    sub->add_option("--method", t.method, "local_variation | heavy_edge");
    sub->add_option("--subspace-dim", t.subspace_dim,
                    "coarsening subspace dimension");
    sub->add_option("--hidden", t.hidden, "hidden layer widths");
    sub->add_option("--order", t.order, "medium | large");
    sub->add_option("--kmeans-refresh", t.kmeans_refresh,
                    "epochs between cluster refreshes");
    sub->add_option("--kmeans-first", t.kmeans_first,
                    "first epoch with class-wise filtering");
    sub->add_option("--train-frac", t.train_frac, "train split fraction");
    sub->add_option("--val-frac", t.val_frac, "validation split fraction");
}

pf::TrainConfig to_config(const TrainOpts& t, std::uint64_t seed) {
    pf::TrainConfig cfg;
    cfg.lr = t.lr;
    cfg.weight_decay = t.weight_decay;
    cfg.dropout = t.dropout;
    cfg.max_epochs = t.epochs;
    cfg.patience = t.patience;
    cfg.K = t.K;
    cfg.r = t.r;
    cfg.basis = pf::PolyBasis{pf::parse_basis_kind(t.basis), t.K, t.jacobi_a,
                              t.jacobi_b};
    cfg.kmeans_refresh = t.kmeans_refresh;
    cfg.kmeans_first_epoch = t.kmeans_first;
    cfg.hidden = t.hidden;
    cfg.order = t.order == "large" ? pf::DecoupledOrder::kLarge
                                   : pf::DecoupledOrder::kMedium;
    if (t.order != "medium" && t.order != "large")
        throw pf::ArgumentError("unknown --order: " + t.order);
    cfg.seed = seed;
    return cfg;
}

int cmd_coarsen(const CommonOpts& common, const std::string& graph_path,
                const TrainOpts& t) {
    const pf::Graph g = pf::load_edge_list(graph_path);
    const pf::Partition part = pf::coarsen(
        g, t.r, pf::parse_coarsen_method(t.method), t.subspace_dim,
        common.seed);
    pf::save_partition(part, out_path(common, "partition.txt"));

    const pf::Laplacian lap = pf::normalized_laplacian(g);
    const pf::CoarseningOperator op = pf::coarsening_operator(part);
    double eps = 0.0;
    std::string eps_kind;
    if (g.n <= pf::kDefaultEigMax) {
        const Eigen::MatrixXd sub =
            pf::leading_subspace(lap, std::min(t.subspace_dim, g.n));
        eps = pf::rsa_constant(lap, op, sub);
        eps_kind = "exact";
    } else {
        // the dense sup is out of reach; report a sampled lower bound
        Eigen::MatrixXd sub(g.n, 1);
        sub.setOnes();
        eps = pf::rsa_lower_bound(lap, op, sub, 64, common.seed);
        eps_kind = "sampled_lower_bound";
    }

    pf::Report rep;
    rep.columns = {"n", "n_prime", "ratio", "epsilon", "epsilon_kind"};
    rep.config = {{"graph", graph_path},
                  {"r", pf::format_double(t.r)},
                  {"method", t.method},
                  {"subspace_dim", std::to_string(t.subspace_dim)},
                  {"seed", std::to_string(common.seed)}};
    rep.add_row({std::to_string(g.n), std::to_string(part.n_prime),
                 pf::format_double(part.ratio()), pf::format_double(eps),
                 eps_kind});
    pf::emit_report(rep, out_path(common, "coarsen"));
    std::cout << "coarsened n=" << g.n << " -> n'=" << part.n_prime
              << " (epsilon " << eps_kind << " = " << eps << ")\n";
    return 0;
}

int cmd_propagate(const CommonOpts& common, const std::string& graph_path,
                  const std::string& feature_path, const TrainOpts& t) {
    const pf::Graph g = pf::load_graph(graph_path, feature_path);
    const pf::Laplacian lap = pf::normalized_laplacian(g);
    const pf::PolyBasis basis{pf::parse_basis_kind(t.basis), t.K, t.jacobi_a,
                              t.jacobi_b};
    const pf::PropagatedStack stack =
        pf::propagate_basis(lap, *g.features, basis);
    pf::save_stack(stack, out_path(common, "stack.pfst"));
    std::cout << "propagated " << pf::basis_name(basis.kind) << " stack: K="
              << stack.K() << " n=" << stack.n() << " d=" << stack.d()
              << "\n";
    return 0;
}

int cmd_train(const CommonOpts& common, const std::string& graph_path,
              const std::string& feature_path, const std::string& label_path,
              const std::string& partition_path, const TrainOpts& t) {
    const pf::Graph g = pf::load_graph(graph_path, feature_path, label_path);
    const pf::Laplacian lap = pf::normalized_laplacian(g);
    const pf::Partition part =
        partition_path.empty()
            ? pf::coarsen(g, t.r, pf::parse_coarsen_method(t.method),
                          t.subspace_dim, common.seed)
            : pf::load_partition(partition_path);
    const pf::TrainConfig cfg = to_config(t, common.seed);

    pf::CpfModel model(pf::coarsening_operator(part), cfg,
                       int(g.features->cols()), g.num_classes);
    const pf::Split split =
        pf::make_split(g.n, t.train_frac, t.val_frac, common.seed);

    pf::PropagatedStack x_stack;
    const pf::PropagatedStack* stack_ptr = nullptr;
    if (cfg.order == pf::DecoupledOrder::kLarge) {
        x_stack = pf::propagate_basis(lap, *g.features, cfg.basis);
        stack_ptr = &x_stack;
    }
    const pf::TrainResult result = pf::train(model, g, lap, split, stack_ptr);

    pf::save_partition(part, out_path(common, "partition.txt"));
    pf::save_checkpoint(model, out_path(common, "model.pfmd"));
    pf::save_metrics_csv(result.log, out_path(common, "metrics.csv"));

    const double train_acc = pf::evaluate(model, g, lap, split.train,
                                          stack_ptr);
    const double val_acc = pf::evaluate(model, g, lap, split.val, stack_ptr);
    const double test_acc = pf::evaluate(model, g, lap, split.test,
                                         stack_ptr);
    pf::Report rep;
    rep.columns = {"best_epoch", "train_acc", "val_acc", "test_acc"};
    rep.config = {{"graph", graph_path},
                  {"seed", std::to_string(common.seed)},
                  {"lr", pf::format_double(t.lr)},
                  {"weight_decay", pf::format_double(t.weight_decay)},
                  {"dropout", pf::format_double(t.dropout)},
                  {"K", std::to_string(t.K)},
                  {"r", pf::format_double(t.r)},
                  {"basis", t.basis},
                  {"order", t.order}};
    rep.add_row({std::to_string(result.best_epoch),
                 pf::format_double(train_acc), pf::format_double(val_acc),
                 pf::format_double(test_acc)});
    pf::emit_report(rep, out_path(common, "train"));
    std::cout << "best epoch " << result.best_epoch << ": train "
              << train_acc << " val " << val_acc << " test " << test_acc
              << "\n";
    return 0;
}

int cmd_eval(const CommonOpts& common, const std::string& graph_path,
             const std::string& feature_path, const std::string& label_path,
             const std::string& partition_path,
             const std::string& checkpoint_path, const TrainOpts& t) {
    const pf::Graph g = pf::load_graph(graph_path, feature_path, label_path);
    const pf::Laplacian lap = pf::normalized_laplacian(g);
    const pf::Partition part = pf::load_partition(partition_path);
    const pf::TrainConfig cfg = to_config(t, common.seed);
    pf::CpfModel model(pf::coarsening_operator(part), cfg,
                       int(g.features->cols()), g.num_classes);
    pf::load_checkpoint(model, checkpoint_path);

    pf::PropagatedStack x_stack;
    const pf::PropagatedStack* stack_ptr = nullptr;
    if (cfg.order == pf::DecoupledOrder::kLarge) {
        x_stack = pf::propagate_basis(lap, *g.features, cfg.basis);
        stack_ptr = &x_stack;
    }
    std::vector<int> all(g.n);
    for (int i = 0; i < g.n; ++i) all[i] = i;
    const double acc = pf::evaluate(model, g, lap, all, stack_ptr);
    std::cout << "accuracy " << acc << " over " << g.n << " nodes\n";
    return 0;
}

int cmd_csbm(const CommonOpts& common, pf::CsbmParams params, bool experiment,
             const TrainOpts& t) {
    params.seed = common.seed;
    if (!experiment) {
        const pf::CsbmGraph data = pf::csbm_generate(params);
        pf::save_edge_list(data.graph, out_path(common, "csbm.edges"));
        pf::save_features_text(data.graph, out_path(common, "csbm.features"));
        pf::save_labels(data.graph, out_path(common, "csbm.labels"));
        pf::save_regime_tags(data, out_path(common, "csbm.regimes"));
        std::cout << "generated csbm graph: n=" << data.graph.n << " |E|="
                  << data.graph.num_edges() << " homophily="
                  << pf::edge_homophily(data.graph) << "\n";
        return 0;
    }
    pf::TrainConfig cfg = to_config(t, common.seed);
    const pf::SeparabilityReport rep = pf::hybrid_experiment(params, cfg);
    pf::Report out;
    out.columns = {"paradigm", "train_acc", "test_acc", "filter_params"};
    out.config = {{"n", std::to_string(params.n)},
                  {"seed", std::to_string(common.seed)},
                  {"P", pf::format_double(params.homo_fraction)}};
    for (const auto& r : rep.results) {
        out.add_row({r.paradigm, pf::format_double(r.train_acc),
                     pf::format_double(r.test_acc),
                     std::to_string(r.filter_params)});
        std::cout << r.paradigm << ": test " << r.test_acc << " ("
                  << r.filter_params << " filter params)\n";
    }
    pf::emit_report(out, out_path(common, "csbm_experiment"));
    return 0;
}

int cmd_sweep_r(const CommonOpts& common, pf::CsbmParams params,
                std::vector<double> grid, int num_seeds, const TrainOpts& t) {
    if (grid.empty())
        grid = {0.0, 0.25, 0.5, 0.75,
                double(params.n - 1) / double(params.n)};
    pf::Report rep;
    rep.columns = {"r", "seed", "n_prime", "test_acc"};
    rep.config = {{"n", std::to_string(params.n)},
                  {"seeds", std::to_string(num_seeds)}};
    for (int s = 0; s < num_seeds; ++s) {
        pf::CsbmParams ps = params;
        ps.seed = common.seed + std::uint64_t(s);
        const pf::CsbmGraph data = pf::csbm_generate(ps);
        const pf::Laplacian lap = pf::normalized_laplacian(data.graph);
        const pf::Split split = pf::make_split(data.graph.n, t.train_frac,
                                               t.val_frac, ps.seed ^ 0x5117);
        for (double r : grid) {
            TrainOpts tr = t;
            tr.r = r;
            pf::TrainConfig cfg = to_config(tr, ps.seed);
            const pf::Partition part = pf::coarsen(
                data.graph, r, pf::parse_coarsen_method(t.method),
                t.subspace_dim, ps.seed);
            pf::CpfModel model(pf::coarsening_operator(part), cfg,
                               int(data.graph.features->cols()),
                               data.graph.num_classes);
            pf::train(model, data.graph, lap, split);
            const double acc =
                pf::evaluate(model, data.graph, lap, split.test);
            rep.add_row({pf::format_double(r), std::to_string(s),
                         std::to_string(part.n_prime),
                         pf::format_double(acc)});
            std::cout << "r=" << r << " seed=" << s << " n'=" << part.n_prime
                      << " test " << acc << "\n";
        }
    }
    pf::emit_report(rep, out_path(common, "sweep_r"));
    return 0;
}

int cmd_verify(const CommonOpts& common, const std::string& data_dir) {
    (void)common;
    const auto results = pf::run_verification(data_dir);
    bool all_ok = true;
    for (const auto& r : results) {
        const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        std::cout << "[" << tag << "] " << r.name << ": " << r.detail << "\n";
        if (!r.skipped && !r.pass) all_ok = false;
    }
    return all_ok ? 0 : 1;
}

int cmd_bench(const CommonOpts& common, int n, int K, int c,
              std::vector<double> probs) {
    if (probs.empty()) probs = {0.05, 0.1, 0.15, 0.2};
    const auto pts = pf::run_complexity_bench(n, K, c, probs, common.seed);
    pf::Report rep;
    rep.columns = {"n", "edges", "t_partitionwise_s", "t_nodewise_ref_s"};
    rep.config = {{"K", std::to_string(K)}, {"c", std::to_string(c)}};
    for (const auto& p : pts) {
        rep.add_row({std::to_string(p.n), std::to_string(p.edges),
                     pf::format_double(p.t_partitionwise),
                     pf::format_double(p.t_nodewise_ref)});
        std::cout << "E=" << p.edges << " partition-wise "
                  << p.t_partitionwise << "s node-wise ref "
                  << p.t_nodewise_ref << "s\n";
    }
    const auto& lo = pts.front();
    const auto& hi = pts.back();
    const double edge_ratio = double(hi.edges) / double(lo.edges);
    const double growth =
        (hi.t_partitionwise / lo.t_partitionwise) / edge_ratio;
    const double slope_ratio =
        (hi.t_nodewise_ref - lo.t_nodewise_ref) /
        std::max(hi.t_partitionwise - lo.t_partitionwise, 1e-12);
    std::cout << "partition-wise growth vs linear-in-E: " << growth
              << "; node-wise/partition-wise slope ratio: " << slope_ratio
              << "\n";
    pf::emit_report(rep, out_path(common, "bench"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarsening-guided partition-wise graph filtering"};
    app.require_subcommand(1);

    CommonOpts common;
    TrainOpts topts;
    std::string graph_path, feature_path, label_path;
    std::string partition_path, checkpoint_path, data_dir;
    pf::CsbmParams csbm_params;
    bool csbm_experiment = false;
    std::vector<double> r_grid, bench_probs;
    int num_seeds = 2;
    int bench_n = 200, bench_K = 8, bench_c = 4;

    auto* coarsen = app.add_subcommand("coarsen", "partition a graph");
    add_common(coarsen, common);
    coarsen->add_option("--graph", graph_path, "edge-list file")->required();
    add_train_opts(coarsen, topts);

    auto* propagate =
        app.add_subcommand("propagate", "build and cache a basis stack");
    add_common(propagate, common);
    propagate->add_option("--graph", graph_path, "edge-list file")
        ->required();
    propagate->add_option("--features", feature_path, "feature matrix file")
        ->required();
    add_train_opts(propagate, topts);

    auto* train = app.add_subcommand("train", "train a CPF model");
    add_common(train, common);
    train->add_option("--graph", graph_path, "edge-list file")->required();
    train->add_option("--features", feature_path, "feature matrix file")
        ->required();
    train->add_option("--labels", label_path, "label file")->required();
    train->add_option("--partition", partition_path,
                      "reuse a saved partition instead of coarsening");
    add_train_opts(train, topts);

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
    add_common(eval, common);
    eval->add_option("--graph", graph_path, "edge-list file")->required();
    eval->add_option("--features", feature_path, "feature matrix file")
        ->required();
    eval->add_option("--labels", label_path, "label file")->required();
    eval->add_option("--partition", partition_path, "partition file")
        ->required();
    eval->add_option("--checkpoint", checkpoint_path, "PFMD checkpoint")
        ->required();
    add_train_opts(eval, topts);

    auto* csbm = app.add_subcommand(
        "csbm", "generate a contextual SBM graph or run the hybrid "
                "separability experiment");
    add_common(csbm, common);
    csbm->add_option("--n", csbm_params.n, "node count");
    csbm->add_option("--sigma", csbm_params.sigma, "feature noise");
    csbm->add_option("--p0", csbm_params.p0, "homophilic intra-class prob");
    csbm->add_option("--q0", csbm_params.q0, "homophilic inter-class prob");
    csbm->add_option("--p1", csbm_params.p1, "heterophilic intra-class prob");
    csbm->add_option("--q1", csbm_params.q1, "heterophilic inter-class prob");
    csbm->add_option("--P", csbm_params.homo_fraction,
                     "homophilic node fraction");
    csbm->add_flag("--experiment", csbm_experiment,
                   "train all four filtering paradigms");
    add_train_opts(csbm, topts);

    auto* sweep = app.add_subcommand("sweep-r",
                                     "accuracy vs coarsening ratio on CSBM");
    add_common(sweep, common);
    sweep->add_option("--n", csbm_params.n, "node count");
    sweep->add_option("--r-grid", r_grid, "coarsening ratios to sweep");
    sweep->add_option("--num-seeds", num_seeds, "seeds per ratio");
    add_train_opts(sweep, topts);

    auto* verify = app.add_subcommand("verify", "run every property suite");
    add_common(verify, common);
    verify->add_option("--data-dir", data_dir,
                       "directory with cora.edges/.features/.labels");

    auto* bench =
        app.add_subcommand("bench", "filtering runtime vs edge count");
    add_common(bench, common);
    bench->add_option("--n", bench_n, "node count");
    bench->add_option("--K", bench_K, "polynomial order");
    bench->add_option("--c", bench_c, "channel count");
    bench->add_option("--probs", bench_probs, "edge probabilities to sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 2 = usage error, 0 = --help
    }

    try {
        if (coarsen->parsed())
            return cmd_coarsen(common, graph_path, topts);
        if (propagate->parsed())
            return cmd_propagate(common, graph_path, feature_path, topts);
        if (train->parsed())
            return cmd_train(common, graph_path, feature_path, label_path,
                             partition_path, topts);
        if (eval->parsed())
            return cmd_eval(common, graph_path, feature_path, label_path,
                            partition_path, checkpoint_path, topts);
        if (csbm->parsed())
            return cmd_csbm(common, csbm_params, csbm_experiment, topts);
        if (sweep->parsed())
            return cmd_sweep_r(common, csbm_params, r_grid, num_seeds, topts);
        if (verify->parsed()) return cmd_verify(common, data_dir);
        if (bench->parsed())
            return cmd_bench(common, bench_n, bench_K, bench_c, bench_probs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
