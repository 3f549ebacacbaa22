#include "partfilt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "partfilt/coarsen.hpp"
#include "partfilt/csbm.hpp"
#include "partfilt/errors.hpp"
#include "partfilt/filtering.hpp"
#include "partfilt/kmeans.hpp"
#include "partfilt/laplacian.hpp"
#include "partfilt/model.hpp"
#include "partfilt/rng.hpp"
#include "partfilt/spectral.hpp"

namespace pf {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

Eigen::VectorXd random_vector(Rng& rng, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

/// Random surjective partition with roughly n_prime supernodes.
Partition random_partition(Rng& rng, int n, int n_prime) {
    std::vector<int> raw(n);
    for (int i = 0; i < n; ++i)
        raw[i] = int(rng.uniform_int(std::uint64_t(n_prime)));
    // compact ids so every supernode is non-empty
    std::vector<int> relabel(n_prime, -1);
    int next = 0;
    for (int& a : raw) {
        if (relabel[a] < 0) relabel[a] = next++;
        a = relabel[a];
    }
    return Partition::from_assign(std::move(raw));
}

PolyBasis cycle_basis(int i, int K) {
    static const BasisKind kinds[] = {BasisKind::kChebyshev,
                                      BasisKind::kMonomial,
                                      BasisKind::kBernstein, BasisKind::kJacobi};
    PolyBasis b;
    b.kind = kinds[i % 4];
    b.K = K;
    return b;
}

/// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = int(x.size());
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        int i = 0;
        while (i < n) {
            int j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (i + j);
            for (int k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

Graph random_er_graph(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) edges.emplace_back(i, j);
    return make_graph(n, std::move(edges));
}

CheckResult check_partition_filter_equivalence() {
    CheckResult res{"partition_filter_equivalence", false, false, ""};
    Rng rng(101);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const int n = 8 + int(rng.uniform_int(57));  // 8..64
        const double p = 0.05 + 0.25 * rng.uniform();
        const Graph g = random_er_graph(n, p, rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const Partition part =
            random_partition(rng, n, 1 + int(rng.uniform_int(std::uint64_t(n))));
        const CoarseningOperator op = coarsening_operator(part);
        const int K = int(rng.uniform_int(9));  // 0..8
        const int d = 1 + int(rng.uniform_int(4));
        const PolyBasis basis = cycle_basis(t, K);
        const Eigen::MatrixXd x = random_matrix(rng, n, d);
        const PropagatedStack stack = propagate_basis(lap, x, basis);

        Eigen::MatrixXd theta_raw = random_matrix(rng, part.n_prime, K + 1);
        Eigen::MatrixXd theta_unified = theta_raw;
        for (int i = 0; i < part.n_prime; ++i)
            theta_unified.row(i) /= double(part.sizes[i]);

        const Eigen::MatrixXd z_unified =
            partitionwise_filter(op, theta_unified, stack);
        const Eigen::MatrixXd z_literal =
            partitionwise_reference(part, theta_raw, stack);
        worst = std::max(worst,
                         (z_unified - z_literal).cwiseAbs().maxCoeff());
    }
    res.pass = worst <= 1e-12;
    res.detail = fmt("max |Eq5-Eq6| = %.3e (tol 1e-12) over 500 triples",
                     worst);
    return res;
}

CheckResult check_reduction_extremes() {
    CheckResult res{"reduction_extremes", false, false, ""};
    Rng rng(202);
    int exact = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const int n = 6 + int(rng.uniform_int(43));
        const Graph g = random_er_graph(n, 0.15, rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const int K = 1 + int(rng.uniform_int(8));
        const PolyBasis basis = cycle_basis(t, K);
        const Eigen::MatrixXd x = random_matrix(rng, n, 3);
        const PropagatedStack stack = propagate_basis(lap, x, basis);

        // r = (n-1)/n: single supernode == graph-wise filter
        const Eigen::VectorXd theta_g = random_vector(rng, K + 1);
        const CoarseningOperator single =
            coarsening_operator(Partition::single(n));
        Eigen::MatrixXd theta_single(1, K + 1);
        theta_single.row(0) = theta_g.transpose();
        const Eigen::MatrixXd z_graph = graphwise_filter(theta_g, stack);
        const Eigen::MatrixXd z_single =
            partitionwise_filter(single, theta_single, stack);

        // r = 0: identity partition == node-wise filter
        const Eigen::MatrixXd theta_full = random_matrix(rng, n, K + 1);
        const CoarseningOperator ident =
            coarsening_operator(Partition::identity(n));
        const Eigen::MatrixXd z_node = nodewise_filter(theta_full, stack);
        const Eigen::MatrixXd z_ident =
            partitionwise_filter(ident, theta_full, stack);

        const bool ok = (z_graph.array() == z_single.array()).all() &&
                        (z_node.array() == z_ident.array()).all();
        if (ok) ++exact;
    }
    res.pass = exact == trials;
    res.detail = fmt("bit-exact on %.0f/%.0f instances", double(exact),
                     double(trials));
    return res;
}

CheckResult check_propagation_bound() {
    CheckResult res{"propagation_bound", false, false, ""};
    Rng rng(303);
    int violations = 0, audits = 0;
    double worst_gap = -1e300;
    for (int s = 0; s < 100; ++s) {
        const Graph g = random_er_graph(32, 0.2, 1000 + s);
        const Laplacian lap = normalized_laplacian(g);
        const Partition part =
            coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 10, 0);
        const CoarseningOperator op = coarsening_operator(part);
        // epsilon measured over all of R^n so the bound holds for any x
        const Eigen::MatrixXd full =
            Eigen::MatrixXd::Identity(g.n, g.n);
        for (int k = 1; k <= 5; ++k) {
            const Eigen::VectorXd x = random_vector(rng, g.n);
            const BoundAudit audit = theorem_bound_audit(lap, op, x, k, full);
            ++audits;
            const double gap = audit.lhs - audit.rhs;
            worst_gap = std::max(worst_gap, gap);
            if (gap > 1e-8) ++violations;
        }
    }
    res.pass = violations == 0;
    res.detail = fmt("%.0f violations in %.0f audits, worst lhs-rhs = %.3e",
                     double(violations), double(audits), worst_gap);
    return res;
}

CheckResult check_bound_subspace_sweep() {
    CheckResult res{"bound_subspace_sweep", false, false, ""};
    // Better-informed coarsenings (larger Local Variation subspace)
    // should shrink both the measured epsilon and the k-step error.
    // Sweep dims stay within the reference subspace dimension: beyond it
    // the extra coarsening accuracy is invisible to the reference signals
    // and only adds noise to the trend.
    const std::vector<int> dims = {1, 2, 3, 4, 6, 8, 10};
    const int n_graphs = 48;
    const int ref_dim = 10, k = 2, n_signals = 32;

    std::vector<double> mean_eps(dims.size(), 0.0);
    std::vector<double> mean_lhs(dims.size(), 0.0);
    for (int s = 0; s < n_graphs; ++s) {
        const Graph g = random_er_graph(32, 0.2, 5000 + s);
        const Laplacian lap = normalized_laplacian(g);
        const Eigen::MatrixXd ref = leading_subspace(lap, ref_dim);
        Rng rng(7000 + s);
        // reuse the same signals for every sweep point
        std::vector<Eigen::VectorXd> xs;
        for (int i = 0; i < n_signals; ++i)
            xs.push_back(ref * random_vector(rng, int(ref.cols())));
        for (std::size_t di = 0; di < dims.size(); ++di) {
            const Partition part =
                coarsen(g, 0.5, CoarsenMethod::kLocalVariation, dims[di], 0);
            const CoarseningOperator op = coarsening_operator(part);
            mean_eps[di] += rsa_constant(lap, op, ref);
            double lhs = 0.0;
            for (const auto& x : xs)
                lhs += theorem_bound_audit(lap, op, x, k, ref).lhs_k_step;
            mean_lhs[di] += lhs / n_signals;
        }
    }
    std::vector<double> dim_axis(dims.begin(), dims.end());
    const double rho_lhs = spearman(dim_axis, mean_lhs);
    const double rho_eps = spearman(dim_axis, mean_eps);
    const double rho_eps_lhs = spearman(mean_eps, mean_lhs);
    res.pass = rho_lhs <= -0.5 && rho_eps_lhs >= 0.5;
    res.detail = fmt(
        "rank corr: dim vs lhs_k_step = %.3f (need <= -0.5), dim vs eps = "
        "%.3f, eps vs lhs_k_step = %.3f (need >= 0.5)",
        rho_lhs, rho_eps, rho_eps_lhs);
    return res;
}

CheckResult check_rsa_identity_and_barbell() {
    CheckResult res{"rsa_constant", false, false, ""};
    Rng rng(404);
    double worst_identity = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int n = 4 + int(rng.uniform_int(37));
        const Graph g = random_er_graph(n, 0.05 + 0.3 * rng.uniform(),
                                        rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const CoarseningOperator ident =
            coarsening_operator(Partition::identity(n));
        const Eigen::MatrixXd sub = leading_subspace(lap, std::min(10, n));
        worst_identity =
            std::max(worst_identity, rsa_constant(lap, ident, sub));
    }

    // 6-node barbell: two triangles bridged by edge 2-3; r = 2/3 -> n' = 2.
    // eps is measured over the nullspace + Fiedler subspace, the leading
    // modes coarsening is supposed to preserve.
    const Graph barbell = make_graph(
        6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
    const Laplacian lap = normalized_laplacian(barbell);
    const Eigen::MatrixXd sub = leading_subspace(lap, 2);
    double best = 1e300;
    // exhaustive search over all 31 bipartitions (node 0 fixed in block 0)
    for (int mask = 1; mask < 32; ++mask) {
        std::vector<int> assign(6, 0);
        for (int i = 1; i < 6; ++i)
            if (mask & (1 << (i - 1))) assign[i] = 1;
        const CoarseningOperator op =
            coarsening_operator(Partition::from_assign(assign));
        best = std::min(best, rsa_constant(lap, op, sub));
    }
    const Partition lv =
        coarsen(barbell, 2.0 / 3.0, CoarsenMethod::kLocalVariation, 2, 0);
    const CoarseningOperator lv_op = coarsening_operator(lv);
    const double lv_eps = rsa_constant(lap, lv_op, sub);

    res.pass = worst_identity <= 1e-14 && lv.n_prime == 2 &&
               lv_eps <= best + 1e-9;
    res.detail = fmt(
        "identity eps max = %.3e; barbell LV eps = %.9f vs exhaustive "
        "optimum %.9f",
        worst_identity, lv_eps, best);
    return res;
}

CheckResult check_basis_oracle_agreement() {
    CheckResult res{"basis_oracle_agreement", false, false, ""};
    Rng rng(505);
    double worst = 0.0;
    for (int t = 0; t < 24; ++t) {
        const int n = 8 + int(rng.uniform_int(43));  // 8..50
        const Graph g = random_er_graph(n, 0.2, rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const EigenSystem eig = dense_eig(lap);
        PolyBasis basis = cycle_basis(t, 10);
        if (basis.kind == BasisKind::kJacobi) {
            basis.jacobi_a = 0.5 + rng.uniform();
            basis.jacobi_b = 0.5 + rng.uniform();
        }
        const Eigen::MatrixXd x = random_matrix(rng, n, 3);
        const PropagatedStack stack = propagate_basis(lap, x, basis);
        for (int k = 0; k <= basis.K; ++k) {
            const auto f = [&](double lam) {
                return scalar_basis(basis, lam)[std::size_t(k)];
            };
            for (int j = 0; j < x.cols(); ++j) {
                const Eigen::VectorXd oracle =
                    exact_spectral_filter(eig, f, x.col(j));
                worst = std::max(
                    worst,
                    (stack.slices[std::size_t(k)].col(j) - oracle)
                        .cwiseAbs()
                        .maxCoeff());
            }
        }
    }
    res.pass = worst <= 1e-7;
    res.detail =
        fmt("max |recurrence - spectral oracle| = %.3e (tol 1e-7)", worst);
    return res;
}

CheckResult check_gradients() {
    CheckResult res{"gradient_check", false, false, ""};
    Rng rng(606);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int n = 10 + int(rng.uniform_int(6));
        Graph g = random_er_graph(n, 0.3, rng.next_u64());
        const int d = 3, c = 2 + int(rng.uniform_int(2));
        g.features = random_matrix(rng, n, d);
        std::vector<int> labels(n);
        for (int i = 0; i < n; ++i)
            labels[i] = int(rng.uniform_int(std::uint64_t(c)));
        g.labels = labels;
        g.num_classes = c;
        const Laplacian lap = normalized_laplacian(g);

        TrainConfig cfg;
        cfg.dropout = 0.0;
        cfg.K = 3;
        cfg.basis = cycle_basis(t, 3);
        cfg.hidden = (t % 2 == 0) ? std::vector<int>{} : std::vector<int>{5};
        cfg.order =
            (t % 4 < 2) ? DecoupledOrder::kMedium : DecoupledOrder::kLarge;
        cfg.seed = 900 + t;
        const Partition part = random_partition(rng, n, 4);
        CpfModel model(coarsening_operator(part), cfg, d, c);

        const PropagatedStack x_stack =
            propagate_basis(lap, *g.features, cfg.basis);
        std::vector<int> train_idx;
        for (int i = 0; i < n; i += 2) train_idx.push_back(i);

        // exercise the class-wise stage on half the instances
        if (t % 2 == 1) {
            ForwardCache warm =
                model.forward(*g.features, lap, false, nullptr, &x_stack);
            model.refresh_clusters(warm.z, cfg.seed);
            // move W off the identity so its gradient is generic
            for (auto& w : model.params().classwise.W)
                w += 0.1 * random_matrix(rng, int(w.rows()), int(w.cols()));
        }

        ModelParams grad = model.zero_like();
        const ForwardCache cache =
            model.forward(*g.features, lap, true, nullptr, &x_stack);
        model.loss_and_gradients(cache, lap, labels, train_idx, grad,
                                 &x_stack);
        const Eigen::VectorXd analytic = model.pack(grad);

        const Eigen::VectorXd v0 = model.pack(model.params());
        const double h = 1e-5;
        for (int i = 0; i < v0.size(); ++i) {
            Eigen::VectorXd v = v0;
            v[i] = v0[i] + h;
            model.unpack(v, model.params());
            const double lp = model.loss_only(
                model.forward(*g.features, lap, true, nullptr, &x_stack),
                labels, train_idx);
            v[i] = v0[i] - h;
            model.unpack(v, model.params());
            const double lm = model.loss_only(
                model.forward(*g.features, lap, true, nullptr, &x_stack),
                labels, train_idx);
            const double numeric = (lp - lm) / (2.0 * h);
            const double denom =
                std::max(1e-6, std::abs(analytic[i]) + std::abs(numeric));
            worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
        }
        model.unpack(v0, model.params());
    }
    res.pass = worst <= 1e-4;
    res.detail = fmt("max relative gradient error = %.3e (tol 1e-4)", worst);
    return res;
}

CheckResult check_separating_transforms() {
    CheckResult res{"separating_transforms", false, false, ""};
    Rng rng(707);
    int ok = 0;
    const int trials = 1000;
    double min_margin_w = 1e300, min_margin_pair = 1e300;
    for (int t = 0; t < trials; ++t) {
        const int c = 2 + int(rng.uniform_int(5));
        Eigen::VectorXd z1, z2, z3;
        for (;;) {
            z1 = random_vector(rng, c);
            z2 = random_vector(rng, c);
            z3 = random_vector(rng, c);
            if ((z1 - z2).norm() > (z1 - z3).norm()) std::swap(z2, z3);
            const Eigen::VectorXd u = z1 - z2, v = z1 - z3;
            const double d12 = u.norm(), d13 = v.norm();
            if (d12 < 1e-6 || d13 - d12 < 1e-6) continue;
            // variant 1 needs linearly independent difference vectors
            const double sine =
                (u * v.transpose() - v * u.transpose()).norm() / (d12 * d13);
            if (sine < 1e-6) continue;
            if (z3.norm() < 1e-6) continue;
            break;
        }
        const Eigen::MatrixXd w = construct_separating_W(z1, z2, z3);
        const double w12 = (w * (z1 - z2)).norm();
        const double w13 = (w * (z1 - z3)).norm();
        min_margin_w = std::min(min_margin_w, w12 - w13);

        const auto [w1, w2] = construct_separating_pair(z1, z2, z3);
        const double p12 = (w1 * z1 - w2 * z2).norm();
        const double p13 = (w1 * z1 - w2 * z3).norm();
        min_margin_pair = std::min(min_margin_pair, p12 - p13);
        if (w12 > w13 && p12 > p13) ++ok;
    }
    res.pass = ok == trials;
    res.detail = fmt(
        "%.0f/1000 strict reversals; min margins W = %.3e, pair = %.3e",
        double(ok), min_margin_w, min_margin_pair);
    return res;
}

CheckResult check_csbm_hybrid() {
    CheckResult res{"csbm_hybrid", false, false, ""};
    // Instance design: dense homophilic regime, sparse heterophilic regime,
    // moderately noisy features. With filter order 1 a single graph-wise
    // coefficient pair cannot serve both regimes (the one-hop aggregation
    // term needs opposite signs), while regime-aligned filters can; the
    // sparse heterophilic regime keeps coarsened blocks regime-coherent so
    // partition-wise filters transfer to held-out nodes.
    TrainConfig cfg;
    cfg.lr = 0.01;
    cfg.weight_decay = 0.0;
    cfg.dropout = 0.0;
    cfg.max_epochs = 500;
    cfg.patience = 500;
    cfg.K = 1;
    cfg.basis = PolyBasis{BasisKind::kChebyshev, 1};
    cfg.hidden = {};
    cfg.order = DecoupledOrder::kLarge;
    cfg.kmeans_first_epoch = cfg.max_epochs + 1;  // compare filters only

    int hybrid_wins = 0, partition_wins = 0;
    bool params_ok = true;
    double gw_mean = 0.0, hy_mean = 0.0, pw_mean = 0.0, nw_mean = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        CsbmParams params;
        params.sigma = 1.0;
        params.p0 = 0.3;
        params.q0 = 0.02;
        params.p1 = 0.002;
        params.q1 = 0.02;
        params.seed = 40 + std::uint64_t(s);
        cfg.seed = params.seed;
        const SeparabilityReport rep = hybrid_experiment(params, cfg);
        const auto& gw = rep.by_name("graph_wise");
        const auto& nw = rep.by_name("node_wise");
        const auto& hy = rep.by_name("hybrid");
        const auto& pw = rep.by_name("partition_wise");
        if (hy.test_acc >= gw.test_acc) ++hybrid_wins;
        if (pw.test_acc >= gw.test_acc) ++partition_wins;
        params_ok = params_ok && gw.filter_params < hy.filter_params &&
                    hy.filter_params < nw.filter_params;
        gw_mean += gw.test_acc / seeds;
        hy_mean += hy.test_acc / seeds;
        pw_mean += pw.test_acc / seeds;
        nw_mean += nw.test_acc / seeds;
    }
    res.pass = hybrid_wins >= 8 && partition_wins >= 8 && params_ok;
    std::ostringstream os;
    os << "hybrid >= graph-wise in " << hybrid_wins << "/10, partition-wise in "
       << partition_wins << "/10; mean acc gw=" << fmt("%.3f", gw_mean)
       << " hy=" << fmt("%.3f", hy_mean) << " pw=" << fmt("%.3f", pw_mean)
       << " nw=" << fmt("%.3f", nw_mean)
       << (params_ok ? "; param ordering ok" : "; PARAM ORDERING BROKEN");
    res.detail = os.str();
    return res;
}

CheckResult check_cora_reproduction(const std::string& data_dir) {
    CheckResult res{"cora_reproduction", false, false, ""};
    const std::string edges = data_dir + "/cora.edges";
    const std::string features = data_dir + "/cora.features";
    const std::string labels = data_dir + "/cora.labels";
    if (data_dir.empty() || !std::filesystem::exists(edges) ||
        !std::filesystem::exists(features) ||
        !std::filesystem::exists(labels)) {
        res.skipped = true;
        res.detail = "dataset not found (expected cora.edges / cora.features "
                     "/ cora.labels under --data-dir)";
        return res;
    }
    const Graph g = load_graph(edges, features, labels);
    const Laplacian lap = normalized_laplacian(g);
    const Partition part =
        coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 10, 0);

    TrainConfig cfg;
    cfg.lr = 0.01;
    cfg.weight_decay = 5e-4;
    cfg.dropout = 0.5;
    cfg.max_epochs = 1000;
    cfg.patience = 200;
    cfg.K = 10;
    cfg.basis = PolyBasis{BasisKind::kChebyshev, 10};
    cfg.hidden = {64};
    cfg.order = DecoupledOrder::kMedium;

    double mean = 0.0;
    const int runs = 10;
    for (int s = 0; s < runs; ++s) {
        cfg.seed = std::uint64_t(s);
        const Split split = make_split(g.n, 0.6, 0.2, std::uint64_t(s));
        CpfModel model(coarsening_operator(part), cfg,
                       int(g.features->cols()), g.num_classes);
        train(model, g, lap, split);
        mean += evaluate(model, g, lap, split.test) / runs;
    }
    res.pass = mean >= 0.85;
    res.detail = fmt("mean test accuracy %.4f over 10 runs (need >= 0.85)",
                     mean);
    return res;
}

namespace {

/// Median-of-repeats wall time of fn(), repeating until ~50 ms elapsed.
template <typename Fn>
double time_seconds(Fn&& fn) {
    using clock = std::chrono::steady_clock;
    double best = 1e300;
    double total = 0.0;
    int iters = 0;
    while (total < 0.05 || iters < 3) {
        const auto t0 = clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(clock::now() - t0).count();
        best = std::min(best, dt);
        total += dt;
        ++iters;
        if (iters >= 200) break;
    }
    return best;
}

}  // namespace

std::vector<BenchPoint> run_complexity_bench(int n, int K, int c,
                                             const std::vector<double>& probs,
                                             std::uint64_t seed) {
    std::vector<BenchPoint> points;
    Rng rng(seed ^ 0xbe9c);
    const Eigen::MatrixXd x = random_matrix(rng, n, c);
    for (double p : probs) {
        const Graph g = random_er_graph(n, p, seed + points.size());
        const Laplacian lap = normalized_laplacian(g);
        const Partition part =
            coarsen(g, 0.5, CoarsenMethod::kHeavyEdge, 10, 0);
        const CoarseningOperator op = coarsening_operator(part);
        PolyBasis basis{BasisKind::kChebyshev, K};
        const Eigen::MatrixXd theta =
            random_matrix(rng, part.n_prime, K + 1);
        const Eigen::MatrixXd theta_full = op.apply_Cplus(theta);

        BenchPoint pt;
        pt.n = n;
        pt.edges = g.num_edges();
        volatile double sink = 0.0;
        pt.t_partitionwise = time_seconds([&] {
            const PropagatedStack stack = propagate_basis(lap, x, basis);
            sink = sink + partitionwise_filter(op, theta, stack)(0, 0);
        });
        // literal per-node evaluation: no propagation sharing across nodes
        pt.t_nodewise_ref = time_seconds([&] {
            Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, c);
            for (int i = 0; i < n; ++i) {
                const PropagatedStack stack = propagate_basis(lap, x, basis);
                for (int k = 0; k <= K; ++k)
                    z.row(i) += theta_full(i, k) * stack.slices[k].row(i);
            }
            sink = sink + z(0, 0);
        });
        points.push_back(pt);
    }
    return points;
}

CheckResult check_complexity_shape() {
    CheckResult res{"complexity_shape", false, false, ""};
    // 4x edge sweep at fixed n
    const auto pts =
        run_complexity_bench(200, 8, 4, {0.05, 0.1, 0.15, 0.2}, 1);
    const auto& lo = pts.front();
    const auto& hi = pts.back();
    const double edge_ratio = double(hi.edges) / double(lo.edges);
    const double growth_pw =
        (hi.t_partitionwise / lo.t_partitionwise) / edge_ratio;
    const double slope_pw = (hi.t_partitionwise - lo.t_partitionwise) /
                            double(hi.edges - lo.edges);
    const double slope_nw = (hi.t_nodewise_ref - lo.t_nodewise_ref) /
                            double(hi.edges - lo.edges);
    const double slope_ratio = slope_nw / std::max(slope_pw, 1e-12);
    res.pass = growth_pw <= 1.5 && slope_ratio >= 3.0;
    res.detail = fmt(
        "partition-wise growth vs linear-in-E = %.3f (need <= 1.5); "
        "node-wise/partition-wise slope ratio = %.1f (need >= 3)",
        growth_pw, slope_ratio);
    return res;
}

CheckResult check_laplacian_properties() {
    CheckResult res{"laplacian_properties", false, false, ""};
    Rng rng(808);
    bool ok = true;
    std::string why;
    for (int t = 0; t < 20 && ok; ++t) {
        const int n = 2 + int(rng.uniform_int(39));
        const Graph g = random_er_graph(n, 0.2 * rng.uniform(),
                                        rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const Eigen::MatrixXd L = lap.L.dense();
        const Eigen::MatrixXd D = lap.delta.dense();
        if ((L - L.transpose()).cwiseAbs().maxCoeff() > 1e-14) {
            ok = false;
            why = "L not symmetric";
            break;
        }
        if ((D - (L - Eigen::MatrixXd::Identity(n, n))).cwiseAbs().maxCoeff() >
            1e-14) {
            ok = false;
            why = "delta != L - I";
            break;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
        if (es.eigenvalues().minCoeff() < -1e-10 ||
            es.eigenvalues().maxCoeff() > 2.0 + 1e-10) {
            ok = false;
            why = "spectrum outside [0, 2]";
            break;
        }
        // D^{1/2} 1 spans the nullspace restricted to non-isolated nodes
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = std::sqrt(lap.degree[i]);
        if ((L * v).cwiseAbs().maxCoeff() > 1e-12) {
            ok = false;
            why = "L D^{1/2} 1 != 0";
            break;
        }
        const auto deg = g.degrees();
        for (int i = 0; i < n; ++i)
            if (deg[i] == 0 && std::abs(L(i, i) - 1.0) > 0) {
                ok = false;
                why = "isolated row is not the identity row";
            }
    }
    res.pass = ok;
    res.detail = ok ? "symmetry, delta = L - I, spectrum in [0,2], nullspace, "
                      "isolated rows"
                    : why;
    return res;
}

CheckResult check_coarsening_operator_properties() {
    CheckResult res{"coarsening_operator_properties", false, false, ""};
    Rng rng(909);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int n = 3 + int(rng.uniform_int(30));
        const Partition part =
            random_partition(rng, n, 1 + int(rng.uniform_int(std::uint64_t(n))));
        const CoarseningOperator op = coarsening_operator(part);
        const Eigen::MatrixXd C = op.dense_C();
        const Eigen::MatrixXd Cp = op.dense_Cplus();
        const Eigen::MatrixXd Pi = op.dense_Pi();
        // Moore-Penrose identities for the closed-form pseudo-inverse
        worst = std::max(worst, (C * Cp * C - C).cwiseAbs().maxCoeff());
        worst = std::max(worst, (Cp * C * Cp - Cp).cwiseAbs().maxCoeff());
        worst = std::max(worst, (Pi * Pi - Pi).cwiseAbs().maxCoeff());
        worst = std::max(
            worst,
            (C * Cp - Eigen::MatrixXd::Identity(part.n_prime, part.n_prime))
                .cwiseAbs()
                .maxCoeff());
        // matrix-free application agrees with the dense forms
        const Eigen::MatrixXd x = random_matrix(rng, n, 3);
        worst = std::max(worst, (op.apply_C(x) - C * x).cwiseAbs().maxCoeff());
        worst = std::max(worst,
                         (op.apply_Pi(x) - Pi * x).cwiseAbs().maxCoeff());
        // Pi x is the block mean
        const Eigen::MatrixXd px = op.apply_Pi(x);
        for (int j = 0; j < part.n_prime; ++j) {
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(3);
            for (int i = 0; i < n; ++i)
                if (part.assign[i] == j) mean += x.row(i);
            mean /= double(part.sizes[j]);
            for (int i = 0; i < n; ++i)
                if (part.assign[i] == j)
                    worst = std::max(worst,
                                     (px.row(i) - mean).cwiseAbs().maxCoeff());
        }
    }
    res.pass = worst <= 1e-12;
    res.detail = fmt("max identity residual = %.3e (tol 1e-12)", worst);
    return res;
}

CheckResult check_rsa_monotonicity() {
    CheckResult res{"rsa_monotonicity", false, false, ""};
    // the sup over a nested chain of subspaces cannot decrease
    Rng rng(1010);
    double worst_drop = 0.0;
    for (int t = 0; t < 15; ++t) {
        const int n = 10 + int(rng.uniform_int(15));
        const Graph g = random_er_graph(n, 0.3, rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const Partition part = random_partition(rng, n, std::max(3, n / 3));
        const CoarseningOperator op = coarsening_operator(part);
        double prev = 0.0;
        for (int dim : {2, 4, 6, 8}) {
            const double eps =
                rsa_constant(lap, op, leading_subspace(lap, dim));
            worst_drop = std::max(worst_drop, prev - eps);
            prev = eps;
        }
    }
    res.pass = worst_drop <= 1e-9;
    res.detail = fmt(
        "max eps decrease when widening the subspace = %.3e (tol 1e-9)",
        worst_drop);
    return res;
}

CheckResult check_kmeans_properties() {
    CheckResult res{"kmeans_properties", false, false, ""};
    Rng rng(1111);
    bool ok = true;
    std::string why = "assignments, centroids, objective, planted recovery, "
                      "exhaustive oracle";
    for (int t = 0; t < 10 && ok; ++t) {
        // two well-separated planted blobs
        const int per = 8, dim = 2;
        Eigen::MatrixXd z(2 * per, dim);
        for (int i = 0; i < per; ++i) {
            z.row(i) << 5.0 + 0.1 * rng.normal(), 0.1 * rng.normal();
            z.row(per + i) << -5.0 + 0.1 * rng.normal(), 0.1 * rng.normal();
        }
        const KmeansResult km = kmeans(z, 2, 33 + t);
        // internal consistency
        double obj = 0.0;
        Eigen::MatrixXd cent = Eigen::MatrixXd::Zero(2, dim);
        Eigen::VectorXd cnt = Eigen::VectorXd::Zero(2);
        for (int i = 0; i < z.rows(); ++i) {
            if (km.assign[i] < 0 || km.assign[i] >= 2) {
                ok = false;
                why = "assignment out of range";
            }
            obj += (z.row(i) - km.centroids.row(km.assign[i])).squaredNorm();
            cent.row(km.assign[i]) += z.row(i);
            cnt[km.assign[i]] += 1.0;
        }
        if (!ok) break;
        for (int j = 0; j < 2; ++j)
            if (cnt[j] > 0 &&
                (cent.row(j) / cnt[j] - km.centroids.row(j))
                        .cwiseAbs()
                        .maxCoeff() > 1e-9) {
                ok = false;
                why = "centroid is not the member mean";
            }
        if (std::abs(obj - km.objective) > 1e-9) {
            ok = false;
            why = "reported objective mismatch";
        }
        // planted structure: the two blobs must not be split
        for (int i = 1; i < per && ok; ++i) {
            if (km.assign[i] != km.assign[0] ||
                km.assign[per + i] != km.assign[per]) {
                ok = false;
                why = "planted blobs split";
            }
        }
        if (ok && km.assign[0] == km.assign[per]) {
            ok = false;
            why = "planted blobs merged";
        }
    }
    if (ok) {
        // exhaustive oracle on a tiny instance
        Rng r2(1212);
        Eigen::MatrixXd z = random_matrix(r2, 6, 2);
        z.topRows(3).array() += 4.0;  // separated so Lloyd finds the optimum
        const KmeansResult km = kmeans(z, 2, 1);
        double best = 1e300;
        for (int mask = 1; mask < 32; ++mask) {
            double obj = 0.0;
            for (int blk = 0; blk < 2; ++blk) {
                Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(2);
                int cnt = 0;
                for (int i = 0; i < 6; ++i) {
                    const int b = i == 0 ? 0 : ((mask >> (i - 1)) & 1);
                    if (b == blk) {
                        mean += z.row(i);
                        ++cnt;
                    }
                }
                if (cnt == 0) continue;
                mean /= cnt;
                for (int i = 0; i < 6; ++i) {
                    const int b = i == 0 ? 0 : ((mask >> (i - 1)) & 1);
                    if (b == blk) obj += (z.row(i) - mean).squaredNorm();
                }
            }
            best = std::min(best, obj);
        }
        if (km.objective > best + 1e-9) {
            ok = false;
            why = fmt("objective %.6f above exhaustive optimum %.6f",
                      km.objective, best);
        }
    }
    res.pass = ok;
    res.detail = why;
    return res;
}

CheckResult check_filter_linearity() {
    CheckResult res{"filter_linearity", false, false, ""};
    Rng rng(1313);
    double worst = 0.0;
    for (int t = 0; t < 12; ++t) {
        const int n = 8 + int(rng.uniform_int(25));
        const Graph g = random_er_graph(n, 0.25, rng.next_u64());
        const Laplacian lap = normalized_laplacian(g);
        const PolyBasis basis = cycle_basis(t, 5);
        const Partition part = random_partition(rng, n, std::max(2, n / 3));
        const CoarseningOperator op = coarsening_operator(part);
        const Eigen::MatrixXd x1 = random_matrix(rng, n, 2);
        const Eigen::MatrixXd x2 = random_matrix(rng, n, 2);
        const double a = rng.normal(), b = rng.normal();
        const Eigen::MatrixXd theta =
            random_matrix(rng, part.n_prime, basis.K + 1);
        const Eigen::MatrixXd z_mix = partitionwise_filter(
            op, theta, propagate_basis(lap, a * x1 + b * x2, basis));
        const Eigen::MatrixXd z_sep =
            a * partitionwise_filter(op, theta,
                                     propagate_basis(lap, x1, basis)) +
            b * partitionwise_filter(op, theta,
                                     propagate_basis(lap, x2, basis));
        worst = std::max(worst, (z_mix - z_sep).cwiseAbs().maxCoeff());

        // theta = e_0 is the identity filter for bases with T_0 = 1
        if (basis.kind != BasisKind::kBernstein) {
            Eigen::VectorXd e0 = Eigen::VectorXd::Zero(basis.K + 1);
            e0[0] = 1.0;
            const Eigen::MatrixXd z_id = graphwise_filter(
                e0, propagate_basis(lap, x1, basis));
            worst = std::max(worst, (z_id - x1).cwiseAbs().maxCoeff());
        }
    }
    res.pass = worst <= 1e-10;
    res.detail = fmt("max linearity/identity residual = %.3e (tol 1e-10)",
                     worst);
    return res;
}

CheckResult check_determinism() {
    CheckResult res{"determinism", false, false, ""};
    bool ok = true;
    std::string why = "coarsen, csbm, kmeans, training reproducible";
    const Graph g = random_er_graph(40, 0.2, 77);
    const Partition p1 = coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 10, 3);
    const Partition p2 = coarsen(g, 0.5, CoarsenMethod::kLocalVariation, 10, 3);
    if (p1.assign != p2.assign) {
        ok = false;
        why = "coarsen not deterministic";
    }
    CsbmParams cp;
    cp.n = 60;
    cp.seed = 5;
    const CsbmGraph c1 = csbm_generate(cp);
    const CsbmGraph c2 = csbm_generate(cp);
    if (ok && (c1.graph.edges != c2.graph.edges ||
               *c1.graph.labels != *c2.graph.labels ||
               (*c1.graph.features - *c2.graph.features)
                       .cwiseAbs()
                       .maxCoeff() != 0.0)) {
        ok = false;
        why = "csbm not deterministic";
    }
    Rng rng(1414);
    const Eigen::MatrixXd z = random_matrix(rng, 30, 3);
    if (ok && kmeans(z, 4, 9).assign != kmeans(z, 4, 9).assign) {
        ok = false;
        why = "kmeans not deterministic";
    }
    if (ok) {
        Graph t = random_er_graph(24, 0.3, 11);
        Rng fr(1515);
        t.features = random_matrix(fr, 24, 3);
        std::vector<int> labels(24);
        for (int i = 0; i < 24; ++i) labels[i] = i % 2;
        t.labels = labels;
        t.num_classes = 2;
        const Laplacian lap = normalized_laplacian(t);
        TrainConfig cfg;
        cfg.max_epochs = 30;
        cfg.patience = 30;
        cfg.K = 3;
        cfg.basis = PolyBasis{BasisKind::kChebyshev, 3};
        cfg.kmeans_first_epoch = 10;
        cfg.kmeans_refresh = 5;
        cfg.seed = 2;
        const Split split = make_split(24, 0.5, 0.25, 8);
        const Partition part =
            coarsen(t, 0.5, CoarsenMethod::kLocalVariation, 10, 0);
        auto run = [&]() {
            CpfModel m(coarsening_operator(part), cfg, 3, 2);
            train(m, t, lap, split);
            return m.pack(m.params());
        };
        const Eigen::VectorXd a = run(), b = run();
        if (a.size() != b.size() || (a - b).cwiseAbs().maxCoeff() != 0.0) {
            ok = false;
            why = "training not bit-reproducible";
        }
    }
    res.pass = ok;
    res.detail = why;
    return res;
}

std::vector<CheckResult> run_verification(const std::string& data_dir) {
    std::vector<CheckResult> out;
    out.push_back(check_laplacian_properties());
    out.push_back(check_coarsening_operator_properties());
    out.push_back(check_basis_oracle_agreement());
    out.push_back(check_filter_linearity());
    out.push_back(check_partition_filter_equivalence());
    out.push_back(check_reduction_extremes());
    out.push_back(check_rsa_identity_and_barbell());
    out.push_back(check_rsa_monotonicity());
    out.push_back(check_propagation_bound());
    out.push_back(check_bound_subspace_sweep());
    out.push_back(check_kmeans_properties());
    out.push_back(check_gradients());
    out.push_back(check_separating_transforms());
    out.push_back(check_determinism());
    out.push_back(check_csbm_hybrid());
    out.push_back(check_cora_reproduction(data_dir));
    return out;
}

}  // namespace pf
