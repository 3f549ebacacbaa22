#include "partfilt/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "partfilt/errors.hpp"

namespace pf {

namespace {

Eigen::MatrixXd glorot(int rows, int cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / double(rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            w(i, j) = (2.0 * rng.uniform() - 1.0) * limit;
    return w;
}

Eigen::RowVectorXd softmax_row(const Eigen::RowVectorXd& v) {
    Eigen::RowVectorXd e = (v.array() - v.maxCoeff()).exp();
    return e / e.sum();
}

int argmax_low_tie(const Eigen::RowVectorXd& v) {
    int best = 0;
    for (int j = 1; j < v.size(); ++j)
        if (v[j] > v[best]) best = j;
    return best;
}

std::uint64_t fnv1a(const std::vector<int>& v) {
    std::uint64_t h = 14695981039346656037ULL;
    for (int x : v) {
        for (int b = 0; b < 4; ++b) {
            h ^= std::uint64_t((x >> (8 * b)) & 0xff);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

}  // namespace

CpfModel::CpfModel(CoarseningOperator op, TrainConfig config, int in_dim,
                   int num_classes)
    : op_(std::move(op)), config_(std::move(config)),
      num_classes_(num_classes) {
    if (num_classes_ < 1) throw ArgumentError("CpfModel: need >= 1 class");
    Rng rng(config_.seed);
    std::vector<int> dims;
    dims.push_back(in_dim);
    for (int h : config_.hidden) dims.push_back(h);
    dims.push_back(num_classes_);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        params_.mlp.weights.push_back(glorot(dims[l], dims[l + 1], rng));
        params_.mlp.biases.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
    }
    // Theta: identity filter plus small noise, seeded.
    params_.theta =
        Eigen::MatrixXd::Zero(op_.part.n_prime, config_.basis.K + 1);
    for (int i = 0; i < params_.theta.rows(); ++i) {
        params_.theta(i, 0) = 1.0;
        for (int k = 0; k <= config_.basis.K; ++k)
            params_.theta(i, k) += 0.01 * rng.normal();
    }
    params_.classwise.W.assign(
        num_classes_,
        Eigen::MatrixXd::Identity(num_classes_, num_classes_));
    cluster_assign_.assign(op_.part.n(), 0);
}

ForwardCache CpfModel::forward(const Eigen::MatrixXd& x, const Laplacian& lap,
                               bool training, Rng* rng,
                               const PropagatedStack* x_stack) const {
    ForwardCache cache;
    cache.input = x;
    const int layers = params_.mlp.num_layers();
    const double keep = 1.0 - (training ? config_.dropout : 0.0);

    auto mlp_forward = [&](const Eigen::MatrixXd& in) {
        Eigen::MatrixXd a = in;
        cache.post_act.push_back(a);
        for (int l = 0; l < layers; ++l) {
            Eigen::MatrixXd pre =
                (a * params_.mlp.weights[l]).rowwise() +
                params_.mlp.biases[l].transpose();
            cache.pre_act.push_back(pre);
            if (l + 1 == layers) {
                a = pre;
            } else {
                a = pre.cwiseMax(0.0);
                Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(a.rows(), a.cols());
                if (keep < 1.0) {
                    for (int i = 0; i < a.rows(); ++i)
                        for (int j = 0; j < a.cols(); ++j)
                            mask(i, j) = (rng && rng->uniform() < keep)
                                             ? 1.0 / keep
                                             : (rng ? 0.0 : 1.0);
                    a = a.cwiseProduct(mask);
                }
                cache.drop_mask.push_back(mask);
                cache.post_act.push_back(a);
            }
        }
        return a;
    };

    if (config_.order == DecoupledOrder::kMedium) {
        const Eigen::MatrixXd h = mlp_forward(x);
        cache.stack = propagate_basis(lap, h, config_.basis);
        cache.z = partitionwise_filter(op_, params_.theta, cache.stack);
    } else {
        if (!x_stack)
            throw ArgumentError(
                "large-order forward requires a precomputed feature stack");
        const Eigen::MatrixXd filtered =
            partitionwise_filter(op_, params_.theta, *x_stack);
        cache.z = mlp_forward(filtered);
    }
    cache.logits = classwise_active_
                       ? classwise_filter(cache.z, cluster_assign_,
                                          params_.classwise)
                       : cache.z;
    return cache;
}

double CpfModel::loss_only(const ForwardCache& cache,
                           const std::vector<int>& labels,
                           const std::vector<int>& train_idx) const {
    if (train_idx.empty()) throw ArgumentError("empty train split");
    double loss = 0.0;
    for (int i : train_idx) {
        const Eigen::RowVectorXd p = softmax_row(cache.logits.row(i));
        loss -= std::log(std::max(p[labels[i]], 1e-300));
    }
    return loss / double(train_idx.size());
}

double CpfModel::loss_and_gradients(const ForwardCache& cache,
                                    const Laplacian& lap,
                                    const std::vector<int>& labels,
                                    const std::vector<int>& train_idx,
                                    ModelParams& grad,
                                    const PropagatedStack* x_stack) const {
    if (train_idx.empty()) throw ArgumentError("empty train split");
    const int n = int(cache.logits.rows());
    const int c = num_classes_;
    const double inv_m = 1.0 / double(train_idx.size());

    double loss = 0.0;
    Eigen::MatrixXd g_logits = Eigen::MatrixXd::Zero(n, c);
    for (int i : train_idx) {
        const Eigen::RowVectorXd p = softmax_row(cache.logits.row(i));
        loss -= std::log(std::max(p[labels[i]], 1e-300));
        Eigen::RowVectorXd gi = p;
        gi[labels[i]] -= 1.0;
        g_logits.row(i) = gi * inv_m;
    }
    loss *= inv_m;

    // class-wise stage
    Eigen::MatrixXd g_z;
    if (classwise_active_) {
        g_z = Eigen::MatrixXd::Zero(n, c);
        for (int i = 0; i < n; ++i) {
            const int j = cluster_assign_[i];
            grad.classwise.W[j] +=
                cache.z.row(i).transpose() * g_logits.row(i);
            g_z.row(i) = g_logits.row(i) * params_.classwise.W[j].transpose();
        }
    } else {
        g_z = g_logits;
    }

    const int layers = params_.mlp.num_layers();
    auto mlp_backward = [&](const Eigen::MatrixXd& g_out) {
        Eigen::MatrixXd g_pre = g_out;
        for (int l = layers - 1; l >= 0; --l) {
            grad.mlp.weights[l] += cache.post_act[l].transpose() * g_pre;
            grad.mlp.biases[l] += g_pre.colwise().sum().transpose();
            Eigen::MatrixXd g_a =
                g_pre * params_.mlp.weights[l].transpose();
            if (l > 0) {
                g_a = g_a.cwiseProduct(cache.drop_mask[l - 1]);
                g_pre = g_a.cwiseProduct(
                    (cache.pre_act[l - 1].array() > 0.0).cast<double>().matrix());
            } else {
                g_pre = g_a;  // gradient w.r.t. the MLP input
            }
        }
        return g_pre;
    };

    const auto& assign = op_.part.assign;
    auto theta_grad_from = [&](const Eigen::MatrixXd& g_filtered,
                               const PropagatedStack& stack) {
        for (int k = 0; k <= stack.K(); ++k)
            for (int i = 0; i < n; ++i)
                grad.theta(assign[i], k) +=
                    g_filtered.row(i).dot(stack.slices[k].row(i));
    };

    if (config_.order == DecoupledOrder::kMedium) {
        theta_grad_from(g_z, cache.stack);
        std::vector<Eigen::MatrixXd> g_slices(cache.stack.K() + 1);
        for (int k = 0; k <= cache.stack.K(); ++k) {
            g_slices[k] = g_z;
            for (int i = 0; i < n; ++i)
                g_slices[k].row(i) *= params_.theta(assign[i], k);
        }
        const Eigen::MatrixXd g_h =
            propagate_basis_adjoint(lap, config_.basis, g_slices);
        mlp_backward(g_h);
    } else {
        if (!x_stack)
            throw ArgumentError(
                "loss_and_gradients(large): missing precomputed stack");
        const Eigen::MatrixXd g_filtered = mlp_backward(g_z);
        theta_grad_from(g_filtered, *x_stack);
    }
    return loss;
}

void CpfModel::refresh_clusters(const Eigen::MatrixXd& z, std::uint64_t seed) {
    const KmeansResult km = kmeans(z, num_classes_, seed);
    cluster_assign_ = km.assign;
    classwise_active_ = true;
}

void CpfModel::set_cluster_assign(std::vector<int> assign) {
    if (static_cast<int>(assign.size()) != op_.part.n())
        throw ShapeError("cluster assignment length != n");
    cluster_assign_ = std::move(assign);
    classwise_active_ = true;
}

ModelParams CpfModel::zero_like() const {
    ModelParams g;
    for (const auto& w : params_.mlp.weights)
        g.mlp.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    for (const auto& b : params_.mlp.biases)
        g.mlp.biases.push_back(Eigen::VectorXd::Zero(b.size()));
    g.theta = Eigen::MatrixXd::Zero(params_.theta.rows(), params_.theta.cols());
    for (const auto& w : params_.classwise.W)
        g.classwise.W.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    return g;
}

Eigen::VectorXd CpfModel::pack(const ModelParams& p) const {
    Eigen::VectorXd v(num_parameters());
    std::int64_t at = 0;
    auto put = [&](const Eigen::MatrixXd& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) v[at++] = m(i, j);
    };
    for (std::size_t l = 0; l < p.mlp.weights.size(); ++l) {
        put(p.mlp.weights[l]);
        put(p.mlp.biases[l]);
    }
    put(p.theta);
    for (const auto& w : p.classwise.W) put(w);
    return v;
}

void CpfModel::unpack(const Eigen::VectorXd& v, ModelParams& p) const {
    std::int64_t at = 0;
    auto get = [&](Eigen::MatrixXd& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m(i, j) = v[at++];
    };
    for (std::size_t l = 0; l < p.mlp.weights.size(); ++l) {
        get(p.mlp.weights[l]);
        Eigen::MatrixXd b = p.mlp.biases[l];
        get(b);
        p.mlp.biases[l] = b;
    }
    get(p.theta);
    for (auto& w : p.classwise.W) get(w);
}

Eigen::VectorXd CpfModel::decay_mask() const {
    Eigen::VectorXd mask(num_parameters());
    std::int64_t at = 0;
    for (std::size_t l = 0; l < params_.mlp.weights.size(); ++l) {
        const auto& w = params_.mlp.weights[l];
        for (int i = 0; i < w.size(); ++i) mask[at++] = 1.0;
        for (int i = 0; i < params_.mlp.biases[l].size(); ++i) mask[at++] = 0.0;
    }
    for (int i = 0; i < params_.theta.size(); ++i) mask[at++] = 1.0;
    for (const auto& w : params_.classwise.W)
        for (int i = 0; i < w.size(); ++i) mask[at++] = 1.0;
    return mask;
}

std::int64_t CpfModel::num_parameters() const {
    std::int64_t total = 0;
    for (std::size_t l = 0; l < params_.mlp.weights.size(); ++l)
        total += params_.mlp.weights[l].size() + params_.mlp.biases[l].size();
    total += params_.theta.size();
    for (const auto& w : params_.classwise.W) total += w.size();
    return total;
}

Eigen::MatrixXd classwise_filter(const Eigen::MatrixXd& z,
                                 const std::vector<int>& assign,
                                 const ClasswiseParams& params) {
    if (static_cast<int>(assign.size()) != z.rows())
        throw ShapeError("classwise_filter: assignment length != rows");
    Eigen::MatrixXd out(z.rows(), z.cols());
    for (int i = 0; i < z.rows(); ++i) {
        const int j = assign[i];
        if (j < 0 || j >= static_cast<int>(params.W.size()))
            throw IndexError("classwise_filter: cluster id out of range");
        out.row(i) = z.row(i) * params.W[j];
    }
    return out;
}

namespace {

/// Completes the given (independent) vectors to a basis of R^c using
/// standard basis vectors, picked by ascending coordinate.
Eigen::MatrixXd complete_basis(std::vector<Eigen::VectorXd> vecs, int c) {
    Eigen::MatrixXd basis(c, c);
    int have = 0;
    Eigen::MatrixXd ortho(c, c);  // orthonormalized copies for rank tests
    auto try_add = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd r = v;
        for (int j = 0; j < have; ++j) r -= ortho.col(j).dot(v) * ortho.col(j);
        if (r.norm() <= 1e-10 * std::max(v.norm(), 1.0)) return false;
        basis.col(have) = v;
        ortho.col(have) = r / r.norm();
        ++have;
        return true;
    };
    for (const auto& v : vecs)
        if (!try_add(v))
            throw ArgumentError("separating transform: degenerate directions");
    for (int i = 0; i < c && have < c; ++i)
        try_add(Eigen::VectorXd::Unit(c, i));
    return basis;
}

}  // namespace

Eigen::MatrixXd construct_separating_W(const Eigen::VectorXd& z1,
                                       const Eigen::VectorXd& z2,
                                       const Eigen::VectorXd& z3) {
    const int c = int(z1.size());
    const Eigen::VectorXd u = z1 - z2, v = z1 - z3;
    const double d12 = u.norm(), d13 = v.norm();
    if (!(d12 < d13))
        throw ArgumentError("construct_separating_W: requires d12 < d13");
    if (d12 <= 0.0)
        throw ArgumentError("construct_separating_W: requires d12 > 0");
    // collinear u, v cannot have their length ratio reversed linearly
    const double cross = (u * v.transpose() - v * u.transpose()).norm();
    if (cross <= 1e-12 * d12 * d13)
        throw ArgumentError(
            "construct_separating_W: u and v collinear; no single W exists");

    const double alpha = 1.0;
    const double beta = d12 / (2.0 * d13);
    const Eigen::MatrixXd basis = complete_basis({u, v}, c);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(c);
    scale[0] = alpha;
    scale[1] = beta;
    // W maps u -> alpha u, v -> beta v, completion -> itself
    return basis * scale.asDiagonal() * basis.inverse();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> construct_separating_pair(
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
    const Eigen::VectorXd& z3) {
    const int c = int(z1.size());
    const double d12 = (z1 - z2).norm(), d13 = (z1 - z3).norm();
    if (!(d12 < d13))
        throw ArgumentError("construct_separating_pair: requires d12 < d13");
    if (z3.norm() <= 0.0)
        throw ArgumentError("construct_separating_pair: z3 must be nonzero");
    const Eigen::MatrixXd w1 = Eigen::MatrixXd::Identity(c, c);
    const Eigen::MatrixXd basis = complete_basis({z3}, c);
    // W2 z3 = z1, remaining basis directions -> 0
    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(c, c);
    targets.col(0) = z1;
    const Eigen::MatrixXd w2 = targets * basis.inverse();
    return {w1, w2};
}

Split make_split(int n, double train_frac, double val_frac,
                 std::uint64_t seed) {
    if (train_frac < 0 || val_frac < 0 || train_frac + val_frac > 1.0)
        throw ArgumentError("make_split: bad fractions");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (int i = n - 1; i > 0; --i)
        std::swap(idx[i], idx[rng.uniform_int(std::uint64_t(i) + 1)]);
    Split s;
    const int n_train = std::min(n, int(std::round(train_frac * n)));
    const int n_val = std::min(n - n_train, int(std::round(val_frac * n)));
    s.train.assign(idx.begin(), idx.begin() + n_train);
    s.val.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
    s.test.assign(idx.begin() + n_train + n_val, idx.end());
    return s;
}

namespace {

double accuracy(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                const std::vector<int>& idx) {
    if (idx.empty()) return 0.0;
    int hit = 0;
    for (int i : idx)
        if (argmax_low_tie(logits.row(i)) == labels[i]) ++hit;
    return double(hit) / double(idx.size());
}

}  // namespace

TrainResult train(CpfModel& model, const Graph& g, const Laplacian& lap,
                  const Split& split, const PropagatedStack* x_stack) {
    if (!g.labels) throw ArgumentError("train: graph has no labels");
    if (!g.features) throw ArgumentError("train: graph has no features");
    if (split.train.empty()) throw ArgumentError("train: empty train split");
    const auto& labels = *g.labels;
    const auto& cfg = model.config();
    const Eigen::MatrixXd& x = *g.features;

    Rng rng(cfg.seed ^ 0xa5a5a5a5ULL);
    const Eigen::VectorXd mask = model.decay_mask();
    Eigen::VectorXd theta_flat = model.pack(model.params());
    Eigen::VectorXd m = Eigen::VectorXd::Zero(theta_flat.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(theta_flat.size());
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

    TrainResult result;
    result.best_val_acc = -1.0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const bool due_first = epoch == cfg.kmeans_first_epoch;
        const bool due_refresh =
            model.classwise_active() && cfg.kmeans_refresh > 0 &&
            epoch > cfg.kmeans_first_epoch &&
            (epoch - cfg.kmeans_first_epoch) % cfg.kmeans_refresh == 0;
        if (due_first || due_refresh) {
            const ForwardCache det =
                model.forward(x, lap, false, nullptr, x_stack);
            model.refresh_clusters(det.z, cfg.seed + std::uint64_t(epoch));
        }

        ForwardCache cache = model.forward(x, lap, true, &rng, x_stack);
        ModelParams grad = model.zero_like();
        const double loss = model.loss_and_gradients(
            cache, lap, labels, split.train, grad, x_stack);
        if (!std::isfinite(loss))
            throw NumericError("train: NaN loss at epoch " +
                               std::to_string(epoch));

        if (cfg.lr > 0.0) {
            Eigen::VectorXd gvec = model.pack(grad);
            gvec += cfg.weight_decay * mask.cwiseProduct(theta_flat);
            m = b1 * m + (1.0 - b1) * gvec;
            v = b2 * v + (1.0 - b2) * gvec.cwiseProduct(gvec);
            const double bc1 = 1.0 - std::pow(b1, epoch);
            const double bc2 = 1.0 - std::pow(b2, epoch);
            theta_flat -=
                (cfg.lr / bc1) *
                m.cwiseQuotient(((v / bc2).cwiseSqrt().array() + eps).matrix());
            model.unpack(theta_flat, model.params());
        }

        const ForwardCache eval_cache =
            model.forward(x, lap, false, nullptr, x_stack);
        EpochLog log;
        log.epoch = epoch;
        log.train_loss = loss;
        log.train_acc = accuracy(eval_cache.logits, labels, split.train);
        log.val_acc = accuracy(eval_cache.logits, labels, split.val);
        result.log.push_back(log);

        if (log.val_acc > result.best_val_acc) {
            result.best_val_acc = log.val_acc;
            result.best_epoch = epoch;
            result.best_params = model.params();
            result.best_cluster_assign = model.cluster_assign();
            result.best_classwise_active = model.classwise_active();
        } else if (epoch - result.best_epoch >= cfg.patience) {
            break;
        }
    }

    // restore the best-validation checkpoint
    model.params() = result.best_params;
    if (result.best_classwise_active)
        model.set_cluster_assign(result.best_cluster_assign);
    return result;
}

double evaluate(const CpfModel& model, const Graph& g, const Laplacian& lap,
                const std::vector<int>& idx, const PropagatedStack* x_stack) {
    if (!g.labels) throw ArgumentError("evaluate: graph has no labels");
    if (!g.features) throw ArgumentError("evaluate: graph has no features");
    const ForwardCache cache =
        model.forward(*g.features, lap, false, nullptr, x_stack);
    return accuracy(cache.logits, *g.labels, idx);
}

namespace {
constexpr char kModelMagic[4] = {'P', 'F', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
    const std::uint64_t r = m.rows(), c = m.cols();
    out.write(reinterpret_cast<const char*>(&r), 8);
    out.write(reinterpret_cast<const char*>(&c), 8);
    for (std::uint64_t i = 0; i < r; ++i)
        for (std::uint64_t j = 0; j < c; ++j) {
            const double v = m(int(i), int(j));
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

Eigen::MatrixXd read_matrix(std::ifstream& in, const std::string& path) {
    std::uint64_t r = 0, c = 0;
    in.read(reinterpret_cast<char*>(&r), 8);
    in.read(reinterpret_cast<char*>(&c), 8);
    if (!in) throw ParseError(path + ": truncated checkpoint");
    Eigen::MatrixXd m(static_cast<int>(r), static_cast<int>(c));
    for (std::uint64_t i = 0; i < r; ++i)
        for (std::uint64_t j = 0; j < c; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            if (!in) throw ParseError(path + ": truncated checkpoint");
            m(int(i), int(j)) = v;
        }
    return m;
}

}  // namespace

void save_checkpoint(const CpfModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write checkpoint: " + path);
    out.write(kModelMagic, 4);
    out.write(reinterpret_cast<const char*>(&kModelVersion), 4);
    const std::uint64_t part_hash = fnv1a(model.op().part.assign);
    out.write(reinterpret_cast<const char*>(&part_hash), 8);
    const auto& p = model.params();
    const std::uint32_t layers = p.mlp.num_layers();
    out.write(reinterpret_cast<const char*>(&layers), 4);
    for (std::uint32_t l = 0; l < layers; ++l) {
        write_matrix(out, p.mlp.weights[l]);
        write_matrix(out, p.mlp.biases[l]);
    }
    write_matrix(out, p.theta);
    const std::uint32_t nw = std::uint32_t(p.classwise.W.size());
    out.write(reinterpret_cast<const char*>(&nw), 4);
    for (const auto& w : p.classwise.W) write_matrix(out, w);
    const std::uint8_t active = model.classwise_active() ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&active), 1);
    const std::uint64_t n = model.cluster_assign().size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    for (int a : model.cluster_assign()) {
        const std::int32_t v = a;
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
}

void load_checkpoint(CpfModel& model, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kModelMagic, 4) != 0)
        throw ParseError(path + ": not a PFMD checkpoint");
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (version != kModelVersion)
        throw ParseError(path + ": unsupported checkpoint version");
    std::uint64_t part_hash = 0;
    in.read(reinterpret_cast<char*>(&part_hash), 8);
    if (part_hash != fnv1a(model.op().part.assign))
        throw ArgumentError(path +
                            ": checkpoint was trained on a different partition");
    auto& p = model.params();
    std::uint32_t layers = 0;
    in.read(reinterpret_cast<char*>(&layers), 4);
    if (layers != std::uint32_t(p.mlp.num_layers()))
        throw ShapeError(path + ": MLP layer count mismatch");
    for (std::uint32_t l = 0; l < layers; ++l) {
        p.mlp.weights[l] = read_matrix(in, path);
        p.mlp.biases[l] = read_matrix(in, path);
    }
    p.theta = read_matrix(in, path);
    std::uint32_t nw = 0;
    in.read(reinterpret_cast<char*>(&nw), 4);
    if (nw != p.classwise.W.size())
        throw ShapeError(path + ": class-wise transform count mismatch");
    for (auto& w : p.classwise.W) w = read_matrix(in, path);
    std::uint8_t active = 0;
    in.read(reinterpret_cast<char*>(&active), 1);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    std::vector<int> assign(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::int32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        assign[i] = v;
    }
    if (!in) throw ParseError(path + ": truncated checkpoint");
    if (active) model.set_cluster_assign(assign);
}

void save_metrics_csv(const std::vector<EpochLog>& log,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write metrics: " + path);
    out << "epoch,train_loss,train_acc,val_acc\n";
    out.precision(17);
    for (const auto& e : log)
        out << e.epoch << "," << e.train_loss << "," << e.train_acc << ","
            << e.val_acc << "\n";
}

}  // namespace pf
