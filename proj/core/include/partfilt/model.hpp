#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "partfilt/coarsen.hpp"
#include "partfilt/filtering.hpp"
#include "partfilt/graph.hpp"
#include "partfilt/kmeans.hpp"
#include "partfilt/rng.hpp"

namespace pf {

/// MLP H = W_L(...relu(W_1 x + b_1)...) + b_L with optional dropout on
/// hidden activations.
struct MlpParams {
    std::vector<Eigen::MatrixXd> weights;  // in x out
    std::vector<Eigen::VectorXd> biases;

    int num_layers() const { return static_cast<int>(weights.size()); }
    int in_dim() const { return int(weights.front().rows()); }
    int out_dim() const { return int(weights.back().cols()); }
};

/// One linear transform per k-means cluster (Eq.-7-style refinement).
struct ClasswiseParams {
    std::vector<Eigen::MatrixXd> W;  // c matrices, c_out x c_out
};

enum class DecoupledOrder {
    kMedium,  // H = MLP(X), then filtering
    kLarge,   // H = FILTERING(X), then MLP
};

struct TrainConfig {
    double lr = 0.01;
    double weight_decay = 5e-4;
    double dropout = 0.0;
    int max_epochs = 1000;
    int patience = 200;
    int K = 10;
    double r = 0.5;
    PolyBasis basis{BasisKind::kChebyshev, 10};
    int kmeans_refresh = 10;     // epochs between reassignments
    int kmeans_first_epoch = 20; // identity class-wise step before this
    std::vector<int> hidden;     // hidden layer widths
    DecoupledOrder order = DecoupledOrder::kMedium;
    std::uint64_t seed = 0;
};

struct ModelParams {
    MlpParams mlp;
    Eigen::MatrixXd theta;  // n' x (K+1), 1/|V_i| factor absorbed
    ClasswiseParams classwise;
};

struct ForwardCache {
    Eigen::MatrixXd input;                  // X
    std::vector<Eigen::MatrixXd> pre_act;   // per layer, before relu
    std::vector<Eigen::MatrixXd> post_act;  // per layer, after relu+dropout
    std::vector<Eigen::MatrixXd> drop_mask;
    PropagatedStack stack;   // basis terms of the filtered tensor
    Eigen::MatrixXd z;       // pre-classwise embeddings
    Eigen::MatrixXd logits;  // final output
};

class CpfModel {
  public:
    CpfModel(CoarseningOperator op, TrainConfig config, int in_dim,
             int num_classes);

    /// Forward pass; dropout applied only when `training` is true.
    /// For the large order, pass the precomputed stack of X.
    ForwardCache forward(const Eigen::MatrixXd& x, const Laplacian& lap,
                         bool training, Rng* rng,
                         const PropagatedStack* x_stack = nullptr) const;

    /// Analytic gradients of mean softmax cross-entropy over train_idx.
    /// Returns the loss; gradients are written into `grad`.
    double loss_and_gradients(const ForwardCache& cache, const Laplacian& lap,
                              const std::vector<int>& labels,
                              const std::vector<int>& train_idx,
                              ModelParams& grad,
                              const PropagatedStack* x_stack = nullptr) const;

    double loss_only(const ForwardCache& cache, const std::vector<int>& labels,
                     const std::vector<int>& train_idx) const;

    /// Recomputes the k-means clustering on the given embeddings and
    /// activates the class-wise stage.
    void refresh_clusters(const Eigen::MatrixXd& z, std::uint64_t seed);

    ModelParams& params() { return params_; }
    const ModelParams& params() const { return params_; }
    ModelParams zero_like() const;
    const CoarseningOperator& op() const { return op_; }
    const TrainConfig& config() const { return config_; }
    const std::vector<int>& cluster_assign() const { return cluster_assign_; }
    bool classwise_active() const { return classwise_active_; }
    void set_cluster_assign(std::vector<int> assign);
    int num_classes() const { return num_classes_; }

    // flat views used by the optimizer and the finite-difference check
    Eigen::VectorXd pack(const ModelParams& p) const;
    void unpack(const Eigen::VectorXd& v, ModelParams& p) const;
    Eigen::VectorXd decay_mask() const;  // 0 on biases, 1 elsewhere
    std::int64_t num_parameters() const;

  private:
    CoarseningOperator op_;
    TrainConfig config_;
    int num_classes_ = 0;
    ModelParams params_;
    std::vector<int> cluster_assign_;
    bool classwise_active_ = false;
};

/// Row i of the output is z[i,:] * W[assign[i]].
Eigen::MatrixXd classwise_filter(const Eigen::MatrixXd& z,
                                 const std::vector<int>& assign,
                                 const ClasswiseParams& params);

/// Separating transforms behind the class-wise refinement: given
/// ||z1-z2|| < ||z1-z3||, builds W reversing the inequality (variant 1,
/// requires d12 > 0) or the pair (I, W2) with W2 z3 = z1 (variant 2).
Eigen::MatrixXd construct_separating_W(const Eigen::VectorXd& z1,
                                       const Eigen::VectorXd& z2,
                                       const Eigen::VectorXd& z3);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> construct_separating_pair(
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
    const Eigen::VectorXd& z3);

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
};

struct TrainResult {
    ModelParams best_params;
    std::vector<int> best_cluster_assign;
    bool best_classwise_active = false;
    int best_epoch = 0;
    double best_val_acc = 0.0;
    std::vector<EpochLog> log;
};

struct Split {
    std::vector<int> train, val, test;
};

/// Disjoint random split with the given fractions.
Split make_split(int n, double train_frac, double val_frac, std::uint64_t seed);

TrainResult train(CpfModel& model, const Graph& g, const Laplacian& lap,
                  const Split& split,
                  const PropagatedStack* x_stack = nullptr);

/// Argmax accuracy (ties to the lowest class id) on one index set.
double evaluate(const CpfModel& model, const Graph& g, const Laplacian& lap,
                const std::vector<int>& idx,
                const PropagatedStack* x_stack = nullptr);

void save_checkpoint(const CpfModel& model, const std::string& path);
void load_checkpoint(CpfModel& model, const std::string& path);
void save_metrics_csv(const std::vector<EpochLog>& log,
                      const std::string& path);

}  // namespace pf
