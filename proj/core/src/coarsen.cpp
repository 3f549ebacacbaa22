#include "partfilt/coarsen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "partfilt/rng.hpp"

namespace pf {

Partition Partition::identity(int n) {
    Partition p;
    p.assign.resize(n);
    std::iota(p.assign.begin(), p.assign.end(), 0);
    p.n_prime = n;
    p.sizes.assign(n, 1);
    return p;
}

Partition Partition::single(int n) {
    Partition p;
    p.assign.assign(n, 0);
    p.n_prime = 1;
    p.sizes.assign(1, n);
    return p;
}

Partition Partition::from_assign(std::vector<int> assign) {
    Partition p;
    p.assign = std::move(assign);
    p.n_prime = p.assign.empty()
                    ? 0
                    : *std::max_element(p.assign.begin(), p.assign.end()) + 1;
    p.sizes.assign(p.n_prime, 0);
    for (int a : p.assign) {
        if (a < 0 || a >= p.n_prime)
            throw ArgumentError("partition id out of range");
        ++p.sizes[a];
    }
    p.validate();
    return p;
}

void Partition::validate() const {
    if (static_cast<int>(sizes.size()) != n_prime)
        throw ArgumentError("partition size table mismatch");
    int total = 0;
    for (int i = 0; i < n_prime; ++i) {
        if (sizes[i] <= 0)
            throw ArgumentError("empty supernode " + std::to_string(i));
        total += sizes[i];
    }
    if (total != n()) throw ArgumentError("partition sizes do not sum to n");
}

Eigen::MatrixXd CoarseningOperator::apply_C(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(part.n_prime, x.cols());
    for (int i = 0; i < part.n(); ++i) y.row(part.assign[i]) += x.row(i);
    for (int j = 0; j < part.n_prime; ++j) y.row(j) /= double(part.sizes[j]);
    return y;
}

Eigen::MatrixXd CoarseningOperator::apply_Cplus(const Eigen::MatrixXd& y) const {
    Eigen::MatrixXd x(part.n(), y.cols());
    for (int i = 0; i < part.n(); ++i) x.row(i) = y.row(part.assign[i]);
    return x;
}

Eigen::MatrixXd CoarseningOperator::apply_Pi(const Eigen::MatrixXd& x) const {
    return apply_Cplus(apply_C(x));
}

Eigen::MatrixXd CoarseningOperator::dense_C() const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(part.n_prime, part.n());
    for (int i = 0; i < part.n(); ++i)
        c(part.assign[i], i) = 1.0 / double(part.sizes[part.assign[i]]);
    return c;
}

Eigen::MatrixXd CoarseningOperator::dense_Cplus() const {
    Eigen::MatrixXd cp = Eigen::MatrixXd::Zero(part.n(), part.n_prime);
    for (int i = 0; i < part.n(); ++i) cp(i, part.assign[i]) = 1.0;
    return cp;
}

Eigen::MatrixXd CoarseningOperator::dense_Pi() const {
    return dense_Cplus() * dense_C();
}

CoarseningOperator coarsening_operator(Partition p) {
    p.validate();
    return CoarseningOperator{std::move(p)};
}

CoarsenMethod parse_coarsen_method(const std::string& name) {
    if (name == "local_variation") return CoarsenMethod::kLocalVariation;
    if (name == "heavy_edge") return CoarsenMethod::kHeavyEdge;
    throw ArgumentError("unknown coarsening method: " + name);
}

namespace {

/// Mutable clustering state shared by both coarsening methods.
/// Cluster ids are node ids of representatives (smallest member).
struct Clustering {
    std::vector<int> rep;                   // node -> representative
    std::vector<std::vector<int>> members;  // representative -> members
    int count = 0;

    explicit Clustering(int n) : rep(n), members(n), count(n) {
        for (int i = 0; i < n; ++i) {
            rep[i] = i;
            members[i] = {i};
        }
    }

    // Merges cluster b into a (a, b are representatives); keeps the
    // smaller id as representative.
    int merge(int a, int b) {
        if (a > b) std::swap(a, b);
        for (int v : members[b]) rep[v] = a;
        members[a].insert(members[a].end(), members[b].begin(),
                          members[b].end());
        members[b].clear();
        --count;
        return a;
    }

    Partition finalize() const {
        const int n = static_cast<int>(rep.size());
        std::vector<int> relabel(n, -1);
        int next = 0;
        std::vector<int> assign(n);
        for (int i = 0; i < n; ++i) {
            const int r = rep[i];
            if (relabel[r] < 0) relabel[r] = next++;
            assign[i] = relabel[r];
        }
        return Partition::from_assign(std::move(assign));
    }
};

struct CandidatePair {
    double cost;
    int a, b;  // representatives, a < b
    bool operator<(const CandidatePair& o) const {
        if (cost != o.cost) return cost < o.cost;
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
};

std::vector<std::pair<int, int>> cluster_edges(
    const std::vector<std::pair<int, int>>& edges, const Clustering& cl) {
    std::set<std::pair<int, int>> pairs;
    for (const auto& [u, v] : edges) {
        int a = cl.rep[u], b = cl.rep[v];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        pairs.emplace(a, b);
    }
    return {pairs.begin(), pairs.end()};
}

/// Local-variation coarsener: candidates are contracted-graph edges,
/// ranked by the exact increase of the subspace residual
/// trace((V - Pi V)^T L (V - Pi V)) the merge would induce.
class LocalVariationCoarsener {
  public:
    LocalVariationCoarsener(const Graph& g, const Laplacian& lap, int dim)
        : lap_(lap), cl_(g.n) {
        const int m = std::min(dim, g.n);
        V_ = leading_subspace(lap, m);
        // singleton clusters: Pi = I, so E = V - Pi V = 0
        E_ = Eigen::MatrixXd::Zero(g.n, m);
        LE_ = Eigen::MatrixXd::Zero(g.n, m);
        sums_ = V_;  // per-cluster row sums (singletons: the rows)
    }

    double merge_cost(int a, int b) const {
        const auto delta = merge_delta(a, b);
        double cost = 0.0;
        // 2 tr(D^T L E) + tr(D^T L D), D supported on members of a and b
        for (const auto& [node, d] : delta)
            cost += 2.0 * d.dot(LE_.row(node));
        for (const auto& [i, di] : delta) {
            Eigen::RowVectorXd ld = Eigen::RowVectorXd::Zero(V_.cols());
            for (std::int64_t k = lap_.L.row_ptr[i]; k < lap_.L.row_ptr[i + 1];
                 ++k) {
                const int j = lap_.L.col_idx[k];
                for (const auto& [node, dj] : delta)
                    if (node == j) {
                        ld += lap_.L.vals[k] * dj;
                        break;
                    }
            }
            cost += di.dot(ld);
        }
        return cost;
    }

    void apply_merge(int a, int b) {
        const auto delta = merge_delta(a, b);
        // update LE for every neighbor of a changed row (L symmetric)
        for (const auto& [j, dj] : delta) {
            for (std::int64_t k = lap_.L.row_ptr[j]; k < lap_.L.row_ptr[j + 1];
                 ++k)
                LE_.row(lap_.L.col_idx[k]) += lap_.L.vals[k] * dj;
            E_.row(j) += dj;
        }
        const int keep = std::min(a, b), drop = std::max(a, b);
        sums_.row(keep) += sums_.row(drop);
        cl_.merge(a, b);
    }

    Clustering& clustering() { return cl_; }
    const Clustering& clustering() const { return cl_; }

  private:
    // Row updates of E = V - Pi V caused by merging clusters a and b.
    std::vector<std::pair<int, Eigen::RowVectorXd>> merge_delta(int a,
                                                                int b) const {
        const auto& ma = cl_.members[a];
        const auto& mb = cl_.members[b];
        const double na = double(ma.size()), nb = double(mb.size());
        const Eigen::RowVectorXd mean_a = sums_.row(a) / na;
        const Eigen::RowVectorXd mean_b = sums_.row(b) / nb;
        const Eigen::RowVectorXd mean_ab =
            (sums_.row(a) + sums_.row(b)) / (na + nb);
        std::vector<std::pair<int, Eigen::RowVectorXd>> delta;
        delta.reserve(ma.size() + mb.size());
        for (int i : ma) delta.emplace_back(i, mean_a - mean_ab);
        for (int i : mb) delta.emplace_back(i, mean_b - mean_ab);
        return delta;
    }

    const Laplacian& lap_;
    Clustering cl_;
    Eigen::MatrixXd V_;     // subspace basis
    Eigen::MatrixXd E_;     // V - Pi V under the current clustering
    Eigen::MatrixXd LE_;    // L * E
    Eigen::MatrixXd sums_;  // per-cluster sums of V rows (indexed by rep)
};

// Merges whole components (smallest first, ties by representative id)
// when the target supernode count is below the component count.
void merge_components(Clustering& cl, int target) {
    while (cl.count > target) {
        std::vector<std::pair<std::pair<int, int>, int>> order;
        for (int r = 0; r < static_cast<int>(cl.members.size()); ++r)
            if (!cl.members[r].empty())
                order.push_back({{static_cast<int>(cl.members[r].size()), r}, r});
        std::sort(order.begin(), order.end());
        cl.merge(order[0].second, order[1].second);
    }
}

}  // namespace

Partition coarsen(const Graph& g, double r, CoarsenMethod method,
                  int subspace_dim, std::uint64_t seed) {
    (void)seed;  // tie-breaking is by node id; seed reserved for variants
    g.validate();
    const double r_max = g.n > 0 ? double(g.n - 1) / double(g.n) : 0.0;
    if (r < 0.0 || r > r_max + 1e-15)
        throw ArgumentError("coarsening ratio " + std::to_string(r) +
                            " outside [0, (n-1)/n]");
    if (subspace_dim < 1) throw ArgumentError("subspace_dim must be >= 1");
    const int target = std::max(1, int(std::floor((1.0 - r) * g.n)));
    if (target >= g.n) return Partition::identity(g.n);

    const Laplacian lap = normalized_laplacian(g);

    if (method == CoarsenMethod::kLocalVariation) {
        LocalVariationCoarsener lv(g, lap, subspace_dim);
        Clustering& cl = lv.clustering();
        while (cl.count > target) {
            auto pairs = cluster_edges(g.edges, cl);
            if (pairs.empty()) break;
            std::vector<CandidatePair> cands;
            cands.reserve(pairs.size());
            for (const auto& [a, b] : pairs)
                cands.push_back({lv.merge_cost(a, b), a, b});
            std::sort(cands.begin(), cands.end());
            // Pace the contraction: close at most half the remaining gap
            // per level so later merges see recomputed costs. Greedy
            // whole-gap matching can be forced into expensive merges.
            const int cap = std::max(1, (cl.count - target + 1) / 2);
            std::vector<char> used(g.n, 0);
            int merged = 0;
            for (const auto& c : cands) {
                if (cl.count <= target || merged >= cap) break;
                if (used[c.a] || used[c.b]) continue;
                used[c.a] = used[c.b] = 1;
                lv.apply_merge(c.a, c.b);
                ++merged;
            }
            if (merged == 0) break;
        }
        merge_components(cl, target);
        return cl.finalize();
    }

    // heavy_edge: maximal matching over contracted edges, by descending
    // degree-normalized inter-cluster weight.
    Clustering cl(g.n);
    const auto deg = g.degrees();
    while (cl.count > target) {
        auto pairs = cluster_edges(g.edges, cl);
        if (pairs.empty()) break;
        // inter-cluster edge multiplicity
        std::map<std::pair<int, int>, double> weight;
        for (const auto& [u, v] : g.edges) {
            int a = cl.rep[u], b = cl.rep[v];
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            weight[{a, b}] += 1.0;
        }
        std::vector<int> cdeg(g.n, 0);
        for (int i = 0; i < g.n; ++i) cdeg[cl.rep[i]] += deg[i];
        std::vector<CandidatePair> cands;
        cands.reserve(weight.size());
        for (const auto& [ab, w] : weight) {
            const auto& [a, b] = ab;
            const double norm =
                std::sqrt(double(std::max(cdeg[a], 1)) *
                          double(std::max(cdeg[b], 1)));
            cands.push_back({-w / norm, a, b});  // negative: sort ascending
        }
        std::sort(cands.begin(), cands.end());
        std::vector<char> used(g.n, 0);
        bool merged_any = false;
        for (const auto& c : cands) {
            if (cl.count <= target) break;
            if (used[c.a] || used[c.b]) continue;
            used[c.a] = used[c.b] = 1;
            cl.merge(c.a, c.b);
            merged_any = true;
        }
        if (!merged_any) break;
    }
    merge_components(cl, target);
    return cl.finalize();
}

Eigen::MatrixXd leading_subspace(const Laplacian& lap, int dim, int n_max) {
    const EigenSystem eig = dense_eig(lap, n_max);
    return eig.U.leftCols(std::min(dim, lap.n));
}

double rsa_constant(const Laplacian& lap, const CoarseningOperator& op,
                    const Eigen::MatrixXd& subspace) {
    if (subspace.rows() != lap.n)
        throw ShapeError("rsa_constant: subspace row count != n");
    if (subspace.cols() == 0)
        throw ArgumentError("rsa_constant: empty subspace");
    const Eigen::MatrixXd resid = subspace - op.apply_Pi(subspace);
    const Eigen::MatrixXd l_resid = lap.L * resid;
    const Eigen::MatrixXd l_sub = lap.L * subspace;
    const Eigen::MatrixXd a = resid.transpose() * l_resid;
    const Eigen::MatrixXd b = subspace.transpose() * l_sub;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(b);
    const double scale = std::max(bs.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    std::vector<int> keep;
    for (int i = 0; i < bs.eigenvalues().size(); ++i)
        if (bs.eigenvalues()[i] > kNullspaceTol * scale) keep.push_back(i);
    if (keep.empty()) return 0.0;  // subspace lies in ker(L)

    Eigen::MatrixXd w(subspace.cols(), static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        w.col(static_cast<int>(j)) =
            bs.eigenvectors().col(keep[j]) / std::sqrt(bs.eigenvalues()[keep[j]]);
    const Eigen::MatrixXd reduced = w.transpose() * a * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(reduced);
    return std::sqrt(std::max(rs.eigenvalues().maxCoeff(), 0.0));
}

double rsa_lower_bound(const Laplacian& lap, const CoarseningOperator& op,
                       const Eigen::MatrixXd& subspace, int samples,
                       std::uint64_t seed) {
    Rng rng(seed);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd v(subspace.cols());
        for (int i = 0; i < v.size(); ++i) v[i] = rng.normal();
        Eigen::VectorXd x = subspace * v;
        const double nx = l_seminorm(lap, x);
        if (nx < 1e-12) continue;
        x /= nx;
        const Eigen::VectorXd resid = x - op.apply_Pi(x);
        best = std::max(best, l_seminorm(lap, resid));
    }
    return best;
}

BoundAudit theorem_bound_audit(const Laplacian& lap,
                               const CoarseningOperator& op,
                               const Eigen::VectorXd& x, int k,
                               const Eigen::MatrixXd& subspace) {
    if (k < 1) throw ArgumentError("theorem_bound_audit: k must be >= 1");
    if (x.size() != lap.n) throw ShapeError("theorem_bound_audit: bad x");

    BoundAudit audit;
    audit.epsilon = rsa_constant(lap, op, subspace);

    Eigen::VectorXd dk_minus1 = x;
    for (int i = 0; i < k - 1; ++i) dk_minus1 = lap.delta * dk_minus1;
    const Eigen::VectorXd dk = lap.delta * dk_minus1;

    const Eigen::VectorXd approx =
        op.apply_Pi(lap.delta * op.apply_Pi(dk_minus1));
    audit.lhs = l_seminorm(lap, dk - approx);

    Eigen::VectorXd z = x;
    for (int i = 0; i < k; ++i) z = op.apply_Pi(lap.delta * op.apply_Pi(z));
    audit.lhs_k_step = l_seminorm(lap, dk - z);

    const EigenSystem eig = dense_eig(lap);
    const Eigen::MatrixXd delta_dense = lap.delta.dense();
    const Eigen::MatrixXd pi_delta = op.apply_Pi(delta_dense);
    audit.rhs = audit.epsilon * l_seminorm(lap, x) *
                (l_operator_seminorm(eig, delta_dense) +
                 l_operator_seminorm(eig, pi_delta));
    return audit;
}

void save_partition(const Partition& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write partition: " + path);
    out << "#n_prime " << p.n_prime << "\n";
    for (int a : p.assign) out << a << "\n";
}

Partition load_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open partition: " + path);
    std::string line;
    int declared = -1;
    std::vector<int> assign;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            if (ls >> key && key == "n_prime") ls >> declared;
            continue;
        }
        std::istringstream ls(line);
        int a;
        if (!(ls >> a))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected supernode id");
        assign.push_back(a);
    }
    Partition p = Partition::from_assign(std::move(assign));
    if (declared >= 0 && declared != p.n_prime)
        throw ParseError(path + ": declared n_prime " +
                         std::to_string(declared) + " != observed " +
                         std::to_string(p.n_prime));
    return p;
}

}  // namespace pf
