#include "partfilt/filtering.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "partfilt/errors.hpp"

namespace pf {

BasisKind parse_basis_kind(const std::string& name) {
    if (name == "monomial") return BasisKind::kMonomial;
    if (name == "chebyshev") return BasisKind::kChebyshev;
    if (name == "bernstein") return BasisKind::kBernstein;
    if (name == "jacobi") return BasisKind::kJacobi;
    throw ArgumentError("unknown basis: " + name);
}

std::string basis_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::kMonomial: return "monomial";
        case BasisKind::kChebyshev: return "chebyshev";
        case BasisKind::kBernstein: return "bernstein";
        case BasisKind::kJacobi: return "jacobi";
    }
    return "?";
}

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

/// Coefficients of the degree-n Jacobi step
///   P_n = (ax * x + b) P_{n-1} - c P_{n-2}
struct ThreeTermStep {
    double ax, b, c;
};

ThreeTermStep jacobi_step(int n, double a, double b) {
    const double d = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0);
    const double s = 2.0 * n + a + b - 1.0;
    return {s * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0) / d,
            s * (a * a - b * b) / d,
            2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b) / d};
}

ThreeTermStep recurrence_step(const PolyBasis& basis, int n) {
    switch (basis.kind) {
        case BasisKind::kMonomial: return {1.0, 0.0, 0.0};
        case BasisKind::kChebyshev: return {2.0, 0.0, 1.0};
        case BasisKind::kJacobi:
            return jacobi_step(n, basis.jacobi_a, basis.jacobi_b);
        default:
            throw ArgumentError("no three-term recurrence for " +
                                basis_name(basis.kind));
    }
}

ThreeTermStep first_step(const PolyBasis& basis) {
    switch (basis.kind) {
        case BasisKind::kMonomial: return {1.0, 0.0, 0.0};
        case BasisKind::kChebyshev: return {1.0, 0.0, 0.0};
        case BasisKind::kJacobi: {
            const double a = basis.jacobi_a, b = basis.jacobi_b;
            return {(a + b + 2.0) / 2.0, (a - b) / 2.0, 0.0};
        }
        default:
            throw ArgumentError("no three-term recurrence for " +
                                basis_name(basis.kind));
    }
}

}  // namespace

std::vector<double> scalar_basis(const PolyBasis& basis, double lambda) {
    const int K = basis.K;
    std::vector<double> t(K + 1);
    if (basis.kind == BasisKind::kBernstein) {
        const double x = lambda / 2.0;
        for (int k = 0; k <= K; ++k)
            t[k] = binom(K, k) * std::pow(1.0 - x, K - k) * std::pow(x, k);
        return t;
    }
    const double x = lambda - 1.0;
    t[0] = 1.0;
    if (K >= 1) {
        const auto s1 = first_step(basis);
        t[1] = s1.ax * x + s1.b;
    }
    for (int k = 2; k <= K; ++k) {
        const auto s = recurrence_step(basis, k);
        t[k] = (s.ax * x + s.b) * t[k - 1] - s.c * t[k - 2];
    }
    return t;
}

PropagatedStack propagate_basis(const Laplacian& lap, const Eigen::MatrixXd& X,
                                const PolyBasis& basis) {
    if (X.rows() != lap.n) throw ShapeError("propagate_basis: X rows != n");
    if (basis.K < 0) throw ArgumentError("propagate_basis: K must be >= 0");
    if (!X.allFinite()) throw NumericError("propagate_basis: non-finite input");
    const int K = basis.K;
    PropagatedStack stack;
    stack.basis = basis;
    stack.slices.resize(K + 1);

    if (basis.kind == BasisKind::kBernstein) {
        // term_k = binom(K,k) (I - L/2)^{K-k} (L/2)^k X
        Eigen::MatrixXd power = X;  // (L/2)^k X
        for (int k = 0; k <= K; ++k) {
            if (k > 0) power = 0.5 * (lap.L * power);
            Eigen::MatrixXd term = power;
            for (int j = 0; j < K - k; ++j) term -= 0.5 * (lap.L * term);
            stack.slices[k] = binom(K, k) * term;
        }
        return stack;
    }

    stack.slices[0] = X;
    if (K >= 1) {
        const auto s1 = first_step(basis);
        stack.slices[1] = s1.ax * (lap.delta * X) + s1.b * X;
    }
    for (int k = 2; k <= K; ++k) {
        const auto s = recurrence_step(basis, k);
        stack.slices[k] = s.ax * (lap.delta * stack.slices[k - 1]) +
                          s.b * stack.slices[k - 1] - s.c * stack.slices[k - 2];
    }
    return stack;
}

namespace {

/// Shared accumulation kernel: Z[i,:] = sum_k coeff(i,k) * slice_k[i,:],
/// k ascending, so every paradigm sums in the same order (the reduction
/// identities between them then hold bit-exactly).
template <typename CoeffFn>
Eigen::MatrixXd accumulate_filter(const PropagatedStack& stack, CoeffFn coeff) {
    const int n = stack.n(), d = stack.d(), K = stack.K();
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= K; ++k)
            z.row(i) += coeff(i, k) * stack.slices[k].row(i);
    return z;
}

}  // namespace

Eigen::MatrixXd graphwise_filter(const Eigen::VectorXd& theta,
                                 const PropagatedStack& stack) {
    if (theta.size() != stack.K() + 1)
        throw ShapeError("graphwise_filter: theta length != K+1");
    return accumulate_filter(stack,
                             [&](int, int k) { return theta[k]; });
}

Eigen::MatrixXd nodewise_filter(const Eigen::MatrixXd& theta_full,
                                const PropagatedStack& stack) {
    if (theta_full.rows() != stack.n() || theta_full.cols() != stack.K() + 1)
        throw ShapeError("nodewise_filter: theta must be n x (K+1)");
    return accumulate_filter(
        stack, [&](int i, int k) { return theta_full(i, k); });
}

Eigen::MatrixXd partitionwise_filter(const CoarseningOperator& op,
                                     const Eigen::MatrixXd& theta,
                                     const PropagatedStack& stack) {
    if (op.part.n() != stack.n())
        throw ShapeError("partitionwise_filter: partition size != n");
    if (theta.rows() != op.part.n_prime || theta.cols() != stack.K() + 1)
        throw ShapeError("partitionwise_filter: theta must be n' x (K+1)");
    // C^+ Theta_{:,k} broadcasts row assign[i] of Theta to node i.
    const auto& assign = op.part.assign;
    return accumulate_filter(
        stack, [&](int i, int k) { return theta(assign[i], k); });
}

Eigen::MatrixXd partitionwise_reference(const Partition& p,
                                        const Eigen::MatrixXd& theta_raw,
                                        const PropagatedStack& stack) {
    if (p.n() != stack.n())
        throw ShapeError("partitionwise_reference: partition size != n");
    if (theta_raw.rows() != p.n_prime || theta_raw.cols() != stack.K() + 1)
        throw ShapeError("partitionwise_reference: theta must be n' x (K+1)");
    const int n = stack.n(), d = stack.d(), K = stack.K();
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < p.n_prime; ++i) {
        // (1/|V_i|) sum_{m in V_i} diag(delta_m) sum_k theta_ik T_k X
        Eigen::MatrixXd filtered = Eigen::MatrixXd::Zero(n, d);
        for (int k = 0; k <= K; ++k)
            filtered += theta_raw(i, k) * stack.slices[k];
        for (int m = 0; m < n; ++m)
            if (p.assign[m] == i)
                z.row(m) += filtered.row(m) / double(p.sizes[i]);
    }
    return z;
}

Eigen::MatrixXd propagate_basis_adjoint(const Laplacian& lap,
                                        const PolyBasis& basis,
                                        const std::vector<Eigen::MatrixXd>& gs) {
    const int K = basis.K;
    if (static_cast<int>(gs.size()) != K + 1)
        throw ShapeError("propagate_basis_adjoint: need K+1 gradients");

    if (basis.kind == BasisKind::kBernstein) {
        Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(gs[0].rows(), gs[0].cols());
        for (int k = 0; k <= K; ++k) {
            Eigen::MatrixXd t = gs[k];
            for (int j = 0; j < K - k; ++j) t -= 0.5 * (lap.L * t);
            for (int j = 0; j < k; ++j) t = 0.5 * (lap.L * t);
            dx += binom(K, k) * t;
        }
        return dx;
    }

    std::vector<Eigen::MatrixXd> bar = gs;
    for (int k = K; k >= 2; --k) {
        const auto s = recurrence_step(basis, k);
        bar[k - 1] += s.ax * (lap.delta * bar[k]) + s.b * bar[k];
        bar[k - 2] -= s.c * bar[k];
    }
    if (K >= 1) {
        const auto s1 = first_step(basis);
        bar[0] += s1.ax * (lap.delta * bar[1]) + s1.b * bar[1];
    }
    return bar[0];
}

namespace {
constexpr char kStackMagic[4] = {'P', 'F', 'S', 'T'};
}

void save_stack(const PropagatedStack& stack, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write stack: " + path);
    out.write(kStackMagic, 4);
    const std::uint32_t tag = static_cast<std::uint32_t>(stack.basis.kind);
    const std::uint32_t K = stack.K();
    const std::uint64_t n = stack.n(), d = stack.d();
    out.write(reinterpret_cast<const char*>(&tag), 4);
    out.write(reinterpret_cast<const char*>(&K), 4);
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    const double ja = stack.basis.jacobi_a, jb = stack.basis.jacobi_b;
    out.write(reinterpret_cast<const char*>(&ja), 8);
    out.write(reinterpret_cast<const char*>(&jb), 8);
    for (const auto& s : stack.slices)
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < d; ++j) {
                const double v = s(int(i), int(j));
                out.write(reinterpret_cast<const char*>(&v), 8);
            }
}

PropagatedStack load_stack(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open stack: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kStackMagic, 4) != 0)
        throw ParseError(path + ": not a PFST stack file");
    std::uint32_t tag = 0, K = 0;
    std::uint64_t n = 0, d = 0;
    double ja = 0, jb = 0;
    in.read(reinterpret_cast<char*>(&tag), 4);
    in.read(reinterpret_cast<char*>(&K), 4);
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&d), 8);
    in.read(reinterpret_cast<char*>(&ja), 8);
    in.read(reinterpret_cast<char*>(&jb), 8);
    if (!in || tag > 3) throw ParseError(path + ": corrupt PFST header");
    PropagatedStack stack;
    stack.basis.kind = static_cast<BasisKind>(tag);
    stack.basis.K = static_cast<int>(K);
    stack.basis.jacobi_a = ja;
    stack.basis.jacobi_b = jb;
    stack.slices.assign(K + 1, Eigen::MatrixXd(int(n), int(d)));
    for (auto& s : stack.slices)
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < d; ++j) {
                double v;
                in.read(reinterpret_cast<char*>(&v), 8);
                if (!in) throw ParseError(path + ": truncated PFST payload");
                s(int(i), int(j)) = v;
            }
    return stack;
}

}  // namespace pf
