#include "gspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "gspec/error.hpp"
#include "gspec/rng.hpp"

namespace gspec {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// Largest-magnitude entry made positive so repeated solves agree on sign.
void fix_sign(Vec& v) {
    const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (it != v.end() && *it < 0.0) {
        for (double& x : v) x = -x;
    }
}

Eigen::MatrixXd to_dense(const DenseSymMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.n());
    Eigen::MatrixXd full(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            full(i, j) = v;
            full(j, i) = v;
        }
    }
    return full;
}

EigenPair finish_pair(const DenseSymMatrix& matrix, double value, Vec vector) {
    fix_sign(vector);
    EigenPair pair{value, std::move(vector), 0.0};
    pair.residual = residual_check(matrix, pair);
    return pair;
}

std::vector<EigenPair> dense_top_k(const DenseSymMatrix& matrix, std::size_t k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_dense(matrix));
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("dense symmetric eigensolver failed", std::numeric_limits<double>::infinity());
    }
    const auto n = static_cast<Eigen::Index>(matrix.n());
    std::vector<EigenPair> out;
    for (std::size_t t = 0; t < k; ++t) {
        const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(t);
        Vec v(solver.eigenvectors().col(col).data(), solver.eigenvectors().col(col).data() + n);
        out.push_back(finish_pair(matrix, solver.eigenvalues()(col), std::move(v)));
    }
    return out;
}

class Lanczos {
public:
    Lanczos(const DenseSymMatrix& matrix, std::size_t k, const SolverOptions& options)
        : a_(matrix), k_(k), options_(options), n_(matrix.n()),
          anorm_(matrix.frobenius_norm()), threshold_(options.tol * anorm_) {}

    std::vector<EigenPair> solve() {
        start_vector(0);
        while (true) {
            step();
            const std::size_t m = basis_.size();
            const bool full = m == n_;
            if (m >= k_ && (m % 5 == 0 || full)) {
                if (auto result = try_converge(full)) {
                    return *result;
                }
            }
            if (full) {
                throw ConvergenceError("Lanczos exhausted the Krylov space without meeting the residual target",
                                       best_residual_);
            }
            if (matvecs_ >= options_.max_iter) {
                throw ConvergenceError(
                    "Lanczos did not converge within " + std::to_string(options_.max_iter) + " matrix-vector products",
                    best_residual_);
            }
        }
    }

private:
    void orthogonalize(Vec& w) const {
        // Two passes of classical Gram-Schmidt keep the basis orthogonal to
        // working precision.
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vec& q : basis_) {
                axpy(-dot(w, q), q, w);
            }
        }
    }

    void start_vector(std::uint64_t restart) {
        Vec v(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = rng::uniform(rng::kSolverStart, restart, i) - 0.5;
        }
        orthogonalize(v);
        const double nv = norm(v);
        for (double& x : v) x /= nv;
        next_ = std::move(v);
    }

    void step() {
        basis_.push_back(std::move(next_));
        const Vec& q = basis_.back();
        Vec w(n_);
        a_.multiply(q, w);
        ++matvecs_;
        const double alpha = dot(w, q);
        alpha_.push_back(alpha);
        orthogonalize(w);
        double beta = norm(w);
        if (basis_.size() == n_) {
            beta = 0.0;
        } else if (beta <= 1e-13 * anorm_) {
            // Invariant subspace found; continue in a fresh direction.
            beta = 0.0;
            start_vector(++restarts_);
        } else {
            for (double& x : w) x /= beta;
            next_ = std::move(w);
        }
        beta_.push_back(beta);
    }

    std::optional<std::vector<EigenPair>> try_converge(bool final_attempt) {
        const auto m = static_cast<Eigen::Index>(basis_.size());
        Eigen::VectorXd diag(m);
        Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
        for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha_[static_cast<std::size_t>(i)];
        for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta_[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const double last_beta = beta_.back();

        double worst_estimate = 0.0;
        for (std::size_t t = 0; t < k_; ++t) {
            const Eigen::Index col = m - 1 - static_cast<Eigen::Index>(t);
            worst_estimate = std::max(worst_estimate, std::abs(last_beta * tri.eigenvectors()(m - 1, col)));
        }
        best_residual_ = std::min(best_residual_, worst_estimate);
        if (worst_estimate > threshold_ && !final_attempt) {
            return std::nullopt;
        }

        std::vector<EigenPair> out;
        double worst = 0.0;
        for (std::size_t t = 0; t < k_; ++t) {
            const Eigen::Index col = m - 1 - static_cast<Eigen::Index>(t);
            Vec v(n_, 0.0);
            for (Eigen::Index j = 0; j < m; ++j) {
                axpy(tri.eigenvectors()(j, col), basis_[static_cast<std::size_t>(j)], v);
            }
            const double nv = norm(v);
            for (double& x : v) x /= nv;
            out.push_back(finish_pair(a_, tri.eigenvalues()(col), std::move(v)));
            worst = std::max(worst, out.back().residual);
        }
        best_residual_ = std::min(best_residual_, worst);
        if (worst <= threshold_) {
            return out;
        }
        if (final_attempt) {
            throw ConvergenceError("Lanczos Ritz pairs miss the residual target", best_residual_);
        }
        return std::nullopt;
    }

    const DenseSymMatrix& a_;
    std::size_t k_;
    SolverOptions options_;
    std::size_t n_;
    double anorm_;
    double threshold_;
    std::vector<Vec> basis_;
    Vec next_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
    int matvecs_ = 0;
    std::uint64_t restarts_ = 0;
    double best_residual_ = std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<EigenPair> top_k_eigen(const DenseSymMatrix& matrix, std::size_t k, const SolverOptions& options) {
    if (k == 0 || k > matrix.n()) {
        throw SizeError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(matrix.n()) +
                        "-dimensional matrix");
    }
    if (!(options.tol > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }
    if (matrix.n() <= options.dense_crossover) {
        return dense_top_k(matrix, k);
    }
    if (matrix.frobenius_norm() == 0.0) {
        std::vector<EigenPair> out;
        for (std::size_t t = 0; t < k; ++t) {
            Vec e(matrix.n(), 0.0);
            e[t] = 1.0;
            out.push_back({0.0, std::move(e), 0.0});
        }
        return out;
    }
    return Lanczos(matrix, k, options).solve();
}

std::vector<double> dense_eigenvalues(const DenseSymMatrix& matrix) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_dense(matrix), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("dense symmetric eigensolver failed", std::numeric_limits<double>::infinity());
    }
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

double residual_check(const DenseSymMatrix& matrix, const EigenPair& pair) {
    if (pair.vector.size() != matrix.n()) {
        throw DimensionError("eigenvector length " + std::to_string(pair.vector.size()) +
                             " does not match matrix dimension " + std::to_string(matrix.n()));
    }
    Vec av(matrix.n());
    matrix.multiply(pair.vector, av);
    double acc = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
        const double r = av[i] - pair.value * pair.vector[i];
        acc += r * r;
    }
    return std::sqrt(acc);
}

double spectral_norm(const DenseSymMatrix& matrix, const SolverOptions& options) {
    std::vector<double> negated(matrix.packed().begin(), matrix.packed().end());
    for (double& v : negated) v = -v;
    const DenseSymMatrix neg(matrix.n(), std::move(negated), MatrixKind::derived, matrix.diagonal_mode());
    const double top = top_k_eigen(matrix, 1, options).front().value;
    const double bottom = -top_k_eigen(neg, 1, options).front().value;
    return std::max(std::abs(top), std::abs(bottom));
}

std::string_view to_string(SpectrumMethod method) noexcept {
    return method == SpectrumMethod::exact_spectral ? "exact-spectral" : "nystrom-grid";
}

SpectrumEstimate exact_spectrum(const SpectralKernel& kernel) {
    return {kernel.eigenvalues(), 0, SpectrumMethod::exact_spectral};
}

SpectrumEstimate nystrom_spectrum(const SpectralKernel& kernel, std::size_t grid_size, std::size_t k) {
    if (grid_size < 16) {
        throw SizeError("Nystrom grid needs at least 16 points, got " + std::to_string(grid_size));
    }
    if (k == 0 || k > grid_size) {
        throw SizeError("cannot extract " + std::to_string(k) + " eigenvalues from a grid of " +
                        std::to_string(grid_size));
    }
    SampleBatch grid;
    grid.values.resize(grid_size);
    const double m = static_cast<double>(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        grid.values[i] = (static_cast<double>(i) + 0.5) / m;
    }
    const auto matrix = build_kernel_matrix(kernel, grid, DiagonalMode::zeroed);
    SpectrumEstimate est{{}, grid_size, SpectrumMethod::nystrom_grid};
    for (const auto& pair : top_k_eigen(matrix, k)) {
        est.eigenvalues.push_back(pair.value / m);
    }
    return est;
}

}  // namespace gspec
