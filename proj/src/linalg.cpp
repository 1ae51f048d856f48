#include "whc/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "whc/rng.hpp"

namespace whc::linalg {

namespace {

constexpr int kDenseCutoff = 64;

double exact_dense_norm(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

NormResult power_iteration(int n, const MatVec& apply, const NormOptions& opts) {
    const int cap = opts.max_matvecs > 0 ? opts.max_matvecs : 10 * n + 1000;
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> y(static_cast<std::size_t>(n));
    Rng rng(splitmix64(opts.seed ^ static_cast<std::uint64_t>(n)));
    double nx = 0.0;
    for (double& v : x) {
        v = rng.uniform(-1.0, 1.0);
        nx += v * v;
    }
    nx = std::sqrt(nx);
    for (double& v : x) v /= nx;

    NormResult res;
    double prev = -1.0;
    for (int t = 1; t <= cap; ++t) {
        apply(x, y);
        res.matvecs = t;
        double ny = 0.0;
        for (double v : y) ny += v * v;
        ny = std::sqrt(ny);
        if (ny == 0.0) {
            // x is (numerically) in the kernel; for a random start this
            // identifies the zero operator.
            res.value = 0.0;
            res.converged = true;
            return res;
        }
        // ||M x|| over a unit x is the square root of the Rayleigh quotient
        // of M^2; the sequence is nondecreasing and converges to ||M||.
        const double est = ny;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] / ny;
        if (t >= 2 && std::abs(est - prev) <= opts.rel_tol * est) {
            res.value = est;
            res.converged = true;
            return res;
        }
        prev = est;
    }
    res.value = prev;
    res.converged = false;
    return res;
}

}  // namespace

void centered_matvec(const WeightedGraph& g, double offdiag_shift,
                     std::span<const double> x, std::span<double> y) {
    const int n = g.vertex_count();
    const std::span<const double> w = g.packed();
    for (double& v : y) v = 0.0;
    std::size_t e = 0;
    for (int i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        double acc = 0.0;
        for (int j = i + 1; j < n; ++j, ++e) {
            const double wij = w[e];
            acc += wij * x[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(j)] += wij * xi;
        }
        y[static_cast<std::size_t>(i)] += acc;
    }
    if (offdiag_shift != 0.0) {
        double sum = 0.0;
        for (double v : x) sum += v;
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] -= offdiag_shift * (sum - x[i]);
        }
    }
}

NormResult operator_norm(int n, const MatVec& apply, const NormOptions& opts) {
    if (n <= 0) throw std::invalid_argument("operator_norm: dimension must be positive");
    if (n <= kDenseCutoff) {
        Eigen::MatrixXd m(n, n);
        std::vector<double> basis(static_cast<std::size_t>(n), 0.0);
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            basis[static_cast<std::size_t>(j)] = 1.0;
            apply(basis, col);
            basis[static_cast<std::size_t>(j)] = 0.0;
            for (int i = 0; i < n; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
        }
        return NormResult{exact_dense_norm(m), n, true};
    }
    return power_iteration(n, apply, opts);
}

NormResult operator_norm(const WeightedGraph& g, double offdiag_shift,
                         const NormOptions& opts) {
    return operator_norm(g.vertex_count(),
                         [&g, offdiag_shift](std::span<const double> x, std::span<double> y) {
                             centered_matvec(g, offdiag_shift, x, y);
                         },
                         opts);
}

NormResult operator_norm_dense(const std::vector<double>& rowmajor, int n,
                               const NormOptions& opts) {
    if (n <= 0 || rowmajor.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("operator_norm_dense: bad dimensions");
    }
    for (std::size_t i = 0; i < rowmajor.size(); ++i) {
        if (!std::isfinite(rowmajor[i])) {
            throw std::invalid_argument("operator_norm_dense: entries must be finite");
        }
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(rowmajor.data(), n, n);
    if (!m.isApprox(m.transpose(), 1e-12)) {
        throw std::invalid_argument("operator_norm_dense: matrix must be symmetric");
    }
    if (n <= kDenseCutoff) {
        return NormResult{exact_dense_norm(Eigen::MatrixXd(m)), n, true};
    }
    return power_iteration(n,
                           [&m](std::span<const double> x, std::span<double> y) {
                               Eigen::Map<const Eigen::VectorXd> xv(x.data(),
                                                                    static_cast<long>(x.size()));
                               Eigen::Map<Eigen::VectorXd> yv(y.data(),
                                                              static_cast<long>(y.size()));
                               yv.noalias() = m * xv;
                           },
                           opts);
}

}  // namespace whc::linalg
