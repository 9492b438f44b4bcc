#include "randhw/quadrature.hpp"

#include "randhw/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>

namespace rhw {

std::pair<std::vector<double>, std::vector<double>>
golub_welsch(const std::vector<double>& moments) {
    if (moments.size() < 2 || moments.size() % 2 != 0)
        throw DomainError("golub_welsch: need an even number (2N) of moments");
    const std::size_t n = moments.size() / 2;
    if (!(moments[0] > 0.0))
        throw NotPositiveDefinite("golub_welsch: m_0 must be positive");

    // Chebyshev algorithm: recurrence coefficients (alpha_k, beta_k) of the
    // orthogonal polynomials directly from the moment sequence. beta_k <= 0
    // flags an indefinite Hankel matrix.
    std::vector<double> alpha(n), beta(n);
    alpha[0] = moments[1] / moments[0];
    beta[0] = moments[0];
    if (n > 1) {
        std::vector<double> prev(moments); // sigma(k-1, l), l = 0..2n-1
        std::vector<double> prev2(moments.size(), 0.0);
        std::vector<double> cur(moments.size(), 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t l = k; l <= 2 * n - k - 1; ++l)
                cur[l] = prev[l + 1] - alpha[k - 1] * prev[l] - beta[k - 1] * prev2[l];
            if (!(cur[k] > 0.0) || !std::isfinite(cur[k]))
                throw NotPositiveDefinite("golub_welsch: moment matrix not positive definite");
            alpha[k] = cur[k + 1] / cur[k] - prev[k] / prev[k - 1];
            beta[k] = cur[k] / prev[k - 1];
            prev2 = prev;
            prev = cur;
        }
    }

    if (n == 1)
        return {{alpha[0]}, {beta[0]}};

    // Symmetric tridiagonal Jacobi matrix: diag alpha, off-diag sqrt(beta_k).
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n)), sub(static_cast<Eigen::Index>(n) - 1);
    for (std::size_t i = 0; i < n; ++i) diag[static_cast<Eigen::Index>(i)] = alpha[i];
    for (std::size_t i = 1; i < n; ++i)
        sub[static_cast<Eigen::Index>(i) - 1] = std::sqrt(beta[i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw NotPositiveDefinite("golub_welsch: eigen-decomposition failed");

    std::vector<double> nodes(n), weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()[static_cast<Eigen::Index>(i)]; // ascending
        const double v0 = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
        weights[i] = moments[0] * v0 * v0;
    }
    return {nodes, weights};
}

namespace {

// Raw moments of the standard normal: 1, 0, 1, 0, 3, 0, 15, ... ((k-1)!! even).
std::vector<double> standard_normal_moments(int n) {
    std::vector<double> m(static_cast<std::size_t>(2 * n), 0.0);
    m[0] = 1.0;
    double dfact = 1.0;
    for (int k = 2; k < 2 * n; k += 2) {
        dfact *= static_cast<double>(k - 1);
        m[static_cast<std::size_t>(k)] = dfact;
    }
    return m;
}

const QuadratureSet& standard_normal_rule(int n) {
    static std::mutex mu;
    static std::map<int, QuadratureSet> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto [nodes, weights] = golub_welsch(standard_normal_moments(n));
        it = cache.emplace(n, QuadratureSet{std::move(nodes), std::move(weights)}).first;
    }
    return it->second;
}

} // namespace

QuadratureSet gauss_quadrature_normal(double a_hat, double b_hat, int n) {
    if (n < 1)
        throw DomainError("gauss_quadrature_normal: N must be >= 1");
    if (n > 20)
        throw DomainError("gauss_quadrature_normal: N capped at 20 (moment matrix precision)");
    if (b_hat < 0.0)
        throw DomainError("gauss_quadrature_normal: b_hat must be >= 0");
    if (b_hat == 0.0)
        return {{a_hat}, {1.0}};
    const QuadratureSet& std_rule = standard_normal_rule(n);
    QuadratureSet out;
    out.nodes.reserve(std_rule.size());
    out.weights = std_rule.weights;
    for (double h : std_rule.nodes) out.nodes.push_back(a_hat + b_hat * h);
    return out;
}

} // namespace rhw
