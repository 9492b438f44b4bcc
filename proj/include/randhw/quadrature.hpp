#pragma once

#include <utility>
#include <vector>

namespace rhw {

// Gauss rule nodes/weights. When used for mean-reversion randomization the
// nodes are the theta_n and the weights the omega_n of the mixture.
struct QuadratureSet {
    std::vector<double> nodes;   // strictly increasing
    std::vector<double> weights; // nonnegative, sum to 1 (for probability measures)

    std::size_t size() const { return nodes.size(); }
};

// Gauss rule from the first 2N raw moments {m_0, ..., m_{2N-1}} of a measure:
// the Chebyshev moment-to-recurrence algorithm yields the Jacobi matrix, whose
// eigen-decomposition gives nodes (eigenvalues) and weights (m_0 times squared
// first eigenvector components). Throws NotPositiveDefinite when the Hankel
// moment matrix is not positive definite, i.e. N is too large for the measure
// or for double precision.
std::pair<std::vector<double>, std::vector<double>>
golub_welsch(const std::vector<double>& moments);

// N-point rule for N(a_hat, b_hat^2). The standard-normal rule is computed
// once per N (moments 1, 0, 1, 0, 3, 0, 15, ...) and cached; nodes are then
// rescaled affinely (a_hat + b_hat*h_i) with weights unchanged. b_hat = 0
// collapses to the single effective node a_hat with weight 1. N capped at 20:
// beyond that the Hankel matrix is numerically indefinite in doubles.
QuadratureSet gauss_quadrature_normal(double a_hat, double b_hat, int n);

} // namespace rhw
