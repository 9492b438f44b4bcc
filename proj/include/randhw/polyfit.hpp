#pragma once

#include <cstddef>
#include <vector>

namespace rhw {

// Dense polynomial in ascending power order: coeffs[k] multiplies x^k.
struct Polynomial {
    std::vector<double> coeffs;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) {}

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }
};

// Least-squares fit of a monomial-basis polynomial, solved through a
// column-pivoted Householder QR of the Vandermonde matrix rather than the
// normal equations — monomials in short-rate levels are badly conditioned.
// Throws RankDeficient when the design matrix rank is below degree+1.
Polynomial polyfit(const std::vector<double>& xs, const std::vector<double>& ys, int degree);

// As above but fits all columns of ys against a common abscissa vector,
// factorizing the design matrix once. Used by the ZCB table builder where
// many maturities share the same regression states.
std::vector<Polynomial> polyfit_multi(const std::vector<double>& xs,
                                      const std::vector<std::vector<double>>& ys_columns,
                                      int degree);

// Barycentric Lagrange interpolation through (nodes, values) at x.
double lagrange_interp(const std::vector<double>& nodes, const std::vector<double>& values,
                       double x);

} // namespace rhw
