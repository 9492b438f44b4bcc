#include "randhw/polyfit.hpp"

#include "randhw/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace rhw {

namespace {

Eigen::MatrixXd vandermonde(const std::vector<double>& xs, int degree) {
    const auto m = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd design(m, degree + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            design(i, j) = p;
            p *= xs[static_cast<std::size_t>(i)];
        }
    }
    return design;
}

} // namespace

Polynomial polyfit(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
    auto fits = polyfit_multi(xs, {ys}, degree);
    return std::move(fits.front());
}

std::vector<Polynomial> polyfit_multi(const std::vector<double>& xs,
                                      const std::vector<std::vector<double>>& ys_columns,
                                      int degree) {
    if (degree < 0)
        throw DomainError("polyfit: negative degree");
    for (const auto& ys : ys_columns)
        if (ys.size() != xs.size())
            throw DomainError("polyfit: xs/ys length mismatch");
    if (xs.size() <= static_cast<std::size_t>(degree))
        throw DomainError("polyfit: need more points than the degree");

    Eigen::MatrixXd design = vandermonde(xs, degree);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    // ColPivHouseholderQR's default threshold is relative to the largest pivot;
    // it reliably flags collapsed state dispersion (all xs nearly equal).
    if (qr.rank() < degree + 1)
        throw RankDeficient("polyfit: design matrix rank " + std::to_string(qr.rank()) +
                            " < " + std::to_string(degree + 1));

    std::vector<Polynomial> out;
    out.reserve(ys_columns.size());
    Eigen::VectorXd rhs(design.rows());
    for (const auto& ys : ys_columns) {
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = ys[static_cast<std::size_t>(i)];
        Eigen::VectorXd beta = qr.solve(rhs);
        std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
        for (int j = 0; j <= degree; ++j) coeffs[static_cast<std::size_t>(j)] = beta[j];
        out.emplace_back(std::move(coeffs));
    }
    return out;
}

double lagrange_interp(const std::vector<double>& nodes, const std::vector<double>& values,
                       double x) {
    if (nodes.empty() || nodes.size() != values.size())
        throw DomainError("lagrange_interp: empty or mismatched inputs");
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (nodes[i] == nodes[j])
                throw DomainError("lagrange_interp: duplicate nodes");

    // Exact hit first: barycentric weights divide by (x - node).
    for (std::size_t i = 0; i < n; ++i)
        if (x == nodes[i])
            return values[i];

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                w /= (nodes[i] - nodes[j]);
        const double t = w / (x - nodes[i]);
        num += t * values[i];
        den += t;
    }
    return num / den;
}

} // namespace rhw
