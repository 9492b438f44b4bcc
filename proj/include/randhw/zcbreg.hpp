#pragma once

#include "randhw/polyfit.hpp"
#include "randhw/rhw.hpp"

#include <cstdint>
#include <vector>

namespace rhw {

// Regression estimator of future ZCB prices P(t_i, T_k; x) in the short rate,
// trained on one dedicated Monte-Carlo simulation: per path the realized
// exp(-int_{t_i}^{T_k} r du) (trapezoid along the path) is regressed on
// r(t_i) with a monomial basis. The t_i = 0 row is the deterministic curve
// discount. The training seed is stored so callers can enforce independence
// from the valuation simulation.
class ZcbRegressionTable {
  public:
    struct Entry {
        double t = 0.0;
        double T = 0.0;
        Polynomial poly;
    };

    ZcbRegressionTable() = default;
    ZcbRegressionTable(std::vector<double> dates, std::vector<std::vector<Entry>> rows, int degree,
                       int m_p, std::uint64_t seed)
        : dates_(std::move(dates)), rows_(std::move(rows)), degree_(degree), m_p_(m_p),
          seed_(seed) {}

    const std::vector<double>& dates() const { return dates_; }
    const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }
    int degree() const { return degree_; }
    int training_paths() const { return m_p_; }
    std::uint64_t seed() const { return seed_; }

    const Entry& find(double t, double T) const; // throws MissingEntry

    // Polynomial evaluation floored at 1e-12 to preserve positivity.
    double eval(double t, double T, double x) const;

  private:
    std::vector<double> dates_;
    std::vector<std::vector<Entry>> rows_;
    int degree_ = 0;
    int m_p_ = 0;
    std::uint64_t seed_ = 0;
};

// Builds the table for every (t_i, T_k) with T_k > t_i. Requires
// m_p > 10 * (degree + 1). Degenerate regressions (zero state dispersion)
// fall back to lower degrees and finally to the sample-mean constant.
ZcbRegressionTable build_zcb_table(const RhwModel& model, const std::vector<double>& dates,
                                   const std::vector<double>& maturities, int m_p, int degree,
                                   int steps_per_year, std::uint64_t seed);

} // namespace rhw
