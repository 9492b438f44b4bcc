#include "randhw/zcbreg.hpp"

#include "randhw/errors.hpp"
#include "randhw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rhw {

const ZcbRegressionTable::Entry& ZcbRegressionTable::find(double t, double T) const {
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (std::fabs(dates_[i] - t) > 1e-9) continue;
        for (const auto& e : rows_[i])
            if (std::fabs(e.T - T) < 1e-9) return e;
        break;
    }
    throw MissingEntry("zcb table: no entry for (t=" + std::to_string(t) +
                       ", T=" + std::to_string(T) + ")");
}

double ZcbRegressionTable::eval(double t, double T, double x) const {
    return std::max(find(t, T).poly(x), 1e-12);
}

ZcbRegressionTable build_zcb_table(const RhwModel& model, const std::vector<double>& dates,
                                   const std::vector<double>& maturities, int m_p, int degree,
                                   int steps_per_year, std::uint64_t seed) {
    if (degree < 0) throw DomainError("build_zcb_table: negative degree");
    if (m_p <= 10 * (degree + 1))
        throw DomainError("build_zcb_table: need more than 10*(degree+1) training paths");
    if (dates.empty() || maturities.empty())
        throw DomainError("build_zcb_table: empty date or maturity list");

    std::vector<double> sorted_dates = dates;
    std::sort(sorted_dates.begin(), sorted_dates.end());
    std::vector<double> sorted_mats = maturities;
    std::sort(sorted_mats.begin(), sorted_mats.end());

    // One simulation covering everything; record wherever a state or a
    // discount increment is needed.
    std::vector<double> record = sorted_dates;
    record.insert(record.end(), sorted_mats.begin(), sorted_mats.end());
    std::sort(record.begin(), record.end());
    record.erase(std::unique(record.begin(), record.end(),
                             [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
                 record.end());
    const double horizon = record.back();
    const std::vector<double> grid = make_time_grid(0.0, horizon, steps_per_year, record);
    const PathSet sim = rhw_euler_simulate(model, grid, m_p, seed, record);

    std::vector<std::vector<ZcbRegressionTable::Entry>> rows;
    rows.reserve(sorted_dates.size());
    for (double t_i : sorted_dates) {
        std::vector<ZcbRegressionTable::Entry> row;
        std::vector<double> mats;
        for (double T : sorted_mats)
            if (T > t_i + 1e-9) mats.push_back(T);
        if (mats.empty()) {
            rows.push_back(std::move(row));
            continue;
        }

        if (t_i < 1e-12) {
            // Deterministic state: store the curve discounts directly.
            for (double T : mats)
                row.push_back({t_i, T, Polynomial{{model.curve.discount(T)}}});
            rows.push_back(std::move(row));
            continue;
        }

        const int it = sim.index_of(t_i);
        const std::vector<double>& xs = sim.rates[it];
        std::vector<std::vector<double>> ys(mats.size(), std::vector<double>(m_p));
        for (std::size_t k = 0; k < mats.size(); ++k) {
            const int iT = sim.index_of(mats[k]);
            for (int j = 0; j < m_p; ++j)
                ys[k][j] = std::exp(-(sim.integrals[iT][j] - sim.integrals[it][j]));
        }

        std::vector<Polynomial> polys;
        for (int d = degree; d >= 0 && polys.empty(); --d) {
            try {
                polys = polyfit_multi(xs, ys, d);
            } catch (const RankDeficient&) {
                if (d == 0) throw; // constant fit cannot be rank deficient
            }
        }
        const double x_mean = mean(xs);
        for (std::size_t k = 0; k < mats.size(); ++k) {
            if (!(polys[k](x_mean) > 0.0))
                throw Error("build_zcb_table: regression ZCB non-positive at the mean state, "
                            "(t=" +
                            std::to_string(t_i) + ", T=" + std::to_string(mats[k]) + ")");
            row.push_back({t_i, mats[k], std::move(polys[k])});
        }
        rows.push_back(std::move(row));
    }
    return ZcbRegressionTable(std::move(sorted_dates), std::move(rows), degree, m_p, seed);
}

} // namespace rhw
