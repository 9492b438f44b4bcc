#include "randhw/exposure.hpp"

#include "randhw/errors.hpp"
#include "randhw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace rhw {

void ExposureConfig::validate() const {
    if (m_p <= 0 || m_v <= 0)
        throw DomainError("exposure: path counts must be positive");
    if (steps_per_year <= 0 || monitor_per_year <= 0)
        throw DomainError("exposure: steps_per_year and monitor_per_year must be positive");
    if (!(alpha > 0.0 && alpha < 100.0))
        throw DomainError("exposure: alpha must lie in (0, 100)");
    if (degree_zcb < 0 || degree_lsmc < 0)
        throw DomainError("exposure: regression degrees must be non-negative");
    if (n_colloc <= 0)
        throw DomainError("exposure: n_colloc must be positive");
    if (!analytic_zcb && seed_zcb == seed_val)
        throw DomainError("exposure: seed_zcb and seed_val must differ so the valuation "
                          "paths are independent of the regression paths");
}

std::vector<double> monitoring_dates(double horizon, int per_year) {
    if (horizon <= 0.0)
        throw DomainError("monitoring_dates: horizon must be positive");
    if (per_year <= 0)
        throw DomainError("monitoring_dates: per_year must be positive");
    std::vector<double> dates;
    const double dt = 1.0 / per_year;
    for (int i = 0;; ++i) {
        double t = i * dt;
        if (t >= horizon - 1e-12) break;
        dates.push_back(t);
    }
    dates.push_back(horizon);
    return dates;
}

namespace {

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
            v.end());
}

// Sorted union of the swap's start and payment dates: the maturities the ZCB
// regression table must provide to revalue the swap at any monitoring date.
std::vector<double> swap_maturities(const SwapSpec& swap) {
    std::vector<double> mats;
    mats.push_back(swap.start);
    mats.insert(mats.end(), swap.pay_times.begin(), swap.pay_times.end());
    sort_unique(mats);
    return mats;
}

// Assemble the profile from per-date value vectors; rows[i] is the record row
// of the simulation (and of `values`) that belongs to dates[i].
ExposureProfile profile_from_values(const std::vector<double>& dates,
                                    const std::vector<int>& rows,
                                    const std::vector<std::vector<double>>& values,
                                    const PathSet& sim, double alpha) {
    ExposureProfile profile;
    profile.dates = dates;
    profile.alpha = alpha;
    std::vector<double> discounts(sim.n_paths);
    for (std::size_t i = 0; i < dates.size(); ++i) {
        const int row = rows[i];
        for (int j = 0; j < sim.n_paths; ++j)
            discounts[j] = std::exp(-sim.integrals[row][j]);
        profile.epe.push_back(epe(values[row], discounts));
        profile.ene.push_back(ene(values[row], discounts));
        profile.pfe.push_back(pfe(values[row], alpha));
        profile.pfl.push_back(pfl(values[row], alpha));
    }
    return profile;
}

std::vector<int> identity_rows(std::size_t n) {
    std::vector<int> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<int>(i);
    return rows;
}

} // namespace

ExposureProfile swap_exposure(const RhwModel& model, const SwapSpec& swap,
                              const ExposureConfig& cfg) {
    cfg.validate();
    swap.validate();
    const double horizon = swap.maturity();
    const std::vector<double> dates = monitoring_dates(horizon, cfg.monitor_per_year);

    ZcbRegressionTable table;
    if (!cfg.analytic_zcb)
        table = build_zcb_table(model, dates, swap_maturities(swap), cfg.m_p, cfg.degree_zcb,
                                cfg.steps_per_year, cfg.seed_zcb);

    std::vector<double> grid_extra = dates;
    grid_extra.insert(grid_extra.end(), swap.pay_times.begin(), swap.pay_times.end());
    grid_extra.push_back(swap.start);
    const std::vector<double> grid = make_time_grid(0.0, horizon, cfg.steps_per_year, grid_extra);
    const PathSet sim = rhw_euler_simulate(model, grid, cfg.m_v, cfg.seed_val, dates);

    std::vector<std::vector<double>> values(dates.size(), std::vector<double>(sim.n_paths));
    for (std::size_t i = 0; i < dates.size(); ++i) {
        const double t = dates[i];
        for (int j = 0; j < sim.n_paths; ++j) {
            const double r = sim.rates[i][j];
            auto zcb = [&](double maturity) {
                if (maturity <= t + 1e-9) return 1.0;
                return cfg.analytic_zcb ? rhw_zcb_analytic(model, t, maturity, r)
                                        : table.eval(t, maturity, r);
            };
            values[i][j] = swap_value(zcb, swap, t);
        }
    }
    return profile_from_values(dates, identity_rows(dates.size()), values, sim, cfg.alpha);
}

ExposureProfile bermudan_exposure(const RhwModel& model, const BermudanSpec& spec,
                                  const ExposureConfig& cfg) {
    cfg.validate();
    if (cfg.analytic_zcb)
        throw DomainError("bermudan_exposure: the exercise rule and future values need a "
                          "ZCB regression table; analytic_zcb is not supported here");
    spec.validate();
    const SwapSpec& swap = spec.underlying;
    const double horizon = swap.maturity();
    const std::vector<double> dates = monitoring_dates(horizon, cfg.monitor_per_year);

    const ZcbRegressionTable table =
        build_zcb_table(model, dates, swap_maturities(swap), cfg.m_p, cfg.degree_zcb,
                        cfg.steps_per_year, cfg.seed_zcb);

    // The rule-learning pass and the nested collocation simulations each get a
    // seed mixed from seed_val so all three engines draw independent streams.
    const std::uint64_t seed_rule = mix64(cfg.seed_val ^ 0xBF58476D1CE4E5B9ULL);
    const std::uint64_t seed_nested = mix64(cfg.seed_val ^ 0x94D049BB133111EBULL);
    const ExerciseRule rule = bermudan_first_pass(model, table, spec, cfg.m_v, seed_rule,
                                                  cfg.degree_lsmc, cfg.steps_per_year);

    // Record the union of monitoring and exercise dates: the rule is applied
    // path-wise at the exercise dates, the profile is read at monitoring dates.
    std::vector<double> record = dates;
    record.insert(record.end(), spec.exercise_dates.begin(), spec.exercise_dates.end());
    sort_unique(record);

    std::vector<double> grid_extra = record;
    grid_extra.insert(grid_extra.end(), swap.pay_times.begin(), swap.pay_times.end());
    grid_extra.push_back(swap.start);
    const std::vector<double> grid = make_time_grid(0.0, horizon, cfg.steps_per_year, grid_extra);
    const PathSet sim = rhw_euler_simulate(model, grid, cfg.m_v, cfg.seed_val, record);

    const std::vector<std::vector<double>> values = bermudan_future_values(
        model, table, rule, spec, sim, cfg.n_colloc, seed_nested, cfg.steps_per_year);

    std::vector<int> rows(dates.size());
    for (std::size_t i = 0; i < dates.size(); ++i) rows[i] = sim.index_of(dates[i]);
    return profile_from_values(dates, rows, values, sim, cfg.alpha);
}

} // namespace rhw
