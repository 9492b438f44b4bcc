#pragma once

#include "randhw/products.hpp"
#include "randhw/rhw.hpp"
#include "randhw/xva.hpp"
#include "randhw/zcbreg.hpp"

#include <cstdint>
#include <vector>

namespace rhw {

// Knobs of the exposure pipeline; defaults follow the desk-scale settings
// (10^4 paths, 200 simulation steps and 20 monitoring dates per year, ZCB
// regression of degree 3, LSMC regression of degree 2, 5 collocation nodes).
struct ExposureConfig {
    int m_p = 10000;
    int m_v = 10000;
    int steps_per_year = 200;
    int monitor_per_year = 20;
    std::uint64_t seed_zcb = 1;
    std::uint64_t seed_val = 2;
    double alpha = 99.0;
    int degree_zcb = 3;
    int degree_lsmc = 2;
    int n_colloc = 5;
    bool analytic_zcb = false; // value swaps with the model ZCB instead of the table

    void validate() const;
};

// Monitoring grid {0, 1/mpy, 2/mpy, ...} up to the horizon (inclusive).
std::vector<double> monitoring_dates(double horizon, int per_year);

// Full swap pipeline: ZCB regression table on seed_zcb (unless analytic),
// valuation simulation on seed_val, per-date swap revaluation, profile.
ExposureProfile swap_exposure(const RhwModel& model, const SwapSpec& swap,
                              const ExposureConfig& cfg);

// Bermudan pipeline: table, first-pass exercise rule (on a seed derived from
// seed_val), valuation simulation, collocation-based future values, profile.
ExposureProfile bermudan_exposure(const RhwModel& model, const BermudanSpec& spec,
                                  const ExposureConfig& cfg);

} // namespace rhw
