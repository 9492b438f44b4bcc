#pragma once

#include <vector>

namespace rhw {

// Market yield curve built from (time, zero-rate) pillars with log-linear
// interpolation of discount factors, i.e. linear interpolation of z(T)*T.
// This makes the instantaneous forward piecewise constant and keeps its time
// derivative bounded. Beyond the last pillar the terminal zero rate is held
// flat. Immutable after construction, so freely shared across path workers.
class YieldCurve {
  public:
    YieldCurve(std::vector<double> times, std::vector<double> zero_rates);

    // Convenience: single-rate flat curve.
    static YieldCurve flat(double rate, double horizon = 100.0);

    double discount(double t) const;           // P^M(0,t)
    double log_discount(double t) const;       // -ln P^M(0,t), the interpolated quantity
    double inst_forward(double t) const;       // f^M(0,t), central FD with h = 1e-5
    double forward_slope(double t) const;      // df^M(0,t)/dt, central FD with h = 1e-4

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& zero_rates() const { return rates_; }

  private:
    std::vector<double> times_;   // strictly increasing, > 0
    std::vector<double> rates_;
    std::vector<double> logdf_;   // z_i * t_i at the pillars
};

} // namespace rhw
