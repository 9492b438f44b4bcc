#include "randhw/curve.hpp"

#include "randhw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rhw {

YieldCurve::YieldCurve(std::vector<double> times, std::vector<double> zero_rates)
    : times_(std::move(times)), rates_(std::move(zero_rates)) {
    if (times_.empty() || times_.size() != rates_.size())
        throw DomainError("YieldCurve: empty or mismatched pillar vectors");
    double prev = 0.0;
    for (double t : times_) {
        if (!(t > prev))
            throw DomainError("YieldCurve: pillar times must be strictly increasing and > 0");
        prev = t;
    }
    logdf_.resize(times_.size());
    for (std::size_t i = 0; i < times_.size(); ++i) logdf_[i] = rates_[i] * times_[i];
}

YieldCurve YieldCurve::flat(double rate, double horizon) {
    return YieldCurve({horizon}, {rate});
}

double YieldCurve::log_discount(double t) const {
    if (t < 0.0)
        throw DomainError("YieldCurve: negative time");
    if (t == 0.0)
        return 0.0;
    // Linear in -ln P between pillars, anchored at (0, 0); flat terminal zero
    // rate beyond the last pillar.
    if (t >= times_.back())
        return rates_.back() * t;
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const double t1 = times_[hi], l1 = logdf_[hi];
    const double t0 = (hi == 0) ? 0.0 : times_[hi - 1];
    const double l0 = (hi == 0) ? 0.0 : logdf_[hi - 1];
    return l0 + (l1 - l0) * (t - t0) / (t1 - t0);
}

double YieldCurve::discount(double t) const { return std::exp(-log_discount(t)); }

double YieldCurve::inst_forward(double t) const {
    if (t < 0.0)
        throw DomainError("YieldCurve: negative time");
    // Exact segment slope of -ln P: piecewise constant, right-continuous at
    // the pillars, equal to the terminal zero rate beyond the last pillar.
    if (t >= times_.back())
        return rates_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const double t1 = times_[hi], l1 = logdf_[hi];
    const double t0 = (hi == 0) ? 0.0 : times_[hi - 1];
    const double l0 = (hi == 0) ? 0.0 : logdf_[hi - 1];
    return (l1 - l0) / (t1 - t0);
}

double YieldCurve::forward_slope(double t) const {
    if (t < 0.0)
        throw DomainError("YieldCurve: negative time");
    // The exact forward is a step function, so its pointwise derivative is 0
    // almost everywhere with distributional kicks at the pillars. Reported
    // here is the slope of the piecewise-linear reconstruction through the
    // segment midpoints: it converges to f' for smooth curves quoted on a
    // dense grid, stays finite at isolated kinks, and vanishes on flat
    // curves. Simulation code does not differentiate the forward at all; it
    // advances the deterministic mean by exact increments.
    if (times_.size() < 2 || t >= times_.back())
        return 0.0;
    std::vector<double> mids(times_.size()), fwds(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k) {
        const double a = (k == 0) ? 0.0 : times_[k - 1];
        const double la = (k == 0) ? 0.0 : logdf_[k - 1];
        mids[k] = 0.5 * (a + times_[k]);
        fwds[k] = (logdf_[k] - la) / (times_[k] - a);
    }
    const auto it = std::upper_bound(mids.begin(), mids.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - mids.begin());
    hi = std::min(std::max<std::size_t>(hi, 1), mids.size() - 1);
    return (fwds[hi] - fwds[hi - 1]) / (mids[hi] - mids[hi - 1]);
}

} // namespace rhw
