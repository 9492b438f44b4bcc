#pragma once

#include "randhw/black.hpp"
#include "randhw/curve.hpp"
#include "randhw/surface.hpp"

#include <functional>
#include <vector>

namespace rhw {

// Piecewise-constant short-rate volatility sigma_x(t). values[c] applies on
// [pillars[c-1], pillars[c]) with the convention pillars[-1] = 0; the last
// value extends flat beyond the final pillar. Pillars are typically the
// co-terminal swaption expiries used in the volatility bootstrap.
class PiecewiseVol {
  public:
    PiecewiseVol() : values_{0.01} {}
    PiecewiseVol(std::vector<double> pillars, std::vector<double> values);
    static PiecewiseVol flat(double sigma) { return PiecewiseVol({}, {sigma}); }

    double operator()(double t) const;
    const std::vector<double>& pillars() const { return pillars_; }
    const std::vector<double>& values() const { return values_; }
    void set_value(std::size_t i, double sigma);

    struct Segment {
        double t0, t1, sigma;
    };
    // Partition of [s, t] into maximal intervals of constant sigma.
    std::vector<Segment> segments(double s, double t) const;

  private:
    std::vector<double> pillars_; // strictly increasing; may be empty (flat vol)
    std::vector<double> values_;  // positive; size = max(pillars.size(), 1)
};

struct HwParams {
    double theta = 0.0; // mean reversion, 1/time
    PiecewiseVol vol;
    YieldCurve curve;
    double x0 = 0.0; // initial de-meaned state x(0)
};

// Fixed-vs-float swap: fixed leg pays strike * tau_k at each payment date,
// swap_type +1 receives fixed (receiver), -1 pays fixed (payer).
struct SwapSpec {
    double start = 0.0;            // T_0
    std::vector<double> pay_times; // T_1 < ... < T_m
    double strike = 0.0;
    int swap_type = +1; // +1 receiver, -1 payer
    double notional = 1.0;

    double maturity() const { return pay_times.back(); }
    std::vector<double> accruals() const;
    void validate() const;
};

// Swap with unit accrual periods from start to maturity (integral year count).
SwapSpec annual_swap(double start, double maturity, double strike, int swap_type,
                     double notional = 1.0);

// B(s,t) = (1 - e^{-theta (t-s)}) / theta, with the theta -> 0 limit t - s.
double hw_B(double theta, double s, double t);

// Var[x(t) | x(s)] = int_s^t sigma^2(u) e^{-2 theta (t-u)} du (also the
// conditional variance of r(t), since r - x is deterministic).
double hw_variance(const HwParams& p, double s, double t);

// V(s,t) = int_s^t sigma^2(u) B(u,t)^2 du.
double hw_V(const HwParams& p, double s, double t);

// Deterministic shift b(t) with r(t) = x(t) + b(t); b(0) = f^M(0,0) and
// E[r(t)] = b(t) when x0 = 0.
double hw_b(const HwParams& p, double t);

// int_s^t b(u) du in closed form (uses int_0^tau I(u) du = V(0,tau)/2).
double hw_int_b(const HwParams& p, double s, double t);

// ln P(t,T;x) = log_a - b * x.
struct BondFactors {
    double log_a = 0.0;
    double b = 0.0;
};
BondFactors hw_bond_factors(const HwParams& p, double t, double T);

// ZCB price P(t,T) given the de-meaned state x(t) = r(t) - b(t).
double hw_zcb(const HwParams& p, double t, double T, double x);

// European option (expiry T) on the ZCB P(.,S), strike K, Black-type closed
// form with Sigma^2 = B(T,S)^2 Var[r(T)|F_t]. x is the state at t.
double hw_zcbo(const HwParams& p, double t, double T, double S, double K, OptionType type,
               double x = 0.0);

// European swaption (expiry T_M <= spec.start) via Jamshidian decomposition.
double hw_swaption(const HwParams& p, const SwapSpec& spec, double T_M);

// Exact transition of the de-meaned state over [s,t] given a N(0,1) draw.
double hw_exact_step(const HwParams& p, double x_s, double s, double t, double gaussian);

// Prices the unit-notional co-terminal ATM receiver swaption for a candidate
// vol strip; shared between the HW and randomized-HW bootstrap loops.
using SwaptionPricer =
    std::function<double(const PiecewiseVol& vol, const SwapSpec& spec, double T_M)>;

// Sequential ATM bootstrap over the co-terminal strip expiry+tenor = T_cot:
// pillar c is solved to reprice instrument c with earlier pillars frozen.
PiecewiseVol bootstrap_vol(const YieldCurve& curve, const VolSurface& surface, double T_cot,
                           const SwaptionPricer& pricer);

// T_cot <= 0 selects the surface's largest expiry+tenor.
PiecewiseVol hw_calibrate_vol(const YieldCurve& curve, const VolSurface& surface, double theta,
                              double T_cot);

// Fits theta on [-0.1, 1.0] by minimizing the MSE of model vs market ATM
// implied vols over the whole quoted grid, re-bootstrapping sigma per
// candidate. T_cot <= 0 selects the surface's largest expiry+tenor.
double hw_calibrate_mean_reversion(const YieldCurve& curve, const VolSurface& surface,
                                   double T_cot = 0.0);

} // namespace rhw
