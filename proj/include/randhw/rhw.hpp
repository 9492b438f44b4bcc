#pragma once

#include "randhw/curve.hpp"
#include "randhw/hw.hpp"
#include "randhw/quadrature.hpp"
#include "randhw/surface.hpp"

#include <cstdint>
#include <vector>

namespace rhw {

// Randomized Hull-White model: the mean reversion is randomized over the
// Gauss nodes {theta_n} with weights {omega_n} of a normal mixing law
// N(a_hat, b_hat^2); all nodes share the same vol strip and curve. The model
// is simulated as a single SDE whose drift blends the per-node HW drifts with
// state-dependent mixture weights.
struct RhwModel {
    QuadratureSet quad; // nodes = theta_n, weights = omega_n
    PiecewiseVol vol;
    YieldCurve curve;
    double a_hat = 0.0;
    double b_hat = 0.0;

    int n_nodes() const { return static_cast<int>(quad.size()); }
    HwParams node(int n) const { return HwParams{quad.nodes[n], vol, curve, 0.0}; }
    void validate() const;
};

// Mixture density/CDF of r(t) = sum_n omega_n N(mean_n(t), var_n(t)); t > 0.
double rand_pdf(const RhwModel& model, double t, double y);
double rand_cdf(const RhwModel& model, double t, double y);

// Raw moment E[r(t)^m] as the omega-weighted sum of per-node normal moments.
double rand_moment(const RhwModel& model, int m, double t);

// Posterior node weights Lambda_n(t,y) = omega_n f_n(y) / sum_i omega_i f_i(y),
// computed via max-shifted exponents (softmax) for stability; at t = 0 the
// convention Lambda_n = omega_n applies.
std::vector<double> lambda_weights(const RhwModel& model, double t, double y);

// SDE coefficients: dr = mu(t, r) dt + sigma_x(t) dW.
double rhw_drift(const RhwModel& model, double t, double y);
double rhw_diffusion(const RhwModel& model, double t);

// Simulated short-rate paths recorded on a subset of the step grid, together
// with the per-path running integrals int_0^{t_i} r du (trapezoid along the
// full grid).
struct PathSet {
    std::vector<double> times;
    std::vector<std::vector<double>> rates;     // [time][path]
    std::vector<std::vector<double>> integrals; // [time][path]
    int n_paths = 0;

    int index_of(double t) const; // throws MissingEntry
};

// Euler-Maruyama simulation on a strictly increasing grid starting at 0 with
// r(0) = f^M(0,0). The RNG stream is a deterministic function of
// (seed, path index): results are reproducible and path-count extensible.
// record_times (default: whole grid) must be a subset of the grid.
PathSet rhw_euler_simulate(const RhwModel& model, const std::vector<double>& grid, int n_paths,
                           std::uint64_t seed, const std::vector<double>& record_times = {});

// Same, from an arbitrary start state r(t0) = r0 with grid[0] == t0; used by
// nested valuations. The SDE coefficients are global functions of (t, y), so
// restarting mid-horizon is well-defined.
PathSet rhw_euler_simulate_from(const RhwModel& model, double t0, double r0,
                                const std::vector<double>& grid, int n_paths, std::uint64_t seed,
                                const std::vector<double>& record_times = {});

// Semi-analytic swaption price: convex combination of per-node HW prices.
double rhw_swaption(const RhwModel& model, const SwapSpec& spec, double T_M);

// Mixture-consistent analytic ZCB conditional on r(t) = y:
// sum_n Lambda_n(t,y) P_n(t,T; y - b_n(t)). Exact for N = 1.
double rhw_zcb_analytic(const RhwModel& model, double t, double T, double y);

// Model implied vol (shifted Black) for one surface quote; receiver below the
// ATM strike, payer above, both averaged at the money.
double rhw_model_vol(const RhwModel& model, const VolQuote& q);

// Synthesize a quote surface from a model: one quote per (expiry, tenor) pair
// and strike ratio, implied vols from rhw_model_vol.
VolSurface make_surface(const RhwModel& model,
                        const std::vector<std::pair<double, double>>& expiry_tenor_pairs,
                        const std::vector<double>& strike_ratios, double shift);

// Two-stage calibration: Nelder-Mead over (a_hat, b_hat >= 0); per candidate,
// quadrature nodes are rebuilt (rejecting node theta < -0.1), the vol strip is
// re-bootstrapped to the ATM co-terminal strip, and the objective is the MSE
// of model-vs-market implied vols over the strip's OTM strikes. Runs at most
// 200 outer iterations and returns the best parameters found. strike_set
// empty selects all quoted ratios; T_cot <= 0 selects the surface maximum.
RhwModel rhw_calibrate(const YieldCurve& curve, const VolSurface& surface, int n_nodes,
                       double T_cot = 0.0, const std::vector<double>& strike_set = {});

// Uniform time grid {0, 1/steps_per_year, ...} covering [t0, t1], merged with
// the extra points (all clipped to [t0, t1]).
std::vector<double> make_time_grid(double t0, double t1, int steps_per_year,
                                   const std::vector<double>& extra = {});

} // namespace rhw
