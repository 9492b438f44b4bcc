#include "randhw/rhw.hpp"

#include "randhw/errors.hpp"
#include "randhw/normal.hpp"
#include "randhw/optimize.hpp"
#include "randhw/products.hpp"
#include "randhw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace rhw {

void RhwModel::validate() const {
    const std::size_t n = quad.size();
    if (n == 0 || quad.weights.size() != n) throw DomainError("RhwModel: empty quadrature");
    double sum = 0.0;
    for (double w : quad.weights) {
        if (w < -1e-12) throw DomainError("RhwModel: negative node weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-8) throw DomainError("RhwModel: node weights must sum to 1");
    for (std::size_t i = 1; i < n; ++i)
        if (!(quad.nodes[i] >= quad.nodes[i - 1]))
            throw DomainError("RhwModel: nodes not sorted");
}

namespace {

struct NodeStats {
    double mean, var;
};

NodeStats node_stats(const RhwModel& model, int n, double t) {
    const HwParams p = model.node(n);
    return {hw_b(p, t), hw_variance(p, 0.0, t)};
}

double binom(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c *= double(n - k + i) / double(i);
    return c;
}

double double_factorial_odd(int i) { // (i-1)!! for even i >= 0
    double f = 1.0;
    for (int k = i - 1; k > 1; k -= 2) f *= k;
    return f;
}

double normal_raw_moment(double mean, double var, int m) {
    double sum = 0.0;
    for (int i = 0; i <= m; i += 2) {
        double term = binom(m, i) * double_factorial_odd(i);
        term *= std::pow(var, i / 2);
        if (m - i > 0) term *= std::pow(mean, m - i);
        sum += term;
    }
    return sum;
}

} // namespace

double rand_pdf(const RhwModel& model, double t, double y) {
    if (!(t > 0.0)) throw DomainError("rand_pdf: density requires t > 0");
    double acc = 0.0;
    for (int n = 0; n < model.n_nodes(); ++n) {
        const auto s = node_stats(model, n, t);
        acc += model.quad.weights[n] * norm_pdf(y, s.mean, s.var);
    }
    return acc;
}

double rand_cdf(const RhwModel& model, double t, double y) {
    if (!(t > 0.0)) throw DomainError("rand_cdf: t must be positive");
    double acc = 0.0;
    for (int n = 0; n < model.n_nodes(); ++n) {
        const auto s = node_stats(model, n, t);
        acc += model.quad.weights[n] * norm_cdf((y - s.mean) / std::sqrt(s.var));
    }
    return acc;
}

double rand_moment(const RhwModel& model, int m, double t) {
    if (m < 1) throw DomainError("rand_moment: order must be >= 1");
    if (t < 0.0) throw DomainError("rand_moment: negative time");
    double acc = 0.0;
    for (int n = 0; n < model.n_nodes(); ++n) {
        const auto s = node_stats(model, n, t);
        acc += model.quad.weights[n] * normal_raw_moment(s.mean, s.var, m);
    }
    return acc;
}

std::vector<double> lambda_weights(const RhwModel& model, double t, double y) {
    if (t < 0.0) throw DomainError("lambda_weights: negative time");
    const int n_nodes = model.n_nodes();
    if (t == 0.0 || n_nodes == 1) return model.quad.weights;

    std::vector<double> gamma(n_nodes);
    double gmax = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < n_nodes; ++n) {
        const auto s = node_stats(model, n, t);
        const double d = y - s.mean;
        gamma[n] = std::log(model.quad.weights[n]) - 0.5 * std::log(two_pi * s.var) -
                   d * d / (2.0 * s.var);
        gmax = std::max(gmax, gamma[n]);
    }
    std::vector<double> w(n_nodes);
    double sum = 0.0;
    for (int n = 0; n < n_nodes; ++n) {
        w[n] = std::exp(gamma[n] - gmax);
        sum += w[n];
    }
    for (double& v : w) v /= sum;
    return w;
}

double rhw_drift(const RhwModel& model, double t, double y) {
    if (t < 0.0) throw DomainError("rhw_drift: negative time");
    const std::vector<double> lam = lambda_weights(model, t, y);
    const double slope = model.curve.forward_slope(t);
    const double fwd = model.curve.inst_forward(t);
    double mu = 0.0;
    for (int n = 0; n < model.n_nodes(); ++n) {
        const double theta = model.quad.nodes[n];
        const double var = hw_variance(model.node(n), 0.0, t);
        mu += lam[n] * (slope + theta * fwd + var - theta * y);
    }
    return mu;
}

double rhw_diffusion(const RhwModel& model, double t) {
    if (t < 0.0) throw DomainError("rhw_diffusion: negative time");
    return model.vol(t);
}

int PathSet::index_of(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - t) < 1e-9) return static_cast<int>(i);
    throw MissingEntry("PathSet: time " + std::to_string(t) + " not recorded");
}

namespace {

PathSet simulate_impl(const RhwModel& model, double r0, const std::vector<double>& grid,
                      int n_paths, std::uint64_t seed, const std::vector<double>& record_times) {
    model.validate();
    if (n_paths < 1) throw DomainError("simulate: need at least one path");
    if (grid.empty()) throw DomainError("simulate: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("simulate: grid not strictly increasing");

    const std::vector<double>& rec = record_times.empty() ? grid : record_times;
    // record slot per grid index, -1 if not recorded
    std::vector<int> slot(grid.size(), -1);
    {
        std::size_t g = 0;
        for (std::size_t k = 0; k < rec.size(); ++k) {
            while (g < grid.size() && grid[g] < rec[k] - 1e-9) ++g;
            if (g == grid.size() || std::fabs(grid[g] - rec[k]) > 1e-9)
                throw DomainError("simulate: record time " + std::to_string(rec[k]) +
                                  " is not on the grid");
            slot[g] = static_cast<int>(k);
        }
    }

    const int n_nodes = model.n_nodes();
    const std::size_t n_steps = grid.size() - 1;
    // Per-step coefficients of the mixture drift, laid out step-major.
    std::vector<double> dt(n_steps), sqdt(n_steps), sig(n_steps);
    std::vector<double> mean(n_steps * n_nodes), inv2v(n_steps * n_nodes),
        logc(n_steps * n_nodes), dterm(n_steps * n_nodes);
    std::vector<char> degenerate(n_steps, 0);
    std::vector<double> logw(n_nodes);
    for (int n = 0; n < n_nodes; ++n) logw[n] = std::log(model.quad.weights[n]);
    const std::vector<double>& thetas = model.quad.nodes;

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = grid[i];
        dt[i] = grid[i + 1] - t;
        sqdt[i] = std::sqrt(dt[i]);
        sig[i] = model.vol(t);
        const double slope = model.curve.forward_slope(t);
        const double fwd = model.curve.inst_forward(t);
        for (int n = 0; n < n_nodes; ++n) {
            const auto s = node_stats(model, n, t);
            const std::size_t k = i * n_nodes + n;
            mean[k] = s.mean;
            dterm[k] = slope + thetas[n] * fwd + s.var;
            if (s.var > 0.0) {
                inv2v[k] = 1.0 / (2.0 * s.var);
                logc[k] = logw[n] - 0.5 * std::log(two_pi * s.var);
            } else {
                degenerate[i] = 1;
            }
        }
    }

    PathSet out;
    out.times = rec;
    out.n_paths = n_paths;
    out.rates.assign(rec.size(), std::vector<double>(n_paths));
    out.integrals.assign(rec.size(), std::vector<double>(n_paths));

    std::vector<double> gamma(n_nodes);
    for (int j = 0; j < n_paths; ++j) {
        PathRng rng(seed, static_cast<std::uint64_t>(j));
        double r = r0, disc = 0.0;
        if (slot[0] >= 0) {
            out.rates[slot[0]][j] = r;
            out.integrals[slot[0]][j] = disc;
        }
        for (std::size_t i = 0; i < n_steps; ++i) {
            const std::size_t base = i * n_nodes;
            double mu;
            if (n_nodes == 1) {
                mu = dterm[base] - thetas[0] * r;
            } else if (degenerate[i]) {
                mu = 0.0;
                for (int n = 0; n < n_nodes; ++n)
                    mu += model.quad.weights[n] * (dterm[base + n] - thetas[n] * r);
            } else {
                double gmax = -std::numeric_limits<double>::infinity();
                for (int n = 0; n < n_nodes; ++n) {
                    const double d = r - mean[base + n];
                    gamma[n] = logc[base + n] - d * d * inv2v[base + n];
                    gmax = std::max(gmax, gamma[n]);
                }
                double wsum = 0.0, acc = 0.0;
                for (int n = 0; n < n_nodes; ++n) {
                    const double w = std::exp(gamma[n] - gmax);
                    wsum += w;
                    acc += w * (dterm[base + n] - thetas[n] * r);
                }
                mu = acc / wsum;
            }
            const double r_next = r + mu * dt[i] + sig[i] * sqdt[i] * rng.next_normal();
            disc += 0.5 * (r + r_next) * dt[i];
            r = r_next;
            if (slot[i + 1] >= 0) {
                out.rates[slot[i + 1]][j] = r;
                out.integrals[slot[i + 1]][j] = disc;
            }
        }
    }
    return out;
}

} // namespace

PathSet rhw_euler_simulate(const RhwModel& model, const std::vector<double>& grid, int n_paths,
                           std::uint64_t seed, const std::vector<double>& record_times) {
    if (grid.empty()) throw DomainError("rhw_euler_simulate: empty grid");
    if (std::fabs(grid.front()) > 1e-12)
        throw DomainError("rhw_euler_simulate: grid must start at 0");
    return simulate_impl(model, model.curve.inst_forward(0.0), grid, n_paths, seed, record_times);
}

PathSet rhw_euler_simulate_from(const RhwModel& model, double t0, double r0,
                                const std::vector<double>& grid, int n_paths, std::uint64_t seed,
                                const std::vector<double>& record_times) {
    if (grid.empty()) throw DomainError("rhw_euler_simulate_from: empty grid");
    if (std::fabs(grid.front() - t0) > 1e-9)
        throw DomainError("rhw_euler_simulate_from: grid must start at t0");
    return simulate_impl(model, r0, grid, n_paths, seed, record_times);
}

double rhw_swaption(const RhwModel& model, const SwapSpec& spec, double T_M) {
    model.validate();
    double price = 0.0;
    for (int n = 0; n < model.n_nodes(); ++n)
        price += model.quad.weights[n] * hw_swaption(model.node(n), spec, T_M);
    return price;
}

double rhw_zcb_analytic(const RhwModel& model, double t, double T, double y) {
    const std::vector<double> lam = lambda_weights(model, t, y);
    double acc = 0.0;
    for (int n = 0; n < model.n_nodes(); ++n) {
        const HwParams p = model.node(n);
        acc += lam[n] * hw_zcb(p, t, T, y - hw_b(p, t));
    }
    return acc;
}

double rhw_model_vol(const RhwModel& model, const VolQuote& q) {
    auto zcb = [&](double T) { return model.curve.discount(T); };
    SwapSpec spec = annual_swap(q.expiry, q.expiry + q.tenor, 0.0, +1, 1.0);
    const double atm = atm_strike(zcb, spec);
    const double a0 = annuity(zcb, spec);
    spec.strike = q.strike_ratio * atm;

    auto vol_for = [&](int swap_type) {
        spec.swap_type = swap_type;
        const double price = rhw_swaption(model, spec, q.expiry);
        const OptionType black_type = swap_type > 0 ? OptionType::Put : OptionType::Call;
        return implied_vol_shifted_black(price / a0, atm, spec.strike, q.shift, q.expiry,
                                         black_type);
    };
    if (q.strike_ratio < 1.0 - 1e-9) return vol_for(+1); // OTM receiver below ATM
    if (q.strike_ratio > 1.0 + 1e-9) return vol_for(-1); // OTM payer above ATM
    return 0.5 * (vol_for(+1) + vol_for(-1));
}

VolSurface make_surface(const RhwModel& model,
                        const std::vector<std::pair<double, double>>& expiry_tenor_pairs,
                        const std::vector<double>& strike_ratios, double shift) {
    VolSurface surface;
    for (const auto& [expiry, tenor] : expiry_tenor_pairs) {
        for (double ratio : strike_ratios) {
            VolQuote q{expiry, tenor, ratio, 0.0, shift};
            q.implied_vol = rhw_model_vol(model, q);
            surface.add(q);
        }
    }
    return surface;
}

RhwModel rhw_calibrate(const YieldCurve& curve, const VolSurface& surface, int n_nodes,
                       double T_cot, const std::vector<double>& strike_set) {
    if (n_nodes < 1) throw DomainError("rhw_calibrate: need at least one node");
    if (T_cot <= 0.0) T_cot = surface.max_coterminal();

    std::vector<double> ratios = strike_set.empty() ? surface.strike_ratios(T_cot) : strike_set;
    std::sort(ratios.begin(), ratios.end());
    std::vector<VolQuote> targets;
    for (const auto& q : surface.coterminal_strip(T_cot))
        for (double r : ratios)
            if (std::fabs(q.strike_ratio - r) < 1e-9) {
                targets.push_back(q);
                break;
            }
    if (targets.empty())
        throw MissingEntry("rhw_calibrate: no quotes on the co-terminal strip T_cot = " +
                           std::to_string(T_cot));

    double best_obj = std::numeric_limits<double>::infinity();
    std::optional<RhwModel> best;

    auto objective = [&](const std::vector<double>& ab) {
        const double a = ab[0], b = std::fabs(ab[1]);
        QuadratureSet quad;
        try {
            quad = gauss_quadrature_normal(a, b, n_nodes);
        } catch (const Error&) {
            return 1e9;
        }
        // Strongly negative mean reversion extrapolates badly: reject outright.
        if (quad.nodes.front() < -0.1) return 1e6 * (1.0 - quad.nodes.front());

        RhwModel m{quad, PiecewiseVol{}, curve, a, b};
        try {
            m.vol = bootstrap_vol(curve, surface, T_cot,
                                  [&](const PiecewiseVol& vol, const SwapSpec& sp, double T_M) {
                                      double px = 0.0;
                                      for (int n = 0; n < static_cast<int>(quad.size()); ++n)
                                          px += quad.weights[n] *
                                                hw_swaption(HwParams{quad.nodes[n], vol, curve},
                                                            sp, T_M);
                                      return px;
                                  });
            double sse = 0.0;
            for (const auto& q : targets) {
                const double iv = rhw_model_vol(m, q);
                sse += (iv - q.implied_vol) * (iv - q.implied_vol);
            }
            const double obj = sse / double(targets.size());
            if (obj < best_obj) {
                best_obj = obj;
                best = m;
            }
            return obj;
        } catch (const Error&) {
            return 1e8;
        }
    };

    // The target sits at the vol-bootstrap noise floor (~1e-8 RMS in vol):
    // a looser target stops the search before a degenerate (pure HW) surface
    // has pushed b_hat back to zero.
    const auto result =
        nelder_mead(objective, {0.05, 0.05}, {0.05, 0.05}, 1e-16, 1e-16, 200);
    if (!best)
        throw CalibrationFailure(
            "rhw_calibrate: no feasible (a_hat, b_hat) found; final objective " +
            std::to_string(result.f) + " at a_hat=" + std::to_string(result.x[0]) +
            ", b_hat=" + std::to_string(std::fabs(result.x[1])) + " after " +
            std::to_string(result.iterations) + " iterations");
    return *best;
}

std::vector<double> make_time_grid(double t0, double t1, int steps_per_year,
                                   const std::vector<double>& extra) {
    if (!(t1 > t0)) throw DomainError("make_time_grid: need t1 > t0");
    if (steps_per_year < 1) throw DomainError("make_time_grid: steps_per_year must be >= 1");
    std::vector<double> grid{t0, t1};
    const long k0 = std::lround(std::ceil(t0 * steps_per_year - 1e-9));
    const long k1 = std::lround(std::floor(t1 * steps_per_year + 1e-9));
    for (long k = k0; k <= k1; ++k) grid.push_back(double(k) / steps_per_year);
    for (double t : extra)
        if (t > t0 - 1e-12 && t < t1 + 1e-12) grid.push_back(std::clamp(t, t0, t1));
    std::sort(grid.begin(), grid.end());
    std::vector<double> out;
    for (double t : grid)
        if (out.empty() || t > out.back() + 1e-12) out.push_back(t);
    return out;
}

} // namespace rhw
