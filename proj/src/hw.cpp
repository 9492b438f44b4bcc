#include "randhw/hw.hpp"

#include "randhw/errors.hpp"
#include "randhw/normal.hpp"
#include "randhw/products.hpp"
#include "randhw/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace rhw {

namespace {

// psi1(z) = (1 - e^{-z}) / z, psi1(0) = 1;  B(s,t) = (t-s) psi1(theta (t-s)).
double psi1(double z) {
    if (z == 0.0) return 1.0;
    return -std::expm1(-z) / z;
}

// W(x) = int_0^x B(y)^2 dy = [x - B(x)(3 - e^{-theta x})/2] / theta^2.
// The bracket cancels to O(theta^2 x^3), so for small |theta x| we sum the
// series W = x^3 sum_{k>=3} (-1)^k (2 - 2^{k-1}) (theta x)^{k-3} / k!.
double hw_W(double theta, double x) {
    const double z = theta * x;
    if (std::fabs(z) < 0.5) {
        double sum = 0.0, zpow = 1.0, kfact = 6.0, twopow = 4.0; // k = 3 terms
        double sign = -1.0;
        for (int k = 3; k <= 40; ++k) {
            const double term = sign * (2.0 - twopow) / kfact * zpow;
            sum += term;
            if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
            zpow *= z;
            kfact *= k + 1;
            twopow *= 2.0;
            sign = -sign;
        }
        return x * x * x * sum;
    }
    return (x + 2.0 * std::expm1(-z) / theta - std::expm1(-2.0 * z) / (2.0 * theta)) /
           (theta * theta);
}

} // namespace

PiecewiseVol::PiecewiseVol(std::vector<double> pillars, std::vector<double> values)
    : pillars_(std::move(pillars)), values_(std::move(values)) {
    if (values_.empty()) throw DomainError("PiecewiseVol: no values");
    if (!pillars_.empty() && pillars_.size() != values_.size())
        throw DomainError("PiecewiseVol: pillar/value count mismatch");
    for (std::size_t i = 1; i < pillars_.size(); ++i)
        if (!(pillars_[i] > pillars_[i - 1]))
            throw DomainError("PiecewiseVol: pillars not strictly increasing");
    for (double v : values_)
        if (!(v > 0.0)) throw DomainError("PiecewiseVol: volatility must be positive");
}

double PiecewiseVol::operator()(double t) const {
    if (pillars_.empty()) return values_[0];
    const std::size_t idx =
        std::upper_bound(pillars_.begin(), pillars_.end(), t) - pillars_.begin();
    return values_[std::min(idx, values_.size() - 1)];
}

void PiecewiseVol::set_value(std::size_t i, double sigma) {
    if (i >= values_.size()) throw DomainError("PiecewiseVol: pillar index out of range");
    if (!(sigma > 0.0)) throw DomainError("PiecewiseVol: volatility must be positive");
    values_[i] = sigma;
}

std::vector<PiecewiseVol::Segment> PiecewiseVol::segments(double s, double t) const {
    if (t < s) throw DomainError("PiecewiseVol::segments: t < s");
    std::vector<Segment> out;
    if (t == s) return out;
    double u0 = s;
    for (double p : pillars_) {
        if (p <= s) continue;
        if (p >= t) break;
        out.push_back({u0, p, (*this)(u0)});
        u0 = p;
    }
    out.push_back({u0, t, (*this)(u0)});
    return out;
}

std::vector<double> SwapSpec::accruals() const {
    std::vector<double> taus;
    double prev = start;
    for (double tk : pay_times) {
        taus.push_back(tk - prev);
        prev = tk;
    }
    return taus;
}

void SwapSpec::validate() const {
    if (pay_times.empty()) throw DomainError("SwapSpec: no payment dates");
    double prev = start;
    for (double tk : pay_times) {
        if (!(tk > prev)) throw DomainError("SwapSpec: dates not strictly increasing");
        prev = tk;
    }
    if (swap_type != 1 && swap_type != -1)
        throw DomainError("SwapSpec: swap_type must be +1 (receiver) or -1 (payer)");
}

SwapSpec annual_swap(double start, double maturity, double strike, int swap_type,
                     double notional) {
    const double years = maturity - start;
    const int n = static_cast<int>(std::lround(years));
    if (n < 1 || std::fabs(years - n) > 1e-6)
        throw DomainError("annual_swap: maturity - start must be a positive whole number of "
                          "years, got " +
                          std::to_string(years));
    SwapSpec spec;
    spec.start = start;
    for (int k = 1; k <= n; ++k) spec.pay_times.push_back(start + k);
    spec.strike = strike;
    spec.swap_type = swap_type;
    spec.notional = notional;
    return spec;
}

double hw_B(double theta, double s, double t) {
    if (t < s) throw DomainError("hw_B: t < s");
    const double dt = t - s;
    return dt * psi1(theta * dt);
}

double hw_variance(const HwParams& p, double s, double t) {
    if (t < s) throw DomainError("hw_variance: t < s");
    double var = 0.0;
    for (const auto& seg : p.vol.segments(s, t)) {
        const double dt = seg.t1 - seg.t0;
        var += seg.sigma * seg.sigma * std::exp(-2.0 * p.theta * (t - seg.t1)) * dt *
               psi1(2.0 * p.theta * dt);
    }
    return var;
}

double hw_V(const HwParams& p, double s, double t) {
    if (t < s) throw DomainError("hw_V: t < s");
    double v = 0.0;
    for (const auto& seg : p.vol.segments(s, t))
        v += seg.sigma * seg.sigma * (hw_W(p.theta, t - seg.t0) - hw_W(p.theta, t - seg.t1));
    return v;
}

// I(t) = int_0^t sigma^2(u) B(u,t) e^{-theta (t-u)} du; the integrand is the
// derivative of B^2/2 in the time-to-maturity variable.
static double hw_I(const HwParams& p, double t) {
    double acc = 0.0;
    for (const auto& seg : p.vol.segments(0.0, t)) {
        const double b0 = hw_B(p.theta, seg.t0, t);
        const double b1 = hw_B(p.theta, seg.t1, t);
        acc += seg.sigma * seg.sigma * 0.5 * (b0 * b0 - b1 * b1);
    }
    return acc;
}

double hw_b(const HwParams& p, double t) {
    if (t < 0.0) throw DomainError("hw_b: negative time");
    return p.curve.inst_forward(t) - p.x0 * std::exp(-p.theta * t) + hw_I(p, t);
}

double hw_int_b(const HwParams& p, double s, double t) {
    if (t < s) throw DomainError("hw_int_b: t < s");
    // int f^M = ln(P^M(s)/P^M(t)); int I = (V(0,t) - V(0,s))/2.
    double acc = p.curve.log_discount(t) - p.curve.log_discount(s);
    acc += 0.5 * (hw_V(p, 0.0, t) - hw_V(p, 0.0, s));
    if (p.x0 != 0.0) acc -= p.x0 * std::exp(-p.theta * s) * hw_B(p.theta, s, t);
    return acc;
}

BondFactors hw_bond_factors(const HwParams& p, double t, double T) {
    if (T < t) throw DomainError("hw_bond_factors: T < t");
    if (t < 0.0) throw DomainError("hw_bond_factors: negative time");
    BondFactors f;
    f.b = hw_B(p.theta, t, T);
    f.log_a = p.curve.log_discount(t) - p.curve.log_discount(T) +
              0.5 * (hw_V(p, t, T) - hw_V(p, 0.0, T) + hw_V(p, 0.0, t));
    if (p.x0 != 0.0) f.log_a += p.x0 * std::exp(-p.theta * t) * f.b;
    return f;
}

double hw_zcb(const HwParams& p, double t, double T, double x) {
    const BondFactors f = hw_bond_factors(p, t, T);
    return std::exp(f.log_a - f.b * x);
}

double hw_zcbo(const HwParams& p, double t, double T, double S, double K, OptionType type,
               double x) {
    if (!(t <= T && T <= S)) throw DomainError("hw_zcbo: need t <= T <= S");
    if (!(K > 0.0)) throw DomainError("hw_zcbo: strike must be positive");
    const double p_t_T = hw_zcb(p, t, T, x);
    const double p_t_S = hw_zcb(p, t, S, x);
    const double sigma = hw_B(p.theta, T, S) * std::sqrt(hw_variance(p, t, T));
    // Black formula on the forward bond price with numeraire P(t,T).
    return p_t_T * black_price(p_t_S / p_t_T, K, sigma, 1.0, type);
}

double hw_swaption(const HwParams& p, const SwapSpec& spec, double T_M) {
    spec.validate();
    if (T_M > spec.start + 1e-12) throw DomainError("hw_swaption: expiry after swap start");
    if (T_M < 0.0) throw DomainError("hw_swaption: negative expiry");

    // Payoff at T_M of the receiver swap: sum_k w_k P(T_M, D_k).
    std::vector<double> dates{spec.start};
    dates.insert(dates.end(), spec.pay_times.begin(), spec.pay_times.end());
    const std::size_t m = spec.pay_times.size();
    std::vector<double> w(m + 1);
    w[0] = -1.0;
    const auto taus = spec.accruals();
    for (std::size_t k = 1; k <= m; ++k) w[k] = spec.strike * taus[k - 1];
    w[m] += 1.0;

    std::vector<BondFactors> f(m + 1);
    for (std::size_t k = 0; k <= m; ++k) f[k] = hw_bond_factors(p, T_M, dates[k]);

    auto g = [&](double x) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= m; ++k) acc += w[k] * std::exp(f[k].log_a - f[k].b * x);
        return acc;
    };

    // Bracket the critical state: g is decreasing, so g(lo) > 0 > g(hi).
    double lo = -1.0, hi = 1.0;
    while (g(lo) <= 0.0 && lo > -5.0) lo = std::max(2.0 * lo, -5.0);
    while (g(hi) >= 0.0 && hi < 5.0) hi = std::min(2.0 * hi, 5.0);
    if (!(g(lo) > 0.0 && g(hi) < 0.0))
        throw NoBracket("hw_swaption: no sign change of the swap value in x within [-5, 5]");
    double prev = g(lo);
    for (int i = 1; i <= 8; ++i) {
        const double cur = g(lo + (hi - lo) * i / 8.0);
        if (!(cur < prev))
            throw Error("hw_swaption: swap value is not monotone decreasing in the state");
        prev = cur;
    }
    const double x_star = find_root(g, lo, hi, 1e-12, 1e-14);

    // Jamshidian: receiver = sum w_k ZCBO-call(K_k), payer = puts; phi = delta.
    const OptionType type = spec.swap_type > 0 ? OptionType::Call : OptionType::Put;
    double price = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double strike_k = std::exp(f[k].log_a - f[k].b * x_star);
        price += w[k] * hw_zcbo(p, 0.0, T_M, dates[k], strike_k, type);
    }
    return spec.notional * price;
}

double hw_exact_step(const HwParams& p, double x_s, double s, double t, double gaussian) {
    if (!(t > s)) throw DomainError("hw_exact_step: need t > s");
    return x_s * std::exp(-p.theta * (t - s)) + std::sqrt(hw_variance(p, s, t)) * gaussian;
}

namespace {

// Solve pricer(sigma_c) = target for one bootstrap pillar: Newton with a
// numeric derivative, falling back to a bracketed Brent solve.
double solve_pillar(const std::function<double(double)>& price_err, double guess,
                    const std::string& label) {
    const double f_tol = 1e-8;
    double sigma = std::clamp(guess, 1e-6, 1.0);
    for (int it = 0; it < 30; ++it) {
        const double fv = price_err(sigma);
        if (std::fabs(fv) < f_tol) return sigma;
        const double h = std::max(1e-6 * sigma, 1e-8);
        const double fp = (price_err(sigma + h) - fv) / h;
        if (!(fp > 0.0)) break;
        const double next = sigma - fv / fp;
        if (!std::isfinite(next) || next <= 0.0 || next > 2.0) break;
        if (std::fabs(next - sigma) < 1e-15) return next;
        sigma = next;
    }
    double lo = 1e-10, hi = 0.2;
    if (price_err(lo) > 0.0)
        throw CalibrationFailure(label + ": market price requires non-positive volatility "
                                         "(residual at sigma=1e-10: " +
                                 std::to_string(price_err(lo)) + ")");
    while (price_err(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 10.0)
            throw CalibrationFailure(label + ": no volatility below 10 matches the market price "
                                             "(residual at sigma=10: " +
                                     std::to_string(price_err(10.0)) + ")");
    }
    try {
        return find_root(price_err, lo, hi, f_tol, 1e-14);
    } catch (const Error& e) {
        throw CalibrationFailure(label + ": bisection failed: " + e.what());
    }
}

} // namespace

PiecewiseVol bootstrap_vol(const YieldCurve& curve, const VolSurface& surface, double T_cot,
                           const SwaptionPricer& pricer) {
    std::vector<double> expiries;
    for (const auto& q : surface.coterminal_strip(T_cot)) {
        if (std::fabs(q.strike_ratio - 1.0) > 1e-9) continue;
        if (expiries.empty() || q.expiry > expiries.back() + 1e-9) expiries.push_back(q.expiry);
    }
    if (expiries.empty())
        throw MissingEntry("bootstrap_vol: no ATM quotes on the co-terminal strip T_cot = " +
                           std::to_string(T_cot));

    auto zcb = [&](double T) { return curve.discount(T); };
    PiecewiseVol vol(expiries, std::vector<double>(expiries.size(), 0.01));
    for (std::size_t c = 0; c < expiries.size(); ++c) {
        const double expiry = expiries[c];
        const VolQuote q = surface.atm_quote(expiry, T_cot - expiry);
        SwapSpec spec = annual_swap(expiry, T_cot, 0.0, +1, 1.0);
        spec.strike = atm_strike(zcb, spec);
        const double a0 = annuity(zcb, spec);
        const double target =
            a0 * shifted_black_price(spec.strike, spec.strike, q.shift, q.implied_vol, expiry,
                                     OptionType::Put);
        auto price_err = [&](double sig) {
            PiecewiseVol trial = vol;
            trial.set_value(c, sig);
            return pricer(trial, spec, expiry) - target;
        };
        const std::string label = "pillar " + std::to_string(c) + " (expiry " +
                                  std::to_string(expiry) + "y into " + std::to_string(T_cot) +
                                  "y)";
        const double guess = c == 0 ? 0.01 : vol.values()[c - 1];
        vol.set_value(c, solve_pillar(price_err, guess, label));
    }
    return vol;
}

PiecewiseVol hw_calibrate_vol(const YieldCurve& curve, const VolSurface& surface, double theta,
                              double T_cot) {
    if (T_cot <= 0.0) T_cot = surface.max_coterminal();
    return bootstrap_vol(curve, surface, T_cot,
                         [&](const PiecewiseVol& vol, const SwapSpec& spec, double T_M) {
                             return hw_swaption(HwParams{theta, vol, curve}, spec, T_M);
                         });
}

double hw_calibrate_mean_reversion(const YieldCurve& curve, const VolSurface& surface,
                                   double T_cot) {
    if (T_cot <= 0.0) T_cot = surface.max_coterminal();
    const auto atm = surface.atm_quotes();
    if (atm.empty()) throw MissingEntry("hw_calibrate_mean_reversion: no ATM quotes");
    auto zcb = [&](double T) { return curve.discount(T); };

    auto objective = [&](double theta) {
        PiecewiseVol vol;
        try {
            vol = hw_calibrate_vol(curve, surface, theta, T_cot);
        } catch (const Error&) {
            return 1e10;
        }
        const HwParams p{theta, vol, curve};
        double sse = 0.0;
        for (const auto& q : atm) {
            SwapSpec spec = annual_swap(q.expiry, q.expiry + q.tenor, 0.0, +1, 1.0);
            spec.strike = atm_strike(zcb, spec);
            const double a0 = annuity(zcb, spec);
            const double price = hw_swaption(p, spec, q.expiry);
            double iv;
            try {
                iv = implied_vol_shifted_black(price / a0, spec.strike, spec.strike, q.shift,
                                               q.expiry, OptionType::Put);
            } catch (const Error&) {
                return 1e10;
            }
            sse += (iv - q.implied_vol) * (iv - q.implied_vol);
        }
        return sse / double(atm.size());
    };

    const double theta = golden_minimize(objective, -0.1, 1.0, 1e-5);
    if (theta < 0.0)
        std::fprintf(stderr, "warning: calibrated mean reversion is negative (%.6f)\n", theta);
    return theta;
}

} // namespace rhw
