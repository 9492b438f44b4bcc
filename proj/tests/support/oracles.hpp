// Independent numerical reference implementations used by the test suite.
// Everything here is built from generic quadrature and textbook stochastic
// calculus (conditional Gaussian moments as explicit integrals), deliberately
// avoiding the closed forms under test in the library.
#pragma once

#include "randhw/curve.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature
// ---------------------------------------------------------------------------

namespace detail {
inline double simpson_leaf(const std::function<double(double)>& f, double a, double fa, double b,
                           double fb, double m, double fm) {
    (void)f;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                          double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_leaf(f, a, fa, m, fm, lm, flm);
    const double right = simpson_leaf(f, m, fm, b, fb, rm, frm);
    if (depth <= 0) return left + right;
    if (std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
} // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson_leaf(f, a, fa, b, fb, m, fm);
    return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// ---------------------------------------------------------------------------
// Normal density / Black prices by direct integration
// ---------------------------------------------------------------------------

inline double npdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(8.0 * std::atan(1.0)); }

// Undiscounted Black price by integrating the payoff against the standard
// normal law of the terminal Brownian driver; type +1 call, -1 put.
inline double black_numeric(double fwd, double strike, double sigma, double expiry, int type) {
    if (fwd <= 0.0 || strike <= 0.0) throw std::invalid_argument("black_numeric: need F,K > 0");
    const double sd = sigma * std::sqrt(expiry);
    auto payoff = [&](double z) {
        const double s = fwd * std::exp(-0.5 * sd * sd + sd * z);
        const double v = type > 0 ? s - strike : strike - s;
        return (v > 0.0 ? v : 0.0) * npdf(z);
    };
    return integrate(payoff, -14.0, 14.0, 1e-13);
}

inline double shifted_black_numeric(double fwd, double strike, double shift, double sigma,
                                    double expiry, int type) {
    return black_numeric(fwd + shift, strike + shift, sigma, expiry, type);
}

// ---------------------------------------------------------------------------
// Hull-White reference quantities from raw integrals.
//
// For dx = -theta*x dt + sigma(t) dW, x(0)=0 and r = x + b the conditional
// law of (x(t), int_s^t x du) given x(s) is Gaussian with
//   E[x(t)]   = x(s) e^{-theta (t-s)}
//   E[int]    = x(s) B(s,t),            B(s,t) = int_s^t e^{-theta(u-s)} du
//   Var[x(t)] = int_s^t sigma(u)^2 e^{-2 theta (t-u)} du
//   Var[int]  = int_s^t sigma(u)^2 B(u,t)^2 du            (=: V(s,t))
//   Cov       = int_s^t sigma(u)^2 e^{-theta(t-u)} B(u,t) du
// and the fitted drift contributes int_s^t b du = ln(P(s)/P(t)) + (V(0,t) -
// V(0,s))/2. All integrals are evaluated with adaptive Simpson.
// ---------------------------------------------------------------------------

struct HwNumeric {
    double theta = 0.0;
    std::function<double(double)> sigma;
    const rhw::YieldCurve* curve = nullptr;

    double B(double s, double t) const {
        return integrate([&](double u) { return std::exp(-theta * (u - s)); }, s, t, 1e-13);
    }
    double var_x(double s, double t) const {
        return integrate(
            [&](double u) {
                const double sg = sigma(u);
                return sg * sg * std::exp(-2.0 * theta * (t - u));
            },
            s, t, 1e-14);
    }
    double V(double s, double t) const {
        return integrate(
            [&](double u) {
                const double sg = sigma(u), bu = B(u, t);
                return sg * sg * bu * bu;
            },
            s, t, 1e-14);
    }
    double cov_x_int(double s, double t) const {
        return integrate(
            [&](double u) {
                const double sg = sigma(u);
                return sg * sg * std::exp(-theta * (t - u)) * B(u, t);
            },
            s, t, 1e-14);
    }
    double int_b(double s, double t) const {
        return std::log(curve->discount(s) / curve->discount(t)) +
               0.5 * (V(0.0, t) - V(0.0, s));
    }
    // ln A(t,T) and P(t,T) = A e^{-B x} for the affine bond reconstruction.
    double log_a(double t, double T) const {
        return std::log(curve->discount(T) / curve->discount(t)) +
               0.5 * (V(t, T) - V(0.0, T) + V(0.0, t));
    }
    double zcb(double t, double T, double x) const {
        return std::exp(log_a(t, T) - B(t, T) * x);
    }
};

// Exact joint paths of (x(t_i), int_0^{t_i} x du) over a date grid, using the
// conditional Gaussian sampling above with an RNG unrelated to the library's.
struct ExactHwPaths {
    std::vector<double> times;                // includes t=0 first
    std::vector<std::vector<double>> x;       // [date][path]
    std::vector<std::vector<double>> int_x;   // [date][path]
};

inline ExactHwPaths exact_hw_paths(const HwNumeric& hw, const std::vector<double>& times,
                                   int n_paths, unsigned long long seed) {
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("exact_hw_paths: grid must start at 0");
    ExactHwPaths out;
    out.times = times;
    out.x.assign(times.size(), std::vector<double>(n_paths, 0.0));
    out.int_x.assign(times.size(), std::vector<double>(n_paths, 0.0));

    struct Step {
        double decay, b, vx, vi, cov;
    };
    std::vector<Step> steps;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double s = times[i - 1], t = times[i];
        Step st;
        st.decay = std::exp(-hw.theta * (t - s));
        st.b = hw.B(s, t);
        st.vx = hw.var_x(s, t);
        st.vi = hw.V(s, t);
        st.cov = hw.cov_x_int(s, t);
        steps.push_back(st);
    }

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int j = 0; j < n_paths; ++j) {
        double xu = 0.0, iu = 0.0;
        for (std::size_t i = 1; i < times.size(); ++i) {
            const Step& st = steps[i - 1];
            const double z1 = nd(gen), z2 = nd(gen);
            const double sx = std::sqrt(st.vx);
            const double beta = st.cov / st.vx;
            const double resid = std::sqrt(std::max(st.vi - st.cov * st.cov / st.vx, 0.0));
            const double dx_mean = xu * st.decay;
            const double di_mean = xu * st.b;
            const double xn = dx_mean + sx * z1;
            iu += di_mean + beta * (xn - dx_mean) + resid * z2;
            xu = xn;
            out.x[i][j] = xu;
            out.int_x[i][j] = iu;
        }
    }
    return out;
}

// Independent swap PV from a discount-factor functor: receiver = +1 pays
// float, receives fixed; value = delta * N * (K * sum tau_k P(t,T_k) -
// (P(t,T_0) - P(t,T_m))) over strictly future dates.
template <typename Zcb>
double swap_pv(const Zcb& zcb, double start, const std::vector<double>& pay_times, double strike,
               int swap_type, double notional, double t = 0.0) {
    const double maturity = pay_times.back();
    if (t >= maturity - 1e-12) return 0.0;
    double ann = 0.0;
    double prev = start;
    for (double tk : pay_times) {
        if (tk > t) ann += (tk - prev) * zcb(tk);
        prev = tk;
    }
    const double float_leg = zcb(t > start ? t : start) - zcb(maturity);
    return swap_type * notional * (strike * ann - float_leg);
}

} // namespace oracle
