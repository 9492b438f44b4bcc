#include "randhw/black.hpp"

#include "randhw/errors.hpp"
#include "randhw/normal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rhw {

double black_price(double fwd, double strike, double vol, double expiry, OptionType type) {
    if (!(fwd > 0.0) || !(strike > 0.0))
        throw DomainError("black_price: forward and strike must be positive");
    if (vol < 0.0 || expiry < 0.0)
        throw DomainError("black_price: negative vol or expiry");
    const double phi = static_cast<double>(type);
    const double stddev = vol * std::sqrt(expiry);
    if (stddev == 0.0)
        return std::max(phi * (fwd - strike), 0.0);
    const double d1 = std::log(fwd / strike) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    return phi * (fwd * norm_cdf(phi * d1) - strike * norm_cdf(phi * d2));
}

double shifted_black_price(double fwd, double strike, double shift, double vol, double expiry,
                           OptionType type) {
    if (!(fwd + shift > 0.0) || !(strike + shift > 0.0))
        throw DomainError("shifted_black_price: displaced forward/strike must be positive");
    return black_price(fwd + shift, strike + shift, vol, expiry, type);
}

double implied_vol_shifted_black(double price, double fwd, double strike, double shift,
                                 double expiry, OptionType type) {
    if (!(fwd + shift > 0.0) || !(strike + shift > 0.0))
        throw DomainError("implied_vol_shifted_black: displaced arguments must be positive");
    const double f = fwd + shift;
    const double k = strike + shift;
    const double phi = static_cast<double>(type);

    constexpr double vol_lo = 1e-6;
    constexpr double vol_hi = 5.0;
    const double intrinsic = std::max(phi * (f - k), 0.0);
    const double upper = (type == Call) ? f : k; // sigma -> infinity limit

    if (price < intrinsic - 1e-12 || price >= upper)
        throw NoSolution("implied_vol_shifted_black: price outside [" + std::to_string(intrinsic) +
                         ", " + std::to_string(upper) + ")");
    const double p_lo = black_price(f, k, vol_lo, expiry, type);
    if (price <= p_lo)
        return vol_lo; // at (or numerically indistinguishable from) the intrinsic floor

    // Newton in vol; the price is smooth, convex near the money, and monotone
    // in vol, so this converges in a handful of steps for interior prices.
    double sigma = 0.2;
    for (int it = 0; it < 20; ++it) {
        const double v = black_price(f, k, sigma, expiry, type);
        const double sq = std::sqrt(expiry);
        const double d1 = std::log(f / k) / (sigma * sq) + 0.5 * sigma * sq;
        const double vega = f * norm_pdf(d1) * sq;
        if (vega < 1e-14)
            break;
        const double next = sigma - (v - price) / vega;
        if (!(next > vol_lo) || !(next < vol_hi))
            break;
        if (std::abs(next - sigma) < 1e-14) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    if (std::abs(black_price(f, k, sigma, expiry, type) - price) <= 1e-12)
        return sigma;

    // Bisection fallback on the full bracket (monotone objective).
    double lo = vol_lo, hi = vol_hi;
    double f_lo = p_lo - price;
    double f_hi = black_price(f, k, hi, expiry, type) - price;
    if (f_lo > 0.0 || f_hi < 0.0)
        throw NoSolution("implied_vol_shifted_black: no vol in [1e-6, 5] reproduces the price");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = black_price(f, k, mid, expiry, type) - price;
        if (std::abs(fm) < 1e-12 || hi - lo < 1e-14)
            return mid;
        if ((fm < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace rhw
