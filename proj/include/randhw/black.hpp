#pragma once

namespace rhw {

// Option type doubles as the sign phi in the Black formula.
enum OptionType : int { Call = +1, Put = -1 };

// Undiscounted Black-76 value phi*[F N(phi d1) - K N(phi d2)] with zero rate.
// vol = 0 or expiry = 0 collapses to the intrinsic value.
double black_price(double fwd, double strike, double vol, double expiry, OptionType type);

// Displaced-diffusion quote convention for (possibly negative) swap rates:
// identical to black_price evaluated at (fwd+shift, strike+shift). Value is
// per unit of annuity; multiply by A(t) for a swaption price.
double shifted_black_price(double fwd, double strike, double shift, double vol, double expiry,
                           OptionType type);

// Inversion of shifted_black_price. Newton from 0.2 with automatic fallback to
// bisection on [1e-6, 5]; throws NoSolution when the price violates the
// no-arbitrage bounds of the displaced forward.
double implied_vol_shifted_black(double price, double fwd, double strike, double shift,
                                 double expiry, OptionType type);

} // namespace rhw
