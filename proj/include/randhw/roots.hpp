#pragma once

#include "randhw/errors.hpp"

#include <cmath>

namespace rhw {

// Brent's method on a sign-changing bracket. Stops when |f| < f_tol or the
// bracket width falls below x_tol; throws NoBracket / MaxIterations.
template <class F>
double find_root(F&& f, double lo, double hi, double f_tol = 1e-12, double x_tol = 1e-14,
                 int max_iter = 200) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoBracket("find_root: no sign change on bracket");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * x_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) < f_tol)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic / secant step.
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw MaxIterations("find_root: Brent did not converge in max_iter");
}

// Newton iteration with numeric or supplied derivative, falling back to a
// bracketed Brent solve on [lo, hi] when it wanders or stalls.
template <class F, class DF>
double newton_root(F&& f, DF&& df, double x0, double lo, double hi, double f_tol = 1e-12,
                   int max_iter = 100) {
    double x = x0;
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (std::abs(fx) < f_tol)
            return x;
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d))
            break;
        const double next = x - fx / d;
        if (!(next > lo) || !(next < hi))
            break;
        if (std::abs(next - x) < 1e-16 * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return find_root(f, lo, hi, f_tol);
}

// Golden-section minimization of a unimodal scalar function; returns argmin.
template <class F>
double golden_minimize(F&& f, double lo, double hi, double x_tol = 1e-6, int max_iter = 200) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace rhw
