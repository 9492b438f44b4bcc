#include "randhw/surface.hpp"

#include "randhw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rhw {

namespace {
constexpr double kGridTol = 1e-9;

bool close(double a, double b) { return std::fabs(a - b) < kGridTol; }
} // namespace

std::vector<VolQuote> VolSurface::coterminal_strip(double t_cot) const {
    std::vector<VolQuote> out;
    for (const auto& q : quotes_)
        if (close(q.expiry + q.tenor, t_cot)) out.push_back(q);
    std::sort(out.begin(), out.end(), [](const VolQuote& a, const VolQuote& b) {
        if (!close(a.expiry, b.expiry)) return a.expiry < b.expiry;
        return a.strike_ratio < b.strike_ratio;
    });
    return out;
}

std::vector<VolQuote> VolSurface::atm_quotes() const {
    std::vector<VolQuote> out;
    for (const auto& q : quotes_)
        if (close(q.strike_ratio, 1.0)) out.push_back(q);
    std::sort(out.begin(), out.end(), [](const VolQuote& a, const VolQuote& b) {
        if (!close(a.expiry, b.expiry)) return a.expiry < b.expiry;
        return a.tenor < b.tenor;
    });
    return out;
}

VolQuote VolSurface::atm_quote(double expiry, double tenor) const {
    for (const auto& q : quotes_)
        if (close(q.strike_ratio, 1.0) && close(q.expiry, expiry) && close(q.tenor, tenor))
            return q;
    throw MissingEntry("no ATM quote at expiry " + std::to_string(expiry) + ", tenor " +
                       std::to_string(tenor));
}

std::vector<double> VolSurface::strike_ratios(double t_cot) const {
    std::vector<double> out;
    for (const auto& q : quotes_) {
        if (!close(q.expiry + q.tenor, t_cot)) continue;
        bool seen = false;
        for (double r : out)
            if (close(r, q.strike_ratio)) { seen = true; break; }
        if (!seen) out.push_back(q.strike_ratio);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double VolSurface::max_coterminal() const {
    if (quotes_.empty()) throw MissingEntry("vol surface is empty");
    double best = 0.0;
    for (const auto& q : quotes_) best = std::max(best, q.expiry + q.tenor);
    return best;
}

} // namespace rhw
