#pragma once

#include "randhw/errors.hpp"

#include <vector>

namespace rhw {

// Composite trapezoid over a (strictly increasing) grid of sample points.
inline double trapezoid(const std::vector<double>& ts, const std::vector<double>& vs) {
    if (ts.size() != vs.size())
        throw DomainError("trapezoid: grid/value length mismatch");
    if (ts.size() < 2)
        return 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double dt = ts[i] - ts[i - 1];
        if (!(dt > 0.0))
            throw DomainError("trapezoid: grid not strictly increasing");
        acc += 0.5 * (vs[i] + vs[i - 1]) * dt;
    }
    return acc;
}

} // namespace rhw
