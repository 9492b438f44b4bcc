#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace rhw {

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Downhill-simplex minimizer. Stops when the best value drops below f_target,
// when the simplex value spread falls below f_tol, or after max_iter steps;
// always returns the best vertex seen.
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const std::vector<double>& step,
                             double f_target, double f_tol, int max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step[i];
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (fs[best] <= f_target || std::fabs(fs[worst] - fs[best]) < f_tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d] / double(n);
        }
        auto blend = [&](double c) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + c * (centroid[d] - xs[worst][d]);
            return p;
        };

        std::vector<double> xr = blend(1.0);
        double fr = f(xr);
        if (fr < fs[best]) {
            std::vector<double> xe = blend(2.0);
            double fe = f(xe);
            if (fe < fr) { xs[worst] = std::move(xe); fs[worst] = fe; }
            else { xs[worst] = std::move(xr); fs[worst] = fr; }
        } else if (fr < fs[second]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            std::vector<double> xc = blend(fr < fs[worst] ? 0.5 : -0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d) xs[i][d] = 0.5 * (xs[i][d] + xs[best][d]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    sort_simplex();
    return NelderMeadResult{xs[order[0]], fs[order[0]], iter, converged};
}

} // namespace rhw
