#include "randhw/products.hpp"

#include "randhw/quadrature.hpp"
#include "randhw/rng.hpp"
#include "randhw/roots.hpp"
#include "randhw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace rhw {

void BermudanSpec::validate() const {
    underlying.validate();
    if (exercise_dates.empty()) throw DomainError("BermudanSpec: no exercise dates");
    double prev = -std::numeric_limits<double>::infinity();
    for (double te : exercise_dates) {
        if (!(te > prev)) throw DomainError("BermudanSpec: exercise dates not increasing");
        prev = te;
        bool reset = std::fabs(te - underlying.start) < 1e-9;
        for (double tk : underlying.pay_times)
            reset = reset || (std::fabs(te - tk) < 1e-9 && tk < underlying.maturity() - 1e-9);
        if (!reset)
            throw DomainError("BermudanSpec: exercise date " + std::to_string(te) +
                              " is not a swap reset date");
    }
}

namespace {

double swaption_payoff(const ZcbRegressionTable& table, const SwapSpec& swap, double t,
                       double x) {
    auto zcb = [&](double u) { return u <= t + 1e-9 ? 1.0 : table.eval(t, u, x); };
    return std::max(swap_value(zcb, swap, t), 0.0);
}

bool rule_says_exercise(const ExerciseRule& rule, std::size_t e, double payoff, double x) {
    if (!(payoff > 0.0)) return false;
    if (e + 1 == rule.dates.size()) return true; // last date: exercise iff ITM
    if (!rule.has_regression[e]) return false;
    return payoff > rule.cont[e](x);
}

Polynomial fit_with_degrade(const std::vector<double>& xs, const std::vector<double>& ys,
                            int degree) {
    for (int d = degree; d > 0; --d) {
        try {
            return polyfit(xs, ys, d);
        } catch (const RankDeficient&) {
        }
    }
    return polyfit(xs, ys, 0);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(seed ^ mix64(0x9E3779B97F4A7C15ULL + a) ^ mix64(0xC2B2AE3D27D4EB4FULL + b));
}

} // namespace

ExerciseRule bermudan_first_pass(const RhwModel& model, const ZcbRegressionTable& table,
                                 const BermudanSpec& spec, int m_v, std::uint64_t seed,
                                 int reg_degree, int steps_per_year) {
    spec.validate();
    if (reg_degree < 0) throw DomainError("bermudan_first_pass: negative degree");
    const std::vector<double>& ex = spec.exercise_dates;
    const std::size_t n_ex = ex.size();

    const std::vector<double> grid = make_time_grid(0.0, ex.back(), steps_per_year, ex);
    const PathSet sim = rhw_euler_simulate(model, grid, m_v, seed, ex);

    std::vector<std::vector<double>> payoff(n_ex, std::vector<double>(m_v));
    for (std::size_t e = 0; e < n_ex; ++e) {
        const int ie = sim.index_of(ex[e]);
        for (int j = 0; j < m_v; ++j)
            payoff[e][j] = swaption_payoff(table, spec.underlying, ex[e], sim.rates[ie][j]);
    }

    ExerciseRule rule;
    rule.dates = ex;
    rule.degree = reg_degree;
    rule.cont.assign(n_ex > 0 ? n_ex - 1 : 0, Polynomial{{0.0}});
    rule.has_regression.assign(n_ex > 0 ? n_ex - 1 : 0, 0);

    // cv[j]: value at the current backward-induction date, discounted to it.
    std::vector<double> cv = payoff[n_ex - 1];
    for (std::size_t e = n_ex - 1; e-- > 0;) {
        const int ie = sim.index_of(ex[e]);
        const int ie1 = sim.index_of(ex[e + 1]);
        std::vector<double> cont(m_v);
        for (int j = 0; j < m_v; ++j)
            cont[j] = cv[j] * std::exp(-(sim.integrals[ie1][j] - sim.integrals[ie][j]));

        std::vector<double> x_itm, y_itm;
        for (int j = 0; j < m_v; ++j) {
            if (payoff[e][j] > 0.0) {
                x_itm.push_back(sim.rates[ie][j]);
                y_itm.push_back(cont[j]);
            }
        }
        if (x_itm.size() > std::size_t(10 * (reg_degree + 1))) {
            rule.cont[e] = fit_with_degrade(x_itm, y_itm, reg_degree);
            rule.has_regression[e] = 1;
        } else {
            std::fprintf(stderr,
                         "warning: only %zu ITM paths at exercise date %.4f; never exercising "
                         "there\n",
                         x_itm.size(), ex[e]);
        }
        for (int j = 0; j < m_v; ++j)
            cv[j] = rule_says_exercise(rule, e, payoff[e][j], sim.rates[ie][j]) ? payoff[e][j]
                                                                                : cont[j];
    }
    return rule;
}

std::vector<int> apply_exercise_rule(const ZcbRegressionTable& table, const BermudanSpec& spec,
                                     const ExerciseRule& rule, const PathSet& paths,
                                     double after_t) {
    std::vector<int> first(paths.n_paths, -1);
    for (std::size_t e = 0; e < rule.dates.size(); ++e) {
        const double te = rule.dates[e];
        if (te <= after_t + 1e-9) continue;
        const int it = paths.index_of(te);
        for (int j = 0; j < paths.n_paths; ++j) {
            if (first[j] >= 0) continue;
            const double x = paths.rates[it][j];
            const double p = swaption_payoff(table, spec.underlying, te, x);
            if (rule_says_exercise(rule, e, p, x)) first[j] = static_cast<int>(e);
        }
    }
    return first;
}

McEstimate bermudan_price(const RhwModel& model, const ZcbRegressionTable& table,
                          const BermudanSpec& spec, const ExerciseRule& rule, int m_v,
                          std::uint64_t seed, int steps_per_year) {
    spec.validate();
    if (seed == table.seed())
        throw DomainError("bermudan_price: valuation seed must differ from the ZCB table seed");
    const std::vector<double>& ex = spec.exercise_dates;
    const std::vector<double> grid = make_time_grid(0.0, ex.back(), steps_per_year, ex);
    const PathSet sim = rhw_euler_simulate(model, grid, m_v, seed, ex);

    const std::vector<int> first = apply_exercise_rule(table, spec, rule, sim);
    std::vector<double> discounted(m_v, 0.0);
    for (int j = 0; j < m_v; ++j) {
        if (first[j] < 0) continue;
        const int it = sim.index_of(ex[first[j]]);
        const double p = swaption_payoff(table, spec.underlying, ex[first[j]], sim.rates[it][j]);
        discounted[j] = std::exp(-sim.integrals[it][j]) * p;
    }
    return McEstimate{mean(discounted), standard_error(discounted)};
}

std::vector<std::vector<double>> bermudan_future_values(const RhwModel& model,
                                                        const ZcbRegressionTable& table,
                                                        const ExerciseRule& rule,
                                                        const BermudanSpec& spec,
                                                        const PathSet& valuation, int n_colloc,
                                                        std::uint64_t seed, int steps_per_year) {
    spec.validate();
    if (n_colloc < 1) throw DomainError("bermudan_future_values: need at least one node");
    const std::vector<double>& ex = spec.exercise_dates;
    const double last_ex = ex.back();
    const int m_v = valuation.n_paths;

    // Exercise time per valuation path (cash settled: value 0 from then on).
    const std::vector<int> first = apply_exercise_rule(table, spec, rule, valuation);
    std::vector<double> ex_time(m_v, std::numeric_limits<double>::infinity());
    for (int j = 0; j < m_v; ++j)
        if (first[j] >= 0) ex_time[j] = ex[first[j]];

    const int nested_paths = std::min(std::max(m_v / 10, 100), 2000);

    std::vector<std::vector<double>> values(valuation.times.size(),
                                            std::vector<double>(m_v, 0.0));
    for (std::size_t i = 0; i < valuation.times.size(); ++i) {
        const double t_i = valuation.times[i];
        std::vector<double> remaining;
        for (double te : ex)
            if (te > t_i + 1e-9) remaining.push_back(te);
        if (remaining.empty()) continue; // at/after the last exercise date: worthless

        std::vector<int> continuing;
        for (int j = 0; j < m_v; ++j)
            if (ex_time[j] > t_i + 1e-9) continuing.push_back(j);
        if (continuing.empty()) continue;

        // Collocation nodes for the short-rate law at t_i.
        const double m1 = t_i > 0.0 ? rand_moment(model, 1, t_i) : model.curve.inst_forward(0.0);
        const double var =
            t_i > 0.0 ? rand_moment(model, 2, t_i) - m1 * m1 : 0.0;
        std::vector<double> nodes;
        if (var < 1e-16) {
            nodes = {m1};
        } else {
            const int k = std::min(n_colloc, 10);
            std::vector<double> moments(2 * k);
            moments[0] = 1.0;
            for (int m = 1; m < 2 * k; ++m) moments[m] = rand_moment(model, m, t_i);
            try {
                nodes = golub_welsch(moments).first;
            } catch (const NotPositiveDefinite&) {
                std::fprintf(stderr,
                             "warning: moment matrix failed at t=%.4f; falling back to quantile "
                             "collocation nodes\n",
                             t_i);
                const double sd = std::sqrt(var);
                for (int q = 0; q < k; ++q) {
                    const double prob = (q + 0.5) / k;
                    nodes.push_back(find_root(
                        [&](double y) { return rand_cdf(model, t_i, y) - prob; }, m1 - 12.0 * sd,
                        m1 + 12.0 * sd, 1e-12, 1e-12));
                }
            }
        }

        // Nested valuation from (t_i, node) re-using the frozen exercise rule.
        const std::vector<double> ngrid =
            make_time_grid(t_i, last_ex, steps_per_year, remaining);
        std::vector<double> node_values(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const PathSet nsim =
                rhw_euler_simulate_from(model, t_i, nodes[k], ngrid, nested_paths,
                                        derived_seed(seed, i, k), remaining);
            const std::vector<int> nfirst = apply_exercise_rule(table, spec, rule, nsim, t_i);
            std::vector<double> vals(nested_paths, 0.0);
            for (int j = 0; j < nested_paths; ++j) {
                if (nfirst[j] < 0) continue;
                const int it = nsim.index_of(ex[nfirst[j]]);
                const double p =
                    swaption_payoff(table, spec.underlying, ex[nfirst[j]], nsim.rates[it][j]);
                vals[j] = std::exp(-nsim.integrals[it][j]) * p;
            }
            node_values[k] = mean(vals);
        }

        const int idx = static_cast<int>(i);
        for (int j : continuing) {
            const double x = valuation.rates[idx][j];
            const double v = nodes.size() == 1 ? node_values[0]
                                               : lagrange_interp(nodes, node_values, x);
            values[i][j] = std::max(v, 0.0);
        }
    }
    return values;
}

} // namespace rhw
