#pragma once

#include "randhw/errors.hpp"
#include "randhw/hw.hpp"
#include "randhw/polyfit.hpp"
#include "randhw/rhw.hpp"
#include "randhw/zcbreg.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace rhw {

// zcb is any callable T -> P(t,T) for the valuation time t implied by the
// caller (so zcb(u) = 1 for u <= t).

// Sum of tau_k * P(t, T_k) over payment dates strictly after t.
template <typename Zcb>
double annuity(Zcb&& zcb, const SwapSpec& spec, double t = -1.0) {
    spec.validate();
    double a = 0.0, prev = spec.start;
    for (double tk : spec.pay_times) {
        if (tk > t + 1e-12) a += (tk - prev) * zcb(tk);
        prev = tk;
    }
    return a;
}

// Swap value at t counting strictly-future payments only; the floating leg is
// valued at par from max(t, start), so a seasoned swap's current period is
// treated as freshly reset.
template <typename Zcb>
double swap_value(Zcb&& zcb, const SwapSpec& spec, double t = 0.0) {
    spec.validate();
    if (t >= spec.maturity() - 1e-12) return 0.0;
    const double float_leg = zcb(std::max(t, spec.start)) - zcb(spec.maturity());
    const double fixed_leg = spec.strike * annuity(zcb, spec, t);
    return spec.swap_type * spec.notional * (fixed_leg - float_leg);
}

// Forward swap rate (P(t,T_0) - P(t,T_m)) / A(t) over the full schedule.
template <typename Zcb>
double atm_strike(Zcb&& zcb, const SwapSpec& spec) {
    const double a = annuity(zcb, spec);
    if (!(a > 1e-12)) throw DomainError("atm_strike: degenerate annuity");
    return (zcb(spec.start) - zcb(spec.maturity())) / a;
}

// Cash-settled Bermudan swaption on a fixed-maturity underlying swap;
// exercise dates must be swap reset dates (start or payment dates before
// maturity). Exposure after exercise is zero.
struct BermudanSpec {
    SwapSpec underlying;
    std::vector<double> exercise_dates;
    void validate() const;
};

// Frozen exercise rule from the first Longstaff-Schwartz pass: continuation
// polynomials in the short rate for every exercise date except the last
// (where exercise happens iff the payoff is positive). Dates whose regression
// could not be fitted (no ITM paths) never exercise.
struct ExerciseRule {
    std::vector<double> dates;
    std::vector<Polynomial> cont;       // size dates.size()-1
    std::vector<char> has_regression;   // size dates.size()-1
    int degree = 2;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// First pass: backward induction regressing path-discounted continuation
// cashflows on the short rate over ITM paths only; the regression defines the
// exercise rule and is not used as the price.
ExerciseRule bermudan_first_pass(const RhwModel& model, const ZcbRegressionTable& table,
                                 const BermudanSpec& spec, int m_v, std::uint64_t seed,
                                 int reg_degree, int steps_per_year);

/// Second pass on an independent simulation: apply the frozen rule path-wise
// and average the discounted first-exercise payoffs.
McEstimate bermudan_price(const RhwModel& model, const ZcbRegressionTable& table,
                          const BermudanSpec& spec, const ExerciseRule& rule, int m_v,
                          std::uint64_t seed, int steps_per_year);

// Collocation-based future values V(t_i; r_j(t_i)) for every recorded date of
/// an existing valuation simulation: per date, Gauss nodes of the short-rate
// law (moment-based, quantile fallback), one nested simulation per node
// re-using the frozen rule, Lagrange interpolation across nodes. Cash-settled:
// paths report 0 from their exercise date onward.
std::vector<std::vector<double>> bermudan_future_values(const RhwModel& model,
                                                        const ZcbRegressionTable& table,
                                                        const ExerciseRule& rule,
                                                        const BermudanSpec& spec,
                                                        const PathSet& valuation, int n_colloc,
                                                        std::uint64_t seed, int steps_per_year);

// Per-path first-exercise indices into rule.dates (-1 = never exercises),
// considering only exercise dates strictly after `after_t`; the paths must
// have every such date recorded. Shared by pricing and exposure.
std::vector<int> apply_exercise_rule(const ZcbRegressionTable& table, const BermudanSpec& spec,
                                     const ExerciseRule& rule, const PathSet& paths,
                                     double after_t = -1.0);

} // namespace rhw
