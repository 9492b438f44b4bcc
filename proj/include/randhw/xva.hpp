#pragma once

#include <vector>

namespace rhw {

// Constant-hazard default curve: PD(t) = 1 - e^{-lambda t}.
struct CreditCurve {
    double hazard = 0.0;
    double recovery = 0.0; // RR in [0, 1)
    double pd(double t) const;
};

// Per-date exposure metrics: EPE/ENE discounted to t=0, PFE/PFL undiscounted
// alpha-quantiles of the positive/negative exposure (in percent, e.g. 99).
struct ExposureProfile {
    std::vector<double> dates;
    std::vector<double> epe;
    std::vector<double> ene;
    std::vector<double> pfe;
    std::vector<double> pfl;
    double alpha = 99.0;
};

// One-date reductions. values[j] = V(t_i; path j), discounts[j] =
// int_0^{t_i} r_j du.
double epe(const std::vector<double>& values, const std::vector<double>& discounts);
double ene(const std::vector<double>& values, const std::vector<double>& discounts);
double pfe(const std::vector<double>& values, double alpha);
double pfl(const std::vector<double>& values, double alpha);

ExposureProfile build_profile(const std::vector<double>& dates,
                              const std::vector<std::vector<double>>& values,
                              const std::vector<std::vector<double>>& discounts, double alpha);

// CVA = (1 - RR) sum_i EPE(t_i) [PD_C(t_i) - PD_C(t_{i-1})], PD taken from 0
// before the first profile date.
double cva(const ExposureProfile& profile, const CreditCurve& credit_cpty, double rr);

// DVA mirrors CVA on ENE with the institution's own hazard; uses the curve's
// recovery. Non-positive by construction.
double dva(const ExposureProfile& profile, const CreditCurve& credit_self);

// Bilateral CVA: both terms weighted by the other party's survival to the
// previous date. survival_weights=false forces the weights to 1, which
// reduces the expression to cva + dva (testing hook).
double bcva(const ExposureProfile& profile, const CreditCurve& credit_cpty,
            const CreditCurve& credit_self, double rr, bool survival_weights = true);

} // namespace rhw
