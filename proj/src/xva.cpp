#include "randhw/xva.hpp"

#include "randhw/errors.hpp"
#include "randhw/stats.hpp"

#include <algorithm>
#include <cmath>

namespace rhw {

double CreditCurve::pd(double t) const { return -std::expm1(-hazard * t); }

namespace {

double discounted_mean_part(const std::vector<double>& values,
                            const std::vector<double>& discounts, int sign) {
    if (values.size() != discounts.size())
        throw DomainError("exposure: values and discounts are misaligned");
    if (values.empty()) throw DomainError("exposure: empty sample");
    std::vector<double> terms(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double part = sign > 0 ? std::max(values[j], 0.0) : std::min(values[j], 0.0);
        terms[j] = std::exp(-discounts[j]) * part;
    }
    return pairwise_sum(terms) / double(terms.size());
}

void check_profile(const ExposureProfile& p) {
    const std::size_t n = p.dates.size();
    if (p.epe.size() != n || p.ene.size() != n)
        throw DomainError("profile: column lengths differ");
    for (std::size_t i = 1; i < n; ++i)
        if (!(p.dates[i] > p.dates[i - 1])) throw DomainError("profile: dates not increasing");
}

} // namespace

double epe(const std::vector<double>& values, const std::vector<double>& discounts) {
    return discounted_mean_part(values, discounts, +1);
}

double ene(const std::vector<double>& values, const std::vector<double>& discounts) {
    return discounted_mean_part(values, discounts, -1);
}

double pfe(const std::vector<double>& values, double alpha) {
    if (values.empty()) throw DomainError("pfe: empty sample");
    if (!(alpha > 0.0 && alpha < 100.0)) throw DomainError("pfe: alpha must be in (0, 100)");
    std::vector<double> pos(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) pos[j] = std::max(values[j], 0.0);
    return quantile_lower(pos, alpha / 100.0);
}

double pfl(const std::vector<double>& values, double alpha) {
    if (values.empty()) throw DomainError("pfl: empty sample");
    if (!(alpha > 0.0 && alpha < 100.0)) throw DomainError("pfl: alpha must be in (0, 100)");
    std::vector<double> neg(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) neg[j] = std::min(values[j], 0.0);
    return quantile_lower(neg, 1.0 - alpha / 100.0);
}

ExposureProfile build_profile(const std::vector<double>& dates,
                              const std::vector<std::vector<double>>& values,
                              const std::vector<std::vector<double>>& discounts, double alpha) {
    if (values.size() != dates.size() || discounts.size() != dates.size())
        throw DomainError("build_profile: per-date arrays misaligned");
    ExposureProfile p;
    p.dates = dates;
    p.alpha = alpha;
    for (std::size_t i = 0; i < dates.size(); ++i) {
        p.epe.push_back(epe(values[i], discounts[i]));
        p.ene.push_back(ene(values[i], discounts[i]));
        p.pfe.push_back(pfe(values[i], alpha));
        p.pfl.push_back(pfl(values[i], alpha));
    }
    return p;
}

double cva(const ExposureProfile& profile, const CreditCurve& credit_cpty, double rr) {
    check_profile(profile);
    double acc = 0.0, prev_t = 0.0;
    for (std::size_t i = 0; i < profile.dates.size(); ++i) {
        acc += profile.epe[i] * (credit_cpty.pd(profile.dates[i]) - credit_cpty.pd(prev_t));
        prev_t = profile.dates[i];
    }
    return (1.0 - rr) * acc;
}

double dva(const ExposureProfile& profile, const CreditCurve& credit_self) {
    check_profile(profile);
    double acc = 0.0, prev_t = 0.0;
    for (std::size_t i = 0; i < profile.dates.size(); ++i) {
        acc += profile.ene[i] * (credit_self.pd(profile.dates[i]) - credit_self.pd(prev_t));
        prev_t = profile.dates[i];
    }
    return (1.0 - credit_self.recovery) * acc;
}

double bcva(const ExposureProfile& profile, const CreditCurve& credit_cpty,
            const CreditCurve& credit_self, double rr, bool survival_weights) {
    check_profile(profile);
    double acc_c = 0.0, acc_i = 0.0, prev_t = 0.0;
    for (std::size_t i = 0; i < profile.dates.size(); ++i) {
        const double t = profile.dates[i];
        const double surv_self = survival_weights ? 1.0 - credit_self.pd(prev_t) : 1.0;
        const double surv_cpty = survival_weights ? 1.0 - credit_cpty.pd(prev_t) : 1.0;
        acc_c += profile.epe[i] * surv_self * (credit_cpty.pd(t) - credit_cpty.pd(prev_t));
        acc_i += profile.ene[i] * surv_cpty * (credit_self.pd(t) - credit_self.pd(prev_t));
        prev_t = t;
    }
    return (1.0 - rr) * acc_c + (1.0 - credit_self.recovery) * acc_i;
}

} // namespace rhw
