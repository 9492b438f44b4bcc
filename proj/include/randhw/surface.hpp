#pragma once

#include <vector>

namespace rhw {

// One swaption implied-vol quote. Strikes are stored as a ratio K / K_ATM
// (ratio 1 is the ATM quote); the shift is the displacement of the
// shifted-Black quote convention.
struct VolQuote {
    double expiry = 0.0;
    double tenor = 0.0;
    double strike_ratio = 1.0;
    double implied_vol = 0.0;
    double shift = 0.0;
};

class VolSurface {
  public:
    VolSurface() = default;
    explicit VolSurface(std::vector<VolQuote> quotes) : quotes_(std::move(quotes)) {}

    void add(const VolQuote& q) { quotes_.push_back(q); }
    const std::vector<VolQuote>& quotes() const { return quotes_; }
    bool empty() const { return quotes_.empty(); }

    // All quotes with expiry + tenor == t_cot (the co-terminal strip), sorted
    // by expiry then strike ratio.
    std::vector<VolQuote> coterminal_strip(double t_cot) const;

    // ATM quotes only (strike_ratio == 1), across the full (expiry, tenor) grid.
    std::vector<VolQuote> atm_quotes() const;

    // ATM quote for a specific (expiry, tenor) pair; throws MissingEntry.
    VolQuote atm_quote(double expiry, double tenor) const;

    // Distinct strike ratios present on the t_cot strip, ascending.
    std::vector<double> strike_ratios(double t_cot) const;

    // Largest expiry + tenor over all quotes (default co-terminal maturity).
    double max_coterminal() const;

  private:
    std::vector<VolQuote> quotes_;
};

} // namespace rhw
