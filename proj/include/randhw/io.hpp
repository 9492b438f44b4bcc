#pragma once

#include "randhw/curve.hpp"
#include "randhw/hw.hpp"
#include "randhw/products.hpp"
#include "randhw/rhw.hpp"
#include "randhw/surface.hpp"
#include "randhw/xva.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rhw {

// ---------------------------------------------------------------------------
// Run metadata stamped into every CSV as a single leading comment line so any
// output can be traced back to the exact configuration that produced it.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& s);

struct RunMeta {
    std::uint64_t seed_zcb = 0;
    std::uint64_t seed_val = 0;
    std::uint64_t config_hash = 0;
    std::string extra; // free-form "key=value" pairs appended to the line

    std::string line() const; // "# randhw <version> seed_zcb=... seed_val=... config=<hex>"
};

// ---------------------------------------------------------------------------
// Market data files
// ---------------------------------------------------------------------------

// curve.csv: header "time,zero_rate", one pillar per row.
YieldCurve read_curve_csv(const std::string& path);

// surface.csv: header "expiry,tenor,strike_ratio,implied_vol,shift".
VolSurface read_surface_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Instruments (JSON)
// ---------------------------------------------------------------------------

// Parsed instrument before the strike is resolved: "strike" is either a
// number (absolute rate) or a string like "1.5*ATM" / "ATM".
struct Instrument {
    std::string kind;                   // "swap" or "bermudan"
    double start = 0.0;
    double maturity = 0.0;              // integer number of years after start
    double strike = 0.0;                // absolute strike if !strike_is_ratio
    double strike_ratio = 1.0;          // multiple of ATM if strike_is_ratio
    bool strike_is_ratio = false;
    int swap_type = +1;                 // +1 receiver, -1 payer
    double notional = 1.0;
    std::vector<double> exercise_dates; // bermudan only; empty = every reset date
};

Instrument read_instrument_json(const std::string& path);

// Turn the parsed instrument into pricing specs, resolving ATM-relative
// strikes against the supplied discount curve.
SwapSpec make_swap_spec(const Instrument& inst, const YieldCurve& curve);
BermudanSpec make_bermudan_spec(const Instrument& inst, const YieldCurve& curve);

// ---------------------------------------------------------------------------
// Model persistence (JSON)
// ---------------------------------------------------------------------------

void write_model_json(const std::string& path, const RhwModel& model);
RhwModel read_model_json(const std::string& path);

// ---------------------------------------------------------------------------
// Result files
// ---------------------------------------------------------------------------

struct FitRow {
    double expiry = 0.0;
    double tenor = 0.0;
    double strike_ratio = 1.0;
    double market_vol = 0.0;
    double model_vol = 0.0;
};

void write_report_csv(const std::string& path, const std::vector<FitRow>& rows,
                      const RunMeta& meta);

void write_profile_csv(const std::string& path, const ExposureProfile& profile,
                       const RunMeta& meta);
ExposureProfile read_profile_csv(const std::string& path);

void write_xva_csv(const std::string& path, double cva_v, double dva_v, double bcva_v,
                   const RunMeta& meta);

// density.csv: y, mixture pdf, mixture cdf, then one pdf column per node.
void write_density_csv(const std::string& path, const RhwModel& model, double t,
                       const std::vector<double>& ys, const RunMeta& meta);

} // namespace rhw
