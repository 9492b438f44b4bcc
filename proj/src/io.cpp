#include "randhw/io.hpp"

#include "randhw/errors.hpp"
#include "randhw/normal.hpp"
#include "randhw/products.hpp"
#include "randhw/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rhw {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& tok, const std::string& path, int lineno) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": trailing characters in '" +
                             tok + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected a number, got '" +
                         tok + "'");
    }
}

// Reads a CSV file: returns non-comment rows split into fields, with the
// originating line number attached; validates the header fields.
struct CsvRow {
    int lineno;
    std::vector<std::string> fields;
};

std::vector<CsvRow> read_csv(const std::string& path, const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<CsvRow> rows;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> fields = split_csv(t);
        if (!have_header) {
            if (fields.size() != header.size())
                throw ParseError(path + ":" + std::to_string(lineno) + ": expected header with " +
                                 std::to_string(header.size()) + " columns");
            for (std::size_t i = 0; i < header.size(); ++i) {
                std::string got = fields[i];
                std::transform(got.begin(), got.end(), got.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                if (got != header[i])
                    throw ParseError(path + ":" + std::to_string(lineno) + ": expected column '" +
                                     header[i] + "', got '" + fields[i] + "'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        rows.push_back({lineno, std::move(fields)});
    }
    if (!have_header) throw ParseError(path + ": missing header row");
    return rows;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open file for writing");
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<double> as_doubles(const json& j) { return j.get<std::vector<double>>(); }

} // namespace

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string RunMeta::line() const {
    std::string out = "# randhw ";
    out += kVersion;
    out += " seed_zcb=" + std::to_string(seed_zcb);
    out += " seed_val=" + std::to_string(seed_val);
    out += " config=" + hex64(config_hash);
    if (!extra.empty()) out += " " + extra;
    return out;
}

YieldCurve read_curve_csv(const std::string& path) {
    const auto rows = read_csv(path, {"time", "zero_rate"});
    std::vector<double> times, rates;
    for (const auto& row : rows) {
        times.push_back(parse_double(row.fields[0], path, row.lineno));
        rates.push_back(parse_double(row.fields[1], path, row.lineno));
    }
    if (times.empty()) throw ParseError(path + ": no curve pillars");
    return YieldCurve(std::move(times), std::move(rates));
}

VolSurface read_surface_csv(const std::string& path) {
    const auto rows = read_csv(path, {"expiry", "tenor", "strike_ratio", "implied_vol", "shift"});
    VolSurface surface;
    for (const auto& row : rows) {
        VolQuote q;
        q.expiry = parse_double(row.fields[0], path, row.lineno);
        q.tenor = parse_double(row.fields[1], path, row.lineno);
        q.strike_ratio = parse_double(row.fields[2], path, row.lineno);
        q.implied_vol = parse_double(row.fields[3], path, row.lineno);
        q.shift = parse_double(row.fields[4], path, row.lineno);
        surface.add(q);
    }
    if (surface.quotes().empty()) throw ParseError(path + ": no quotes");
    return surface;
}

Instrument read_instrument_json(const std::string& path) {
    const json j = load_json(path);
    Instrument inst;
    try {
        inst.kind = j.at("type").get<std::string>();
        if (inst.kind != "swap" && inst.kind != "bermudan")
            throw ParseError(path + ": type must be 'swap' or 'bermudan', got '" + inst.kind +
                             "'");
        inst.start = j.at("start").get<double>();
        inst.maturity = j.at("maturity").get<double>();

        const json& strike = j.at("strike");
        if (strike.is_number()) {
            inst.strike = strike.get<double>();
            inst.strike_is_ratio = false;
        } else if (strike.is_string()) {
            std::string s = trim(strike.get<std::string>());
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char c) { return std::toupper(c); });
            if (s == "ATM") {
                inst.strike_ratio = 1.0;
            } else {
                const std::size_t star = s.find('*');
                if (star == std::string::npos || s.substr(star + 1) != "ATM")
                    throw ParseError(path + ": strike string must be 'ATM' or '<ratio>*ATM', "
                                     "got '" +
                                     strike.get<std::string>() + "'");
                inst.strike_ratio = parse_double(s.substr(0, star), path, 0);
            }
            inst.strike_is_ratio = true;
        } else {
            throw ParseError(path + ": strike must be a number or an ATM-relative string");
        }

        const std::string st = j.value("swap_type", std::string("receiver"));
        if (st == "receiver")
            inst.swap_type = +1;
        else if (st == "payer")
            inst.swap_type = -1;
        else
            throw ParseError(path + ": swap_type must be 'receiver' or 'payer', got '" + st +
                             "'");
        inst.notional = j.value("notional", 1.0);
        if (j.contains("exercise")) inst.exercise_dates = as_doubles(j.at("exercise"));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return inst;
}

SwapSpec make_swap_spec(const Instrument& inst, const YieldCurve& curve) {
    SwapSpec spec = annual_swap(inst.start, inst.maturity, inst.strike, inst.swap_type,
                                inst.notional);
    if (inst.strike_is_ratio) {
        const auto zcb = [&](double t) { return curve.discount(t); };
        spec.strike = inst.strike_ratio * atm_strike(zcb, spec);
    }
    return spec;
}

BermudanSpec make_bermudan_spec(const Instrument& inst, const YieldCurve& curve) {
    BermudanSpec spec;
    spec.underlying = make_swap_spec(inst, curve);
    if (!inst.exercise_dates.empty()) {
        spec.exercise_dates = inst.exercise_dates;
    } else {
        spec.exercise_dates.push_back(spec.underlying.start);
        for (double tk : spec.underlying.pay_times)
            if (tk < spec.underlying.maturity() - 1e-9) spec.exercise_dates.push_back(tk);
    }
    spec.validate();
    return spec;
}

void write_model_json(const std::string& path, const RhwModel& model) {
    json j;
    j["version"] = kVersion;
    j["model"] = model.n_nodes() == 1 ? "hw" : "rhw";
    j["a_hat"] = model.a_hat;
    j["b_hat"] = model.b_hat;
    json nodes = json::array();
    for (int n = 0; n < model.n_nodes(); ++n)
        nodes.push_back({{"omega", model.quad.weights[n]}, {"theta", model.quad.nodes[n]}});
    j["nodes"] = std::move(nodes);
    j["vol"] = {{"pillars", model.vol.pillars()}, {"values", model.vol.values()}};
    j["curve"] = {{"times", model.curve.times()}, {"zero_rates", model.curve.zero_rates()}};
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

RhwModel read_model_json(const std::string& path) {
    const json j = load_json(path);
    try {
        QuadratureSet quad;
        for (const json& node : j.at("nodes")) {
            quad.weights.push_back(node.at("omega").get<double>());
            quad.nodes.push_back(node.at("theta").get<double>());
        }
        PiecewiseVol vol(as_doubles(j.at("vol").at("pillars")),
                         as_doubles(j.at("vol").at("values")));
        YieldCurve curve(as_doubles(j.at("curve").at("times")),
                         as_doubles(j.at("curve").at("zero_rates")));
        RhwModel model{std::move(quad), std::move(vol), std::move(curve),
                       j.value("a_hat", 0.0), j.value("b_hat", 0.0)};
        model.validate();
        return model;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_report_csv(const std::string& path, const std::vector<FitRow>& rows,
                      const RunMeta& meta) {
    auto out = open_out(path);
    out << meta.line() << "\n";
    out << "expiry,tenor,strike_ratio,market_vol,model_vol,abs_error\n";
    for (const FitRow& r : rows)
        out << fmt(r.expiry) << "," << fmt(r.tenor) << "," << fmt(r.strike_ratio) << ","
            << fmt(r.market_vol) << "," << fmt(r.model_vol) << ","
            << fmt(std::fabs(r.model_vol - r.market_vol)) << "\n";
}

void write_profile_csv(const std::string& path, const ExposureProfile& profile,
                       const RunMeta& meta) {
    auto out = open_out(path);
    out << meta.line() << " alpha=" << fmt(profile.alpha) << "\n";
    out << "time,epe,ene,pfe,pfl\n";
    for (std::size_t i = 0; i < profile.dates.size(); ++i)
        out << fmt(profile.dates[i]) << "," << fmt(profile.epe[i]) << "," << fmt(profile.ene[i])
            << "," << fmt(profile.pfe[i]) << "," << fmt(profile.pfl[i]) << "\n";
}

ExposureProfile read_profile_csv(const std::string& path) {
    const auto rows = read_csv(path, {"time", "epe", "ene", "pfe", "pfl"});
    ExposureProfile profile;
    for (const auto& row : rows) {
        profile.dates.push_back(parse_double(row.fields[0], path, row.lineno));
        profile.epe.push_back(parse_double(row.fields[1], path, row.lineno));
        profile.ene.push_back(parse_double(row.fields[2], path, row.lineno));
        profile.pfe.push_back(parse_double(row.fields[3], path, row.lineno));
        profile.pfl.push_back(parse_double(row.fields[4], path, row.lineno));
    }
    if (profile.dates.empty()) throw ParseError(path + ": no profile rows");
    for (std::size_t i = 1; i < profile.dates.size(); ++i)
        if (!(profile.dates[i] > profile.dates[i - 1]))
            throw ParseError(path + ": dates must be strictly increasing");
    return profile;
}

void write_xva_csv(const std::string& path, double cva_v, double dva_v, double bcva_v,
                   const RunMeta& meta) {
    auto out = open_out(path);
    out << meta.line() << "\n";
    out << "cva,dva,bcva\n";
    out << fmt(cva_v) << "," << fmt(dva_v) << "," << fmt(bcva_v) << "\n";
}

void write_density_csv(const std::string& path, const RhwModel& model, double t,
                       const std::vector<double>& ys, const RunMeta& meta) {
    if (!(t > 0.0)) throw DomainError("write_density_csv: t must be positive");
    auto out = open_out(path);
    out << meta.line() << " t=" << fmt(t) << "\n";
    out << "y,pdf,cdf";
    for (int n = 0; n < model.n_nodes(); ++n) out << ",pdf_node_" << (n + 1);
    out << "\n";
    for (double y : ys) {
        out << fmt(y) << "," << fmt(rand_pdf(model, t, y)) << "," << fmt(rand_cdf(model, t, y));
        for (int n = 0; n < model.n_nodes(); ++n) {
            const HwParams node = model.node(n);
            const double m = hw_b(node, t);
            const double v = hw_variance(node, 0.0, t);
            out << "," << fmt(norm_pdf(y, m, v));
        }
        out << "\n";
    }
}

} // namespace rhw
