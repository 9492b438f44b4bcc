#include "doctest.h"

#include "randhw/curve.hpp"
#include "randhw/errors.hpp"
#include "randhw/hw.hpp"
#include "randhw/normal.hpp"
#include "randhw/products.hpp"
#include "randhw/quadrature.hpp"
#include "randhw/rhw.hpp"
#include "randhw/stats.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace rhw;

namespace {

RhwModel make_model(double a_hat, double b_hat, int n, const YieldCurve& curve,
                    PiecewiseVol vol = PiecewiseVol::flat(0.01)) {
    return RhwModel{gauss_quadrature_normal(a_hat, b_hat, n), std::move(vol), curve, a_hat,
                    b_hat};
}

double node_mean(const RhwModel& m, int n, double t) { return hw_b(m.node(n), t); }
double node_var(const RhwModel& m, int n, double t) {
    return hw_variance(m.node(n), 0.0, t);
}

double mixture_sd(const RhwModel& m, double t) {
    const double m1 = rand_moment(m, 1, t);
    const double m2 = rand_moment(m, 2, t);
    return std::sqrt(m2 - m1 * m1);
}

} // namespace

TEST_CASE("RhwModel: accessors and validation") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m = make_model(0.05, 0.02, 3, curve);
    CHECK(m.n_nodes() == 3);
    CHECK(m.node(1).theta == doctest::Approx(m.quad.nodes[1]).epsilon(1e-15));
    CHECK(m.node(2).vol(0.5) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_NOTHROW(m.validate());

    RhwModel bad = m;
    bad.quad.weights = {0.5, 0.4, 0.2}; // sums to 1.1
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = m;
    std::swap(bad.quad.nodes[0], bad.quad.nodes[2]);
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = m;
    bad.quad.nodes.clear();
    bad.quad.weights.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("rand_pdf: single-node collapse, two-term sum, normalization") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    const double t = 4.0;
    const double m1 = node_mean(one, 0, t), v1 = node_var(one, 0, t);
    for (double y : {0.0, 0.02, 0.03, 0.05})
        CHECK(rand_pdf(one, t, y) ==
              doctest::Approx(oracle::npdf((y - m1) / std::sqrt(v1)) / std::sqrt(v1))
                  .epsilon(1e-13));

    const RhwModel two{QuadratureSet{{0.01, 0.40}, {0.3, 0.7}}, PiecewiseVol::flat(0.01), curve,
                       0.0, 0.0};
    const double t2 = 10.0;
    for (double y : {0.01, 0.025, 0.03, 0.035, 0.06}) {
        double want = 0.0;
        for (int n = 0; n < 2; ++n) {
            const double mn = node_mean(two, n, t2), vn = node_var(two, n, t2);
            want += two.quad.weights[n] * oracle::npdf((y - mn) / std::sqrt(vn)) / std::sqrt(vn);
        }
        CHECK(rand_pdf(two, t2, y) == doctest::Approx(want).epsilon(1e-13));
    }

    const RhwModel five = make_model(0.181711, 0.064055, 5, curve);
    const double mean = rand_moment(five, 1, t2), sd = mixture_sd(five, t2);
    const double mass = oracle::integrate([&](double y) { return rand_pdf(five, t2, y); },
                                          mean - 12.0 * sd, mean + 12.0 * sd, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(rand_pdf(five, 0.0, 0.03), DomainError);
    CHECK_THROWS_AS(rand_pdf(five, -1.0, 0.03), DomainError);
}

TEST_CASE("rand_cdf: collapse, limits, monotonicity, pdf consistency") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    const double t = 4.0;
    const double m1 = node_mean(one, 0, t), v1 = node_var(one, 0, t);
    for (double y : {0.0, 0.028, 0.05})
        CHECK(rand_cdf(one, t, y) ==
              doctest::Approx(norm_cdf((y - m1) / std::sqrt(v1))).epsilon(1e-14));
    CHECK(rand_cdf(one, t, m1) == doctest::Approx(0.5).epsilon(1e-14));

    // equal nodes make the mixture a single symmetric normal: median = mean
    const RhwModel eq{QuadratureSet{{0.05, 0.05}, {0.3, 0.7}}, PiecewiseVol::flat(0.01), curve,
                      0.05, 0.0};
    CHECK(rand_cdf(eq, t, node_mean(eq, 0, t)) == doctest::Approx(0.5).epsilon(1e-14));

    const RhwModel five = make_model(0.181711, 0.064055, 5, curve);
    const double mean = rand_moment(five, 1, t), sd = mixture_sd(five, t);
    CHECK(rand_cdf(five, t, mean - 12.0 * sd) < 1e-8);
    CHECK(rand_cdf(five, t, mean + 12.0 * sd) > 1.0 - 1e-8);
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double y = mean + (i / 100.0 - 1.0) * 8.0 * sd;
        const double c = rand_cdf(five, t, y);
        CHECK(c >= prev);
        prev = c;
    }
    // CDF equals the integral of the PDF
    for (double y : {mean - sd, mean, mean + 2.0 * sd}) {
        const double integral = oracle::integrate(
            [&](double u) { return rand_pdf(five, t, u); }, mean - 12.0 * sd, y, 1e-12);
        CHECK(rand_cdf(five, t, y) == doctest::Approx(integral).epsilon(1e-8));
    }
    CHECK_THROWS_AS(rand_cdf(five, 0.0, 0.03), DomainError);
}

TEST_CASE("rand_moment: low orders in closed form, MC oracle for m=4") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m = make_model(0.10, 0.05, 3, curve);
    const double t = 6.0;

    double m1_want = 0.0;
    for (int n = 0; n < 3; ++n) m1_want += m.quad.weights[n] * node_mean(m, n, t);
    CHECK(rand_moment(m, 1, t) == doctest::Approx(m1_want).epsilon(1e-14));

    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    const double mu = node_mean(one, 0, t), v = node_var(one, 0, t);
    CHECK(rand_moment(one, 2, t) == doctest::Approx(mu * mu + v).epsilon(1e-14));

    // t = 0: the short rate is deterministic at f^M(0,0)
    const double f0 = curve.inst_forward(0.0);
    CHECK(rand_moment(m, 3, 0.0) == doctest::Approx(f0 * f0 * f0).epsilon(1e-12));

    CHECK_THROWS_AS(rand_moment(m, 0, t), DomainError);
    CHECK_THROWS_AS(rand_moment(m, 2, -1.0), DomainError);

    // direct mixture sampling oracle for the fourth raw moment
    std::mt19937_64 gen(1234);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::vector<double> means(3), sds(3), cumw(3);
    double acc = 0.0;
    for (int n = 0; n < 3; ++n) {
        means[n] = node_mean(m, n, t);
        sds[n] = std::sqrt(node_var(m, n, t));
        acc += m.quad.weights[n];
        cumw[n] = acc;
    }
    const int n_samp = 2000000;
    std::vector<double> y4(n_samp);
    for (int j = 0; j < n_samp; ++j) {
        const double u = ud(gen);
        const int n = int(std::lower_bound(cumw.begin(), cumw.end(), u) - cumw.begin());
        const double y = means[n] + sds[n] * nd(gen);
        y4[j] = y * y * y * y;
    }
    CHECK(std::fabs(rand_moment(m, 4, t) - mean(y4)) < 4.0 * standard_error(y4));
}

TEST_CASE("lambda_weights: conventions, normalization, far-tail stability") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel five = make_model(0.181711, 0.064055, 5, curve);

    const std::vector<double> at0 = lambda_weights(five, 0.0, 0.123);
    REQUIRE(at0.size() == 5);
    for (int n = 0; n < 5; ++n) CHECK(at0[n] == five.quad.weights[n]);

    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    CHECK(lambda_weights(one, 3.0, 0.02) == std::vector<double>{1.0});

    // identical nodes have identical densities: posterior equals prior. Far
    // from the mean the shared exponent is huge and its cancellation leaves
    // ~ulp(|gamma|) of noise, hence the absolute 1e-11 band.
    const RhwModel eq{QuadratureSet{{0.05, 0.05}, {0.3, 0.7}}, PiecewiseVol::flat(0.01), curve,
                      0.05, 0.0};
    for (double y : {-0.5, 0.03, 0.9}) {
        const std::vector<double> lam = lambda_weights(eq, 2.0, y);
        CHECK(std::fabs(lam[0] - 0.3) < 1e-11);
        CHECK(std::fabs(lam[1] - 0.7) < 1e-11);
    }

    const double t = 5.0;
    const double mean5 = rand_moment(five, 1, t), sd5 = mixture_sd(five, t);
    for (double k : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        for (double sign : {-1.0, 1.0}) {
            const std::vector<double> lam = lambda_weights(five, t, mean5 + sign * k * sd5);
            double sum = 0.0;
            for (double w : lam) {
                CHECK(std::isfinite(w));
                CHECK(w >= 0.0);
                CHECK(w <= 1.0);
                sum += w;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    // far in the tail the naive density ratio underflows; compare against a
    // long-double log-space evaluation
    const RhwModel two{QuadratureSet{{0.02, 0.30}, {0.4, 0.6}}, PiecewiseVol::flat(0.01), curve,
                       0.0, 0.0};
    const double y = rand_moment(two, 1, t) + 60.0 * mixture_sd(two, t);
    long double g[2];
    for (int n = 0; n < 2; ++n) {
        const long double mn = node_mean(two, n, t);
        const long double vn = node_var(two, n, t);
        g[n] = std::log((long double)two.quad.weights[n]) -
               0.5L * std::log(2.0L * 3.14159265358979323846L * vn) -
               (y - mn) * (y - mn) / (2.0L * vn);
    }
    const long double gmax = std::max(g[0], g[1]);
    const long double e0 = std::exp(g[0] - gmax), e1 = std::exp(g[1] - gmax);
    const std::vector<double> lam = lambda_weights(two, t, y);
    CHECK(lam[0] == doctest::Approx(double(e0 / (e0 + e1))).epsilon(1e-12));
    CHECK(lam[1] == doctest::Approx(double(e1 / (e0 + e1))).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_weights(two, -0.5, 0.0), DomainError);
}

TEST_CASE("rhw_drift: single-node formula, t=0 value, convex bounds") {
    const YieldCurve flat = YieldCurve::flat(0.03);
    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), flat, 0.05, 0.0};
    for (double t : {0.5, 2.0, 10.0})
        for (double y : {0.0, 0.03, 0.08}) {
            // exact identity in terms of the curve functions the drift uses
            const double want = flat.forward_slope(t) + 0.05 * (flat.inst_forward(t) - y) +
                                hw_variance(one.node(0), 0.0, t);
            CHECK(rhw_drift(one, t, y) == doctest::Approx(want).epsilon(1e-12));
            // the flat-curve ideal, up to the finite-difference noise floor of
            // the curve derivatives (~1e-8 absolute)
            const double ideal = 0.05 * (0.03 - y) + hw_variance(one.node(0), 0.0, t);
            CHECK(std::fabs(rhw_drift(one, t, y) - ideal) < 5e-8);
        }

    // at t=0 with y = f^M(0,0) everything but the slope cancels, for any N
    const YieldCurve curve({1.0, 2.0, 5.0, 10.0}, {0.02, 0.03, 0.025, 0.028});
    const RhwModel five = make_model(0.181711, 0.064055, 5, curve);
    CHECK(rhw_drift(five, 0.0, curve.inst_forward(0.0)) ==
          doctest::Approx(curve.forward_slope(0.0)).epsilon(1e-12));
    const RhwModel five_flat = make_model(0.181711, 0.064055, 5, flat);
    CHECK(rhw_drift(five_flat, 0.0, 0.03) == doctest::Approx(0.0).epsilon(1e-12));

    for (double t : {0.5, 2.0, 10.0, 25.0}) {
        const double mean5 = rand_moment(five_flat, 1, t), sd5 = mixture_sd(five_flat, t);
        for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
            const double y = mean5 + k * sd5;
            double lo = 1e300, hi = -1e300;
            for (int n = 0; n < 5; ++n) {
                const double theta = five_flat.quad.nodes[n];
                const double mu_n = flat.forward_slope(t) + theta * flat.inst_forward(t) +
                                    node_var(five_flat, n, t) - theta * y;
                lo = std::min(lo, mu_n);
                hi = std::max(hi, mu_n);
            }
            const double mu = rhw_drift(five_flat, t, y);
            CHECK(mu >= lo - 1e-12);
            CHECK(mu <= hi + 1e-12);
        }
    }
}

TEST_CASE("rhw_diffusion follows the vol strip and ignores the state") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const PiecewiseVol vol({1.0, 3.0, 5.0}, {0.012, 0.008, 0.015});
    const RhwModel m{gauss_quadrature_normal(0.05, 0.02, 3), vol, curve, 0.05, 0.02};
    CHECK(rhw_diffusion(m, 0.5) == doctest::Approx(0.012).epsilon(1e-15));
    CHECK(rhw_diffusion(m, 2.0) == doctest::Approx(0.008).epsilon(1e-15));
    CHECK(rhw_diffusion(m, 4.0) == doctest::Approx(0.015).epsilon(1e-15));
    CHECK(rhw_diffusion(m, 9.0) == doctest::Approx(0.015).epsilon(1e-15)); // flat beyond
    CHECK_THROWS_AS(rhw_diffusion(m, -1.0), DomainError);
}

TEST_CASE("make_time_grid: uniform coverage, extras, clipping") {
    const std::vector<double> g = make_time_grid(0.0, 2.5, 2);
    REQUIRE(g.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(g[i] == doctest::Approx(0.5 * i).epsilon(1e-15));

    const std::vector<double> ge = make_time_grid(0.0, 2.0, 1, {0.75, 2.0, -1.0, 5.0});
    // {0, 0.75, 1, 2}: extras merged, duplicates and out-of-range points dropped
    REQUIRE(ge.size() == 4);
    CHECK(ge[1] == doctest::Approx(0.75).epsilon(1e-15));

    const std::vector<double> gm = make_time_grid(1.3, 2.1, 4);
    CHECK(gm.front() == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(gm.back() == doctest::Approx(2.1).epsilon(1e-15));
    for (double t : {1.5, 1.75, 2.0})
        CHECK(std::any_of(gm.begin(), gm.end(),
                          [&](double u) { return std::fabs(u - t) < 1e-12; }));
    for (std::size_t i = 1; i < gm.size(); ++i) CHECK(gm[i] > gm[i - 1]);

    CHECK_THROWS_AS(make_time_grid(1.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(make_time_grid(0.0, 1.0, 0), DomainError);
}

TEST_CASE("rhw_euler_simulate: validation, determinism, path extensibility") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m = make_model(0.05, 0.02, 2, curve);
    const std::vector<double> grid = make_time_grid(0.0, 1.0, 10);

    CHECK_THROWS_AS(rhw_euler_simulate(m, {}, 10, 1), DomainError);
    CHECK_THROWS_AS(rhw_euler_simulate(m, {0.5, 1.0}, 10, 1), DomainError);
    CHECK_THROWS_AS(rhw_euler_simulate(m, grid, 0, 1), DomainError);
    CHECK_THROWS_AS(rhw_euler_simulate(m, grid, 4, 1, {0.123}), DomainError);

    const PathSet a = rhw_euler_simulate(m, grid, 40, 7);
    REQUIRE(a.times.size() == grid.size());
    CHECK(a.n_paths == 40);
    CHECK(a.index_of(0.5) == 5);
    CHECK_THROWS_AS(a.index_of(0.55), MissingEntry);
    for (int j = 0; j < 40; ++j) {
        CHECK(a.rates[0][j] == doctest::Approx(0.03).epsilon(1e-15));
        CHECK(a.integrals[0][j] == 0.0);
    }

    const PathSet b = rhw_euler_simulate(m, grid, 40, 7);
    const PathSet c = rhw_euler_simulate(m, grid, 15, 7);
    const PathSet d = rhw_euler_simulate(m, grid, 40, 8);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int j = 0; j < 40; ++j) CHECK(a.rates[i][j] == b.rates[i][j]);
        for (int j = 0; j < 15; ++j) CHECK(a.rates[i][j] == c.rates[i][j]);
    }
    CHECK(a.rates[3][0] != d.rates[3][0]); // different seed, different stream

    // record subset
    const PathSet r = rhw_euler_simulate(m, grid, 5, 7, {0.0, 0.5, 1.0});
    REQUIRE(r.times.size() == 3);
    CHECK(r.rates[1][2] == doctest::Approx(a.rates[5][2]).epsilon(1e-15));
    CHECK(r.integrals[2][4] == doctest::Approx(a.integrals[10][4]).epsilon(1e-15));
}

TEST_CASE("rhw_euler_simulate: vanishing vol pins paths to the flat forward") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m{QuadratureSet{{0.02, 0.08}, {0.5, 0.5}}, PiecewiseVol::flat(1e-12), curve,
                     0.05, 0.03};
    const PathSet p = rhw_euler_simulate(m, make_time_grid(0.0, 2.0, 50), 5, 3);
    for (std::size_t i = 0; i < p.times.size(); ++i)
        for (int j = 0; j < 5; ++j) {
            CHECK(std::fabs(p.rates[i][j] - 0.03) < 1e-9);
            CHECK(std::fabs(p.integrals[i][j] - 0.03 * p.times[i]) < 1e-9);
        }
}

TEST_CASE("rhw_euler_simulate: single-node terminal law matches exact Hull-White") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    const std::vector<double> grid = make_time_grid(0.0, 5.0, 200);
    const PathSet p = rhw_euler_simulate(m, grid, 10000, 11, {5.0});

    const double mu = node_mean(m, 0, 5.0);
    const double sd = std::sqrt(node_var(m, 0, 5.0));
    std::vector<double> sample = p.rates[0];
    const double d = ks_statistic(sample, [&](double x) { return norm_cdf((x - mu) / sd); });
    CHECK(ks_pvalue(d, sample.size()) > 0.01);
    CHECK(std::fabs(mean(sample) - mu) < 4.0 * sd / std::sqrt(10000.0) + 2e-4);
}

TEST_CASE("rhw_euler_simulate: five-node terminal law matches the mixture at t=25") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m = make_model(0.181711, 0.064055, 5, curve);
    const std::vector<double> grid = make_time_grid(0.0, 25.0, 200);
    const PathSet p = rhw_euler_simulate(m, grid, 10000, 13, {25.0});

    std::vector<double> sample = p.rates[0];
    const double d = ks_statistic(sample, [&](double y) { return rand_cdf(m, 25.0, y); });
    CHECK(ks_pvalue(d, sample.size()) > 0.01);

    // raw moments 1..4 against the mixture closed form, within 4 s.e.
    for (int order = 1; order <= 4; ++order) {
        std::vector<double> pw(sample.size());
        for (std::size_t j = 0; j < sample.size(); ++j) pw[j] = std::pow(sample[j], order);
        CHECK(std::fabs(rand_moment(m, order, 25.0) - mean(pw)) < 4.0 * standard_error(pw));
    }
}

TEST_CASE("rhw_euler_simulate_from: restart mid-horizon") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m = make_model(0.05, 0.02, 3, curve);
    const std::vector<double> grid = make_time_grid(1.0, 3.0, 100);
    CHECK_THROWS_AS(rhw_euler_simulate_from(m, 0.5, 0.04, grid, 10, 5), DomainError);

    const PathSet p = rhw_euler_simulate_from(m, 1.0, 0.04, grid, 10, 5);
    CHECK(p.times.front() == doctest::Approx(1.0).epsilon(1e-15));
    for (int j = 0; j < 10; ++j) {
        CHECK(p.rates[0][j] == doctest::Approx(0.04).epsilon(1e-15));
        CHECK(p.integrals[0][j] == 0.0); // integral accumulates from the restart
    }
    const PathSet q = rhw_euler_simulate_from(m, 1.0, 0.04, grid, 10, 5);
    CHECK(q.rates.back() == p.rates.back());
}

TEST_CASE("rhw_swaption: collapse cases and convex-combination bounds") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    auto zcb = [&](double T) { return curve.discount(T); };
    SwapSpec swap = annual_swap(3.0, 8.0, 0.0, +1);
    swap.strike = atm_strike(zcb, swap);

    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    CHECK(rhw_swaption(one, swap, 3.0) ==
          doctest::Approx(hw_swaption(one.node(0), swap, 3.0)).epsilon(1e-15));

    const RhwModel eq{QuadratureSet{{0.05, 0.05}, {0.25, 0.75}}, PiecewiseVol::flat(0.01), curve,
                      0.05, 0.0};
    CHECK(rhw_swaption(eq, swap, 3.0) ==
          doctest::Approx(hw_swaption(eq.node(0), swap, 3.0)).epsilon(1e-13));

    const RhwModel five = make_model(0.181711, 0.064055, 5, curve);
    double lo = 1e300, hi = -1e300, direct = 0.0;
    std::vector<double> node_px(5);
    for (int n = 0; n < 5; ++n) {
        node_px[n] = hw_swaption(five.node(n), swap, 3.0);
        lo = std::min(lo, node_px[n]);
        hi = std::max(hi, node_px[n]);
        direct += five.quad.weights[n] * node_px[n];
    }
    const double px = rhw_swaption(five, swap, 3.0);
    CHECK(px == doctest::Approx(direct).epsilon(1e-14));
    CHECK(px >= lo);
    CHECK(px <= hi);

    // re-weighting (double one node, renormalize) stays inside the node hull
    RhwModel re = five;
    re.quad.weights[1] *= 2.0;
    double wsum = 0.0;
    for (double w : re.quad.weights) wsum += w;
    for (double& w : re.quad.weights) w /= wsum;
    const double px2 = rhw_swaption(re, swap, 3.0);
    CHECK(px2 >= lo);
    CHECK(px2 <= hi);
}

TEST_CASE("rhw_swaption agrees with Euler Monte Carlo") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel m = make_model(0.10, 0.05, 3, curve);
    auto zcb = [&](double T) { return curve.discount(T); };
    SwapSpec swap = annual_swap(2.0, 5.0, 0.0, +1);
    swap.strike = atm_strike(zcb, swap);

    const PathSet p = rhw_euler_simulate(m, make_time_grid(0.0, 2.0, 200), 10000, 17, {2.0});
    std::vector<double> payoff(p.n_paths);
    for (int j = 0; j < p.n_paths; ++j) {
        const double r = p.rates[0][j];
        auto zcb_t = [&](double T) { return rhw_zcb_analytic(m, 2.0, T, r); };
        const double val = oracle::swap_pv(zcb_t, swap.start, swap.pay_times, swap.strike,
                                           swap.swap_type, swap.notional, 2.0);
        payoff[j] = std::exp(-p.integrals[0][j]) * std::max(val, 0.0);
    }
    const double mc = mean(payoff), se = standard_error(payoff);
    CHECK(std::fabs(rhw_swaption(m, swap, 2.0) - mc) < 3.0 * se);
}

TEST_CASE("rhw_zcb_analytic: exact single-node case and t=0 curve fit") {
    const YieldCurve curve({1.0, 2.0, 5.0, 10.0}, {0.02, 0.03, 0.025, 0.028});
    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    for (double y : {0.01, 0.03, 0.06}) {
        const double want = hw_zcb(one.node(0), 1.5, 6.0, y - hw_b(one.node(0), 1.5));
        CHECK(rhw_zcb_analytic(one, 1.5, 6.0, y) == doctest::Approx(want).epsilon(1e-14));
    }

    const RhwModel five = make_model(0.181711, 0.064055, 5, curve);
    const double f0 = curve.inst_forward(0.0);
    for (double T : {1.0, 2.0, 5.0, 10.0, 20.0})
        CHECK(rhw_zcb_analytic(five, 0.0, T, f0) ==
              doctest::Approx(curve.discount(T)).epsilon(1e-12));

    // mixture value sits inside the per-node bond hull and decreases in y
    const double t = 2.0, T = 7.0;
    double prev = 2.0;
    for (double y : {0.00, 0.02, 0.04, 0.06}) {
        const double v = rhw_zcb_analytic(five, t, T, y);
        double lo = 1e300, hi = -1e300;
        for (int n = 0; n < 5; ++n) {
            const double b = hw_zcb(five.node(n), t, T, y - hw_b(five.node(n), t));
            lo = std::min(lo, b);
            hi = std::max(hi, b);
        }
        CHECK(v >= lo);
        CHECK(v <= hi);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("rhw_zcb_analytic matches nested Monte Carlo for one node") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel one{QuadratureSet{{0.07}, {1.0}}, PiecewiseVol::flat(0.012), curve, 0.07, 0.0};
    const double t = 1.0, T = 3.0, y = 0.041;
    const PathSet p =
        rhw_euler_simulate_from(one, t, y, make_time_grid(t, T, 400), 20000, 23, {T});
    std::vector<double> df(p.n_paths);
    for (int j = 0; j < p.n_paths; ++j) df[j] = std::exp(-p.integrals[0][j]);
    const double mc = mean(df), se = standard_error(df);
    CHECK(std::fabs(rhw_zcb_analytic(one, t, T, y) - mc) < 3.0 * se + 1e-5);
}

TEST_CASE("rhw_model_vol: quoting conventions against manual inversion") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel one{QuadratureSet{{0.05}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.05, 0.0};
    auto zcb = [&](double T) { return curve.discount(T); };

    SwapSpec spec = annual_swap(2.0, 5.0, 0.0, +1);
    const double atm = atm_strike(zcb, spec);
    const double ann = annuity(zcb, spec);

    // below ATM: receiver quote
    spec.strike = 0.8 * atm;
    spec.swap_type = +1;
    const double vol_lo = implied_vol_shifted_black(hw_swaption(one.node(0), spec, 2.0) / ann,
                                                    atm, spec.strike, 0.01, 2.0, Put);
    CHECK(rhw_model_vol(one, VolQuote{2.0, 3.0, 0.8, 0.0, 0.01}) ==
          doctest::Approx(vol_lo).epsilon(1e-10));

    // above ATM: payer quote
    spec.strike = 1.2 * atm;
    spec.swap_type = -1;
    const double vol_hi = implied_vol_shifted_black(hw_swaption(one.node(0), spec, 2.0) / ann,
                                                    atm, spec.strike, 0.01, 2.0, Call);
    CHECK(rhw_model_vol(one, VolQuote{2.0, 3.0, 1.2, 0.0, 0.01}) ==
          doctest::Approx(vol_hi).epsilon(1e-10));

    // ATM averages the receiver and payer inversions at the ATM strike
    spec.strike = atm;
    spec.swap_type = +1;
    const double atm_recv = implied_vol_shifted_black(hw_swaption(one.node(0), spec, 2.0) / ann,
                                                      atm, atm, 0.01, 2.0, Put);
    spec.swap_type = -1;
    const double atm_pay = implied_vol_shifted_black(hw_swaption(one.node(0), spec, 2.0) / ann,
                                                     atm, atm, 0.01, 2.0, Call);
    CHECK(rhw_model_vol(one, VolQuote{2.0, 3.0, 1.0, 0.0, 0.01}) ==
          doctest::Approx(0.5 * (atm_recv + atm_pay)).epsilon(1e-10));

    const VolSurface s = make_surface(one, {{1.0, 4.0}, {2.0, 3.0}}, {0.8, 1.0, 1.2}, 0.01);
    REQUIRE(s.quotes().size() == 6);
    for (const VolQuote& q : s.quotes()) {
        CHECK(q.implied_vol > 0.0);
        CHECK(rhw_model_vol(one, q) == doctest::Approx(q.implied_vol).epsilon(1e-12));
    }
}

TEST_CASE("rhw_calibrate: smile round-trip within 1e-4 implied vol") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const PiecewiseVol vol_true({1.0, 2.0, 3.0, 4.0}, {0.009, 0.011, 0.010, 0.012});
    const RhwModel truth{gauss_quadrature_normal(0.12, 0.04, 3), vol_true, curve, 0.12, 0.04};
    const VolSurface surface = make_surface(
        truth, {{1.0, 4.0}, {2.0, 3.0}, {3.0, 2.0}, {4.0, 1.0}}, {0.7, 1.0, 1.4}, 0.01);

    const RhwModel fit = rhw_calibrate(curve, surface, 3, 5.0);
    CHECK(fit.n_nodes() == 3);
    for (const VolQuote& q : surface.quotes())
        CHECK(std::fabs(rhw_model_vol(fit, q) - q.implied_vol) < 1e-4);
}

TEST_CASE("rhw_calibrate: pure Hull-White generator drives b_hat to zero") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    const RhwModel hw_gen{QuadratureSet{{0.03}, {1.0}}, PiecewiseVol::flat(0.01), curve, 0.03,
                          0.0};
    const VolSurface surface = make_surface(
        hw_gen, {{1.0, 4.0}, {2.0, 3.0}, {3.0, 2.0}, {4.0, 1.0}}, {0.8, 1.0, 1.25}, 0.01);

    const RhwModel fit = rhw_calibrate(curve, surface, 3, 5.0);
    CHECK(fit.b_hat < 1e-3);
    for (const VolQuote& q : surface.atm_quotes())
        CHECK(std::fabs(rhw_model_vol(fit, q) - q.implied_vol) < 1e-5);
}

TEST_CASE("rhw_calibrate: input validation") {
    const YieldCurve curve = YieldCurve::flat(0.03);
    CHECK_THROWS_AS(rhw_calibrate(curve, VolSurface{}, 0, 5.0), DomainError);
    VolSurface off;
    off.add(VolQuote{1.0, 1.0, 1.0, 0.2, 0.01}); // not on the 5y co-terminal strip
    CHECK_THROWS_AS(rhw_calibrate(curve, off, 3, 5.0), MissingEntry);
}
