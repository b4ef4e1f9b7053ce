#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specbound/specfun.hpp"

using namespace specbound;
using namespace specbound::specfun;

namespace {
const SeriesControl kCtl{};
}

TEST_CASE("hyp2f1_at_1 closed form") {
    CHECK(hyp2f1_at_1(0.0, 0.4, 1.7) == 1.0);
    CHECK(hyp2f1_at_1(0.7, 0.0, 2.0) == 1.0);
    // theta = 1/2 value of the classical evaluation: 2/pi
    CHECK(hyp2f1_at_1(0.5, -0.5, 1.0) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
    CHECK(hyp2f1_at_1(0.3, 0.2, 2.0) == doctest::Approx(1.0471888966733322679).epsilon(1e-14));
    CHECK_THROWS_AS(hyp2f1_at_1(1.0, 1.0, 2.0), std::domain_error);   // c-a-b = 0
    CHECK_THROWS_AS(hyp2f1_at_1(0.5, 0.5, -1.0), std::domain_error);  // pole in c
}

TEST_CASE("hyp2f1 series agrees with closed form at the default control") {
    const auto r = hyp2f1_series_at_1(0.3, 0.2, 2.0, kCtl);
    CHECK(r.converged);
    CHECK(std::abs(r.value - hyp2f1_at_1(0.3, 0.2, 2.0)) < 1e-10);
}

TEST_CASE("hyp2f1 series vs closed form, random admissible triples") {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> u(-0.9, 2.0);
    for (int it = 0; it < 40; ++it) {
        const double a = u(rng), b = u(rng);
        std::uniform_real_distribution<double> uc(a + b + 1.1, a + b + 4.0);
        const double c = uc(rng);
        if (c <= 0.0) continue;
        const auto r = hyp2f1_series_at_1(a, b, c, kCtl);
        CAPTURE(a); CAPTURE(b); CAPTURE(c);
        CHECK(r.converged);
        CHECK(std::abs(r.value - hyp2f1_at_1(a, b, c)) <
              1e-10 * std::max(1.0, std::abs(r.value)) + r.error_estimate);
    }
}

TEST_CASE("hyp2f1 terminating series is exact") {
    // 2F1(-3, b; c; 1) is a polynomial value
    const double direct = 1.0 + (-3.0) * 0.7 / 2.1 + (-3.0) * (-2.0) * 0.7 * 1.7 / (2.1 * 3.1 * 2.0) +
                          (-3.0) * (-2.0) * (-1.0) * 0.7 * 1.7 * 2.7 / (2.1 * 3.1 * 4.1 * 6.0);
    const auto r = hyp2f1_series_at_1(-3.0, 0.7, 2.1, kCtl);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("sigma closed form") {
    for (double alpha : {-0.5, 0.0, 0.7, 3.2, 10.0})
        CHECK(sigma(alpha, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sigma(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sigma(0.5, 0.25) == doctest::Approx(1.1148629216405144719).epsilon(1e-13));
    CHECK(sigma(1.3, -0.4) == doctest::Approx(0.65151956868304860953).epsilon(1e-13));
    CHECK(sigma(0.0, -0.5) == doctest::Approx(0.58904862254808623221).epsilon(1e-13));
    CHECK_THROWS_AS(sigma(-1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(sigma(0.5, -1.0), std::domain_error);
}

TEST_CASE("sigma ratio identity under integer shifts of beta") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ua(-0.9, 4.0), ub(-0.9, 3.0);
    for (int it = 0; it < 25; ++it) {
        const double alpha = ua(rng), beta = ub(rng);
        for (int n = 1; n <= 6; ++n) {
            const double lhs = sigma(alpha, beta + n) / sigma(alpha, beta);
            const double rhs = (n + 1.0 + beta) / (1.0 + beta) * pochhammer(alpha + beta + 2.0, n) *
                               pochhammer(alpha + beta + 3.0, n) /
                               pochhammer(alpha + 2.0 * beta + 3.0, 2 * n);
            CAPTURE(alpha); CAPTURE(beta); CAPTURE(n);
            CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("kappa trivial and positivity") {
    CHECK(kappa(1.5, 1.0, kCtl) == 0.0);
    CHECK(kappa(5.0, 1.0, kCtl) == 0.0);
    CHECK(kappa(2.0, 0.25, kCtl) > 0.0);
    CHECK_THROWS_AS(kappa(0.0, 0.75, kCtl), std::domain_error);  // alpha - 2 theta + 1 < 0
}

TEST_CASE("kappa reference values (both methods)") {
    struct Ref { double alpha, theta, v; };
    const Ref refs[] = {
        {1.0, 0.5, 0.8488263631567751241},
        {2.0, 0.25, 1.8959638163087012975},
        {0.5, 0.3, 1.5992736363651243296},
        {4.0, 0.7, 0.39714738626884423443},
        {8.0, 0.95, 0.056754926313032266674},
        {0.2, 0.1, 4.9801477849163812991},
    };
    for (const auto& r : refs) {
        CAPTURE(r.alpha); CAPTURE(r.theta);
        CHECK(kappa(r.alpha, r.theta, kCtl, KappaMethod::series) ==
              doctest::Approx(r.v).epsilon(2e-12));
        CHECK(kappa(r.alpha, r.theta, kCtl, KappaMethod::hyp4f3) ==
              doctest::Approx(r.v).epsilon(2e-12));
    }
}

TEST_CASE("kappa series vs 4F3 on the parameter grid") {
    const double alphas[] = {0.1, 0.5, 1.0, 2.0, 4.0, 8.0};
    const double thetas[] = {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
    for (double a : alphas)
        for (double th : thetas) {
            if (!(a - 2.0 * th + 1.0 > 0.0)) continue;
            const double s = kappa(a, th, kCtl, KappaMethod::series);
            const double f = kappa(a, th, kCtl, KappaMethod::hyp4f3);
            CAPTURE(a); CAPTURE(th);
            CHECK(std::abs(s - f) <= 1e-10 * std::max(1.0, std::abs(s)));
        }
}

TEST_CASE("K_bound values and exact theta = 1 branch") {
    for (double beta : {0.25, 1.0, 3.0})
        CHECK(K_bound(beta, 1.0, kCtl) == doctest::Approx((beta + 2.0) / beta).epsilon(1e-14));
    CHECK(K_bound(1.0, 1.0, kCtl) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(K_bound(0.5, 0.5, kCtl) == doctest::Approx(4.7123889803846898577).epsilon(1e-12));
    CHECK(K_bound(1.0, 0.5, kCtl) == doctest::Approx(3.3953054526271004964).epsilon(1e-12));
    CHECK(K_bound(2.0, 0.75, kCtl) == doctest::Approx(2.1801384801451705185).epsilon(1e-12));
    CHECK(K_bound(0.1, 0.25, kCtl) == doctest::Approx(14.985377875439324584).epsilon(1e-12));
    CHECK_THROWS_AS(K_bound(0.0, 0.5, kCtl), std::domain_error);
    CHECK_THROWS_AS(K_bound(1.0, 1.5, kCtl), std::domain_error);
}

TEST_CASE("K_bound stable under tolerance tightening") {
    SeriesControl tight = kCtl;
    tight.rel_tol *= 0.5;
    const double a = K_bound(0.5, 0.5, kCtl);
    const double b = K_bound(0.5, 0.5, tight);
    CHECK(std::isfinite(a));
    CHECK(a > 0.0);
    CHECK(std::abs(a - b) <= 1e-9);
}

TEST_CASE("series control is honored, never silently truncates") {
    SeriesControl tiny;
    tiny.max_terms = 8;  // far too few for theta = 0.05
    CHECK_THROWS_AS(kappa(0.1, 0.05, tiny, KappaMethod::series), SeriesNonConvergence);

    PochhammerSeries ps;  // same series, non-strict interface reports instead
    const double a = 0.1, th = 0.05;
    ps.num = {1.0 - th, 2.0 - th, a + 2.0 - 2.0 * th, a + 2.0 - 2.0 * th};
    ps.den = {a + 2.0 - th, a + 3.0 - th, 2.0, 2.0};
    ps.affine_p = a + 3.0 - 2.0 * th;
    ps.affine_q = 2.0;
    const auto res = sum_series(ps, tiny);
    CHECK_FALSE(res.converged);
}

TEST_CASE("monotone truncation: partial sums stay within the reported bound") {
    // For a positive-term series the EM-completed value must lie above every
    // partial sum, and adding terms must never overshoot value + error.
    PochhammerSeries ps;
    const double a = 1.0, th = 0.35;
    ps.num = {1.0 - th, 2.0 - th, a + 2.0 - 2.0 * th, a + 2.0 - 2.0 * th};
    ps.den = {a + 2.0 - th, a + 3.0 - th, 2.0, 2.0};
    ps.affine_p = a + 3.0 - 2.0 * th;
    ps.affine_q = 2.0;
    const auto full = sum_series(ps, kCtl);
    REQUIRE(full.converged);
    double u = 1.0, partial = 0.0;
    for (int n = 0; n < 4000; ++n) {
        partial += (ps.affine_p + ps.affine_q * n) * u;
        double f = 1.0;
        for (double x : ps.num) f *= n + x;
        for (double x : ps.den) f /= n + x;
        u *= f;
        CHECK(partial <= full.value + full.error_estimate + 1e-12 * std::abs(full.value));
    }
    CHECK(partial < full.value);
}
