#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "specbound/optimizer.hpp"

using namespace specbound;
using namespace specbound::optimizer;

TEST_CASE("trivial_start formula") {
    CHECK(trivial_start(cplx(-2.0, 0.0), 1e-3) == doctest::Approx(2.001));
    CHECK(trivial_start(cplx(1.0, 0.0), 1e-3) == doctest::Approx(3.001));
    CHECK(trivial_start(cplx(0.0, 1.0), 1e-3) == doctest::Approx(2.001));
    CHECK_THROWS_AS(trivial_start(cplx(0.0, 0.0), 1e-3), std::domain_error);
}

TEST_CASE("config validation") {
    DescentConfig cfg;
    cfg.step = 0.02;  // exceeds theta0
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = DescentConfig{};
    cfg.criteria_order.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("descend t=-1 reproduces the two-term interval bound") {
    DescentConfig cfg;
    const auto cert = descend(cplx(-1.0, 0.0), cfg);
    CHECK(cert.beta_final <= 0.404);
    CHECK(cert.beta_final >= 0.400);
    REQUIRE_FALSE(cert.steps.empty());
    CHECK(cert.steps.back().criterion == Mode::interval_I);
    std::string why;
    CHECK_MESSAGE(verify_certificate(cert, &why), why);
}

TEST_CASE("descend t=-0.5 lands on the J criterion with an asterisk-grade bound") {
    DescentConfig cfg;
    const auto cert = descend(cplx(-0.5, 0.0), cfg);
    CHECK(cert.beta_final <= 0.113);
    CHECK(cert.steps.back().criterion == Mode::interval_J);
    std::string why;
    CHECK_MESSAGE(verify_certificate(cert, &why), why);
}

TEST_CASE("certificate chain invariants hold on emitted certificates") {
    DescentConfig cfg;
    const auto cert = descend(cplx(-2.0, 0.0), cfg);
    CHECK(cert.beta_final <= 1.219);
    double prev = cert.trivial;
    for (const auto& st : cert.steps) {
        CHECK(st.beta_from == doctest::Approx(prev).epsilon(1e-14));
        CHECK(st.beta_to < st.beta_from);
        const double theta_hyp = (st.evidence.wkind == criteria::WitnessKind::one_term)
                                     ? st.evidence.thetas.at(0)
                                     : cfg.theta0;
        CHECK(st.beta_to + theta_hyp >= st.beta_from - 1e-12);
        prev = st.beta_to;
    }
    CHECK(prev == doctest::Approx(cert.beta_final));
    std::string why;
    CHECK_MESSAGE(verify_certificate(cert, &why), why);
}

TEST_CASE("replay determinism: serialized certificates are byte-identical") {
    DescentConfig cfg;
    const auto c1 = descend(cplx(-1.3, 0.0), cfg);
    const auto c2 = descend(cplx(-1.3, 0.0), cfg);
    CHECK(serialize(c1) == serialize(c2));
}

TEST_CASE("table artifacts are byte-identical across runs") {
    DescentConfig cfg;
    const auto t1 = build_table({-0.7, 0.3}, cfg, 1);
    const auto t2 = build_table({0.3, -0.7}, cfg, 1);
    CHECK(table_to_text(t1) == table_to_text(t2));
    CHECK(plot_data(t1) == plot_data(t2));
}

TEST_CASE("monotone improvement when theta0 decreases (t = -1)") {
    DescentConfig a;
    a.theta0 = a.step = 0.02;
    DescentConfig b;
    b.theta0 = b.step = 0.01;
    const auto ca = descend(cplx(-1.0, 0.0), a);
    const auto cb = descend(cplx(-1.0, 0.0), b);
    CHECK(cb.beta_final <= ca.beta_final + a.bisect_tol);
    CHECK(ca.beta_final <= ca.trivial);
    CHECK(cb.beta_final <= cb.trivial);
}

TEST_CASE("build_table merges rows in t order and matches single descends") {
    DescentConfig cfg;
    auto table = build_table({-1.0}, cfg, 1);
    REQUIRE(table.rows.size() == 1);
    const auto single = descend(cplx(-1.0, 0.0), cfg);
    CHECK(table.rows[0].beta == single.beta_final);

    auto table2 = build_table({0.5, -0.8}, cfg, 2);
    REQUIRE(table2.rows.size() == 2);
    CHECK(table2.rows[0].t == -0.8);
    CHECK(table2.rows[1].t == 0.5);
    for (const auto& r : table2.rows) CHECK(r.beta >= r.support - cfg.bisect_tol);
    CHECK_THROWS_AS(build_table({0.0}, cfg), std::domain_error);
}

TEST_CASE("table text and plot data formats") {
    DescentConfig cfg;
    auto table = build_table({-0.5}, cfg, 1);
    const std::string txt = table_to_text(table);
    CHECK(txt.find("t,beta,criterion,theta0,grid_n,steps,runtime_ms") == 0);
    CHECK(txt.find("two-term-J*") != std::string::npos);  // asterisked row
    const std::string pd = plot_data(table);
    CHECK(pd.find("# B_*(t)") == 0);
}

TEST_CASE("sigma_class_bound_at: chord arithmetic") {
    SpectrumTable table;
    TableRow row;
    row.t = 0.25;
    row.beta = 0.056;
    table.rows.push_back(row);
    CHECK(sigma_class_bound_at(1.0, table) ==
          doctest::Approx(0.46057142857142857143).epsilon(1e-14));
    CHECK(sigma_class_bound_at(2.0, table) == 1.0);
    CHECK_THROWS_AS(sigma_class_bound_at(0.1, table), std::domain_error);
    SpectrumTable empty;
    CHECK_THROWS_AS(sigma_class_bound_at(1.0, empty), std::domain_error);
}

TEST_CASE("complex tau descends through the disk criterion") {
    DescentConfig cfg;
    cfg.bisect_tol = 2e-3;
    const auto cert = descend(cplx(0.0, 1.0), cfg);
    CHECK(cert.beta_final < cert.trivial - 0.1);  // made real progress
    REQUIRE_FALSE(cert.steps.empty());
    for (const auto& st : cert.steps)
        CHECK((st.criterion == Mode::disk_D || st.criterion == Mode::one_term));
    std::string why;
    CHECK_MESSAGE(verify_certificate(cert, &why), why);
}

TEST_CASE("tampered certificates fail verification") {
    DescentConfig cfg;
    auto cert = descend(cplx(-1.0, 0.0), cfg);
    REQUIRE_FALSE(cert.steps.empty());
    auto bad = cert;
    bad.steps.back().beta_to -= 0.05;  // breaks chain continuity with beta_final
    CHECK_FALSE(verify_certificate(bad));
    auto bad2 = cert;
    bad2.beta_final -= 0.1;
    CHECK_FALSE(verify_certificate(bad2));
}
