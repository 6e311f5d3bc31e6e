#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nkji/errors.hpp"
#include "nkji/model.hpp"

using namespace nkji;

TEST_CASE("companion trace and determinant at the calibration") {
    StructuralParams p;
    const StructuralSystem s = build_system(p);
    CHECK(s.trace() == doctest::Approx(2.211111).epsilon(1e-6));
    CHECK(s.det() == doctest::Approx(1.227273).epsilon(1e-6));
    const double tr = 1 / p.beta + 1 + p.alpha_y / p.sigma + p.kappa / (p.sigma * p.beta);
    const double dt = (1 / p.beta) * (1 + p.alpha_y / p.sigma) + p.kappa * p.alpha_pi / (p.sigma * p.beta);
    CHECK(std::abs(s.trace() - tr) < 1e-12);
    CHECK(std::abs(s.det() - dt) < 1e-12);
}

TEST_CASE("companion equals Phi0^-1 Phi1") {
    StructuralParams p;
    p.alpha_pi = 0.85;
    const StructuralSystem s = build_system(p);
    CHECK((s.companion - s.phi0.inverse() * s.phi1).norm() < 1e-12);
    CHECK(s.det() == doctest::Approx(1.196970).epsilon(1e-6));
}

TEST_CASE("passive policy and vanishing slope limit") {
    StructuralParams p;
    p.alpha_pi = 0;
    p.alpha_y = 0;
    p.kappa = 1e-12;
    CHECK(build_system(p).det() == doctest::Approx(1.010101).epsilon(1e-6));
}

TEST_CASE("singular Phi0 is rejected") {
    StructuralParams p;
    p.sigma = 0.115;
    p.alpha_y = 0;
    p.kappa = 0.1;
    p.alpha_pi = 1.15;
    CHECK_THROWS_WITH_AS(build_system(p), doctest::Contains("singular Phi0"), ValidationError);
}

TEST_CASE("parameter domain checks") {
    StructuralParams p;
    p.beta = 1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.kappa = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.u0 = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.f_bar = -0.1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("json round trip and unknown keys") {
    StructuralParams p;
    p.alpha_pi = 1.4;
    p.u0 = 0.07;
    const StructuralParams q = params_from_json(params_to_json(p));
    CHECK(q.alpha_pi == 1.4);
    CHECK(q.u0.value() == 0.07);
    CHECK_THROWS_AS(params_from_json(nlohmann::json{{"alpha_pie", 1.0}}), ValidationError);
}

TEST_CASE("cohort slack aggregation") {
    CohortParams c;
    CHECK(aggregate_cohort_slack(c) == doctest::Approx(0.10));
    c.share_k = {1.0, 0.0};
    c.kappa_yo = 0.12;
    c.kappa_ol = 0.08;
    CHECK(aggregate_cohort_slack(c) == 0.12);
    c.share_k = {0.7, 0.3};
    CHECK(aggregate_cohort_slack(c) == doctest::Approx(0.108).epsilon(1e-12));
    c.share_k = {0.7, 0.4};
    CHECK_THROWS_AS(aggregate_cohort_slack(c), ValidationError);
}

TEST_CASE("cohort rate aggregation") {
    CohortParams c;
    auto r = aggregate_cohort_rates(c, 0.06, 0.06, 0.2, 0.2, 0.01, 0.01);
    CHECK(r.u == doctest::Approx(0.06));
    CHECK(r.f == doctest::Approx(0.2));
    c.share_u = {0.8, 0.2};
    c.share_s = {0.0, 1.0};
    r = aggregate_cohort_rates(c, 0.10, 0.05, 0.2, 0.2, 0.03, 0.01);
    CHECK(r.u == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(r.s == 0.01);
}

TEST_CASE("property: eigenvalues solve the characteristic polynomial") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 500; ++i) {
        StructuralParams p;
        p.beta = 0.9 + 0.099 * U(rng);
        p.kappa = 0.01 + 0.5 * U(rng);
        p.sigma = 0.2 + 3 * U(rng);
        p.alpha_pi = 3 * U(rng);
        p.alpha_y = U(rng);
        if (std::abs(p.sigma + p.alpha_y - p.alpha_pi * p.kappa) < 1e-6) continue;
        const StructuralSystem s = build_system(p);
        Eigen::EigenSolver<Eigen::Matrix2d> es(s.companion);
        for (int k = 0; k < 2; ++k) {
            const std::complex<double> l = es.eigenvalues()[k];
            CHECK(std::abs(l * l - s.trace() * l + s.det()) < 1e-10 * (1 + std::norm(l)));
        }
    }
}

TEST_CASE("property: aggregation is linear for fixed weights") {
    CohortParams c;
    c.share_u = {0.3, 0.7};
    c.share_f = {0.6, 0.4};
    c.share_s = {0.25, 0.75};
    const double a = 1.7, b = -0.4;
    const auto x = aggregate_cohort_rates(c, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6);
    const auto y = aggregate_cohort_rates(c, -0.2, 0.05, 0.1, 0.9, 0.2, 0.3);
    const auto z = aggregate_cohort_rates(c, a * 0.1 + b * -0.2, a * 0.2 + b * 0.05, a * 0.3 + b * 0.1,
                                          a * 0.4 + b * 0.9, a * 0.5 + b * 0.2, a * 0.6 + b * 0.3);
    CHECK(z.u == doctest::Approx(a * x.u + b * y.u).epsilon(1e-12));
    CHECK(z.f == doctest::Approx(a * x.f + b * y.f).epsilon(1e-12));
    CHECK(z.s == doctest::Approx(a * x.s + b * y.s).epsilon(1e-12));
}

TEST_CASE("property: identical cohorts reproduce the baseline system exactly") {
    StructuralParams base;
    CohortParams c;
    for (bool young : {true, false}) {
        const StructuralParams p = cohort_params(base, c, young);
        const StructuralSystem a = build_system(base), b = build_system(p);
        CHECK(a.companion == b.companion);
        CHECK(a.phi2 == b.phi2);
        CHECK(p.psi_y == base.psi_y);
        CHECK(p.phi_r == base.phi_r);
    }
}
