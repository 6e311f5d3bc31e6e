#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nkji/errors.hpp"
#include "nkji/moments.hpp"
#include "nkji/solver.hpp"

using namespace nkji;

namespace {
const StructuralParams P;
const double D = P.denom();
ShockSpecSet col1() { return calibrated_shocks(1); }
}  // namespace

TEST_CASE("reduced-form coefficient oracles") {
    const ReducedForm rf = fi_reduced_form(P, col1());
    CHECK(rf.coef(Var::yhat, Driver::eta) == doctest::Approx(0.823045).epsilon(1e-6));
    CHECK(rf.coef(Var::pihat, Driver::varsigma) == doctest::Approx(0.905350).epsilon(1e-6));
    CHECK(rf.coef(Var::shat, Driver::w) == doctest::Approx(0.658436).epsilon(1e-6));
    CHECK(rf.coef(Var::yhat, Driver::lambda) == doctest::Approx(P.sigma * P.delta_a / D).epsilon(1e-12));
    CHECK(rf.coef(Var::yhat, Driver::w) == doctest::Approx(-1 / D).epsilon(1e-12));
    CHECK(rf.coef(Var::pihat, Driver::w) == doctest::Approx(-P.kappa / D).epsilon(1e-12));
}

TEST_CASE("sign pattern") {
    const ReducedForm rf = fi_reduced_form(P, col1());
    CHECK(rf.coef(Var::yhat, Driver::eta) > 0);       // demand raises the gap
    CHECK(rf.coef(Var::yhat, Driver::w) < 0);         // monetary tightening lowers the gap
    CHECK(rf.coef(Var::y, Driver::varsigma) < 0);     // cost push lowers output
    CHECK(rf.coef(Var::yhat, Driver::omega) < 0);     // potential output lowers the gap
    CHECK(rf.coef(Var::y, Driver::omega) > 0);        // and raises output
    CHECK(rf.coef(Var::shat, Driver::w) > 0);
}

TEST_CASE("lag coefficients are persistence times impact") {
    const ShockSpecSet s = col1();
    const ReducedForm rf = fi_reduced_form(P, s);
    for (int v = 0; v < kNumVars; ++v)
        for (Shock k : kTableShocks) {
            if (k == Shock::ybar) continue;
            const double lag = rf.table[v][static_cast<int>(lag_driver(k))];
            const double imp = rf.table[v][static_cast<int>(innovation_driver(k))];
            CHECK(lag == doctest::Approx(s.rho(k) * imp).epsilon(1e-12));
        }
}

TEST_CASE("row consistency of y and yhat") {
    const ReducedForm rf = fi_reduced_form(P, col1());
    for (int d = 0; d < kNumDrivers; ++d) {
        const Driver dr = static_cast<Driver>(d);
        double extra = 0;
        if (dr == Driver::omega) extra = 1.0;
        if (dr == Driver::ybar_lag) extra = col1().rho(Shock::ybar);
        CHECK(rf.coef(Var::y, dr) == doctest::Approx(rf.coef(Var::yhat, dr) + extra).epsilon(1e-12));
    }
}

TEST_CASE("closed form requires an active rule") {
    StructuralParams p;
    p.alpha_pi = 1.0;
    CHECK_THROWS_AS(fi_reduced_form(p, col1()), ValidationError);
}

TEST_CASE("expected separation recursion") {
    const ReducedForm rf = fi_reduced_form(P, col1());
    const double cst = -P.alpha_pi * P.pi_bar * (P.psi_y - P.psi_r * (P.alpha_pi * P.kappa + P.alpha_y)) / D;
    CHECK(cst == doctest::Approx(-0.0026360082).epsilon(1e-8));
    FiState x;
    for (int h = 1; h <= 10; ++h) CHECK(fi_expected_separation(rf, x, h) == doctest::Approx(cst).epsilon(1e-12));
    x.shat_lag = 1.0;
    CHECK(fi_expected_separation(rf, x, 4) == doctest::Approx(0.780749 + cst).epsilon(1e-6));
    CHECK(std::abs(fi_expected_separation(rf, x, 600) - cst) < 1e-12);
    CHECK_THROWS_AS(fi_expected_separation(rf, x, 0), ValidationError);
}

TEST_CASE("state-space form agrees with the table recursion") {
    const ShockSpecSet s = col1();
    const ReducedForm rf = fi_reduced_form(P, s);
    const StateSpaceSolution sol = fi_state_space(P, s);
    const PathSet ps = simulate_paths(P, s, Regime::FI, 60, 4);
    for (std::size_t t = 1; t < 60; t += 7) {
        const auto x = ps.ai_state(t, s);
        const FiState f = ps.fi_state(t);
        for (int h = 1; h <= 8; ++h)
            CHECK(expected_separation(sol, x, h) == doctest::Approx(fi_expected_separation(rf, f, h)).epsilon(1e-10));
    }
}

TEST_CASE("zero variances give the deterministic steady state") {
    const ShockSpecSet s = col1().with_zero_variances();
    const PathSet ps = simulate_paths(P, s, Regime::FI, 200, 1);
    for (std::size_t t = 0; t < 200; ++t) {
        CHECK(ps.yhat[t] == 0.0);
        CHECK(ps.pihat[t] == 0.0);
        CHECK(ps.shat[t] == 0.0);
    }
    const double pf = 1 - std::exp(-P.f_bar), psep = 1 - std::exp(-P.s_bar);
    const double ustar = psep / (psep + pf);
    CHECK(ps.u.back() == doctest::Approx(ustar).epsilon(1e-10));
    CHECK(steady_state_unemployment(P) == doctest::Approx(ustar).epsilon(1e-12));
}

TEST_CASE("monetary impulse responses") {
    const ShockSpecSet s = col1();
    SimOptions opt;
    const PathSet base = simulate_paths(P, s, Regime::FI, 40, 8, opt);
    opt.impulses = {{Shock::eps_i, 1.0, 10}};
    const PathSet hit = simulate_paths(P, s, Regime::FI, 40, 8, opt);
    CHECK(hit.yhat[10] - base.yhat[10] == doctest::Approx(-0.823045).epsilon(1e-6));
    CHECK(hit.pihat[10] - base.pihat[10] == doctest::Approx(-0.0823045).epsilon(1e-6));
    for (std::size_t t = 0; t < 10; ++t) CHECK(hit.yhat[t] == base.yhat[t]);
    const double r = s.rho(Shock::eps_i);
    for (std::size_t t = 11; t < 20; ++t)
        CHECK(hit.yhat[t] - base.yhat[t] == doctest::Approx((hit.yhat[t - 1] - base.yhat[t - 1]) * r).epsilon(1e-9));
}

TEST_CASE("property: IRFs match the table for every shock and variable") {
    const ShockSpecSet s = col1();
    const ReducedForm rf = fi_reduced_form(P, s);
    const std::size_t T0 = 5;
    const PathSet base = simulate_paths(P, s, Regime::FI, 30, 77);
    for (Shock k : kTableShocks) {
        SimOptions opt;
        opt.impulses = {{k, 1.0, T0}};
        const PathSet hit = simulate_paths(P, s, Regime::FI, 30, 77, opt);
        const std::array<std::pair<Var, const std::vector<double>*>, 3> rows = {
            std::pair{Var::yhat, &hit.yhat}, std::pair{Var::pihat, &hit.pihat}, std::pair{Var::ihat, &hit.ihat}};
        const std::array<const std::vector<double>*, 3> brows = {&base.yhat, &base.pihat, &base.ihat};
        for (int r = 0; r < 3; ++r) {
            const double imp = rf.coef(rows[r].first, innovation_driver(k));
            const double d0 = (*rows[r].second)[T0] - (*brows[r])[T0];
            CHECK(std::abs(d0 - imp) < 1e-10);
        }
    }
}

TEST_CASE("path identities") {
    const ShockSpecSet s = col1();
    const PathSet ps = simulate_paths(P, s, Regime::FI, 300, 12);
    for (std::size_t t = 0; t < 300; ++t) {
        CHECK(ps.y[t] == ps.yhat[t] + ps.ybar[t]);
        CHECK(ps.rhat[t] == ps.ihat[t] - ps.epi_next[t]);
        CHECK(std::abs(ps.ihat[t] - (P.alpha_pi * ps.pihat[t] + P.alpha_y * ps.yhat[t] + ps.shock[idx(Shock::eps_i)][t])) < 1e-14);
        CHECK(std::abs(ps.pihat[t] - P.beta * ps.epi_next[t] - P.kappa * ps.yhat[t] - ps.shock[idx(Shock::eps_pi)][t]) < 1e-10);
        CHECK(ps.ghat[t] == ps.tax[t]);
        CHECK(ps.u[t] >= 0.0);
        CHECK(ps.u[t] <= 1.0);
        if (t > 0) CHECK(std::abs(ps.d_diff[t] - (ps.dhat[t] - ps.dhat[t - 1])) < 1e-14 * (1 + std::abs(ps.dhat[t])));
        if (t > 0) CHECK(std::abs(ps.dhat[t] - ps.dhat[t - 1] - P.d_bar * ps.rhat[t - 1]) < 1e-14 * (1 + std::abs(ps.dhat[t])));
    }
}

TEST_CASE("determinism and regime tags") {
    const PathSet a = simulate_paths(P, calibrated_shocks(2), Regime::AI, 50, 7);
    const PathSet b = simulate_paths(P, calibrated_shocks(2), Regime::AI, 50, 7);
    CHECK(pathset_csv(a) == pathset_csv(b));
    CHECK(regime_from_name("fi") == Regime::FI);
    CHECK(regime_from_name("ai") == Regime::AI);
    CHECK_THROWS_AS(regime_from_name("xx"), ValidationError);
    CHECK_THROWS_AS(simulate_paths(P, col1(), Regime::FI, 1, 7), ValidationError);
}

TEST_CASE("noiseless signal makes AI paths equal FI paths") {
    ShockSpecSet s = calibrated_shocks(2);
    s.var_v = 0.0;
    const PathSet fi = simulate_paths(P, s, Regime::FI, 200, 31);
    const PathSet ai = simulate_paths(P, s, Regime::AI, 200, 31);
    for (std::size_t t = 0; t < 200; ++t) {
        CHECK(ai.yhat[t] == doctest::Approx(fi.yhat[t]).epsilon(1e-9));
        CHECK(ai.pihat[t] == doctest::Approx(fi.pihat[t]).epsilon(1e-9));
        CHECK(ai.shat[t] == doctest::Approx(fi.shat[t]).epsilon(1e-9));
        CHECK(ai.u[t] == doctest::Approx(fi.u[t]).epsilon(1e-9));
    }
}

TEST_CASE("AI zero-step expectation is the fitted separation") {
    ShockSpecSet s = calibrated_shocks(2);
    s[Shock::ybar].variance = 0.0;
    const StateSpaceSolution sol = solve_regime(P, s, Regime::AI);
    const PathSet ps = simulate_paths(P, s, Regime::AI, 100, 3);
    for (std::size_t t = 1; t < 100; t += 9)
        CHECK(expected_separation(sol, ps.ai_state(t, s), 0) == doctest::Approx(sol.c(0) + ps.shat[t]).epsilon(1e-10));
}

TEST_CASE("AI solve requires distinct persistences") {
    ShockSpecSet s = calibrated_shocks(2);
    s[Shock::eps_b].rho = s[Shock::q].rho;
    CHECK_THROWS_AS(solve_regime(P, s, Regime::AI), ValidationError);
}

TEST_CASE("Kalman shrinkage under a noisy signal") {
    ShockSpecSet s = calibrated_shocks(2);
    s.var_v = 10 * (s[Shock::q].variance + s[Shock::eps_b].variance);
    const PathSet ps = simulate_paths(P, s, Regime::AI, 100000, 2);
    CHECK(sample_variance(ps.q_hat) < sample_variance(ps.shock[idx(Shock::q)]));
    CHECK(sample_variance(ps.eb_hat) < sample_variance(ps.shock[idx(Shock::eps_b)]));
}
