#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nkji/econometrics.hpp"
#include "nkji/errors.hpp"
#include "nkji/filter.hpp"
#include "nkji/moments.hpp"
#include "nkji/solver.hpp"

using namespace nkji;

namespace {
SignalModel col2() { return SignalModel::from_shocks(calibrated_shocks(2)); }

struct Sim {
    std::vector<double> q, b, a;
};
Sim simulate_signal(const SignalModel& m, std::size_t n, uint64_t seed) {
    ShockSpecSet s = calibrated_shocks(2);
    s[Shock::q] = {m.rho_q, m.var_lambda, Shock::q};
    s[Shock::eps_b] = {m.rho_b, m.var_xi, Shock::eps_b};
    const ShockPath q = simulate_ar1(s[Shock::q], n, seed), b = simulate_ar1(s[Shock::eps_b], n, seed);
    const ShockPath a = compose_signal(q, b, m.var_v, seed);
    return {q.values, b.values, a.values};
}
double mse(const std::vector<double>& x, const std::vector<double>& y, std::size_t from) {
    double s = 0;
    for (std::size_t t = from; t < x.size(); ++t) s += (x[t] - y[t]) * (x[t] - y[t]);
    return s / static_cast<double>(x.size() - from);
}
}  // namespace

TEST_CASE("observability matrix and rank") {
    SignalModel m = SignalModel::from_shocks(calibrated_shocks(1));
    Observability o = observability(m);
    CHECK(o.rank == 2);
    CHECK(o.matrix.determinant() == doctest::Approx(-0.04).epsilon(1e-12));
    CHECK(observability(col2()).rank == 2);
    m.rho_b = m.rho_q;
    CHECK(observability(m).rank == 1);
}

TEST_CASE("identification toggles") {
    SignalModel m = col2();
    m.rho_b = m.rho_q;
    CHECK_THROWS_AS(steady_state_gain(m), ValidationError);
    m.restriction = Identification::CompositeOnly;
    CHECK(steady_state_gain(m).converged);
}

TEST_CASE("steady-state gain fixed point") {
    const SignalModel m = col2();
    CHECK(m.rho_q == 0.59);
    CHECK(m.rho_b == 0.92);
    CHECK(m.var_v == 0.05);
    const FilterGain g = steady_state_gain(m);
    CHECK(g.converged);
    CHECK((riccati_step(m, g.steady_prior) - g.steady_prior).norm() < 1e-10);
    const Eigen::RowVector2d C(1, 1);
    const double s = (C * g.steady_prior * C.transpose())(0, 0) + m.var_v;
    CHECK((g.steady_K - g.steady_prior * C.transpose() / s).norm() < 1e-12);
    CHECK(std::abs(g.steady_P(0, 1) - g.steady_P(1, 0)) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g.steady_P);
    CHECK(es.eigenvalues().minCoeff() >= -1e-14);
    // Frozen oracle from an independent Riccati solve.
    CHECK(g.steady_K(0) == doctest::Approx(0.2976770983).epsilon(1e-8));
    CHECK(g.steady_K(1) == doctest::Approx(0.5289413048).epsilon(1e-8));
}

TEST_CASE("noiseless and uninformative limits") {
    SignalModel m = col2();
    m.var_v = 0.0;
    const FilterGain g = steady_state_gain(m);
    const Eigen::RowVector2d C(1, 1);
    CHECK((C * g.steady_P * C.transpose())(0, 0) < 1e-10);
    const Sim s = simulate_signal(m, 2000, 3);
    const FilteredPath fp = run_filter(m, g, s.a);
    for (std::size_t t = 0; t < s.a.size(); ++t) CHECK(fp.q_hat[t] + fp.eb_hat[t] == doctest::Approx(s.a[t]).epsilon(1e-9));

    m.var_v = 1e12;
    const FilterGain u = steady_state_gain(m);
    CHECK(u.steady_K.norm() < 1e-10);
}

TEST_CASE("zero signal and empty input") {
    const SignalModel m = col2();
    const FilteredPath fp = run_filter(m, std::vector<double>(300, 0.0));
    for (std::size_t t = 0; t < 300; ++t) {
        CHECK(fp.q_hat[t] == 0.0);
        CHECK(fp.eb_hat[t] == 0.0);
        CHECK(fp.innovations[t] == 0.0);
    }
    CHECK_THROWS_AS(run_filter(m, std::vector<double>{}), ValidationError);
}

TEST_CASE("filter beats the unconditional mean and the naive split") {
    const SignalModel m = col2();
    const Sim s = simulate_signal(m, 100000, 17);
    const FilteredPath fp = run_filter(m, s.a);
    std::vector<double> zero(s.q.size(), 0.0), naive(s.q.size());
    for (std::size_t t = 0; t < s.a.size(); ++t) naive[t] = 0.5 * s.a[t];
    const double k = mse(fp.q_hat, s.q, 100);
    CHECK(k < mse(zero, s.q, 100));
    CHECK(k < mse(naive, s.q, 100));
}

TEST_CASE("innovations are white") {
    const SignalModel m = col2();
    const Sim s = simulate_signal(m, 100000, 99);
    const FilteredPath fp = run_filter(m, s.a);
    std::vector<double> e(fp.innovations.begin() + kFilterBurnIn, fp.innovations.end());
    const double se = std::sqrt(sample_variance(e) / e.size());
    CHECK(std::abs(sample_mean(e)) < 3 * se);
    CHECK(std::abs(acf1(e)) < 0.01);
    CHECK(portmanteau(e, 10).p > 0.01);
}

TEST_CASE("property: extra observables without loadings add nothing") {
    const StructuralParams p;
    const ShockSpecSet sh = calibrated_shocks(2);
    const PathSet ps = simulate_paths(p, sh, Regime::AI, 400, 123);
    const SignalModel m = SignalModel::from_shocks(sh);
    const FilteredPath base = run_filter(m, ps.a);
    Eigen::MatrixXd extra(ps.a.size(), 3);
    for (std::size_t t = 0; t < ps.a.size(); ++t) {
        extra(t, 0) = ps.ihat[t];
        extra(t, 1) = ps.pihat[t];
        extra(t, 2) = ps.dhat[t];
    }
    const FilteredPath aug =
        run_filter_augmented(m, ps.a, extra, Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Ones(3));
    for (std::size_t t = 0; t < ps.a.size(); ++t) {
        CHECK(std::abs(aug.q_hat[t] - base.q_hat[t]) < 1e-12);
        CHECK(std::abs(aug.eb_hat[t] - base.eb_hat[t]) < 1e-12);
    }
}

TEST_CASE("property: Kalman beats random linear splits") {
    const SignalModel m = col2();
    const Sim s = simulate_signal(m, 50000, 5);
    const FilteredPath fp = run_filter(m, s.a);
    const double k = mse(fp.q_hat, s.q, 100);
    for (double w : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        std::vector<double> alt(s.a.size(), 0.0);
        // Exponential smoother of the signal with weight w.
        for (std::size_t t = 1; t < s.a.size(); ++t) alt[t] = w * alt[t - 1] + (1 - w) * 0.3 * s.a[t];
        CHECK(k <= mse(alt, s.q, 100));
    }
}
