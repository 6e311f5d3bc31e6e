#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nkji/errors.hpp"
#include "nkji/smm.hpp"

using namespace nkji;

namespace {
SmmProblem small_problem(std::size_t reps = 5) {
    SmmProblem p;
    p.replications = reps;
    p.targets = SmmSimulator(p).moments(p.theta_of(p.shocks));
    return p;
}

double sphere(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

double rastrigin(const std::vector<double>& x) {
    double s = 10.0 * x.size();
    for (double v : x) s += v * v - 10.0 * std::cos(2 * M_PI * v);
    return s;
}
}  // namespace

TEST_CASE("deterministic zero paths") {
    const std::vector<double> z(50, 0.0);
    const MomentVector m = compute_moments(z, z, z, z, z);
    for (int i = 0; i < 10; ++i) {
        CHECK(m.value[i] == 0.0);
        CHECK_FALSE(m.flagged[i]);
    }
    for (int i = 10; i < kNumMoments; ++i) CHECK(m.flagged[i]);
    CHECK(m.any_flagged());
}

TEST_CASE("sample moments") {
    CHECK(sample_mean({1, 2, 3, 4}) == 2.5);
    CHECK(sample_variance({1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(std::isnan(acf1({2, 2, 2, 2})));
    CHECK(std::isnan(correlation({1, 2, 3}, {5, 5, 5})));
    CHECK(correlation({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(sample_mean({}), ValidationError);
    CHECK_THROWS_AS(sample_variance({1}), ValidationError);
}

TEST_CASE("lag-one autocorrelation of an AR(1)") {
    const ShockPath p = simulate_ar1({0.9, 1.0, Shock::g}, 100000, 42);
    CHECK(std::abs(acf1(p.values) - 0.9) < 0.02);
}

TEST_CASE("independent series are uncorrelated") {
    const std::size_t n = 100000;
    const std::vector<double> a = standard_normals(1, n), b = standard_normals(2, n);
    CHECK(std::abs(correlation(a, b)) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("averaging skips flagged replications") {
    MomentVector a, b;
    a.value[3] = 2.0;
    b.value[3] = 4.0;
    a.value[12] = 0.5;
    b.flagged[12] = true;
    a.flagged[13] = b.flagged[13] = true;
    const MomentVector m = average_moments({a, b});
    CHECK(m.value[3] == 3.0);
    CHECK(m.value[12] == 0.5);
    CHECK_FALSE(m.flagged[12]);
    CHECK(m.flagged[13]);
    CHECK_THROWS_AS(average_moments({}), ValidationError);
}

TEST_CASE("moment csv round trip") {
    const SmmProblem p = small_problem(2);
    const std::string csv = moments_csv(p.targets);
    CHECK(csv.rfind("moment,value,flagged\n", 0) == 0);
    const MomentVector back = moments_from_csv("# comment\n" + csv);
    for (int i = 0; i < kNumMoments; ++i) {
        CHECK(back.value[i] == p.targets.value[i]);
        CHECK(back.flagged[i] == p.targets.flagged[i]);
    }
    CHECK_THROWS_AS(moments_from_csv("moment,value,flagged\nbogus,1,0\n"), ValidationError);
    CHECK_THROWS_AS(moments_from_csv("moment,value,flagged\nmean_yhat,1,0\n"), ValidationError);
    CHECK_THROWS_AS(moments_from_csv("moment,value,flagged\nmean_yhat,abc,0\n"), ValidationError);
}

TEST_CASE("objective vanishes at the data-generating theta") {
    const SmmProblem p = small_problem();
    CHECK(smm_objective(p.theta_of(p.shocks), p) == 0.0);
}

TEST_CASE("truth beats perturbations and the objective is non-negative") {
    const SmmProblem p = small_problem();
    const SmmSimulator sim(p);
    const Theta star = p.theta_of(p.shocks);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.05, 0.05), w(0.01, 0.99);
    for (int trial = 0; trial < 40; ++trial) {
        Theta t = star;
        for (double& v : t) v = std::clamp(v + u(rng), 0.01, 0.99);
        CHECK(sim.objective(t) > 0.0);
        Theta r;
        for (double& v : r) v = w(rng);
        CHECK(sim.objective(r) >= 0.0);
    }
}

TEST_CASE("common random numbers make the objective bit-identical") {
    const SmmProblem p = small_problem();
    Theta t = p.theta_of(p.shocks);
    t[0] = 0.5;
    t[4] = 0.7;
    const SmmSimulator a(p), b(p);
    const double v = a.objective(t);
    CHECK(a.objective(t) == v);
    CHECK(b.objective(t) == v);
    CHECK(smm_objective(t, p) == v);
}

TEST_CASE("problem validation") {
    SmmProblem p = small_problem(2);
    Theta t = p.theta_of(p.shocks);
    t[2] = 0.995;
    CHECK_THROWS_AS(p.shocks_at(t), ValidationError);
    p.bounds[0] = {0.2, 1.0};
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = small_problem(2);
    p.replications = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    DeConfig de;
    de.population = 3;
    CHECK_THROWS_AS(de.validate(), ValidationError);
    de = DeConfig{};
    de.CR = 1.5;
    CHECK_THROWS_AS(de.validate(), ValidationError);
    de = DeConfig{};
    de.F = 0.0;
    CHECK_THROWS_AS(de.validate(), ValidationError);
}

TEST_CASE("zero-variance shocks give zero or flagged moments") {
    SmmProblem p;
    p.replications = 3;
    p.shocks = p.shocks.with_zero_variances();
    const MomentVector m = SmmSimulator(p).moments(p.theta_of(p.shocks));
    for (int i = 0; i < kNumMoments; ++i) {
        const std::string name = kMomentNames[i];
        if (name == "mean_u") continue;  // level of unemployment, not a deviation
        CHECK((m.flagged[i] || std::abs(m.value[i]) < 1e-12));
    }
}

TEST_CASE("DE solves the 9-d sphere") {
    DeConfig de;
    de.max_generations = 500;
    de.tolerance = 0;
    const std::vector<std::pair<double, double>> bounds(9, {-5.0, 5.0});
    const DeResult r = differential_evolution(sphere, bounds, de);
    CHECK(r.objective < 1e-6);
    for (double v : r.x) CHECK(std::abs(v) < 1e-3);
    CHECK(r.generations <= 500);
}

TEST_CASE("DE on 9-d Rastrigin across seeds") {
    const std::vector<std::pair<double, double>> bounds(9, {-5.12, 5.12});
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        DeConfig de;
        de.seed = seed;
        de.max_generations = 2000;
        // Low crossover suits separable multimodal functions; CR = 0.9 stalls in local basins.
        de.CR = 0.2;
        const DeResult r = differential_evolution(rastrigin, bounds, de);
        CHECK(r.objective < 1.0);
    }
}

TEST_CASE("best objective never increases and threads do not change the result") {
    DeConfig de;
    de.max_generations = 60;
    const std::vector<std::pair<double, double>> bounds(4, {-5.12, 5.12});
    const DeResult r = differential_evolution(rastrigin, bounds, de);
    REQUIRE(r.trace.size() == 61);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best <= r.trace[i - 1].best);
    de.threads = 3;
    const DeResult r3 = differential_evolution(rastrigin, bounds, de);
    CHECK(r3.objective == r.objective);
    CHECK(r3.x == r.x);
    const std::string csv = de_trace_csv(r, {"a", "b", "c", "d"});
    CHECK(csv.rfind("generation,best_objective,a,b,c,d\n", 0) == 0);
}

TEST_CASE("non-finite objective values never win") {
    DeConfig de;
    de.max_generations = 50;
    const std::vector<std::pair<double, double>> bounds(2, {-1.0, 1.0});
    auto f = [](const std::vector<double>& x) { return x[0] > 0 ? std::nan("") : sphere(x); };
    const DeResult r = differential_evolution(f, bounds, de);
    CHECK(std::isfinite(r.objective));
    CHECK(r.x[0] <= 0);
}

TEST_CASE("polish never worsens the DE optimum") {
    const SmmProblem p = small_problem(3);
    DeConfig de;
    de.max_generations = 15;
    de.population = 40;
    de.polish_max_evals = 400;
    const DeResult r = differential_evolution(p, de);
    CHECK(r.objective <= r.de_objective);
    for (int i = 0; i < kNumTheta; ++i) {
        CHECK(r.x[i] >= p.bounds[i].first);
        CHECK(r.x[i] <= p.bounds[i].second);
    }
}

TEST_CASE("half samples of a long simulation agree") {
    const StructuralParams P;
    const ShockSpecSet s = calibrated_shocks(1);
    const std::size_t n = 200000;
    const PathSet ps = simulate_paths(P, s, Regime::FI, n, 31);
    auto half = [&](const std::vector<double>& v, bool first) {
        return first ? std::vector<double>(v.begin(), v.begin() + n / 2) : std::vector<double>(v.begin() + n / 2, v.end());
    };
    const MomentVector a = compute_moments(half(ps.yhat, true), half(ps.pihat, true), half(ps.shat, true),
                                           half(ps.u, true), half(ps.rhat, true));
    const MomentVector b = compute_moments(half(ps.yhat, false), half(ps.pihat, false), half(ps.shat, false),
                                           half(ps.u, false), half(ps.rhat, false));
    for (int i = 0; i < kNumMoments; ++i) {
        const std::string name = kMomentNames[i];
        if (name.rfind("mean_", 0) == 0 && name != "mean_u") {
            // Means of deviations sit near zero; compare them on the scale of the standard deviation.
            const double sd = std::sqrt(a.value[i + 1]);
            CHECK(std::abs(a.value[i] - b.value[i]) < 0.05 * sd);
        } else {
            CHECK(std::abs(a.value[i] - b.value[i]) <= 0.05 * std::max(std::abs(a.value[i]), std::abs(b.value[i])) + 1e-12);
        }
    }
}

TEST_CASE("report rows are estimated minus observed") {
    MomentVector obs, est;
    obs.value[1] = 1.08;
    est.value[1] = 1.5;
    est.flagged[11] = true;
    const std::vector<ReportRow> rows = report_rows(obs, est);
    REQUIRE(rows.size() == kNumMoments);
    CHECK(rows[1].moment == "var_yhat");
    CHECK(rows[1].difference == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(rows[11].flagged);

    EstimateReport rep;
    rep.rows = rows;
    const std::string csv = report_csv(rep);
    CHECK(csv.find("moment,observed,estimated,difference,flagged\n") != std::string::npos);
    CHECK(csv.find("# objective") != std::string::npos);
}
