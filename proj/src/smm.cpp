#include "nkji/smm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "nkji/errors.hpp"

namespace nkji {

const std::array<const char*, kNumTheta> kThetaNames = {"rho_eps_pi", "rho_g",    "rho_i",
                                                        "rho_yhat",   "rho_ybar", "rho_b",
                                                        "rho_q",      "rho_f",    "rho_s"};

SmmProblem::SmmProblem() : shocks(calibrated_shocks(1)) {
    bounds.fill({0.01, 0.99});
}

void SmmProblem::validate() const {
    require(replications >= 1, "replications must be >= 1");
    require(sim_length >= 4, "sim_length must be >= 4");
    for (int i = 0; i < kNumTheta; ++i) {
        const auto& b = bounds[i];
        require(b.first >= 0.0 && b.second <= 0.999 && b.first < b.second,
                std::string("bounds for ") + kThetaNames[i] + " must lie in [0, 0.999] with lo < hi");
    }
    params.validate();
    shocks.validate();
}

Theta SmmProblem::theta_of(const ShockSpecSet& s) const {
    Theta t{};
    for (int i = 0; i < kNumTheta; ++i) t[i] = s[kThetaShocks[i]].rho;
    return t;
}

ShockSpecSet SmmProblem::shocks_at(const Theta& theta) const {
    for (int i = 0; i < kNumTheta; ++i)
        if (!(theta[i] >= bounds[i].first && theta[i] <= bounds[i].second))
            throw ValidationError(std::string("theta component ") + kThetaNames[i] + " out of bounds");
    ShockSpecSet s = shocks;
    for (int i = 0; i < kNumTheta; ++i) s[kThetaShocks[i]].rho = theta[i];
    return s;
}

SmmSimulator::SmmSimulator(const SmmProblem& problem) : problem_(problem) {
    problem_.validate();
    draws_.reserve(problem_.replications);
    for (std::size_t r = 0; r < problem_.replications; ++r)
        draws_.push_back(draw_standard(problem_.seed, r, problem_.burn_in + problem_.sim_length));
}

MomentVector SmmSimulator::moments(const Theta& theta) const {
    const ShockSpecSet s = problem_.shocks_at(theta);
    SimOptions opt;
    opt.burn_in = problem_.burn_in;
    std::vector<MomentVector> ms;
    ms.reserve(draws_.size());
    for (const auto& d : draws_)
        ms.push_back(compute_moments(simulate_paths(problem_.params, s, problem_.regime, problem_.sim_length, d, opt)));
    return average_moments(ms);
}

double SmmSimulator::objective(const Theta& theta) const { return moment_distance(moments(theta), problem_.targets); }

std::array<double, kNumMoments> moment_residuals(const MomentVector& sim, const MomentVector& target) {
    std::array<double, kNumMoments> r{};
    for (int i = 0; i < kNumMoments; ++i)
        if (!sim.flagged[i] && !target.flagged[i]) r[i] = sim.value[i] - target.value[i];
    return r;
}

double moment_distance(const MomentVector& sim, const MomentVector& target) {
    double d = 0;
    for (double e : moment_residuals(sim, target)) d += e * e;
    return d;
}

double smm_objective(const Theta& theta, const SmmProblem& problem) { return SmmSimulator(problem).objective(theta); }

void DeConfig::validate() const {
    require(population >= 4, "DE population must be >= 4");
    require(F > 0.0 && F <= 2.0, "DE F must lie in (0, 2]");
    require(CR >= 0.0 && CR <= 1.0, "DE CR must lie in [0, 1]");
    require(max_generations >= 1, "DE max_generations must be >= 1");
    require(tolerance >= 0.0, "DE tolerance must be >= 0");
}

namespace {

double safe_eval(const Objective& f, const std::vector<double>& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

void evaluate_all(const Objective& f, const std::vector<std::vector<double>>& xs, std::vector<double>& out,
                  unsigned threads) {
    out.assign(xs.size(), 0.0);
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(xs.size())));
    if (nt == 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = safe_eval(f, xs[i]);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    for (unsigned w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < xs.size(); i += nt) out[i] = safe_eval(f, xs[i]);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace

DeResult differential_evolution(const Objective& f, const std::vector<std::pair<double, double>>& bounds,
                                const DeConfig& de) {
    de.validate();
    const std::size_t dim = bounds.size(), np = de.population;
    require(dim >= 1, "DE needs at least one dimension");
    for (const auto& b : bounds) require(b.first < b.second, "DE bounds need lo < hi");

    std::mt19937_64 rng(substream_seed(de.seed, 48, 0));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    for (auto& x : pop)
        for (std::size_t j = 0; j < dim; ++j) x[j] = bounds[j].first + unif(rng) * (bounds[j].second - bounds[j].first);
    std::vector<double> fit;
    evaluate_all(f, pop, fit, de.threads);

    DeResult res;
    auto best_index = [&] { return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin()); };
    auto record = [&](std::size_t g) {
        const std::size_t b = best_index();
        res.trace.push_back({g, fit[b], pop[b]});
    };
    record(0);

    std::vector<std::vector<double>> trial(np, std::vector<double>(dim));
    std::vector<double> tfit;
    std::size_t g = 0;
    for (; g < de.max_generations; ++g) {
        const auto [lo, hi] = std::minmax_element(fit.begin(), fit.end());
        if (std::isfinite(*hi) && *hi - *lo < de.tolerance) {
            res.converged = true;
            break;
        }
        // Trials are drawn sequentially so the result does not depend on the thread count.
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t a, b, c;
            do a = rng() % np; while (a == i);
            do b = rng() % np; while (b == i || b == a);
            do c = rng() % np; while (c == i || c == a || c == b);
            const std::size_t jr = rng() % dim;
            for (std::size_t j = 0; j < dim; ++j) {
                const double u = unif(rng);
                if (u < de.CR || j == jr) {
                    double v = pop[a][j] + de.F * (pop[b][j] - pop[c][j]);
                    const double L = bounds[j].first, H = bounds[j].second;
                    // Bounce back between the base vector and the violated bound.
                    if (v < L) v = L + unif(rng) * (pop[a][j] - L);
                    if (v > H) v = H - unif(rng) * (H - pop[a][j]);
                    trial[i][j] = std::clamp(v, L, H);
                } else {
                    trial[i][j] = pop[i][j];
                }
            }
        }
        evaluate_all(f, trial, tfit, de.threads);
        for (std::size_t i = 0; i < np; ++i)
            if (tfit[i] <= fit[i]) {
                pop[i] = trial[i];
                fit[i] = tfit[i];
            }
        record(g + 1);
    }
    const std::size_t b = best_index();
    res.x = pop[b];
    res.objective = fit[b];
    res.generations = g;
    return res;
}

namespace {

// Residual functor in logistic coordinates z, theta = lo + (hi - lo) / (1 + exp(-z)).
struct PolishResiduals {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    const SmmSimulator* sim = nullptr;
    int inputs() const { return kNumTheta; }
    int values() const { return kNumMoments; }

    Theta theta(const Eigen::VectorXd& z) const {
        Theta t{};
        const auto& b = sim->problem().bounds;
        for (int i = 0; i < kNumTheta; ++i) t[i] = b[i].first + (b[i].second - b[i].first) / (1.0 + std::exp(-z[i]));
        return t;
    }
    int operator()(const Eigen::VectorXd& z, Eigen::VectorXd& out) const {
        const auto r = moment_residuals(sim->moments(theta(z)), sim->problem().targets);
        out = Eigen::Map<const Eigen::VectorXd>(r.data(), kNumMoments);
        return 0;
    }
};

}  // namespace

DeResult differential_evolution(const SmmProblem& problem, const DeConfig& de) {
    const SmmSimulator sim(problem);
    std::vector<std::pair<double, double>> bounds(problem.bounds.begin(), problem.bounds.end());
    Objective f = [&sim](const std::vector<double>& x) {
        Theta t{};
        std::copy(x.begin(), x.end(), t.begin());
        return sim.objective(t);
    };
    DeResult res = differential_evolution(f, bounds, de);
    res.de_objective = res.objective;
    if (!de.polish || !std::isfinite(res.objective) || res.objective == 0.0) return res;

    PolishResiduals fr;
    fr.sim = &sim;
    Eigen::VectorXd z(kNumTheta);
    for (int i = 0; i < kNumTheta; ++i) {
        const double w = std::clamp((res.x[i] - bounds[i].first) / (bounds[i].second - bounds[i].first), 1e-9, 1 - 1e-9);
        z[i] = std::log(w / (1 - w));
    }
    Eigen::NumericalDiff<PolishResiduals, Eigen::Central> nd(fr, 1e-7);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<PolishResiduals, Eigen::Central>> lm(nd);
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    lm.parameters.maxfev = static_cast<Eigen::Index>(de.polish_max_evals);
    lm.minimize(z);
    const Theta t = fr.theta(z);
    const double obj = sim.objective(t);
    if (obj < res.objective) {
        res.x.assign(t.begin(), t.end());
        res.objective = obj;
        res.polished = true;
    }
    return res;
}

std::string de_trace_csv(const DeResult& r, const std::vector<std::string>& names) {
    std::ostringstream os;
    os.precision(17);
    os << "generation,best_objective";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (const auto& row : r.trace) {
        os << row.generation << ',' << row.best;
        for (double v : row.best_x) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

std::vector<ReportRow> report_rows(const MomentVector& observed, const MomentVector& estimated) {
    std::vector<ReportRow> rows;
    for (int i = 0; i < kNumMoments; ++i)
        rows.push_back({kMomentNames[i], observed.value[i], estimated.value[i], estimated.value[i] - observed.value[i],
                        observed.flagged[i] || estimated.flagged[i]});
    return rows;
}

EstimateReport estimate_report(const SmmProblem& problem, const DeConfig& de) {
    EstimateReport r;
    r.de = differential_evolution(problem, de);
    std::copy(r.de.x.begin(), r.de.x.end(), r.theta.begin());
    r.objective = r.de.objective;
    r.rows = report_rows(problem.targets, SmmSimulator(problem).moments(r.theta));
    return r;
}

std::string report_csv(const EstimateReport& r) {
    std::ostringstream os;
    os.precision(10);
    os << "moment,observed,estimated,difference,flagged\n";
    for (const auto& row : r.rows)
        os << row.moment << ',' << row.observed << ',' << row.estimated << ',' << row.difference << ','
           << row.flagged << '\n';
    os << "# objective," << r.objective << '\n';
    for (int i = 0; i < kNumTheta; ++i) os << "# " << kThetaNames[i] << ',' << r.theta[i] << '\n';
    return os.str();
}

}  // namespace nkji
