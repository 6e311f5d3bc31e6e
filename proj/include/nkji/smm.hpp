#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "moments.hpp"
#include "solver.hpp"

namespace nkji {

constexpr int kNumTheta = 9;
// Order of the estimated persistences.
constexpr std::array<Shock, kNumTheta> kThetaShocks = {Shock::eps_pi, Shock::g,     Shock::eps_i,
                                                       Shock::eps_yhat, Shock::ybar, Shock::eps_b,
                                                       Shock::q,      Shock::eps_f, Shock::eps_s};
extern const std::array<const char*, kNumTheta> kThetaNames;

using Theta = std::array<double, kNumTheta>;

struct SmmProblem {
    MomentVector targets;
    std::array<std::pair<double, double>, kNumTheta> bounds;
    std::size_t replications = 50;
    std::size_t sim_length = 86;
    std::size_t burn_in = 100;
    Regime regime = Regime::FI;
    StructuralParams params;
    ShockSpecSet shocks;  // variances and SV laws; persistences are overwritten by theta
    uint64_t seed = 20250101;

    SmmProblem();
    void validate() const;
    Theta theta_of(const ShockSpecSet& s) const;
    ShockSpecSet shocks_at(const Theta& theta) const;
};

// Common random numbers for every replication of a problem.
class SmmSimulator {
public:
    explicit SmmSimulator(const SmmProblem& problem);
    MomentVector moments(const Theta& theta) const;
    double objective(const Theta& theta) const;
    const SmmProblem& problem() const { return problem_; }

private:
    SmmProblem problem_;
    std::vector<StandardDraws> draws_;
};

// Simulated minus target moments; flagged entries are zero.
std::array<double, kNumMoments> moment_residuals(const MomentVector& sim, const MomentVector& target);
double moment_distance(const MomentVector& sim, const MomentVector& target);
double smm_objective(const Theta& theta, const SmmProblem& problem);

struct DeConfig {
    std::size_t population = 90;
    double F = 0.8;
    double CR = 0.9;
    std::size_t max_generations = 1000;
    double tolerance = 1e-10;  // stop when max - min objective in the population drops below
    uint64_t seed = 1;
    unsigned threads = 1;
    // SMM only: Levenberg-Marquardt refinement of the best member on the moment residuals,
    // run in logistic coordinates of the bounds.
    bool polish = true;
    std::size_t polish_max_evals = 4000;
    void validate() const;
};

struct DeTraceRow {
    std::size_t generation;
    double best;
    std::vector<double> best_x;
};

struct DeResult {
    std::vector<double> x;
    double objective = 0;
    std::size_t generations = 0;
    bool converged = false;
    bool polished = false;      // refinement improved the DE optimum
    double de_objective = 0;    // best objective before refinement
    std::vector<DeTraceRow> trace;
};

using Objective = std::function<double(const std::vector<double>&)>;

DeResult differential_evolution(const Objective& f, const std::vector<std::pair<double, double>>& bounds,
                                const DeConfig& de);
DeResult differential_evolution(const SmmProblem& problem, const DeConfig& de);

std::string de_trace_csv(const DeResult& r, const std::vector<std::string>& names);

struct ReportRow {
    std::string moment;
    double observed, estimated, difference;
    bool flagged;
};

struct EstimateReport {
    Theta theta{};
    double objective = 0;
    std::vector<ReportRow> rows;
    DeResult de;
};

EstimateReport estimate_report(const SmmProblem& problem, const DeConfig& de);
// Report rows for a given theta without running the optimizer.
std::vector<ReportRow> report_rows(const MomentVector& observed, const MomentVector& estimated);
std::string report_csv(const EstimateReport& r);

}  // namespace nkji
