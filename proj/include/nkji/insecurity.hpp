#pragma once
#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "solver.hpp"

namespace nkji {

double lambda_riemann(const std::vector<double>& expected_sep, double delta);
double ji_mean_only(double lambda);
double ji_second_order(double mu, double sigma2);

// delta^2 i' D Sigma D' i with Sigma = blockdiag(shock_covs). D has one row per horizon step
// and one column per stacked future innovation.
double cumulated_variance(const Eigen::MatrixXd& weights, const std::vector<Eigen::MatrixXd>& shock_covs,
                          double delta);

// Innovation columns used by the variance mapping: one per shock plus the filter innovation.
constexpr int kInnovCols = kNumShocks + 1;
constexpr int kGammaCol = kNumShocks;

// Response of shat_{t+n} (n = 0..H-1) to a unit innovation dated t, per innovation column.
Eigen::MatrixXd separation_responses(const StateSpaceSolution& sol, const ReducedForm& rf, Regime regime, int H);
// Stacks responses into the H x (H m) weight matrix: row h, block k holds resp(h - k) for h >= k.
Eigen::MatrixXd dynamic_weights(const Eigen::MatrixXd& responses);

// Current volatility state of shocks that carry stochastic volatility.
struct VolState {
    std::array<std::optional<double>, kNumShocks> logvol;
};

// Per-period covariance blocks of innovations dated t+1..t+H given time-t volatility.
std::vector<Eigen::MatrixXd> future_shock_covs(const ShockSpecSet& s, const StateSpaceSolution& sol,
                                               Regime regime, int H, const VolState* vol = nullptr);

double separation_variance(const StateSpaceSolution& sol, const ReducedForm& rf, Regime regime, int H,
                           double delta, const VolState* vol = nullptr);

// Delta times the sum of h-step expectations, h = 1..H.
double cumulated_mean(const StateSpaceSolution& sol, const Eigen::Matrix<double, kAiDim, 1>& x, int H,
                      double delta);

// Current value of an SV shock's innovation and its standardized draw, needed to map a
// perturbation of the innovation into the log-variance.
struct SvShockNow {
    double innovation = 0.0;
    double standardized = 0.0;
};

double ji_shock_derivative(const StateSpaceSolution& sol, const ReducedForm& rf, Regime regime, int shock_col,
                           const Eigen::Matrix<double, kAiDim, 1>& state, int H, double delta,
                           const VolState* vol = nullptr, const std::optional<SvShockNow>& now = std::nullopt);

struct SunspotComponent {
    double loading = 0.0;
    double rho_zs = 0.0;
    double z_now = 0.0;
    double var_z = 0.0;
};

struct SunspotDecomposition {
    double mu_total, sigma2, derivative;
};

double sunspot_geometric_factor(double rho, int H);
SunspotDecomposition sunspot_decomposition(double fundamental_mu, const SunspotComponent& comp, int H,
                                           double delta, double fundamental_sigma2 = 0.0);

struct DiscretizationBound {
    double primary;      // (H delta / 2) sup
    double alternative;  // (H delta^2 / 2) sup
};

DiscretizationBound discretization_bound(int H, double delta, double sup_slope);

enum class JiOrder { Mean, Second };
JiOrder ji_order_from_name(const std::string& s);

struct InsecuritySeries {
    std::vector<double> lambda, mu, sigma2, ji;
};

// Expectations are taken in deviations; set include_constant to add the closed-form intercept.
InsecuritySeries ji_series(const PathSet& ps, const StateSpaceSolution& sol, const ReducedForm& rf, int H,
                           double delta, JiOrder order, bool include_constant = false);
InsecuritySeries ji_cohort(const InsecuritySeries& yo, const InsecuritySeries& ol, const WeightPair& w);

std::string insecurity_csv(const InsecuritySeries& s);

}  // namespace nkji
