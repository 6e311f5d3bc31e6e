#pragma once
#include <Eigen/Dense>

#include <vector>

#include "shocks.hpp"

namespace nkji {

// Which identification restriction separates q from eps_b. Only the first is checked by
// rank; the others accept a rank-one pair and the estimates should be read as a split of
// the filtered composite q + eps_b.
enum class Identification { DistinctPersistence, DistinctVariances, DistinctCorrelations, CompositeOnly };

struct SignalModel {
    double rho_q = 0.0;
    double rho_b = 0.0;
    double var_lambda = 0.0;
    double var_xi = 0.0;
    double var_v = 0.0;
    Identification restriction = Identification::DistinctPersistence;

    void validate() const;
    static SignalModel from_shocks(const ShockSpecSet& s);
    Eigen::Matrix2d transition() const;
    Eigen::Matrix2d state_noise() const;
    Eigen::Matrix2d stationary_cov() const;
};

struct Observability {
    Eigen::Matrix2d matrix;
    int rank = 0;
};

Observability observability(const SignalModel& m);

struct FilterGain {
    Eigen::Matrix2d steady_P;      // posterior covariance at the fixed point
    Eigen::Matrix2d steady_prior;  // one-step predictive covariance
    Eigen::Vector2d steady_K;
    double innovation_var = 0.0;   // C P_prior C' + var_v
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

// One step of the predictive-covariance recursion.
Eigen::Matrix2d riccati_step(const SignalModel& m, const Eigen::Matrix2d& P);
FilterGain steady_state_gain(const SignalModel& m);

struct FilteredPath {
    std::vector<double> q_hat;
    std::vector<double> eb_hat;
    std::vector<double> innovations;
    std::vector<double> innovation_var;
};

constexpr std::size_t kFilterBurnIn = 50;

FilteredPath run_filter(const SignalModel& m, const std::vector<double>& signal,
                        std::size_t burn_in = kFilterBurnIn);
FilteredPath run_filter(const SignalModel& m, const FilterGain& gain,
                        const std::vector<double>& signal, std::size_t burn_in = kFilterBurnIn);

// Filter on the signal plus extra observables z_t = L x_t + e_t with independent noise
// variances r. Rows of `extra` are periods.
FilteredPath run_filter_augmented(const SignalModel& m, const std::vector<double>& signal,
                                  const Eigen::MatrixXd& extra, const Eigen::MatrixXd& loadings,
                                  const Eigen::VectorXd& noise_var,
                                  std::size_t burn_in = kFilterBurnIn);

}  // namespace nkji
