#pragma once
#include <Eigen/Dense>
#include "json.hpp"

#include <string>
#include <vector>

namespace nkji {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct RegressionResult {
    VectorXd coefficients;
    VectorXd se;      // classical
    VectorXd hac_se;  // Newey-West, Bartlett kernel
    MatrixXd hac_cov;
    int hac_lags = 0;
    VectorXd t_hac;
    VectorXd p_hac;  // two-sided normal reference
    double r2 = 0, adjusted_r2 = 0;
    double ssr = 0;
    VectorXd residuals, fitted;
    int n = 0, k = 0;
};

int default_hac_lags(int n);  // floor(4 (n/100)^(2/9))
RegressionResult ols_hac(const VectorXd& y, const MatrixXd& X, int hac_lags = -1);
MatrixXd newey_west(const MatrixXd& X, const VectorXd& e, int lags);
MatrixXd with_intercept(const MatrixXd& X);

// Auxiliary-regression VIF for each column of X (no intercept column; one is added).
std::vector<double> vif(const MatrixXd& X);

// MacKinnon response-surface p-value for the constant-only Dickey-Fuller tau statistic.
// n_vars > 1 gives the Engle-Granger residual-based distribution.
double mackinnon_p(double tau, int n_vars = 1);

struct AdfResult {
    double stat = 0, p = 1;
    int lags = 0, nobs = 0;
};
AdfResult adf(const std::vector<double>& x, int lags, int n_vars = 1);

struct TestResult {
    double stat = 0, p = 1;
    double df1 = 0, df2 = 0;
    bool defined = true;
};

TestResult ramsey_reset(const VectorXd& y, const MatrixXd& X, const std::vector<int>& powers = {2, 3});

struct CusumResult {
    std::vector<double> path, upper, lower;
    bool breach = false;
};
constexpr double kCusumBand95 = 0.948;
CusumResult cusum(const VectorXd& y, const MatrixXd& X);

struct TslsResult {
    RegressionResult fit;  // coefficients with structural residuals; hac_se from the projected design
    TestResult sargan;     // df1 = overidentification degree; undefined when exactly identified
    double first_stage_condition = 0;
};
// X holds every regressor; Z holds every instrument (exogenous regressors instrument themselves).
TslsResult tsls(const VectorXd& y, const MatrixXd& X, const MatrixXd& Z, int hac_lags = -1);

// Ljung-Box Q with a chi-squared(lags) reference.
TestResult portmanteau(const std::vector<double>& e, int lags);

struct NamedSeries {
    std::string name;
    std::vector<double> values;
};

// Standardize, regress with HAC errors, then diagnose.
nlohmann::json validation_report(const NamedSeries& y, const std::vector<NamedSeries>& x,
                                 const std::vector<NamedSeries>& instruments = {}, int adf_lags = 1,
                                 int lb_lags = 8);

}  // namespace nkji
