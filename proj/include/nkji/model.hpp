#pragma once
#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>

#include "json.hpp"

namespace nkji {

struct StructuralParams {
    double beta = 0.99;
    double kappa = 0.10;
    double sigma = 1.0;
    double alpha_pi = 1.15;
    double alpha_y = 0.10;
    double phi_y = 0.6;
    double phi_r = 0.2;
    double psi_y = 0.6;
    double psi_r = 0.2;
    double delta_a = 0.35;
    double delta_G = 0.25;
    double pi_bar = 0.005;   // 2% a year, quarterly
    double d_bar = 1.35;
    double f_bar = 0.16;
    double s_bar = 0.015;
    std::optional<double> u0;  // steady state when empty

    void validate() const;
    // Denominator shared by the closed-form coefficients: alpha_pi*kappa + alpha_y + sigma.
    double denom() const { return alpha_pi * kappa + alpha_y + sigma; }
};

double steady_state_unemployment(const StructuralParams& p);
double initial_unemployment(const StructuralParams& p);

StructuralParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const StructuralParams& p);

// Vector layouts. State gamma = (pihat, yhat); shifters Xi = (eps_pi, eps_i, rbar, a, ghat).
constexpr std::array<const char*, 5> kShifterOrder = {"eps_pi", "eps_i", "rbar", "a", "ghat"};

struct StructuralSystem {
    Eigen::Matrix2d phi0;
    Eigen::Matrix2d phi1;
    Eigen::Matrix<double, 2, 5> phi2;
    Eigen::Matrix2d companion;  // E_t gamma_{t+1} = companion * gamma_t + ...
    double trace() const { return companion.trace(); }
    double det() const { return companion.determinant(); }
};

StructuralSystem build_system(const StructuralParams& p);

struct WeightPair {
    double yo = 0.5;
    double ol = 0.5;
    void validate(const char* what) const;
    double mix(double a_yo, double a_ol) const { return yo * a_yo + ol * a_ol; }
};

struct CohortLabor {
    double phi_y = 0.6, phi_r = 0.2, psi_y = 0.6, psi_r = 0.2;
    double rho_f = 0.93, rho_s = 0.94;
};

struct CohortParams {
    WeightPair share_u, share_f, share_s, share_k, share_ji;
    double kappa_yo = 0.10;
    double kappa_ol = 0.10;
    CohortLabor labor_yo, labor_ol;
    void validate() const;
};

double aggregate_cohort_slack(const CohortParams& c);

struct LaborRates {
    double u, f, s;
};

LaborRates aggregate_cohort_rates(const CohortParams& c, double u_yo, double u_ol, double f_yo,
                                  double f_ol, double s_yo, double s_ol);

// Parameters for one cohort: aggregate slack plus that cohort's labor loadings.
StructuralParams cohort_params(const StructuralParams& base, const CohortParams& c, bool young);

}  // namespace nkji
