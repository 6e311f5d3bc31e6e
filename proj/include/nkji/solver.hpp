#pragma once
#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "filter.hpp"
#include "model.hpp"
#include "shocks.hpp"

namespace nkji {

enum class Var : int { y = 0, yhat, pihat, ihat, fhat, shat, d_diff };
constexpr int kNumVars = 7;

enum class Driver : int {
    constant = 0,
    eps_pi_lag,
    varsigma,
    eps_i_lag,
    w,
    q_lag,
    lambda,
    eps_b_lag,
    xi,
    g_lag,
    vartheta,
    eps_yhat_lag,
    eta,
    ybar_lag,
    omega,
    labor,  // eps_f for fhat, eps_s for shat
    own_lag
};
constexpr int kNumDrivers = 17;

const char* var_name(Var v);
const char* driver_name(Driver d);

// The seven autoregressive shocks entering the closed form, in table order.
constexpr std::array<Shock, 7> kTableShocks = {Shock::eps_pi, Shock::eps_i, Shock::q,    Shock::eps_b,
                                               Shock::g,      Shock::eps_yhat, Shock::ybar};
Driver lag_driver(Shock s);
Driver innovation_driver(Shock s);

struct ReducedForm {
    StructuralParams params;
    ShockSpecSet shocks;
    std::array<std::array<double, kNumDrivers>, kNumVars> table{};
    // Base loading b_x of each table shock in the separation expectation, so that the
    // h-step expectation carries b_x rho_x^h on the lag and b_x rho_x^(h-1) on the innovation.
    std::array<double, kNumShocks> sep_base{};

    double coef(Var v, Driver d) const { return table[static_cast<int>(v)][static_cast<int>(d)]; }
    double& coef(Var v, Driver d) { return table[static_cast<int>(v)][static_cast<int>(d)]; }
};

ReducedForm fi_reduced_form(const StructuralParams& p, const ShockSpecSet& s);

// Time-t information for the separation expectation: lagged shat, the current separation
// shock, and the lagged level and current innovation of each table shock.
struct FiState {
    double shat_lag = 0.0;
    double eps_s = 0.0;
    std::array<double, kNumShocks> lag{};
    std::array<double, kNumShocks> innov{};
};

double fi_expected_separation(const ReducedForm& rf, const FiState& x, int h,
                              bool include_constant = true);
std::vector<double> fi_expected_separation_path(const ReducedForm& rf, const FiState& x, int H,
                                                bool include_constant = true);

// State layout of the AI (and, equivalently, FI) expectation system.
constexpr int kAiDim = 9;
constexpr std::array<const char*, kAiDim> kAiLayout = {"const", "m",   "eps_pi", "eps_i", "q",
                                                       "eps_b", "g", "eps_yhat", "ybar"};

struct StateSpaceSolution {
    Eigen::Matrix<double, kAiDim, kAiDim> A;
    Eigen::Matrix<double, kAiDim, 1> c;
    FilterGain gain;
    SignalModel signal;
    // Maps a unit innovation of each shock into x. Column kNumShocks holds the filter innovation.
    Eigen::Matrix<double, kAiDim, kNumShocks + 1> B;
};

// x = (1, m, eps_pi, eps_i, q, eps_b, g, eps_yhat, ybar) with m = rho_s shat_{t-1} + eps_s.
// E_t shat_{t+h} = c' A^(h-1) x for h >= 1; c' x is the fitted shat under the closed form.
StateSpaceSolution ai_solve(const StructuralParams& p, const ShockSpecSet& s, const FilterGain& gain);
StateSpaceSolution fi_state_space(const StructuralParams& p, const ShockSpecSet& s);

double expected_separation(const StateSpaceSolution& sol, const Eigen::Matrix<double, kAiDim, 1>& x,
                           int h);
std::vector<double> expected_separation_path(const StateSpaceSolution& sol,
                                             const Eigen::Matrix<double, kAiDim, 1>& x, int H);

enum class Regime { FI, AI };
const char* regime_name(Regime r);
Regime regime_from_name(const std::string& s);

// Expectation system of a regime; AI computes the steady-state filter gain first.
StateSpaceSolution solve_regime(const StructuralParams& p, const ShockSpecSet& s, Regime r);

struct Impulse {
    Shock shock = Shock::eps_i;
    double size = 1.0;
    std::size_t t = 0;
};

struct SimOptions {
    std::size_t burn_in = 100;
    std::vector<Impulse> impulses;
};

struct PathSet {
    Regime regime = Regime::FI;
    std::size_t horizon = 0;
    std::vector<double> y, yhat, ybar, pihat, ihat, rhat, rbar, epi_next, u, f, s, pf, ps, fhat,
        shat, dhat, d_diff, ghat, tax, absorption, a, v, q_hat, eb_hat, innovation;
    std::array<std::vector<double>, kNumShocks> shock, shock_innov, logvol;
    // Values one period before the first reported observation.
    double shat_init = 0, q_hat_init = 0, eb_hat_init = 0;
    std::array<double, kNumShocks> shock_init{};
    std::size_t floor_events = 0;

    std::vector<std::pair<std::string, const std::vector<double>*>> columns() const;
    // Time-t expectation state in the regime's information set.
    FiState fi_state(std::size_t t) const;
    Eigen::Matrix<double, kAiDim, 1> ai_state(std::size_t t, const ShockSpecSet& s) const;
};

PathSet simulate_paths(const StructuralParams& p, const ShockSpecSet& s, Regime regime,
                       std::size_t horizon, uint64_t seed, const SimOptions& opt = {});
// Same, reusing pre-drawn standard normals (length must cover burn-in + horizon).
PathSet simulate_paths(const StructuralParams& p, const ShockSpecSet& s, Regime regime,
                       std::size_t horizon, const StandardDraws& draws, const SimOptions& opt = {});

std::string pathset_csv(const PathSet& ps);

}  // namespace nkji
