#include "nkji/model.hpp"

#include <cmath>

#include "nkji/errors.hpp"
#include "nkji/json_util.hpp"

namespace nkji {

void StructuralParams::validate() const {
    require(beta > 0 && beta < 1, "beta must lie in (0,1)");
    require(kappa > 0, "kappa must be positive");
    require(sigma > 0, "sigma must be positive");
    require(alpha_y >= 0, "alpha_y must be non-negative");
    require(std::isfinite(alpha_pi), "alpha_pi must be finite");
    require(std::abs(sigma + alpha_y - alpha_pi * kappa) > 1e-12,
            "singular Phi0: sigma + alpha_y - alpha_pi*kappa = 0");
    require(f_bar >= 0 && s_bar >= 0, "steady-state intensities must be non-negative");
    require(d_bar >= 0, "d_bar must be non-negative");
    if (u0) require(*u0 >= 0 && *u0 <= 1, "u0 must lie in [0,1]");
}

double steady_state_unemployment(const StructuralParams& p) {
    double pf = 1 - std::exp(-p.f_bar);
    double ps = 1 - std::exp(-p.s_bar);
    if (pf + ps <= 0) return 0.0;
    return ps / (pf + ps);
}

double initial_unemployment(const StructuralParams& p) {
    return p.u0 ? *p.u0 : steady_state_unemployment(p);
}

StructuralParams params_from_json(const nlohmann::json& j) {
    const std::string w = "structural params";
    check_keys(j,
               {"beta", "kappa", "sigma", "alpha_pi", "alpha_y", "phi_y", "phi_r", "psi_y", "psi_r",
                "delta_a", "delta_G", "pi_bar", "d_bar", "f_bar", "s_bar", "u0"},
               w);
    StructuralParams p;
    read_opt(j, "beta", p.beta, w);
    read_opt(j, "kappa", p.kappa, w);
    read_opt(j, "sigma", p.sigma, w);
    read_opt(j, "alpha_pi", p.alpha_pi, w);
    read_opt(j, "alpha_y", p.alpha_y, w);
    read_opt(j, "phi_y", p.phi_y, w);
    read_opt(j, "phi_r", p.phi_r, w);
    read_opt(j, "psi_y", p.psi_y, w);
    read_opt(j, "psi_r", p.psi_r, w);
    read_opt(j, "delta_a", p.delta_a, w);
    read_opt(j, "delta_G", p.delta_G, w);
    read_opt(j, "pi_bar", p.pi_bar, w);
    read_opt(j, "d_bar", p.d_bar, w);
    read_opt(j, "f_bar", p.f_bar, w);
    read_opt(j, "s_bar", p.s_bar, w);
    if (j.contains("u0")) {
        double u = 0;
        read_opt(j, "u0", u, w);
        p.u0 = u;
    }
    p.validate();
    return p;
}

nlohmann::json params_to_json(const StructuralParams& p) {
    nlohmann::json j = {{"beta", p.beta},       {"kappa", p.kappa},     {"sigma", p.sigma},
                        {"alpha_pi", p.alpha_pi}, {"alpha_y", p.alpha_y}, {"phi_y", p.phi_y},
                        {"phi_r", p.phi_r},     {"psi_y", p.psi_y},     {"psi_r", p.psi_r},
                        {"delta_a", p.delta_a}, {"delta_G", p.delta_G}, {"pi_bar", p.pi_bar},
                        {"d_bar", p.d_bar},     {"f_bar", p.f_bar},     {"s_bar", p.s_bar}};
    if (p.u0) j["u0"] = *p.u0;
    return j;
}

StructuralSystem build_system(const StructuralParams& p) {
    p.validate();
    const double b = p.beta, k = p.kappa, s = p.sigma;
    StructuralSystem sys;
    // NKPC:  beta E pi' = pi - k y - eps_pi
    // IS with the Taylor rule substituted:
    //   E y' + E pi'/s = (a_pi/s) pi + (1 + a_y/s) y + eps_i/s - rbar/s - d_a a - d_G g
    sys.phi0 << b, 0.0, 1.0 / s, 1.0;
    sys.phi1 << 1.0, -k, p.alpha_pi / s, 1.0 + p.alpha_y / s;
    sys.phi2.setZero();
    sys.phi2(0, 0) = -1.0;
    sys.phi2(1, 1) = 1.0 / s;
    sys.phi2(1, 2) = -1.0 / s;
    sys.phi2(1, 3) = -p.delta_a;
    sys.phi2(1, 4) = -p.delta_G;
    sys.companion = sys.phi0.inverse() * sys.phi1;
    return sys;
}

void WeightPair::validate(const char* what) const {
    require(yo >= 0 && yo <= 1 && ol >= 0 && ol <= 1,
            std::string("cohort weights for ") + what + " must lie in [0,1]");
    require(std::abs(yo + ol - 1.0) <= 1e-12,
            std::string("cohort weights for ") + what + " must sum to 1");
}

void CohortParams::validate() const {
    share_u.validate("u");
    share_f.validate("f");
    share_s.validate("s");
    share_k.validate("k");
    share_ji.validate("JI");
}

double aggregate_cohort_slack(const CohortParams& c) {
    c.share_k.validate("k");
    return c.share_k.mix(c.kappa_yo, c.kappa_ol);
}

LaborRates aggregate_cohort_rates(const CohortParams& c, double u_yo, double u_ol, double f_yo,
                                  double f_ol, double s_yo, double s_ol) {
    c.share_u.validate("u");
    c.share_f.validate("f");
    c.share_s.validate("s");
    return {c.share_u.mix(u_yo, u_ol), c.share_f.mix(f_yo, f_ol), c.share_s.mix(s_yo, s_ol)};
}

StructuralParams cohort_params(const StructuralParams& base, const CohortParams& c, bool young) {
    StructuralParams p = base;
    p.kappa = aggregate_cohort_slack(c);
    const CohortLabor& l = young ? c.labor_yo : c.labor_ol;
    p.phi_y = l.phi_y;
    p.phi_r = l.phi_r;
    p.psi_y = l.psi_y;
    p.psi_r = l.psi_r;
    return p;
}

}  // namespace nkji
