#include "nkji/insecurity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "nkji/errors.hpp"

namespace nkji {

double lambda_riemann(const std::vector<double>& es, double delta) {
    require(!es.empty(), "expected separation series is empty");
    double acc = 0;
    for (double v : es) acc += v;
    return delta * acc;
}

double ji_mean_only(double lambda) { return 1.0 - std::exp(-lambda); }

double ji_second_order(double mu, double sigma2) {
    require(sigma2 >= 0, "sigma2 must be >= 0");
    return 1.0 - std::exp(-mu + sigma2 / 2);
}

double cumulated_variance(const Eigen::MatrixXd& D, const std::vector<Eigen::MatrixXd>& covs, double delta) {
    Eigen::Index n = 0;
    for (const auto& c : covs) {
        require(c.rows() == c.cols(), "shock covariance blocks must be square");
        n += c.rows();
    }
    require(D.cols() == n, "weight matrix columns do not match stacked covariance size");
    // i' D is the column-sum row vector; the quadratic form never needs the full Sigma.
    Eigen::RowVectorXd w = D.colwise().sum();
    double acc = 0;
    Eigen::Index off = 0;
    for (const auto& c : covs) {
        const Eigen::Index m = c.rows();
        require((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1 + c.cwiseAbs().maxCoeff()),
                "shock covariance block is not symmetric");
        if (m > 0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
            require(es.eigenvalues().minCoeff() >= -1e-12 * (1 + c.cwiseAbs().maxCoeff()),
                    "shock covariance block is not positive semidefinite");
            Eigen::RowVectorXd seg = w.segment(off, m);
            acc += (seg * c * seg.transpose())(0, 0);
        }
        off += m;
    }
    return delta * delta * std::max(acc, 0.0);
}

Eigen::MatrixXd separation_responses(const StateSpaceSolution& sol, const ReducedForm& rf, Regime regime, int H) {
    require(H >= 1, "horizon must be >= 1");
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(H, kInnovCols);
    const double rs = rf.shocks.rho(Shock::eps_s);
    auto table_irf = [&](Shock k) {
        Eigen::VectorXd v(H);
        const double rho = rf.shocks.rho(k);
        const double lag = rf.coef(Var::shat, lag_driver(k));
        v(0) = rf.coef(Var::shat, innovation_driver(k));
        double pw = 1.0;
        for (int n = 1; n < H; ++n) {
            v(n) = rs * v(n - 1) + lag * pw;
            pw *= rho;
        }
        return v;
    };
    for (Shock k : kTableShocks) r.col(idx(k)) = table_irf(k);
    double pw = 1.0;
    for (int n = 0; n < H; ++n, pw *= rs) r(n, idx(Shock::eps_s)) = pw;
    if (regime == Regime::AI) {
        r.col(kGammaCol) = sol.gain.steady_K(0) * r.col(idx(Shock::q)) + sol.gain.steady_K(1) * r.col(idx(Shock::eps_b));
        r.col(idx(Shock::q)).setZero();
        r.col(idx(Shock::eps_b)).setZero();
    }
    return r;
}

Eigen::MatrixXd dynamic_weights(const Eigen::MatrixXd& resp) {
    const Eigen::Index H = resp.rows(), m = resp.cols();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(H, H * m);
    for (Eigen::Index h = 0; h < H; ++h)
        for (Eigen::Index k = 0; k <= h; ++k) D.block(h, k * m, 1, m) = resp.row(h - k);
    return D;
}

namespace {
double sv_expected_variance(const SvSpec& sv, std::optional<double> h_now, int k) {
    const double chi = sv.chi, s2 = sv.sigma_h * sv.sigma_h;
    if (!h_now) return std::exp(sv.mu + 0.5 * s2 / (1 - chi * chi));
    const double ck = std::pow(chi, k);
    const double acc = chi == 0 ? s2 : s2 * (1 - ck * ck) / (1 - chi * chi);
    return std::exp(sv.mu + ck * (*h_now - sv.mu) + 0.5 * acc);
}
}  // namespace

std::vector<Eigen::MatrixXd> future_shock_covs(const ShockSpecSet& s, const StateSpaceSolution& sol, Regime regime,
                                               int H, const VolState* vol) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(H);
    for (int k = 1; k <= H; ++k) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kInnovCols, kInnovCols);
        for (Shock sh : kAllShocks) {
            const int j = idx(sh);
            if (const auto& sv = s.sv[j])
                c(j, j) = sv_expected_variance(*sv, vol ? vol->logvol[j] : std::nullopt, k);
            else
                c(j, j) = s[sh].variance;
        }
        if (regime == Regime::AI) {
            c(idx(Shock::q), idx(Shock::q)) = 0;
            c(idx(Shock::eps_b), idx(Shock::eps_b)) = 0;
            c(kGammaCol, kGammaCol) = sol.gain.innovation_var;
        }
        out.push_back(c);
    }
    return out;
}

double separation_variance(const StateSpaceSolution& sol, const ReducedForm& rf, Regime regime, int H, double delta,
                           const VolState* vol) {
    return cumulated_variance(dynamic_weights(separation_responses(sol, rf, regime, H)),
                              future_shock_covs(rf.shocks, sol, regime, H, vol), delta);
}

double cumulated_mean(const StateSpaceSolution& sol, const Eigen::Matrix<double, kAiDim, 1>& x, int H, double delta) {
    return lambda_riemann(expected_separation_path(sol, x, H), delta);
}

double ji_shock_derivative(const StateSpaceSolution& sol, const ReducedForm& rf, Regime regime, int j,
                           const Eigen::Matrix<double, kAiDim, 1>& state, int H, double delta, const VolState* vol,
                           const std::optional<SvShockNow>& now) {
    require(j >= 0 && j < kInnovCols, "shock index out of range");
    require(H >= 1, "horizon must be >= 1");
    // Mean effect: delta c' (sum_{h<H} A^h) B e_j, with A diagonal.
    double mean_effect = 0;
    for (int i = 0; i < kAiDim; ++i) {
        const double a = sol.A(i, i);
        double geo = 0, pw = 1;
        for (int h = 0; h < H; ++h, pw *= a) geo += pw;
        mean_effect += sol.c(i) * geo * sol.B(i, j);
    }
    mean_effect *= delta;

    const double mu = cumulated_mean(sol, state, H, delta);
    const double s2 = separation_variance(sol, rf, regime, H, delta, vol);

    double dvar = 0;
    const bool has_sv = j < kNumShocks && rf.shocks.sv[j].has_value();
    if (has_sv && now && vol && now->standardized != 0) {
        // Holding the standardized draw fixed, the innovation pins down today's log-variance.
        auto var_at = [&](double e) {
            VolState v = *vol;
            v.logvol[j] = 2.0 * std::log(std::abs(e) / std::abs(now->standardized));
            return separation_variance(sol, rf, regime, H, delta, &v);
        };
        const double step = 1e-5;
        dvar = (var_at(now->innovation + step) - var_at(now->innovation - step)) / (2 * step);
    }
    return std::exp(-mu + s2 / 2) * (mean_effect - 0.5 * dvar);
}

double sunspot_geometric_factor(double rho, int H) {
    if (rho == 1.0) throw ValidationError("sunspot persistence of 1 leaves the geometric factor undefined");
    require(std::abs(rho) < 1, "sunspot persistence must satisfy |rho| < 1");
    require(H >= 1, "horizon must be >= 1");
    return rho * (1 - std::pow(rho, H)) / (1 - rho);
}

SunspotDecomposition sunspot_decomposition(double mu_f, const SunspotComponent& c, int H, double delta,
                                           double sigma2_f) {
    require(c.var_z >= 0, "sunspot variance must be >= 0");
    require(sigma2_f >= 0, "fundamental variance must be >= 0");
    const double G = sunspot_geometric_factor(c.rho_zs, H);
    SunspotDecomposition d;
    d.mu_total = mu_f + delta * c.loading * G * c.z_now;
    d.sigma2 = sigma2_f + delta * delta * c.loading * c.loading * G * G * c.var_z;
    d.derivative = delta * c.loading * G * std::exp(-d.mu_total + d.sigma2 / 2);
    return d;
}

DiscretizationBound discretization_bound(int H, double delta, double sup) {
    require(H >= 0 && delta >= 0 && sup >= 0, "bound inputs must be non-negative");
    return {H * delta / 2 * sup, H * delta * delta / 2 * sup};
}

JiOrder ji_order_from_name(const std::string& s) {
    if (s == "mean") return JiOrder::Mean;
    if (s == "second") return JiOrder::Second;
    throw ValidationError("invalid order '" + s + "' (expected mean or second)");
}

InsecuritySeries ji_series(const PathSet& ps, const StateSpaceSolution& sol, const ReducedForm& rf, int H,
                           double delta, JiOrder order, bool include_constant) {
    require(H >= 1, "insufficient horizon: H must be >= 1");
    require(delta > 0, "delta must be positive");
    InsecuritySeries out;
    bool any_sv = false;
    for (const auto& sv : rf.shocks.sv) any_sv = any_sv || sv.has_value();
    double s2_const = 0;
    if (order == JiOrder::Second && !any_sv) s2_const = separation_variance(sol, rf, ps.regime, H, delta);
    for (std::size_t t = 0; t < ps.horizon; ++t) {
        Eigen::Matrix<double, kAiDim, 1> x = ps.ai_state(t, rf.shocks);
        if (!include_constant) x(0) = 0;
        const double lam = cumulated_mean(sol, x, H, delta);
        double s2 = 0;
        if (order == JiOrder::Second) {
            if (any_sv) {
                VolState v;
                for (int j = 0; j < kNumShocks; ++j)
                    if (!ps.logvol[j].empty()) v.logvol[j] = ps.logvol[j][t];
                s2 = separation_variance(sol, rf, ps.regime, H, delta, &v);
            } else {
                s2 = s2_const;
            }
        }
        out.lambda.push_back(lam);
        out.mu.push_back(lam);
        out.sigma2.push_back(s2);
        out.ji.push_back(order == JiOrder::Mean ? ji_mean_only(lam) : ji_second_order(lam, s2));
    }
    return out;
}

InsecuritySeries ji_cohort(const InsecuritySeries& yo, const InsecuritySeries& ol, const WeightPair& w) {
    w.validate("JI");
    require(yo.ji.size() == ol.ji.size(), "cohort series differ in length");
    InsecuritySeries out;
    for (std::size_t t = 0; t < yo.ji.size(); ++t) {
        out.lambda.push_back(w.mix(yo.lambda[t], ol.lambda[t]));
        out.mu.push_back(w.mix(yo.mu[t], ol.mu[t]));
        out.sigma2.push_back(w.mix(yo.sigma2[t], ol.sigma2[t]));
        out.ji.push_back(w.mix(yo.ji[t], ol.ji[t]));
    }
    return out;
}

std::string insecurity_csv(const InsecuritySeries& s) {
    std::ostringstream os;
    os.precision(17);
    os << "t,lambda,mu,sigma2,ji\n";
    for (std::size_t t = 0; t < s.ji.size(); ++t)
        os << t << ',' << s.lambda[t] << ',' << s.mu[t] << ',' << s.sigma2[t] << ',' << s.ji[t] << '\n';
    return os.str();
}

}  // namespace nkji
