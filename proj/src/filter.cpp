#include "nkji/filter.hpp"

#include <cmath>

#include "nkji/errors.hpp"

namespace nkji {

void SignalModel::validate() const {
    require(std::abs(rho_q) < 1 && std::abs(rho_b) < 1, "signal model: persistences must satisfy |rho| < 1");
    require(var_lambda >= 0 && var_xi >= 0 && var_v >= 0, "signal model: variances must be >= 0");
}

SignalModel SignalModel::from_shocks(const ShockSpecSet& s) {
    return {s.rho(Shock::q), s.rho(Shock::eps_b), s[Shock::q].variance, s[Shock::eps_b].variance,
            s.var_v, Identification::DistinctPersistence};
}

Eigen::Matrix2d SignalModel::transition() const {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    A(0, 0) = rho_q;
    A(1, 1) = rho_b;
    return A;
}

Eigen::Matrix2d SignalModel::state_noise() const {
    Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
    Q(0, 0) = var_lambda;
    Q(1, 1) = var_xi;
    return Q;
}

Eigen::Matrix2d SignalModel::stationary_cov() const {
    Eigen::Matrix2d P = Eigen::Matrix2d::Zero();
    P(0, 0) = var_lambda / (1 - rho_q * rho_q);
    P(1, 1) = var_xi / (1 - rho_b * rho_b);
    return P;
}

Observability observability(const SignalModel& m) {
    Observability o;
    o.matrix << 1.0, 1.0, m.rho_q, m.rho_b;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(o.matrix);
    o.rank = 0;
    for (int i = 0; i < 2; ++i)
        if (svd.singularValues()(i) > 1e-12) ++o.rank;
    return o;
}

namespace {

const Eigen::RowVector2d kC(1.0, 1.0);

// Posterior from a predictive covariance, general observation matrix.
Eigen::MatrixXd posterior(const Eigen::MatrixXd& P, const Eigen::MatrixXd& H, const Eigen::MatrixXd& R,
                          Eigen::MatrixXd* K_out) {
    Eigen::MatrixXd S = H * P * H.transpose() + R;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(P.rows(), H.rows());
    // Observations with zero predictive variance carry no usable update.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    bool ok = ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.vectorD().minCoeff() > 0;
    if (ok) K = ldlt.solve(H * P).transpose();
    if (K_out) *K_out = K;
    return P - K * H * P;
}

struct GeneralGain {
    Eigen::MatrixXd prior, post, K, S;
    bool converged = false;
    int iterations = 0;
    double residual = 0;
};

GeneralGain general_steady(const SignalModel& m, const Eigen::MatrixXd& H, const Eigen::MatrixXd& R) {
    const Eigen::MatrixXd A = m.transition(), Q = m.state_noise();
    Eigen::MatrixXd P = m.stationary_cov();
    GeneralGain g;
    for (int n = 1; n <= 10000; ++n) {
        Eigen::MatrixXd next = A * posterior(P, H, R, nullptr) * A.transpose() + Q;
        next = 0.5 * (next + next.transpose());
        double diff = (next - P).norm();
        P = next;
        g.iterations = n;
        if (diff < 1e-12) {
            g.converged = true;
            break;
        }
    }
    g.prior = P;
    g.post = posterior(P, H, R, &g.K);
    g.S = H * P * H.transpose() + R;
    g.residual = (P - (A * posterior(P, H, R, nullptr) * A.transpose() + Q)).norm();
    return g;
}

void check_rank(const SignalModel& m) {
    if (m.restriction == Identification::DistinctPersistence && observability(m).rank < 2)
        throw ValidationError("unobservable signal pair: rho_q equals rho_b");
}

FilteredPath kalman(const SignalModel& m, const Eigen::MatrixXd& Y, const Eigen::MatrixXd& H,
                    const Eigen::MatrixXd& R, const GeneralGain& steady, std::size_t burn_in) {
    const std::size_t n = static_cast<std::size_t>(Y.rows());
    FilteredPath out;
    out.q_hat.resize(n);
    out.eb_hat.resize(n);
    out.innovations.resize(n);
    out.innovation_var.resize(n);
    const Eigen::MatrixXd A = m.transition(), Q = m.state_noise();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd P = m.stationary_cov();
    for (std::size_t t = 0; t < n; ++t) {
        Eigen::VectorXd xp = t == 0 ? x : Eigen::VectorXd(A * x);
        Eigen::VectorXd gam = Y.row(static_cast<Eigen::Index>(t)).transpose() - H * xp;
        Eigen::MatrixXd K;
        double s0;
        if (t < burn_in) {
            Eigen::MatrixXd Pp = t == 0 ? P : Eigen::MatrixXd(A * P * A.transpose() + Q);
            P = posterior(Pp, H, R, &K);
            s0 = (H * Pp * H.transpose() + R)(0, 0);
        } else {
            K = steady.K;
            s0 = steady.S(0, 0);
        }
        x = xp + K * gam;
        out.q_hat[t] = x(0);
        out.eb_hat[t] = x(1);
        out.innovations[t] = gam(0);
        out.innovation_var[t] = s0;
    }
    return out;
}

}  // namespace

Eigen::Matrix2d riccati_step(const SignalModel& m, const Eigen::Matrix2d& P) {
    Eigen::MatrixXd R(1, 1);
    R(0, 0) = m.var_v;
    return m.transition() * posterior(P, kC, R, nullptr) * m.transition().transpose() + m.state_noise();
}

FilterGain steady_state_gain(const SignalModel& m) {
    m.validate();
    check_rank(m);
    Eigen::MatrixXd R(1, 1);
    R(0, 0) = m.var_v;
    GeneralGain g = general_steady(m, kC, R);
    FilterGain out;
    out.steady_prior = g.prior;
    out.steady_P = g.post;
    out.steady_K = g.K.col(0);
    out.innovation_var = g.S(0, 0);
    out.converged = g.converged;
    out.iterations = g.iterations;
    out.residual = g.residual;
    return out;
}

FilteredPath run_filter(const SignalModel& m, const FilterGain& gain, const std::vector<double>& signal,
                        std::size_t burn_in) {
    m.validate();
    require(!signal.empty(), "empty signal series");
    if (!gain.converged) throw NumericalError("steady-state Riccati iteration did not converge");
    const std::size_t n = signal.size();
    FilteredPath out;
    out.q_hat.resize(n);
    out.eb_hat.resize(n);
    out.innovations.resize(n);
    out.innovation_var.resize(n);
    const Eigen::Matrix2d A = m.transition(), Q = m.state_noise();
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Eigen::Matrix2d P = m.stationary_cov();
    for (std::size_t t = 0; t < n; ++t) {
        const Eigen::Vector2d xp = A * x;
        const double gam = signal[t] - (xp(0) + xp(1));
        Eigen::Vector2d K;
        double S;
        if (t < burn_in) {
            const Eigen::Matrix2d Pp = t == 0 ? P : Eigen::Matrix2d(A * P * A.transpose() + Q);
            const Eigen::Vector2d PC = Pp * kC.transpose();
            S = PC(0) + PC(1) + m.var_v;
            K = S > 0 ? Eigen::Vector2d(PC / S) : Eigen::Vector2d::Zero();
            P = Pp - K * PC.transpose();
        } else {
            K = gain.steady_K;
            S = gain.innovation_var;
        }
        x = xp + K * gam;
        out.q_hat[t] = x(0);
        out.eb_hat[t] = x(1);
        out.innovations[t] = gam;
        out.innovation_var[t] = S;
    }
    return out;
}

FilteredPath run_filter(const SignalModel& m, const std::vector<double>& signal, std::size_t burn_in) {
    return run_filter(m, steady_state_gain(m), signal, burn_in);
}

FilteredPath run_filter_augmented(const SignalModel& m, const std::vector<double>& signal,
                                  const Eigen::MatrixXd& extra, const Eigen::MatrixXd& loadings,
                                  const Eigen::VectorXd& noise_var, std::size_t burn_in) {
    m.validate();
    check_rank(m);
    require(!signal.empty(), "empty signal series");
    const Eigen::Index p = extra.cols();
    require(extra.rows() == static_cast<Eigen::Index>(signal.size()), "extra observables length mismatch");
    require(loadings.rows() == p && loadings.cols() == 2, "extra loadings must be p x 2");
    require(noise_var.size() == p, "extra noise variances must have p entries");
    Eigen::MatrixXd H(1 + p, 2);
    H.row(0) = kC;
    H.bottomRows(p) = loadings;
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(1 + p, 1 + p);
    R(0, 0) = m.var_v;
    for (Eigen::Index i = 0; i < p; ++i) R(1 + i, 1 + i) = noise_var(i);
    Eigen::MatrixXd Y(extra.rows(), 1 + p);
    for (std::size_t t = 0; t < signal.size(); ++t) Y(static_cast<Eigen::Index>(t), 0) = signal[t];
    Y.rightCols(p) = extra;
    GeneralGain g = general_steady(m, H, R);
    if (!g.converged) throw NumericalError("steady-state Riccati iteration did not converge");
    return kalman(m, Y, H, R, g, burn_in);
}

}  // namespace nkji
