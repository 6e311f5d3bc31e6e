#include "nkji/learning.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <unsupported/Eigen/KroneckerProduct>

#include "nkji/errors.hpp"

namespace nkji {

TMapFixedPoint t_map_fixed_point(const StructuralSystem& sys) {
    if (std::abs(sys.phi0.determinant()) < 1e-14) throw ValidationError("singular Phi0");
    Eigen::PartialPivLU<Eigen::Matrix2d> lu(sys.phi0);
    return {lu.solve(sys.phi1), lu.solve(sys.phi2)};
}

namespace {
using K2 = Eigen::Matrix<double, 2, 5>;

double dev_norm(const Eigen::Matrix2d& a, const K2& b, const TMapFixedPoint& fp) {
    return std::sqrt((a - fp.k1_star).squaredNorm() + (b - fp.k2_star).squaredNorm());
}
}  // namespace

OdeTrajectory ode_convergence_check(const Eigen::Matrix2d& start_k1, const K2& start_k2,
                                    const StructuralSystem& sys, double t_end, double step) {
    require(t_end > 0, "t_end must be positive");
    require(step > 0, "step must be positive");
    const TMapFixedPoint fp = t_map_fixed_point(sys);
    // Under the minimal-state PLM the T-map returns the RE coefficients for any belief,
    // so the right-hand side is T(K) - K = K* - K.
    auto f1 = [&](const Eigen::Matrix2d& k) -> Eigen::Matrix2d { return fp.k1_star - k; };
    auto f2 = [&](const K2& k) -> K2 { return fp.k2_star - k; };

    OdeTrajectory tr;
    Eigen::Matrix2d a = start_k1;
    K2 b = start_k2;
    double t = 0;
    tr.t.push_back(0);
    tr.deviation.push_back(dev_norm(a, b, fp));
    const long n = std::lround(std::ceil(t_end / step - 1e-9));
    for (long i = 0; i < n; ++i) {
        const double h = std::min(step, t_end - t);
        Eigen::Matrix2d a1 = f1(a), a2 = f1(a + 0.5 * h * a1), a3 = f1(a + 0.5 * h * a2),
                        a4 = f1(a + h * a3);
        K2 b1 = f2(b), b2 = f2(b + 0.5 * h * b1), b3 = f2(b + 0.5 * h * b2), b4 = f2(b + h * b3);
        a += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
        b += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
        t += h;
        tr.t.push_back(t);
        tr.deviation.push_back(dev_norm(a, b, fp));
    }
    tr.k1_final = a;
    tr.k2_final = b;
    return tr;
}

EStabilityReport sunspot_e_stability(const StructuralSystem& sys,
                                     const std::vector<double>& persistences) {
    require(persistences.size() == 8, "sunspot E-stability needs 8 shifter persistences");
    for (double r : persistences) require(std::abs(r) < 1, "shifter persistences must satisfy |rho| < 1");
    const TMapFixedPoint fp = t_map_fixed_point(sys);
    Eigen::MatrixXd Fs = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) Fs(i, i) = persistences[i];
    Eigen::MatrixXd A1 = fp.k1_star;
    Eigen::MatrixXd Kr = Eigen::kroneckerProduct(Fs.transpose(), A1);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Kr, false);

    EStabilityReport rep;
    rep.shifter_persistences = persistences;
    rep.max_real_part = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        rep.jacobian_eigs.push_back(es.eigenvalues()(i));
        rep.max_real_part = std::max(rep.max_real_part, es.eigenvalues()(i).real());
        rep.max_modulus = std::max(rep.max_modulus, std::abs(es.eigenvalues()(i)));
    }
    rep.e_stable = rep.max_real_part < 1;
    return rep;
}

}  // namespace nkji
