#pragma once
#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "model.hpp"

namespace nkji {

struct TMapFixedPoint {
    Eigen::Matrix2d k1_star;
    Eigen::Matrix<double, 2, 5> k2_star;
};

TMapFixedPoint t_map_fixed_point(const StructuralSystem& sys);

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<double> deviation;  // Frobenius norm of (K1 - K1*, K2 - K2*)
    Eigen::Matrix2d k1_final;
    Eigen::Matrix<double, 2, 5> k2_final;
};

// Integrates dK/dt = T(K) - K with classical RK4.
OdeTrajectory ode_convergence_check(const Eigen::Matrix2d& start_k1,
                                    const Eigen::Matrix<double, 2, 5>& start_k2,
                                    const StructuralSystem& sys, double t_end, double step = 0.01);

struct EStabilityReport {
    std::vector<std::complex<double>> jacobian_eigs;  // spectrum of F_s^T kron A1
    bool e_stable = false;
    std::vector<double> shifter_persistences;
    double max_real_part = 0.0;
    double max_modulus = 0.0;
};

// persistences: diagonal of F_s in the order (eps, eps_i, 0, q, eps_b, 0, g, z).
EStabilityReport sunspot_e_stability(const StructuralSystem& sys,
                                     const std::vector<double>& persistences);

}  // namespace nkji
