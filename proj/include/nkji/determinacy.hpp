#pragma once
#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

#include "model.hpp"

namespace nkji {

enum class Determinacy { Determinate, Indeterminate, Explosive };
const char* determinacy_name(Determinacy d);

struct DeterminacyReport {
    std::array<std::complex<double>, 2> eigenvalues;
    int n_explosive = 0;
    int n_forward = 2;
    Determinacy status = Determinacy::Determinate;
};

// Real roots of x^2 - tr x + det, empty when the pair is complex.
std::array<std::complex<double>, 2> quadratic_roots(double trace, double det);

DeterminacyReport blanchard_kahn(const StructuralSystem& sys);

// det(A - rho I), the characteristic polynomial of the companion matrix.
double compatibility_value(const StructuralParams& p, double rho_z);
// The alternative closed form (1 + a_y/s - rho)(1 - beta rho) - k (a_pi - rho)/s.
double compatibility_value_alt(const StructuralParams& p, double rho_z);

struct SunspotReport {
    std::vector<double> roots;
    std::vector<Eigen::Vector2d> loading_direction;  // (b1, b2): yhat and pihat loadings on Z
    bool exists = false;
};

SunspotReport find_sunspot(const StructuralParams& p);

std::vector<std::complex<double>> belief_augmented_spectrum(const StructuralSystem& sys,
                                                            double rho_z,
                                                            const Eigen::Vector2d& loading);

// Generalized boundary k(a_pi - 1) + (1 - beta) a_y = 0 solved for a_pi.
double determinacy_boundary_alpha_pi(const StructuralParams& p);

}  // namespace nkji
