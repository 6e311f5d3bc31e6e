#include "nkji/determinacy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "nkji/errors.hpp"

namespace nkji {

const char* determinacy_name(Determinacy d) {
    switch (d) {
        case Determinacy::Determinate: return "Determinate";
        case Determinacy::Indeterminate: return "Indeterminate";
        case Determinacy::Explosive: return "Explosive";
    }
    return "?";
}

std::array<std::complex<double>, 2> quadratic_roots(double tr, double det) {
    const double disc = tr * tr - 4 * det;
    if (disc < 0) {
        const double re = tr / 2, im = std::sqrt(-disc) / 2;
        return {std::complex<double>(re, im), std::complex<double>(re, -im)};
    }
    // Cancellation-free form: the larger root first, the smaller from the product.
    const double sq = std::sqrt(disc);
    const double big = tr >= 0 ? (tr + sq) / 2 : (tr - sq) / 2;
    const double small = big != 0 ? det / big : 0.0;
    double r1 = big, r2 = small;
    if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
    return {std::complex<double>(r1, 0), std::complex<double>(r2, 0)};
}

DeterminacyReport blanchard_kahn(const StructuralSystem& sys) {
    DeterminacyReport r;
    r.eigenvalues = quadratic_roots(sys.trace(), sys.det());
    for (const auto& e : r.eigenvalues)
        if (std::abs(e) > 1) ++r.n_explosive;
    if (r.n_explosive == r.n_forward)
        r.status = Determinacy::Determinate;
    else if (r.n_explosive < r.n_forward)
        r.status = Determinacy::Indeterminate;
    else
        r.status = Determinacy::Explosive;
    return r;
}

double compatibility_value(const StructuralParams& p, double rho) {
    const StructuralSystem sys = build_system(p);
    return rho * rho - sys.trace() * rho + sys.det();
}

double compatibility_value_alt(const StructuralParams& p, double rho) {
    return (1 + p.alpha_y / p.sigma - rho) * (1 - p.beta * rho) -
           p.kappa * (p.alpha_pi / p.sigma - rho / p.sigma);
}

namespace {

Eigen::Vector2d null_direction(const Eigen::Matrix2d& A, double rho) {
    Eigen::Matrix2d M = A - rho * Eigen::Matrix2d::Identity();
    // Null vector of a rank-one 2x2 matrix: orthogonal to its dominant row.
    Eigen::Vector2d row = M.row(0).norm() >= M.row(1).norm() ? Eigen::Vector2d(M.row(0))
                                                             : Eigen::Vector2d(M.row(1));
    Eigen::Vector2d v(-row(1), row(0));  // (pihat, yhat) ordering
    if (v.norm() == 0) v = Eigen::Vector2d(1, 0);
    v.normalize();
    Eigen::Vector2d b(v(1), v(0));  // b1 on yhat, b2 on pihat
    if (b(1) < 0 || (b(1) == 0 && b(0) < 0)) b = -b;
    return b;
}

}  // namespace

SunspotReport find_sunspot(const StructuralParams& p) {
    const StructuralSystem sys = build_system(p);
    const double tr = sys.trace(), det = sys.det();
    auto C = [&](double x) { return x * x - tr * x + det; };

    std::vector<double> roots;
    const double lo = -1.0, hi = 1.0, step = 1e-3;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    double x0 = lo + 1e-12, c0 = C(x0);
    for (int i = 1; i <= n; ++i) {
        double x1 = i == n ? hi - 1e-12 : lo + i * step;
        double c1 = C(x1);
        if (c0 == 0) {
            roots.push_back(x0);
        } else if (c0 * c1 < 0) {
            double a = x0, b = x1, ca = c0;
            while (b - a > 1e-10) {
                double m = 0.5 * (a + b), cm = C(m);
                if (cm == 0) { a = b = m; break; }
                if (ca * cm < 0) b = m; else { a = m; ca = cm; }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        c0 = c1;
    }

    // Closed-form cross-check catches tangential roots that the sign scan cannot see,
    // and polishes bisection output to machine precision.
    auto cf = quadratic_roots(tr, det);
    std::vector<double> closed;
    for (const auto& z : cf)
        if (z.imag() == 0 && z.real() > -1 && z.real() < 1) closed.push_back(z.real());
    std::sort(closed.begin(), closed.end());
    closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
    for (double r : roots) {
        bool near = false;
        for (double c : closed)
            if (std::abs(r - c) < 1e-8) near = true;
        if (!near) throw NumericalError("sunspot scan found a root the closed form does not confirm");
    }
    for (double c : closed) {
        bool seen = false;
        for (double r : roots)
            if (std::abs(r - c) < 1e-8) seen = true;
        if (!seen) roots.push_back(c);
    }
    std::sort(roots.begin(), roots.end());

    SunspotReport rep;
    rep.roots = roots;
    for (double r : rep.roots) rep.loading_direction.push_back(null_direction(sys.companion, r));
    rep.exists = !rep.roots.empty();
    return rep;
}

std::vector<std::complex<double>> belief_augmented_spectrum(const StructuralSystem& sys,
                                                            double rho_z,
                                                            const Eigen::Vector2d& loading) {
    require(std::abs(rho_z) < 1, "sunspot persistence must satisfy |rho_z| < 1");
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    M.topLeftCorner<2, 2>() = sys.companion;
    M(0, 2) = loading(1);  // pihat row
    M(1, 2) = loading(0);  // yhat row
    M(2, 2) = rho_z;
    Eigen::EigenSolver<Eigen::Matrix3d> es(M, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < 3; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

double determinacy_boundary_alpha_pi(const StructuralParams& p) {
    return 1.0 - (1.0 - p.beta) * p.alpha_y / p.kappa;
}

}  // namespace nkji
