#include "nkji/solver.hpp"

#include <cmath>
#include <sstream>

#include "nkji/errors.hpp"

namespace nkji {

namespace {
constexpr std::array<const char*, kNumVars> kVarNames = {"y", "yhat", "pihat", "ihat", "fhat", "shat", "d_diff"};
constexpr std::array<const char*, kNumDrivers> kDriverNames = {
    "const", "eps_pi_lag", "varsigma", "eps_i_lag", "w", "q_lag", "lambda", "eps_b_lag", "xi",
    "g_lag", "vartheta", "eps_yhat_lag", "eta", "ybar_lag", "omega", "labor", "own_lag"};

int vi(Var v) { return static_cast<int>(v); }
int di(Driver d) { return static_cast<int>(d); }
}  // namespace

const char* var_name(Var v) { return kVarNames[vi(v)]; }
const char* driver_name(Driver d) { return kDriverNames[di(d)]; }

Driver lag_driver(Shock s) {
    switch (s) {
        case Shock::eps_pi: return Driver::eps_pi_lag;
        case Shock::eps_i: return Driver::eps_i_lag;
        case Shock::q: return Driver::q_lag;
        case Shock::eps_b: return Driver::eps_b_lag;
        case Shock::g: return Driver::g_lag;
        case Shock::eps_yhat: return Driver::eps_yhat_lag;
        case Shock::ybar: return Driver::ybar_lag;
        default: throw ValidationError(std::string("shock has no lag driver: ") + shock_name(s));
    }
}

Driver innovation_driver(Shock s) {
    switch (s) {
        case Shock::eps_pi: return Driver::varsigma;
        case Shock::eps_i: return Driver::w;
        case Shock::q: return Driver::lambda;
        case Shock::eps_b: return Driver::xi;
        case Shock::g: return Driver::vartheta;
        case Shock::eps_yhat: return Driver::eta;
        case Shock::ybar: return Driver::omega;
        case Shock::eps_f:
        case Shock::eps_s: return Driver::labor;
    }
    return Driver::labor;
}

ReducedForm fi_reduced_form(const StructuralParams& p, const ShockSpecSet& s) {
    p.validate();
    s.validate();
    if (p.alpha_pi <= 1) throw ValidationError("closed-form reduced form requires alpha_pi > 1");
    ReducedForm rf;
    rf.params = p;
    rf.shocks = s;
    const double D = p.denom(), M = p.alpha_pi * p.kappa + p.alpha_y, sg = p.sigma, k = p.kappa;
    const double ap = p.alpha_pi, pib = p.pi_bar;
    const double Gs = p.psi_y + sg * p.psi_r, Ls = p.psi_y - p.psi_r * M;
    const double Gf = p.phi_y + sg * p.phi_r, Lf = p.phi_y - p.phi_r * M;
    const double ry = s.rho(Shock::ybar);

    // Impact loading of each row on a unit innovation of each table shock.
    auto impact = [&](Var v, Shock x) -> double {
        const double sda = sg * p.delta_a, sdg = sg * p.delta_G;
        switch (v) {
            case Var::y:
            case Var::yhat:
                switch (x) {
                    case Shock::eps_pi: return -ap / D;
                    case Shock::eps_i: return -1 / D;
                    case Shock::q:
                    case Shock::eps_b: return sda / D;
                    case Shock::g: return sdg / D;
                    case Shock::eps_yhat: return sg / D;
                    case Shock::ybar: return v == Var::y ? M / D : -sg / D;
                    default: return 0;
                }
            case Var::pihat:
                switch (x) {
                    case Shock::eps_pi: return (p.alpha_y + sg) / D;
                    case Shock::eps_i: return -k / D;
                    case Shock::q:
                    case Shock::eps_b: return sda * k / D;
                    case Shock::g: return sdg * k / D;
                    case Shock::eps_yhat: return sg * k / D;
                    case Shock::ybar: return -sg * k / D;
                    default: return 0;
                }
            case Var::ihat:
            case Var::d_diff: {
                const double sc = v == Var::d_diff ? p.d_bar : 1.0;
                switch (x) {
                    case Shock::eps_pi: return sc * ap * sg / D;
                    case Shock::eps_i: return sc * sg / D;
                    case Shock::q:
                    case Shock::eps_b: return sc * sda * M / D;
                    case Shock::g: return sc * sdg * M / D;
                    case Shock::eps_yhat: return sc * sg * M / D;
                    case Shock::ybar: return -sc * sg * M / D;
                    default: return 0;
                }
            }
            case Var::fhat:
                switch (x) {
                    case Shock::eps_pi: return -ap * Gf / D;
                    case Shock::eps_i: return -Gf / D;
                    case Shock::q:
                    case Shock::eps_b: return sda * Lf / D;
                    case Shock::g: return sdg * Lf / D;
                    case Shock::eps_yhat: return sg * Lf / D;
                    case Shock::ybar: return -sg * Gf / D;
                    default: return 0;
                }
            case Var::shat:
                switch (x) {
                    case Shock::eps_pi: return ap * Gs / D;
                    case Shock::eps_i: return Gs / D;
                    case Shock::q:
                    case Shock::eps_b: return -sda * Ls / D;
                    case Shock::g: return -sdg * Ls / D;
                    case Shock::eps_yhat: return -sg * Ls / D;
                    case Shock::ybar: return sg * Gs / D;
                    default: return 0;
                }
        }
        return 0;
    };

    for (int i = 0; i < kNumVars; ++i) {
        const Var v = static_cast<Var>(i);
        for (Shock x : kTableShocks) {
            rf.coef(v, innovation_driver(x)) = impact(v, x);
            rf.coef(v, lag_driver(x)) = s.rho(x) * impact(v, x);
        }
    }
    // Potential-output persistence in the labor rows carries the real-rate-gap feedback.
    rf.coef(Var::fhat, Driver::ybar_lag) = -sg * ry * (p.phi_y + p.phi_r * sg - p.phi_r * ry * D) / D;
    rf.coef(Var::shat, Driver::ybar_lag) = sg * ry * (p.psi_y + p.psi_r * sg - ry * p.psi_r * D) / D;

    rf.coef(Var::y, Driver::constant) = ap * pib / D;
    rf.coef(Var::yhat, Driver::constant) = ap * pib / D;
    rf.coef(Var::pihat, Driver::constant) = ap * k * pib / D;
    rf.coef(Var::ihat, Driver::constant) = ap * pib * M / D;
    rf.coef(Var::fhat, Driver::constant) = ap * pib * Lf / D;
    rf.coef(Var::shat, Driver::constant) = -ap * pib * Ls / D;
    rf.coef(Var::d_diff, Driver::constant) = ap * p.d_bar * pib * M / D;

    rf.coef(Var::fhat, Driver::labor) = 1.0;
    rf.coef(Var::shat, Driver::labor) = 1.0;
    rf.coef(Var::fhat, Driver::own_lag) = s.rho(Shock::eps_f);
    rf.coef(Var::shat, Driver::own_lag) = s.rho(Shock::eps_s);

    for (Shock x : kTableShocks) rf.sep_base[idx(x)] = impact(Var::shat, x);
    rf.sep_base[idx(Shock::ybar)] = sg * (p.psi_y + p.psi_r * sg - ry * p.psi_r * D) / D;
    rf.sep_base[idx(Shock::eps_s)] = 1.0;
    return rf;
}

double fi_expected_separation(const ReducedForm& rf, const FiState& x, int h, bool include_constant) {
    if (h < 1) throw ValidationError("expectation horizon must be >= 1");
    const double rs = rf.shocks.rho(Shock::eps_s);
    double e = include_constant ? rf.coef(Var::shat, Driver::constant) : 0.0;
    e += std::pow(rs, h) * x.shat_lag + std::pow(rs, h - 1) * x.eps_s;
    for (Shock s : kTableShocks) {
        const double r = rf.shocks.rho(s), b = rf.sep_base[idx(s)];
        e += b * std::pow(r, h) * x.lag[idx(s)] + b * std::pow(r, h - 1) * x.innov[idx(s)];
    }
    return e;
}

std::vector<double> fi_expected_separation_path(const ReducedForm& rf, const FiState& x, int H,
                                                bool include_constant) {
    if (H < 1) throw ValidationError("expectation horizon must be >= 1");
    std::vector<double> out(H);
    for (int h = 1; h <= H; ++h) out[h - 1] = fi_expected_separation(rf, x, h, include_constant);
    return out;
}

namespace {

StateSpaceSolution base_state_space(const ReducedForm& rf) {
    StateSpaceSolution sol;
    const auto& s = rf.shocks;
    sol.A.setZero();
    sol.c.setZero();
    sol.B.setZero();
    sol.A(0, 0) = 1.0;
    sol.A(1, 1) = s.rho(Shock::eps_s);
    sol.c(0) = rf.coef(Var::shat, Driver::constant);
    sol.c(1) = 1.0;
    const std::array<Shock, 7> order = {Shock::eps_pi, Shock::eps_i, Shock::q,   Shock::eps_b,
                                        Shock::g,      Shock::eps_yhat, Shock::ybar};
    for (int i = 0; i < 7; ++i) {
        sol.A(2 + i, 2 + i) = s.rho(order[i]);
        sol.c(2 + i) = rf.sep_base[idx(order[i])];
        sol.B(2 + i, idx(order[i])) = 1.0;
    }
    sol.B(1, idx(Shock::eps_s)) = 1.0;
    return sol;
}

}  // namespace

StateSpaceSolution fi_state_space(const StructuralParams& p, const ShockSpecSet& s) {
    StateSpaceSolution sol = base_state_space(fi_reduced_form(p, s));
    sol.signal = SignalModel::from_shocks(s);
    sol.signal.var_v = 0;
    return sol;
}

StateSpaceSolution ai_solve(const StructuralParams& p, const ShockSpecSet& s, const FilterGain& gain) {
    SignalModel sm = SignalModel::from_shocks(s);
    if (observability(sm).rank < 2) throw ValidationError("unobservable signal pair: rho_q equals rho_b");
    StateSpaceSolution sol = base_state_space(fi_reduced_form(p, s));
    sol.gain = gain;
    sol.signal = sm;
    // Agents see only the signal: news about q and eps_b reaches the filtered states through the gain.
    sol.B.col(idx(Shock::q)).setZero();
    sol.B.col(idx(Shock::eps_b)).setZero();
    sol.B(4, kNumShocks) = gain.steady_K(0);
    sol.B(5, kNumShocks) = gain.steady_K(1);
    return sol;
}

double expected_separation(const StateSpaceSolution& sol, const Eigen::Matrix<double, kAiDim, 1>& x, int h) {
    if (h < 0) throw ValidationError("expectation horizon must be >= 0");
    // A is diagonal; h = 0 gives the fitted value c'x, h >= 1 the h-step expectation c'A^(h-1)x.
    const int pw = h == 0 ? 0 : h - 1;
    double e = 0;
    for (int i = 0; i < kAiDim; ++i) e += sol.c(i) * std::pow(sol.A(i, i), pw) * x(i);
    return e;
}

std::vector<double> expected_separation_path(const StateSpaceSolution& sol,
                                             const Eigen::Matrix<double, kAiDim, 1>& x, int H) {
    if (H < 1) throw ValidationError("expectation horizon must be >= 1");
    std::vector<double> out(H);
    for (int h = 1; h <= H; ++h) out[h - 1] = expected_separation(sol, x, h);
    return out;
}

const char* regime_name(Regime r) { return r == Regime::FI ? "fi" : "ai"; }

Regime regime_from_name(const std::string& s) {
    if (s == "fi" || s == "FI") return Regime::FI;
    if (s == "ai" || s == "AI") return Regime::AI;
    throw ValidationError("invalid regime tag '" + s + "' (expected fi or ai)");
}

std::vector<std::pair<std::string, const std::vector<double>*>> PathSet::columns() const {
    std::vector<std::pair<std::string, const std::vector<double>*>> c = {
        {"y", &y},         {"yhat", &yhat},     {"ybar", &ybar},     {"pihat", &pihat},
        {"ihat", &ihat},   {"rhat", &rhat},     {"rbar", &rbar},     {"u", &u},
        {"f", &f},         {"s", &s},           {"fhat", &fhat},     {"shat", &shat},
        {"dhat", &dhat},   {"d_diff", &d_diff}, {"ghat", &ghat},     {"tax", &tax},
        {"absorption", &absorption},            {"a", &a},           {"v", &v},
        {"q_hat", &q_hat}, {"eb_hat", &eb_hat}, {"innovation", &innovation},
        {"pf", &pf},       {"ps", &ps},         {"epi_next", &epi_next}};
    for (Shock k : kAllShocks) c.emplace_back(std::string("shock_") + shock_name(k), &shock[idx(k)]);
    return c;
}

FiState PathSet::fi_state(std::size_t t) const {
    FiState x;
    x.shat_lag = t == 0 ? shat_init : shat[t - 1];
    x.eps_s = shock[idx(Shock::eps_s)][t];
    for (Shock k : kTableShocks) {
        x.lag[idx(k)] = t == 0 ? shock_init[idx(k)] : shock[idx(k)][t - 1];
        x.innov[idx(k)] = shock_innov[idx(k)][t];
    }
    return x;
}

Eigen::Matrix<double, kAiDim, 1> PathSet::ai_state(std::size_t t, const ShockSpecSet& sp) const {
    Eigen::Matrix<double, kAiDim, 1> x;
    const double sl = t == 0 ? shat_init : shat[t - 1];
    x(0) = 1.0;
    x(1) = sp.rho(Shock::eps_s) * sl + shock[idx(Shock::eps_s)][t];
    x(2) = shock[idx(Shock::eps_pi)][t];
    x(3) = shock[idx(Shock::eps_i)][t];
    x(4) = regime == Regime::AI ? q_hat[t] : shock[idx(Shock::q)][t];
    x(5) = regime == Regime::AI ? eb_hat[t] : shock[idx(Shock::eps_b)][t];
    x(6) = shock[idx(Shock::g)][t];
    x(7) = shock[idx(Shock::eps_yhat)][t];
    x(8) = shock[idx(Shock::ybar)][t];
    return x;
}

namespace {

void build_shock(const Ar1Spec& spec, const std::optional<SvSpec>& sv, double rho,
                 const std::vector<double>& z, const std::vector<double>& xv, std::size_t n,
                 const std::vector<std::pair<std::size_t, double>>& kicks, std::vector<double>& level,
                 std::vector<double>& innov, std::vector<double>& logvol, double& init) {
    level.assign(n, 0.0);
    innov.assign(n, 0.0);
    double prev;
    if (sv) {
        logvol.assign(n, 0.0);
        double h = sv->start();
        prev = z[0] * std::exp(h / 2) / std::sqrt(1 - rho * rho);
        for (std::size_t t = 0; t < n; ++t) {
            h = sv->mu + sv->chi * (h - sv->mu) + sv->sigma_h * xv[t];
            logvol[t] = h;
            innov[t] = std::exp(h / 2) * z[t + 1];
        }
    } else {
        logvol.clear();
        const double sc = std::sqrt(spec.variance);
        prev = z[0] * std::sqrt(spec.variance / (1 - rho * rho));
        for (std::size_t t = 0; t < n; ++t) innov[t] = sc * z[t + 1];
    }
    for (const auto& [t, size] : kicks)
        if (t < n) innov[t] += size;
    init = prev;
    for (std::size_t t = 0; t < n; ++t) {
        prev = rho * prev + innov[t];
        level[t] = prev;
    }
}

template <class T>
void trim(std::vector<T>& v, std::size_t b) {
    v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(b));
}

}  // namespace

PathSet simulate_paths(const StructuralParams& p, const ShockSpecSet& s, Regime regime, std::size_t horizon,
                       const StandardDraws& draws, const SimOptions& opt) {
    require(horizon >= 2, "simulation horizon must be >= 2");
    const std::size_t B = opt.burn_in, n = B + horizon;
    require(draws.length >= n, "standard draws shorter than burn-in + horizon");
    const ReducedForm rf = fi_reduced_form(p, s);

    PathSet ps;
    ps.regime = regime;
    ps.horizon = horizon;
    std::array<double, kNumShocks> init{};
    for (Shock k : kAllShocks) {
        const int i = idx(k);
        // Labor shocks are white noise: their persistence is the own lag of the intensity rows.
        const double rho = (k == Shock::eps_f || k == Shock::eps_s) ? 0.0 : s.rho(k);
        std::vector<std::pair<std::size_t, double>> kicks;
        for (const auto& im : opt.impulses)
            if (im.shock == k) kicks.emplace_back(B + im.t, im.size);
        build_shock(s[k], s.sv[i], rho, draws.level[i], draws.vol[i], n, kicks, ps.shock[i],
                    ps.shock_innov[i], ps.logvol[i], init[i]);
    }

    const auto& q = ps.shock[idx(Shock::q)];
    const auto& eb = ps.shock[idx(Shock::eps_b)];
    ps.a.resize(n);
    ps.v.assign(n, 0.0);
    if (regime == Regime::AI) {
        const double sd = std::sqrt(s.var_v);
        for (std::size_t t = 0; t < n; ++t) ps.v[t] = sd * draws.noise[t];
    }
    for (std::size_t t = 0; t < n; ++t) ps.a[t] = q[t] + eb[t] + ps.v[t];

    // Effective signal components seen by private agents.
    std::vector<double> qe = q, be = eb;
    double qe_init = init[idx(Shock::q)], be_init = init[idx(Shock::eps_b)];
    ps.innovation.assign(n, 0.0);
    if (regime == Regime::AI) {
        SignalModel sm = SignalModel::from_shocks(s);
        FilteredPath fp = run_filter(sm, ps.a);
        qe = fp.q_hat;
        be = fp.eb_hat;
        qe_init = be_init = 0.0;
        ps.innovation = fp.innovations;
    }
    ps.q_hat = qe;
    ps.eb_hat = be;

    auto level_of = [&](Shock k) -> const std::vector<double>& {
        if (k == Shock::q) return qe;
        if (k == Shock::eps_b) return be;
        return ps.shock[idx(k)];
    };
    auto init_of = [&](Shock k) {
        if (k == Shock::q) return qe_init;
        if (k == Shock::eps_b) return be_init;
        return init[idx(k)];
    };

    ps.y.resize(n);
    ps.yhat.resize(n);
    ps.ybar = ps.shock[idx(Shock::ybar)];
    ps.pihat.resize(n);
    ps.ihat.resize(n);
    ps.rhat.resize(n);
    ps.rbar.resize(n);
    ps.epi_next.assign(n, 0.0);
    ps.fhat.resize(n);
    ps.shat.resize(n);
    ps.f.resize(n);
    ps.s.resize(n);
    ps.pf.resize(n);
    ps.ps.resize(n);
    ps.u.resize(n);
    ps.dhat.resize(n);
    ps.d_diff.resize(n);
    ps.ghat = ps.shock[idx(Shock::g)];
    ps.tax.resize(n);
    ps.absorption.resize(n);

    const double rf_own = rf.coef(Var::fhat, Driver::own_lag), rs_own = rf.coef(Var::shat, Driver::own_lag);
    double f_prev = 0, s_prev = 0, u_prev = initial_unemployment(p), r_prev = 0, d_prev = 0;
    const double ry = s.rho(Shock::ybar);
    for (std::size_t t = 0; t < n; ++t) {
        double vyh = 0, vpi = 0, vf = 0, vs = 0;
        for (Shock k : kTableShocks) {
            const auto& lv = level_of(k);
            const double lag = t == 0 ? init_of(k) : lv[t - 1];
            const double inn = lv[t] - s.rho(k) * lag;
            const Driver dl = lag_driver(k), dn = innovation_driver(k);
            vyh += rf.coef(Var::yhat, dl) * lag + rf.coef(Var::yhat, dn) * inn;
            vpi += rf.coef(Var::pihat, dl) * lag + rf.coef(Var::pihat, dn) * inn;
            vf += rf.coef(Var::fhat, dl) * lag + rf.coef(Var::fhat, dn) * inn;
            vs += rf.coef(Var::shat, dl) * lag + rf.coef(Var::shat, dn) * inn;
        }
        vf += ps.shock[idx(Shock::eps_f)][t] + rf_own * f_prev;
        vs += ps.shock[idx(Shock::eps_s)][t] + rs_own * s_prev;
        ps.yhat[t] = vyh;
        ps.y[t] = vyh + ps.ybar[t];
        ps.pihat[t] = vpi;
        ps.ihat[t] = p.alpha_pi * vpi + p.alpha_y * vyh + ps.shock[idx(Shock::eps_i)][t];
        ps.rhat[t] = ps.ihat[t] - ps.epi_next[t];
        ps.rbar[t] = p.sigma * (ry - 1.0) * ps.ybar[t];
        ps.fhat[t] = vf;
        ps.shat[t] = vs;
        ps.f[t] = p.f_bar + vf;
        ps.s[t] = p.s_bar + vs;
        if (ps.f[t] < 0) ++ps.floor_events;
        if (ps.s[t] < 0) ++ps.floor_events;
        ps.pf[t] = 1 - std::exp(-std::max(ps.f[t], 0.0));
        ps.ps[t] = 1 - std::exp(-std::max(ps.s[t], 0.0));
        ps.u[t] = (1 - ps.pf[t]) * u_prev + ps.ps[t] * (1 - u_prev);
        ps.d_diff[t] = p.d_bar * r_prev;
        ps.dhat[t] = d_prev + ps.d_diff[t];
        ps.tax[t] = ps.ghat[t];
        ps.absorption[t] = ps.y[t] - ps.ghat[t];
        f_prev = vf;
        s_prev = vs;
        u_prev = ps.u[t];
        r_prev = ps.rhat[t];
        d_prev = ps.dhat[t];
    }

    ps.shat_init = B == 0 ? 0.0 : ps.shat[B - 1];
    ps.q_hat_init = B == 0 ? qe_init : qe[B - 1];
    ps.eb_hat_init = B == 0 ? be_init : be[B - 1];
    for (Shock k : kAllShocks) ps.shock_init[idx(k)] = B == 0 ? init[idx(k)] : ps.shock[idx(k)][B - 1];
    if (B > 0) {
        std::size_t floors = 0;
        for (std::size_t t = B; t < n; ++t) floors += (ps.f[t] < 0) + (ps.s[t] < 0);
        ps.floor_events = floors;
        for (auto* vec : {&ps.y, &ps.yhat, &ps.ybar, &ps.pihat, &ps.ihat, &ps.rhat, &ps.rbar, &ps.epi_next,
                          &ps.u, &ps.f, &ps.s, &ps.pf, &ps.ps, &ps.fhat, &ps.shat, &ps.dhat, &ps.d_diff,
                          &ps.ghat, &ps.tax, &ps.absorption, &ps.a, &ps.v, &ps.q_hat, &ps.eb_hat,
                          &ps.innovation})
            trim(*vec, B);
        for (int i = 0; i < kNumShocks; ++i) {
            trim(ps.shock[i], B);
            trim(ps.shock_innov[i], B);
            if (!ps.logvol[i].empty()) trim(ps.logvol[i], B);
        }
    }
    return ps;
}

PathSet simulate_paths(const StructuralParams& p, const ShockSpecSet& s, Regime regime, std::size_t horizon,
                       uint64_t seed, const SimOptions& opt) {
    require(horizon >= 2, "simulation horizon must be >= 2");
    return simulate_paths(p, s, regime, horizon, draw_standard(seed, 0, opt.burn_in + horizon), opt);
}

StateSpaceSolution solve_regime(const StructuralParams& p, const ShockSpecSet& s, Regime r) {
    if (r == Regime::FI) return fi_state_space(p, s);
    return ai_solve(p, s, steady_state_gain(SignalModel::from_shocks(s)));
}

std::string pathset_csv(const PathSet& ps) {
    std::ostringstream os;
    os.precision(17);
    auto cols = ps.columns();
    os << "t";
    for (const auto& c : cols) os << ',' << c.first;
    os << '\n';
    for (std::size_t t = 0; t < ps.horizon; ++t) {
        os << t;
        for (const auto& c : cols) os << ',' << (*c.second)[t];
        os << '\n';
    }
    return os.str();
}

}  // namespace nkji
