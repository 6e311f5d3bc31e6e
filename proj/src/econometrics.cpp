#include "nkji/econometrics.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>

#include "nkji/data_pipeline.hpp"
#include "nkji/errors.hpp"

namespace nkji {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double chi2_sf(double x, double df) {
    if (!(x > 0)) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

double f_sf(double x, double d1, double d2) {
    if (!(x > 0)) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f(d1, d2), x));
}

double norm_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

// Least squares with a rank check on the column-scaled design.
VectorXd lstsq(const MatrixXd& X, const VectorXd& y, const char* what) {
    VectorXd scale = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j)
        if (scale[j] == 0.0) throw ValidationError(std::string(what) + ": zero regressor column");
    const MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) throw ValidationError(std::string(what) + ": rank-deficient design");
    return qr.solve(y).cwiseQuotient(scale);
}

double ssr_of(const VectorXd& e) { return e.squaredNorm(); }

}  // namespace

int default_hac_lags(int n) { return static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0))); }

MatrixXd with_intercept(const MatrixXd& X) {
    MatrixXd out(X.rows(), X.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(X.cols()) = X;
    return out;
}

MatrixXd newey_west(const MatrixXd& X, const VectorXd& e, int lags) {
    const Eigen::Index n = X.rows(), k = X.cols();
    require(lags >= 0, "HAC lag must be >= 0");
    MatrixXd Xe = X.array().colwise() * e.array();
    MatrixXd S = Xe.transpose() * Xe;
    for (int l = 1; l <= lags && l < n; ++l) {
        const double w = 1.0 - l / (lags + 1.0);
        MatrixXd G = Xe.bottomRows(n - l).transpose() * Xe.topRows(n - l);
        S += w * (G + G.transpose());
    }
    const MatrixXd XtXi = (X.transpose() * X).ldlt().solve(MatrixXd::Identity(k, k));
    MatrixXd V = XtXi * S * XtXi;
    return 0.5 * (V + V.transpose());
}

RegressionResult ols_hac(const VectorXd& y, const MatrixXd& X, int hac_lags) {
    const int n = static_cast<int>(X.rows()), k = static_cast<int>(X.cols());
    require(y.size() == X.rows(), "y and X row counts differ");
    require(n > k, "OLS needs more observations than regressors");
    RegressionResult r;
    r.n = n;
    r.k = k;
    r.coefficients = lstsq(X, y, "OLS");
    r.fitted = X * r.coefficients;
    r.residuals = y - r.fitted;
    r.ssr = ssr_of(r.residuals);
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).square().sum();
    r.r2 = sst > 0 ? 1.0 - r.ssr / sst : (r.ssr == 0 ? 1.0 : 0.0);
    r.adjusted_r2 = 1.0 - (1.0 - r.r2) * (n - 1.0) / (n - k);
    const double s2 = r.ssr / (n - k);
    const MatrixXd XtXi = (X.transpose() * X).ldlt().solve(MatrixXd::Identity(k, k));
    r.se = (s2 * XtXi.diagonal()).cwiseSqrt();
    r.hac_lags = hac_lags < 0 ? default_hac_lags(n) : hac_lags;
    r.hac_cov = newey_west(X, r.residuals, r.hac_lags);
    r.hac_se = r.hac_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    r.t_hac = r.coefficients.cwiseQuotient(r.hac_se);
    r.p_hac.resize(k);
    for (int j = 0; j < k; ++j)
        r.p_hac[j] = std::isfinite(r.t_hac[j]) ? 2.0 * (1.0 - norm_cdf(std::abs(r.t_hac[j]))) : kNaN;
    return r;
}

std::vector<double> vif(const MatrixXd& X) {
    const Eigen::Index p = X.cols();
    require(p >= 2, "VIF needs at least two regressors");
    std::vector<double> out;
    for (Eigen::Index j = 0; j < p; ++j) {
        MatrixXd others(X.rows(), p - 1);
        for (Eigen::Index c = 0, o = 0; c < p; ++c)
            if (c != j) others.col(o++) = X.col(c);
        const MatrixXd Z = with_intercept(others);
        const VectorXd xj = X.col(j);
        // Minimum-norm fit so duplicated columns give R^2 = 1 instead of an error.
        const VectorXd b = Z.completeOrthogonalDecomposition().solve(xj);
        const VectorXd e = xj - Z * b;
        const double sst = (xj.array() - xj.mean()).square().sum();
        require(sst > 0, "VIF undefined for a constant regressor");
        const double r2 = 1.0 - e.squaredNorm() / sst;
        out.push_back(r2 >= 1.0 - 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - r2));
    }
    return out;
}

double mackinnon_p(double tau, int n_vars) {
    // Constant-only case, MacKinnon (1994) response surfaces, N = 1..3.
    static const double tau_max[] = {2.74, 0.92, 0.55};
    static const double tau_min[] = {-18.83, -18.86, -23.48};
    static const double tau_star[] = {-1.61, -2.62, -3.13};
    static const double smallp[][3] = {{2.1659, 1.4412, 0.038269}, {2.92, 1.5012, 0.039796}, {3.4699, 1.4856, 0.03164}};
    static const double largep[][4] = {{1.7339, 0.93202, -0.12745, -0.010368},
                                       {2.1945, 0.64695, -0.29198, -0.042377},
                                       {2.5893, 0.45168, -0.36529, -0.050074}};
    require(n_vars >= 1 && n_vars <= 3, "MacKinnon table covers 1 to 3 variables");
    const int i = n_vars - 1;
    if (!std::isfinite(tau)) return kNaN;
    if (tau > tau_max[i]) return 1.0;
    if (tau < tau_min[i]) return 0.0;
    double z;
    if (tau <= tau_star[i])
        z = smallp[i][0] + tau * (smallp[i][1] + tau * smallp[i][2]);
    else
        z = largep[i][0] + tau * (largep[i][1] + tau * (largep[i][2] + tau * largep[i][3]));
    return norm_cdf(z);
}

AdfResult adf(const std::vector<double>& x, int lags, int n_vars) {
    const int n = static_cast<int>(x.size());
    require(lags >= 0, "ADF lags must be >= 0");
    require(n > lags + 10, "series too short for ADF");
    double lo = x[0], hi = x[0];
    for (double v : x) lo = std::min(lo, v), hi = std::max(hi, v);
    require(hi > lo, "ADF undefined for a constant series");
    // dx_t = a + g x_{t-1} + sum_j c_j dx_{t-j} + e_t, t = lags+1 .. n-1
    const int m = n - 1 - lags;
    MatrixXd X(m, 2 + lags);
    VectorXd y(m);
    for (int r = 0; r < m; ++r) {
        const int t = lags + 1 + r;
        y[r] = x[t] - x[t - 1];
        X(r, 0) = 1.0;
        X(r, 1) = x[t - 1];
        for (int j = 1; j <= lags; ++j) X(r, 1 + j) = x[t - j] - x[t - j - 1];
    }
    const RegressionResult fit = ols_hac(y, X, 0);
    AdfResult a;
    a.lags = lags;
    a.nobs = m;
    a.stat = fit.coefficients[1] / fit.se[1];
    a.p = mackinnon_p(a.stat, n_vars);
    return a;
}

TestResult ramsey_reset(const VectorXd& y, const MatrixXd& X, const std::vector<int>& powers) {
    require(!powers.empty(), "RESET needs at least one power");
    const RegressionResult base = ols_hac(y, X, 0);
    TestResult t;
    const int q = static_cast<int>(powers.size());
    const int n = base.n, k = base.k;
    t.df1 = q;
    t.df2 = n - k - q;
    require(t.df2 > 0, "RESET needs more observations");
    const double sst = (y.array() - y.mean()).square().sum();
    if (base.ssr <= 1e-24 * std::max(sst, 1.0)) {
        t.defined = false;
        t.stat = t.p = kNaN;
        return t;
    }
    // With a constant in X the powers of the standardized fit span the same space as the raw
    // powers, and stay conditioned when the fit is nearly flat. Otherwise only rescale.
    bool has_const = false;
    for (int j = 0; j < k && !has_const; ++j)
        has_const = X(0, j) != 0.0 && (X.col(j).array() == X(0, j)).all();
    VectorXd z = base.fitted;
    if (has_const) {
        z.array() -= z.mean();
        const double sd = std::sqrt(z.squaredNorm() / n);
        if (sd > 0) z /= sd;
    } else {
        const double sc = z.cwiseAbs().maxCoeff();
        if (sc > 0) z /= sc;
    }
    MatrixXd Xa(n, k + q);
    Xa.leftCols(k) = X;
    for (int j = 0; j < q; ++j) {
        require(powers[j] >= 2, "RESET powers must be >= 2");
        Xa.col(k + j) = z.array().pow(powers[j]).matrix();
    }
    const VectorXd b = lstsq(Xa, y, "RESET augmented design");
    const double ssr_u = ssr_of(y - Xa * b);
    t.stat = ((base.ssr - ssr_u) / q) / (ssr_u / t.df2);
    t.p = f_sf(t.stat, t.df1, t.df2);
    return t;
}

CusumResult cusum(const VectorXd& y, const MatrixXd& X) {
    const int n = static_cast<int>(X.rows()), k = static_cast<int>(X.cols());
    require(y.size() == X.rows(), "y and X row counts differ");
    require(n > k + 10, "CUSUM needs more than columns + 10 observations");
    std::vector<double> w;
    w.reserve(n - k);
    for (int r = k; r < n; ++r) {
        const MatrixXd Xr = X.topRows(r);
        const VectorXd b = lstsq(Xr, y.head(r), "CUSUM recursive estimation");
        const MatrixXd XtXi = (Xr.transpose() * Xr).ldlt().solve(MatrixXd::Identity(k, k));
        const Eigen::RowVectorXd xr = X.row(r);
        const double f = 1.0 + (xr * XtXi * xr.transpose())(0, 0);
        w.push_back((y[r] - (xr * b)(0, 0)) / std::sqrt(f));
    }
    const int m = static_cast<int>(w.size());
    double mean = 0;
    for (double v : w) mean += v;
    mean /= m;
    double ss = 0;
    for (double v : w) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (m - 1));
    CusumResult c;
    double cum = 0;
    const double root = std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i) {
        cum += sd > 0 ? w[i] / sd : 0.0;
        c.path.push_back(cum);
        const double band = kCusumBand95 * (root + 2.0 * (i + 1) / root);
        c.upper.push_back(band);
        c.lower.push_back(-band);
        if (std::abs(cum) > band) c.breach = true;
    }
    return c;
}

TslsResult tsls(const VectorXd& y, const MatrixXd& X, const MatrixXd& Z, int hac_lags) {
    const int n = static_cast<int>(X.rows()), k = static_cast<int>(X.cols()), l = static_cast<int>(Z.cols());
    require(y.size() == n && Z.rows() == n, "2SLS inputs differ in row count");
    if (l < k) throw ValidationError("2SLS under-identified: fewer instruments than regressors");
    require(n > l, "2SLS needs more observations than instruments");
    // First stage: project X on the instruments.
    Eigen::JacobiSVD<MatrixXd> zsv(Z);
    const VectorXd zs = zsv.singularValues();
    require(zs[zs.size() - 1] > 1e-12 * zs[0], "2SLS instruments are collinear");
    MatrixXd Pi(l, k);
    for (int j = 0; j < k; ++j) Pi.col(j) = lstsq(Z, X.col(j), "2SLS first stage");
    const MatrixXd Xh = Z * Pi;
    Eigen::JacobiSVD<MatrixXd> xsv(Xh);
    const VectorXd xs = xsv.singularValues();
    TslsResult out;
    out.first_stage_condition = xs[xs.size() - 1] > 0 ? xs[0] / xs[xs.size() - 1] : std::numeric_limits<double>::infinity();
    if (!(xs[xs.size() - 1] > 1e-10 * xs[0])) throw NumericalError("2SLS first stage is rank-deficient (weak instruments)");

    RegressionResult& r = out.fit;
    r.n = n;
    r.k = k;
    r.coefficients = lstsq(Xh, y, "2SLS second stage");
    r.fitted = X * r.coefficients;
    r.residuals = y - r.fitted;
    r.ssr = ssr_of(r.residuals);
    const double sst = (y.array() - y.mean()).square().sum();
    r.r2 = sst > 0 ? 1.0 - r.ssr / sst : 0.0;
    r.adjusted_r2 = 1.0 - (1.0 - r.r2) * (n - 1.0) / (n - k);
    const MatrixXd XhXhi = (Xh.transpose() * Xh).ldlt().solve(MatrixXd::Identity(k, k));
    r.se = (r.ssr / (n - k) * XhXhi.diagonal()).cwiseSqrt();
    r.hac_lags = hac_lags < 0 ? default_hac_lags(n) : hac_lags;
    r.hac_cov = newey_west(Xh, r.residuals, r.hac_lags);
    r.hac_se = r.hac_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    r.t_hac = r.coefficients.cwiseQuotient(r.hac_se);
    r.p_hac.resize(k);
    for (int j = 0; j < k; ++j) r.p_hac[j] = 2.0 * (1.0 - norm_cdf(std::abs(r.t_hac[j])));

    // Sargan: n R^2 from regressing the structural residuals on the instruments.
    out.sargan.df1 = l - k;
    if (l == k) {
        out.sargan.defined = false;
        out.sargan.stat = out.sargan.p = kNaN;
    } else {
        const VectorXd g = lstsq(Z, r.residuals, "Sargan auxiliary regression");
        const VectorXd u = r.residuals - Z * g;
        const double em = r.residuals.mean();
        const double st = (r.residuals.array() - em).square().sum();
        const double r2 = st > 0 ? 1.0 - u.squaredNorm() / st : 0.0;
        out.sargan.stat = n * r2;
        out.sargan.p = chi2_sf(out.sargan.stat, out.sargan.df1);
    }
    return out;
}

TestResult portmanteau(const std::vector<double>& e, int lags) {
    const int n = static_cast<int>(e.size());
    require(lags >= 1, "portmanteau lags must be >= 1");
    // At least three pairs at the largest lag.
    require(n - lags >= 3, "series too short for the portmanteau test");
    double m = 0;
    for (double v : e) m += v;
    m /= n;
    double c0 = 0;
    for (double v : e) c0 += (v - m) * (v - m);
    require(c0 > 0, "portmanteau undefined for a constant series");
    double q = 0;
    for (int k = 1; k <= lags; ++k) {
        double ck = 0;
        for (int t = k; t < n; ++t) ck += (e[t] - m) * (e[t - k] - m);
        const double rk = ck / c0;
        q += rk * rk / (n - k);
    }
    TestResult t;
    t.stat = n * (n + 2.0) * q;
    t.df1 = lags;
    t.p = chi2_sf(t.stat, lags);
    return t;
}

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json test_json(const TestResult& t) {
    return {{"stat", num(t.stat)}, {"p", num(t.p)}, {"df1", t.df1}, {"df2", t.df2}, {"defined", t.defined}};
}

}  // namespace

nlohmann::json validation_report(const NamedSeries& y, const std::vector<NamedSeries>& x,
                                 const std::vector<NamedSeries>& instruments, int adf_lags, int lb_lags) {
    require(!x.empty(), "validation needs at least one regressor");
    const std::size_t n = y.values.size();
    for (const auto& s : x) require(s.values.size() == n, "regressor '" + s.name + "' length differs from y");
    for (const auto& s : instruments)
        require(s.values.size() == n, "instrument '" + s.name + "' length differs from y");

    // 1. standardize
    const std::vector<double> ys = standardize(y.values);
    VectorXd Y = Eigen::Map<const VectorXd>(ys.data(), static_cast<Eigen::Index>(n));
    MatrixXd Xr(n, x.size());
    std::vector<std::vector<double>> xs;
    for (std::size_t j = 0; j < x.size(); ++j) {
        xs.push_back(standardize(x[j].values));
        Xr.col(j) = Eigen::Map<const VectorXd>(xs.back().data(), static_cast<Eigen::Index>(n));
    }
    const MatrixXd X = with_intercept(Xr);

    // 2. regress
    const RegressionResult fit = ols_hac(Y, X);
    nlohmann::json rep;
    rep["n"] = fit.n;
    rep["hac_lags"] = fit.hac_lags;
    nlohmann::json coefs = nlohmann::json::array();
    for (int j = 0; j < fit.k; ++j)
        coefs.push_back({{"name", j == 0 ? std::string("intercept") : x[j - 1].name},
                         {"estimate", fit.coefficients[j]},
                         {"hac_se", num(fit.hac_se[j])},
                         {"t", num(fit.t_hac[j])},
                         {"p", num(fit.p_hac[j])}});
    rep["coefficients"] = coefs;
    rep["adjusted_r2"] = fit.adjusted_r2;

    // 3. diagnose
    if (x.size() >= 2) {
        const auto v = vif(Xr);
        nlohmann::json vj;
        for (std::size_t j = 0; j < v.size(); ++j) vj[x[j].name] = num(v[j]);
        rep["vif"] = vj;
    }
    nlohmann::json adfj;
    const auto adf_pack = [&](const std::vector<double>& s, int nv) {
        const AdfResult a = adf(s, adf_lags, nv);
        return nlohmann::json{{"stat", a.stat}, {"p", a.p}, {"lags", a.lags}};
    };
    adfj[y.name] = adf_pack(ys, 1);
    for (std::size_t j = 0; j < x.size(); ++j) adfj[x[j].name] = adf_pack(xs[j], 1);
    std::vector<double> resid(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
    adfj["residuals"] = adf_pack(resid, std::min<int>(3, static_cast<int>(x.size()) + 1));
    rep["adf"] = adfj;
    rep["reset"] = test_json(ramsey_reset(Y, X));
    const CusumResult c = cusum(Y, X);
    rep["cusum"] = {{"path", c.path}, {"upper", c.upper}, {"lower", c.lower}, {"breach", c.breach}};
    nlohmann::json lb = test_json(portmanteau(resid, lb_lags));
    lb["label"] = "Ljung-Box portmanteau (substitute for a martingale-difference test)";
    rep["portmanteau"] = lb;

    if (!instruments.empty()) {
        MatrixXd Zr(n, instruments.size());
        for (std::size_t j = 0; j < instruments.size(); ++j) {
            const auto zs = standardize(instruments[j].values);
            Zr.col(j) = Eigen::Map<const VectorXd>(zs.data(), static_cast<Eigen::Index>(n));
        }
        const TslsResult iv = tsls(Y, X, with_intercept(Zr));
        nlohmann::json ivc = nlohmann::json::array();
        for (int j = 0; j < iv.fit.k; ++j)
            ivc.push_back({{"name", j == 0 ? std::string("intercept") : x[j - 1].name},
                           {"estimate", iv.fit.coefficients[j]},
                           {"hac_se", num(iv.fit.hac_se[j])},
                           {"p", num(iv.fit.p_hac[j])}});
        rep["tsls"] = {{"coefficients", ivc},
                       {"sargan", test_json(iv.sargan)},
                       {"first_stage_condition", iv.first_stage_condition}};
    }
    return rep;
}

}  // namespace nkji
