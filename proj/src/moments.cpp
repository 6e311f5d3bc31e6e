#include "nkji/moments.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nkji/errors.hpp"

namespace nkji {

const std::array<const char*, kNumMoments> kMomentNames = {
    "mean_yhat", "var_yhat", "mean_pihat", "var_pihat", "mean_shat", "var_shat",
    "mean_u",    "var_u",    "mean_rhat",  "var_rhat",  "acf1_yhat", "acf1_shat",
    "acf1_u",    "acf1_rhat", "corr_yhat_shat", "corr_rhat_shat", "corr_pihat_yhat", "corr_rhat_yhat"};

bool MomentVector::any_flagged() const {
    for (bool f : flagged)
        if (f) return true;
    return false;
}

double sample_mean(const std::vector<double>& x) {
    require(!x.empty(), "mean of empty series");
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
    require(x.size() >= 2, "variance needs at least two observations");
    const double m = sample_mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_constant(const std::vector<double>& x) {
    const double m = sample_mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return !(s > 1e-300) || !(s > 1e-24 * (m * m + 1) * static_cast<double>(x.size()));
}
}  // namespace

double acf1(const std::vector<double>& x) {
    require(x.size() >= 3, "autocorrelation needs at least three observations");
    if (is_constant(x)) return kNaN;
    const double m = sample_mean(x);
    double num = 0, den = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        den += (x[t] - m) * (x[t] - m);
        if (t > 0) num += (x[t] - m) * (x[t - 1] - m);
    }
    return num / den;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "correlation needs equal-length series");
    if (is_constant(x) || is_constant(y)) return kNaN;
    const double mx = sample_mean(x), my = sample_mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        sxy += (x[t] - mx) * (y[t] - my);
        sxx += (x[t] - mx) * (x[t] - mx);
        syy += (y[t] - my) * (y[t] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

MomentVector compute_moments(const std::vector<double>& yhat, const std::vector<double>& pihat,
                             const std::vector<double>& shat, const std::vector<double>& u,
                             const std::vector<double>& rhat) {
    const std::size_t n = yhat.size();
    require(n >= 4, "moments need at least four observations");
    require(pihat.size() == n && shat.size() == n && u.size() == n && rhat.size() == n,
            "moment series differ in length");
    MomentVector m;
    const std::array<const std::vector<double>*, 5> lv = {&yhat, &pihat, &shat, &u, &rhat};
    for (int i = 0; i < 5; ++i) {
        m.value[2 * i] = sample_mean(*lv[i]);
        m.value[2 * i + 1] = sample_variance(*lv[i]);
    }
    const std::array<const std::vector<double>*, 4> ac = {&yhat, &shat, &u, &rhat};
    for (int i = 0; i < 4; ++i) m.value[10 + i] = acf1(*ac[i]);
    m.value[14] = correlation(yhat, shat);
    m.value[15] = correlation(rhat, shat);
    m.value[16] = correlation(pihat, yhat);
    m.value[17] = correlation(rhat, yhat);
    for (int i = 0; i < kNumMoments; ++i) m.flagged[i] = std::isnan(m.value[i]);
    for (int i = 0; i < kNumMoments; ++i)
        if (m.flagged[i]) m.value[i] = 0.0;
    return m;
}

MomentVector compute_moments(const PathSet& ps) {
    return compute_moments(ps.yhat, ps.pihat, ps.shat, ps.u, ps.rhat);
}

MomentVector average_moments(const std::vector<MomentVector>& ms) {
    require(!ms.empty(), "no moment vectors to average");
    MomentVector out;
    for (int i = 0; i < kNumMoments; ++i) {
        double s = 0;
        int n = 0;
        for (const auto& m : ms)
            if (!m.flagged[i]) {
                s += m.value[i];
                ++n;
            }
        out.flagged[i] = n == 0;
        out.value[i] = n == 0 ? 0.0 : s / n;
    }
    return out;
}

std::string moments_csv(const MomentVector& m) {
    std::ostringstream os;
    os.precision(17);
    os << "moment,value,flagged\n";
    for (int i = 0; i < kNumMoments; ++i) os << kMomentNames[i] << ',' << m.value[i] << ',' << m.flagged[i] << '\n';
    return os.str();
}

MomentVector moments_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    MomentVector m;
    std::array<bool, kNumMoments> seen{};
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("moment,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string name, val, flag;
        std::getline(ls, name, ',');
        std::getline(ls, val, ',');
        std::getline(ls, flag, ',');
        int k = -1;
        for (int i = 0; i < kNumMoments; ++i)
            if (name == kMomentNames[i]) k = i;
        if (k < 0) throw ValidationError("targets line " + std::to_string(lineno) + ": unknown moment '" + name + "'");
        try {
            std::size_t pos = 0;
            m.value[k] = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("targets line " + std::to_string(lineno) + ": bad value '" + val + "'");
        }
        m.flagged[k] = flag == "1";
        seen[k] = true;
    }
    for (int i = 0; i < kNumMoments; ++i)
        if (!seen[i]) throw ValidationError(std::string("targets missing moment '") + kMomentNames[i] + "'");
    return m;
}

}  // namespace nkji
