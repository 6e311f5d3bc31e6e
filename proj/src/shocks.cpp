#include "nkji/shocks.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nkji/errors.hpp"
#include "nkji/json_util.hpp"

namespace nkji {

namespace {
constexpr std::array<const char*, kNumShocks> kNames = {"q",      "eps_b", "ybar", "eps_yhat", "eps_pi",
                                                        "eps_i",  "g",     "eps_f", "eps_s"};
}

const char* shock_name(Shock s) { return kNames[idx(s)]; }

std::optional<Shock> shock_from_name(const std::string& name) {
    for (int i = 0; i < kNumShocks; ++i)
        if (name == kNames[i]) return static_cast<Shock>(i);
    return std::nullopt;
}

void Ar1Spec::validate() const {
    require(std::abs(rho) < 1, std::string("shock ") + shock_name(label) + ": |rho| must be < 1");
    require(variance >= 0, std::string("shock ") + shock_name(label) + ": variance must be >= 0");
}

void SvSpec::validate() const {
    require(std::abs(chi) < 1, "stochastic volatility: |chi| must be < 1");
    require(sigma_h >= 0, "stochastic volatility: sigma_h must be >= 0");
}

void ShockSpecSet::validate() const {
    for (int i = 0; i < kNumShocks; ++i) {
        require(ar[i].label == static_cast<Shock>(i), "shock set: label order mismatch");
        ar[i].validate();
        if (sv[i]) sv[i]->validate();
    }
    require(var_v >= 0, "signal noise variance must be >= 0");
}

ShockSpecSet ShockSpecSet::with_zero_variances() const {
    ShockSpecSet s = *this;
    for (auto& a : s.ar) a.variance = 0;
    for (auto& v : s.sv) v.reset();
    s.var_v = 0;
    return s;
}

ShockSpecSet calibrated_shocks(int column) {
    require(column == 1 || column == 2, "calibration column must be 1 or 2");
    const bool c1 = column == 1;
    ShockSpecSet s;
    auto set = [&](Shock k, double r1, double r2, double var) {
        s[k] = Ar1Spec{c1 ? r1 : r2, var, k};
    };
    set(Shock::q, 0.24, 0.59, 0.10);
    set(Shock::eps_b, 0.20, 0.92, 0.10);
    set(Shock::ybar, 0.19, 0.40, 0.20);
    set(Shock::eps_yhat, 0.60, 0.66, 0.20);
    set(Shock::eps_pi, 0.78, 0.17, 0.20);
    set(Shock::eps_i, 0.19, 0.93, 0.10);
    set(Shock::g, 0.11, 0.41, 0.30);
    set(Shock::eps_f, 0.93, 0.48, 0.05);
    set(Shock::eps_s, 0.94, 0.93, 0.05);
    s.var_v = 0.05;
    return s;
}

ShockSpecSet shocks_from_json(const nlohmann::json& j) {
    const std::string w = "shocks";
    check_keys(j, {"calibration", "var_v", "q", "eps_b", "ybar", "eps_yhat", "eps_pi", "eps_i", "g",
                   "eps_f", "eps_s"},
               w);
    int column = 1;
    read_opt(j, "calibration", column, w);
    ShockSpecSet s = calibrated_shocks(column);
    read_opt(j, "var_v", s.var_v, w);
    for (Shock k : kAllShocks) {
        auto it = j.find(shock_name(k));
        if (it == j.end()) continue;
        const std::string ww = w + "." + shock_name(k);
        check_keys(*it, {"rho", "variance", "sv"}, ww);
        read_opt(*it, "rho", s[k].rho, ww);
        read_opt(*it, "variance", s[k].variance, ww);
        if (it->contains("sv")) {
            const auto& js = (*it)["sv"];
            check_keys(js, {"mu", "chi", "sigma_h", "h0"}, ww + ".sv");
            SvSpec sv;
            read_opt(js, "mu", sv.mu, ww);
            read_opt(js, "chi", sv.chi, ww);
            read_opt(js, "sigma_h", sv.sigma_h, ww);
            if (js.contains("h0")) {
                double h0 = 0;
                read_opt(js, "h0", h0, ww);
                sv.h0 = h0;
            }
            s.sv[idx(k)] = sv;
        }
    }
    s.validate();
    return s;
}

nlohmann::json shocks_to_json(const ShockSpecSet& s) {
    nlohmann::json j;
    j["var_v"] = s.var_v;
    for (Shock k : kAllShocks) {
        nlohmann::json e = {{"rho", s[k].rho}, {"variance", s[k].variance}};
        if (const auto& sv = s.sv[idx(k)]) {
            e["sv"] = {{"mu", sv->mu}, {"chi", sv->chi}, {"sigma_h", sv->sigma_h}};
            if (sv->h0) e["sv"]["h0"] = *sv->h0;
        }
        j[shock_name(k)] = e;
    }
    return j;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t substream_seed(uint64_t master, uint64_t stream, uint64_t replication) {
    uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (stream * 0xD1B54A32D192ED03ULL));
    return splitmix64(s ^ (replication * 0xABC98388FB8FAC03ULL));
}

std::vector<double> standard_normals(uint64_t seed, std::size_t n) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> z(n);
    for (auto& v : z) v = nd(gen);
    return z;
}

StandardDraws draw_standard(uint64_t master, uint64_t replication, std::size_t length) {
    StandardDraws d;
    d.length = length;
    for (int i = 0; i < kNumShocks; ++i) {
        d.level[i] = standard_normals(substream_seed(master, i, replication), length + 1);
        d.vol[i] = standard_normals(substream_seed(master, kVolStreamBase + i, replication), length);
    }
    d.noise = standard_normals(substream_seed(master, kNoiseStream, replication), length);
    return d;
}

ShockPath ar1_from_draws(const Ar1Spec& spec, const std::vector<double>& z, std::size_t length) {
    spec.validate();
    require(length >= 1, "shock path length must be >= 1");
    require(z.size() >= length + 1, "not enough standard draws");
    ShockPath p;
    p.values.resize(length);
    p.innovations.resize(length);
    const double scale = std::sqrt(spec.variance);
    double prev = z[0] * std::sqrt(spec.variance / (1 - spec.rho * spec.rho));
    for (std::size_t t = 0; t < length; ++t) {
        p.innovations[t] = scale * z[t + 1];
        prev = spec.rho * prev + p.innovations[t];
        p.values[t] = prev;
    }
    return p;
}

ShockPath sv_from_draws(const Ar1Spec& spec, const SvSpec& sv, const std::vector<double>& z,
                        const std::vector<double>& x, std::size_t length) {
    spec.validate();
    sv.validate();
    require(length >= 1, "shock path length must be >= 1");
    require(z.size() >= length + 1 && x.size() >= length, "not enough standard draws");
    ShockPath p;
    p.values.resize(length);
    p.innovations.resize(length);
    p.logvol.resize(length);
    double h = sv.start();
    double prev = z[0] * std::exp(h / 2) / std::sqrt(1 - spec.rho * spec.rho);
    for (std::size_t t = 0; t < length; ++t) {
        h = sv.mu + sv.chi * (h - sv.mu) + sv.sigma_h * x[t];
        p.logvol[t] = h;
        p.innovations[t] = std::exp(h / 2) * z[t + 1];
        prev = spec.rho * prev + p.innovations[t];
        p.values[t] = prev;
    }
    return p;
}

ShockPath simulate_ar1(const Ar1Spec& spec, std::size_t length, uint64_t seed) {
    spec.validate();
    require(length >= 1, "shock path length must be >= 1");
    auto z = standard_normals(substream_seed(seed, idx(spec.label)), length + 1);
    return ar1_from_draws(spec, z, length);
}

ShockPath simulate_sv(const Ar1Spec& spec, const SvSpec& sv, std::size_t length, uint64_t seed) {
    spec.validate();
    sv.validate();
    require(length >= 1, "shock path length must be >= 1");
    auto z = standard_normals(substream_seed(seed, idx(spec.label)), length + 1);
    auto x = standard_normals(substream_seed(seed, kVolStreamBase + idx(spec.label)), length);
    return sv_from_draws(spec, sv, z, x, length);
}

ShockPath compose_signal(const ShockPath& q, const ShockPath& eps_b, double noise_variance,
                         uint64_t seed) {
    require(q.values.size() == eps_b.values.size(), "signal components differ in length");
    require(noise_variance >= 0, "noise variance must be >= 0");
    const std::size_t n = q.values.size();
    auto z = standard_normals(substream_seed(seed, kNoiseStream), n);
    ShockPath a;
    a.values.resize(n);
    a.innovations.resize(n);
    const double sd = std::sqrt(noise_variance);
    for (std::size_t t = 0; t < n; ++t) {
        a.innovations[t] = sd * z[t];
        a.values[t] = q.values[t] + eps_b.values[t] + a.innovations[t];
    }
    return a;
}

std::string shock_path_csv(const ShockPath& p) {
    std::ostringstream os;
    os.precision(17);
    os << "t,value,innovation,logvol\n";
    for (std::size_t t = 0; t < p.values.size(); ++t) {
        os << t << ',' << p.values[t] << ',' << p.innovations[t] << ',';
        if (!p.logvol.empty()) os << p.logvol[t];
        os << '\n';
    }
    return os.str();
}

}  // namespace nkji
