#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace nkji {

enum class Shock : int { q = 0, eps_b, ybar, eps_yhat, eps_pi, eps_i, g, eps_f, eps_s };
constexpr int kNumShocks = 9;
constexpr std::array<Shock, kNumShocks> kAllShocks = {Shock::q,      Shock::eps_b,  Shock::ybar,
                                                      Shock::eps_yhat, Shock::eps_pi, Shock::eps_i,
                                                      Shock::g,      Shock::eps_f,  Shock::eps_s};

const char* shock_name(Shock s);
std::optional<Shock> shock_from_name(const std::string& name);
inline int idx(Shock s) { return static_cast<int>(s); }

struct Ar1Spec {
    double rho = 0.0;
    double variance = 0.0;
    Shock label = Shock::q;
    void validate() const;
};

// Log-variance law h_t = mu + chi (h_{t-1} - mu) + sigma_h x_t.
struct SvSpec {
    double mu = 0.0;
    double chi = 0.0;
    double sigma_h = 0.0;
    std::optional<double> h0;  // starts at mu when empty
    void validate() const;
    double start() const { return h0 ? *h0 : mu; }
};

struct ShockPath {
    std::vector<double> values;
    std::vector<double> innovations;  // shock innovations in level units
    std::vector<double> logvol;       // empty when homoskedastic
};

struct ShockSpecSet {
    std::array<Ar1Spec, kNumShocks> ar;
    std::array<std::optional<SvSpec>, kNumShocks> sv;
    double var_v = 0.05;  // signal noise

    const Ar1Spec& operator[](Shock s) const { return ar[idx(s)]; }
    Ar1Spec& operator[](Shock s) { return ar[idx(s)]; }
    double rho(Shock s) const { return ar[idx(s)].rho; }
    void validate() const;
    ShockSpecSet with_zero_variances() const;
};

// Calibrated persistences and innovation variances for the full-information (1) and
// asymmetric-information (2) columns of the baseline calibration.
ShockSpecSet calibrated_shocks(int column);

ShockSpecSet shocks_from_json(const nlohmann::json& j);
nlohmann::json shocks_to_json(const ShockSpecSet& s);

// Stream splitting: every (master seed, stream, replication) triple maps to an independent
// mt19937_64 seed through two rounds of the splitmix64 finalizer.
uint64_t splitmix64(uint64_t x);
uint64_t substream_seed(uint64_t master, uint64_t stream, uint64_t replication = 0);

// Stream ids. Level streams use the shock index, volatility streams 16 + index.
constexpr uint64_t kVolStreamBase = 16;
constexpr uint64_t kNoiseStream = 32;

// Standard normal draws for one stream: z[0] seeds the stationary initial lag, z[1..n] the innovations.
std::vector<double> standard_normals(uint64_t seed, std::size_t n);

// Standard normals for every stream of one replication. Kept apart from the parameters so that
// common random numbers can be reused across candidate persistences.
struct StandardDraws {
    std::size_t length = 0;
    std::array<std::vector<double>, kNumShocks> level;  // length + 1 each
    std::array<std::vector<double>, kNumShocks> vol;    // length each
    std::vector<double> noise;                          // length
};

StandardDraws draw_standard(uint64_t master, uint64_t replication, std::size_t length);

ShockPath ar1_from_draws(const Ar1Spec& spec, const std::vector<double>& z, std::size_t length);
ShockPath sv_from_draws(const Ar1Spec& spec, const SvSpec& sv, const std::vector<double>& z,
                        const std::vector<double>& x, std::size_t length);

ShockPath simulate_ar1(const Ar1Spec& spec, std::size_t length, uint64_t seed);
ShockPath simulate_sv(const Ar1Spec& spec, const SvSpec& sv, std::size_t length, uint64_t seed);
ShockPath compose_signal(const ShockPath& q, const ShockPath& eps_b, double noise_variance,
                         uint64_t seed);

std::string shock_path_csv(const ShockPath& p);

}  // namespace nkji
