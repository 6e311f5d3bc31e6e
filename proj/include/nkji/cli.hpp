#pragma once
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "model.hpp"
#include "shocks.hpp"
#include "smm.hpp"
#include "solver.hpp"

namespace nkji {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;

struct RunConfig {
    StructuralParams params;
    ShockSpecSet shocks = calibrated_shocks(1);
    bool shocks_given = false;
    Regime regime = Regime::FI;
    std::size_t horizon = 86;
    std::size_t burn_in = 100;
    uint64_t seed = 20250101;
    unsigned threads = 1;
    int horizon_steps = 8;
    double delta = 0.25;
    std::string order = "second";
    double rho_z = 0.95;
    DeConfig de;
    std::size_t replications = 50;
    std::size_t sim_length = 86;
    double bound_lo = 0.01, bound_hi = 0.99;

    void validate() const;
    nlohmann::json to_json() const;
};

// Strict schema: top-level keys params, shocks, regime, horizon, burn_in, seed, threads,
// insecurity {horizon_steps, delta, order}, learning {rho_z},
// de {population, F, CR, max_generations, tolerance, seed, polish},
// smm {replications, sim_length, bounds}.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// FNV-1a hash of the canonical JSON dump, hex encoded.
std::string config_hash(const RunConfig& c);
std::string provenance_line(const RunConfig& c);

std::string usage_text();
int dispatch(int argc, char** argv);

}  // namespace nkji
