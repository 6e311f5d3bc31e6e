#pragma once
#include <array>
#include <string>
#include <vector>

#include "solver.hpp"

namespace nkji {

constexpr int kNumMoments = 18;
extern const std::array<const char*, kNumMoments> kMomentNames;

struct MomentVector {
    std::array<double, kNumMoments> value{};
    std::array<bool, kNumMoments> flagged{};  // undefined (constant series)
    bool any_flagged() const;
};

double sample_mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);  // n - 1 denominator
// Lag-1 autocorrelation and correlation of standardized series; NaN when a series is constant.
double acf1(const std::vector<double>& x);
double correlation(const std::vector<double>& x, const std::vector<double>& y);

MomentVector compute_moments(const std::vector<double>& yhat, const std::vector<double>& pihat,
                             const std::vector<double>& shat, const std::vector<double>& u,
                             const std::vector<double>& rhat);
MomentVector compute_moments(const PathSet& ps);

// Averages entries across replications, skipping flagged ones; an entry is flagged only when
// every replication flags it.
MomentVector average_moments(const std::vector<MomentVector>& ms);

std::string moments_csv(const MomentVector& m);
MomentVector moments_from_csv(const std::string& text);

}  // namespace nkji
