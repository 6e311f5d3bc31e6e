#pragma once
#include <string>
#include <vector>

namespace nkji {

struct Quarter {
    int year = 0;
    int q = 1;  // 1..4
    int index() const { return year * 4 + (q - 1); }
    std::string label() const;
    static Quarter parse(const std::string& s);  // YYYY-Qn
    Quarter next() const;
};

struct QuarterlySeries {
    std::string name;
    std::string unit;
    std::vector<Quarter> quarters;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    void validate() const;  // consecutive quarters, finite values
};

QuarterlySeries read_series_csv(const std::string& text, const std::string& name = "series");
QuarterlySeries read_series_file(const std::string& path);
std::string series_csv(const QuarterlySeries& s);

struct HamiltonResult {
    QuarterlySeries trend;
    QuarterlySeries cycle;
    std::vector<double> coefficients;  // constant, then y_t, ..., y_{t-lags+1}
};
HamiltonResult hamilton_filter(const QuarterlySeries& s, int lead = 8, int lags = 4);

QuarterlySeries transition_probability(const QuarterlySeries& flow, const QuarterlySeries& stock);
double intensity_from_probability(double p);
QuarterlySeries intensity_from_probability(const QuarterlySeries& p);

// Actual inflation minus an annual target expressed at the series' frequency.
QuarterlySeries inflation_deviation(const QuarterlySeries& inflation, double annual_target = 0.02,
                                    int periods_per_year = 4);

struct SurveyShares {
    std::vector<Quarter> quarters;
    // Percent shares per answer level, highest increase first.
    std::vector<std::vector<double>> levels;
    bool mature = false;  // four-level item without the neutral answer
    void validate() const;
};

extern const std::vector<double> kSurveyWeights;        // HI, MI, NI, LD, SD
extern const std::vector<double> kMatureSurveyWeights;  // four levels

SurveyShares read_survey_csv(const std::string& text);
QuarterlySeries survey_index(const SurveyShares& s);

// Standardizes a series to zero mean and unit sample standard deviation.
std::vector<double> standardize(const std::vector<double>& x);
// Hamilton cycle followed by standardization.
QuarterlySeries demean_standardize(const QuarterlySeries& s, int lead = 8, int lags = 4);

}  // namespace nkji
