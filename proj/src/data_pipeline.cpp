#include "nkji/data_pipeline.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "nkji/errors.hpp"

namespace nkji {

std::string Quarter::label() const { return std::to_string(year) + "-Q" + std::to_string(q); }

Quarter Quarter::parse(const std::string& s) {
    static const std::regex re(R"(^(\d{4})-Q([1-4])$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw ValidationError("bad quarter label '" + s + "' (expected YYYY-Qn)");
    return {std::stoi(m[1].str()), std::stoi(m[2].str())};
}

Quarter Quarter::next() const { return q == 4 ? Quarter{year + 1, 1} : Quarter{year, q + 1}; }

void QuarterlySeries::validate() const {
    require(quarters.size() == values.size(), name + ": quarter and value counts differ");
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(std::isfinite(values[i]), name + ": non-finite value at " + quarters[i].label());
        if (i > 0)
            require(quarters[i].index() == quarters[i - 1].index() + 1,
                    name + ": quarters not consecutive at " + quarters[i].label());
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ls(line);
    while (std::getline(ls, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, int lineno) {
    // Plain decimal numbers only: no thousands separators, no decimal commas.
    static const std::regex re(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
    if (!std::regex_match(s, re)) throw ValidationError("line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return std::stod(s);
}

struct CsvRows {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> linenos;
};

CsvRows read_rows(const std::string& text) {
    CsvRows out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv(line);
        if (out.header.empty()) {
            out.header = cells;
            continue;
        }
        if (cells.size() != out.header.size())
            throw ValidationError("line " + std::to_string(lineno) + ": expected " + std::to_string(out.header.size()) +
                                  " fields, found " + std::to_string(cells.size()));
        out.rows.push_back(cells);
        out.linenos.push_back(lineno);
    }
    if (out.header.empty()) throw ValidationError("empty CSV input");
    return out;
}

Quarter parse_quarter_at(const std::string& s, int lineno) {
    try {
        return Quarter::parse(s);
    } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    }
}

}  // namespace

QuarterlySeries read_series_csv(const std::string& text, const std::string& name) {
    const CsvRows c = read_rows(text);
    if (c.header != std::vector<std::string>{"quarter", "value"})
        throw ValidationError("header must be 'quarter,value'");
    QuarterlySeries s;
    s.name = name;
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        const int ln = c.linenos[i];
        const Quarter q = parse_quarter_at(c.rows[i][0], ln);
        if (!s.quarters.empty() && q.index() != s.quarters.back().index() + 1)
            throw ValidationError("line " + std::to_string(ln) + ": quarter " + q.label() + " does not follow " +
                                  s.quarters.back().label());
        s.quarters.push_back(q);
        s.values.push_back(parse_number(c.rows[i][1], ln));
    }
    require(!s.values.empty(), "series has no observations");
    return s;
}

QuarterlySeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return read_series_csv(ss.str(), path);
}

std::string series_csv(const QuarterlySeries& s) {
    std::ostringstream os;
    os.precision(17);
    os << "quarter,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) os << s.quarters[i].label() << ',' << s.values[i] << '\n';
    return os.str();
}

HamiltonResult hamilton_filter(const QuarterlySeries& s, int lead, int lags) {
    s.validate();
    require(lead >= 1 && lags >= 1, "Hamilton lead and lags must be >= 1");
    const int n = static_cast<int>(s.size());
    require(n > lead + lags + 10, "series too short for the Hamilton filter");
    const int first = lead + lags - 1;  // first index with a defined cycle
    const int m = n - first;
    Eigen::MatrixXd X(m, lags + 1);
    Eigen::VectorXd y(m);
    for (int r = 0; r < m; ++r) {
        const int t = first + r;
        y[r] = s.values[t];
        X(r, 0) = 1.0;
        for (int j = 0; j < lags; ++j) X(r, j + 1) = s.values[t - lead - j];
    }
    // Scale columns before the rank check so level shifts do not mask collinearity. Fitted
    // values are a projection and stay unique under rank deficiency (e.g. an exact linear
    // trend); only a window with no variation at all is rejected.
    Eigen::VectorXd scale = X.colwise().norm().transpose();
    for (int j = 0; j <= lags; ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Xs);
    cod.setThreshold(1e-10);
    if (cod.rank() < 2) throw ValidationError("collinear regressors in the Hamilton filter");
    Eigen::VectorXd b = cod.solve(y).cwiseQuotient(scale);
    const Eigen::VectorXd fit = X * b;

    HamiltonResult out;
    out.trend.name = s.name + "_trend";
    out.cycle.name = s.name + "_cycle";
    out.trend.unit = out.cycle.unit = s.unit;
    for (int r = 0; r < m; ++r) {
        const Quarter q = s.quarters[first + r];
        out.trend.quarters.push_back(q);
        out.cycle.quarters.push_back(q);
        out.trend.values.push_back(fit[r]);
        out.cycle.values.push_back(y[r] - fit[r]);
    }
    out.coefficients.assign(b.data(), b.data() + b.size());
    return out;
}

QuarterlySeries transition_probability(const QuarterlySeries& flow, const QuarterlySeries& stock) {
    flow.validate();
    stock.validate();
    require(flow.size() == stock.size(), "flow and stock lengths differ");
    QuarterlySeries p;
    p.name = flow.name + "_probability";
    p.quarters = flow.quarters;
    for (std::size_t i = 0; i < flow.size(); ++i) {
        require(flow.quarters[i].index() == stock.quarters[i].index(), "flow and stock quarters differ");
        const double f = flow.values[i], st = stock.values[i];
        require(st > 0.0, "zero or negative stock at " + flow.quarters[i].label());
        require(f >= 0.0 && f <= st, "flow outside [0, stock] at " + flow.quarters[i].label());
        p.values.push_back(f / st);
    }
    return p;
}

double intensity_from_probability(double p) {
    require(p >= 0.0 && p < 1.0, "probability must lie in [0, 1)");
    return -std::log1p(-p);
}

QuarterlySeries intensity_from_probability(const QuarterlySeries& p) {
    QuarterlySeries out = p;
    out.name = p.name + "_intensity";
    for (auto& v : out.values) v = intensity_from_probability(v);
    return out;
}

QuarterlySeries inflation_deviation(const QuarterlySeries& inflation, double annual_target, int periods_per_year) {
    require(periods_per_year >= 1, "periods_per_year must be >= 1");
    QuarterlySeries out = inflation;
    out.name = inflation.name + "_deviation";
    const double target = annual_target / periods_per_year;
    for (auto& v : out.values) v -= target;
    return out;
}

const std::vector<double> kSurveyWeights = {1.0, 0.5, 0.0, -0.5, -1.0};
const std::vector<double> kMatureSurveyWeights = {1.0, 0.5, -0.5, -1.0};

void SurveyShares::validate() const {
    const std::size_t k = mature ? 4 : 5;
    require(levels.size() == quarters.size(), "survey quarter and share counts differ");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string at = quarters[i].label();
        require(levels[i].size() == k, "survey row " + at + " has the wrong number of levels");
        double sum = 0;
        for (double v : levels[i]) {
            require(v >= 0.0 && v <= 100.0, "survey share outside [0, 100] at " + at);
            sum += v;
        }
        require(sum >= 99.0 && sum <= 101.0, "survey shares at " + at + " do not sum to 100");
        if (i > 0) require(quarters[i].index() == quarters[i - 1].index() + 1, "survey quarters not consecutive at " + at);
    }
}

SurveyShares read_survey_csv(const std::string& text) {
    const CsvRows c = read_rows(text);
    SurveyShares s;
    if (c.header == std::vector<std::string>{"quarter", "hi", "mi", "ni", "ld", "sd"})
        s.mature = false;
    else if (c.header == std::vector<std::string>{"quarter", "hi", "mi", "ld", "sd"})
        s.mature = true;
    else
        throw ValidationError("survey header must be 'quarter,hi,mi,ni,ld,sd' or 'quarter,hi,mi,ld,sd'");
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        const int ln = c.linenos[i];
        s.quarters.push_back(parse_quarter_at(c.rows[i][0], ln));
        std::vector<double> row;
        for (std::size_t j = 1; j < c.rows[i].size(); ++j) row.push_back(parse_number(c.rows[i][j], ln));
        s.levels.push_back(row);
        try {
            SurveyShares one{{s.quarters.back()}, {row}, s.mature};
            one.validate();
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(ln) + ": " + e.what());
        }
        if (i > 0 && s.quarters[i].index() != s.quarters[i - 1].index() + 1)
            throw ValidationError("line " + std::to_string(ln) + ": quarters not consecutive");
    }
    return s;
}

QuarterlySeries survey_index(const SurveyShares& s) {
    s.validate();
    const auto& w = s.mature ? kMatureSurveyWeights : kSurveyWeights;
    QuarterlySeries out;
    out.name = "survey_index";
    out.unit = "percentage points";
    out.quarters = s.quarters;
    for (const auto& row : s.levels) {
        double v = 0;
        for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * row[j];
        out.values.push_back(v);
    }
    return out;
}

std::vector<double> standardize(const std::vector<double>& x) {
    require(x.size() >= 2, "standardization needs at least two observations");
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
    require(sd > 0.0 && std::isfinite(sd), "cannot standardize a constant series");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
    // Remove residual rounding in the mean.
    double m2 = 0;
    for (double v : out) m2 += v;
    m2 /= static_cast<double>(out.size());
    for (auto& v : out) v -= m2;
    return out;
}

QuarterlySeries demean_standardize(const QuarterlySeries& s, int lead, int lags) {
    const HamiltonResult h = hamilton_filter(s, lead, lags);
    QuarterlySeries out = h.cycle;
    out.name = s.name + "_std";
    out.unit = "standard deviations";
    out.values = standardize(h.cycle.values);
    return out;
}

}  // namespace nkji
