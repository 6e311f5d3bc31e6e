#include "nkji/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "nkji/data_pipeline.hpp"
#include "nkji/determinacy.hpp"
#include "nkji/econometrics.hpp"
#include "nkji/errors.hpp"
#include "nkji/filter.hpp"
#include "nkji/insecurity.hpp"
#include "nkji/json_util.hpp"
#include "nkji/learning.hpp"
#include "nkji/version.hpp"

namespace nkji {

void RunConfig::validate() const {
    params.validate();
    shocks.validate();
    require(horizon >= 2, "horizon must be >= 2");
    require(threads >= 1, "threads must be >= 1");
    require(horizon_steps >= 1, "insecurity horizon_steps must be >= 1");
    require(delta > 0.0, "insecurity delta must be > 0");
    ji_order_from_name(order);
    require(std::abs(rho_z) < 1.0, "learning rho_z must lie in (-1, 1)");
    de.validate();
    require(replications >= 1, "smm replications must be >= 1");
    require(sim_length >= 4, "smm sim_length must be >= 4");
    require(bound_lo >= 0.0 && bound_hi <= 0.999 && bound_lo < bound_hi, "smm bounds must lie in [0, 0.999]");
}

nlohmann::json RunConfig::to_json() const {
    return {{"params", params_to_json(params)},
            {"shocks", shocks_to_json(shocks)},
            {"regime", regime_name(regime)},
            {"horizon", horizon},
            {"burn_in", burn_in},
            {"seed", seed},
            {"threads", threads},
            {"insecurity", {{"horizon_steps", horizon_steps}, {"delta", delta}, {"order", order}}},
            {"learning", {{"rho_z", rho_z}}},
            {"de",
             {{"population", de.population},
              {"F", de.F},
              {"CR", de.CR},
              {"max_generations", de.max_generations},
              {"tolerance", de.tolerance},
              {"seed", de.seed},
              {"polish", de.polish}}},
            {"smm", {{"replications", replications}, {"sim_length", sim_length}, {"bounds", {bound_lo, bound_hi}}}}};
}

RunConfig config_from_json(const nlohmann::json& j) {
    check_keys(j, {"params", "shocks", "regime", "horizon", "burn_in", "seed", "threads", "insecurity", "learning", "de",
                   "smm"},
               "config");
    RunConfig c;
    if (j.contains("params")) c.params = params_from_json(j["params"]);
    if (j.contains("shocks")) {
        c.shocks = shocks_from_json(j["shocks"]);
        c.shocks_given = true;
    }
    std::string regime = "fi";
    read_opt(j, "regime", regime, "config");
    c.regime = regime_from_name(regime);
    if (!c.shocks_given) c.shocks = calibrated_shocks(c.regime == Regime::FI ? 1 : 2);
    read_opt(j, "horizon", c.horizon, "config");
    read_opt(j, "burn_in", c.burn_in, "config");
    read_opt(j, "seed", c.seed, "config");
    read_opt(j, "threads", c.threads, "config");
    if (j.contains("insecurity")) {
        const auto& s = j["insecurity"];
        check_keys(s, {"horizon_steps", "delta", "order"}, "config.insecurity");
        read_opt(s, "horizon_steps", c.horizon_steps, "config.insecurity");
        read_opt(s, "delta", c.delta, "config.insecurity");
        read_opt(s, "order", c.order, "config.insecurity");
    }
    if (j.contains("learning")) {
        check_keys(j["learning"], {"rho_z"}, "config.learning");
        read_opt(j["learning"], "rho_z", c.rho_z, "config.learning");
    }
    if (j.contains("de")) {
        const auto& d = j["de"];
        check_keys(d, {"population", "F", "CR", "max_generations", "tolerance", "seed", "polish"}, "config.de");
        read_opt(d, "population", c.de.population, "config.de");
        read_opt(d, "F", c.de.F, "config.de");
        read_opt(d, "CR", c.de.CR, "config.de");
        read_opt(d, "max_generations", c.de.max_generations, "config.de");
        read_opt(d, "tolerance", c.de.tolerance, "config.de");
        read_opt(d, "seed", c.de.seed, "config.de");
        read_opt(d, "polish", c.de.polish, "config.de");
    }
    if (j.contains("smm")) {
        const auto& s = j["smm"];
        check_keys(s, {"replications", "sim_length", "bounds"}, "config.smm");
        read_opt(s, "replications", c.replications, "config.smm");
        read_opt(s, "sim_length", c.sim_length, "config.smm");
        if (s.contains("bounds")) {
            std::vector<double> b;
            read_opt(s, "bounds", b, "config.smm");
            require(b.size() == 2, "config.smm.bounds must be [lo, hi]");
            c.bound_lo = b[0];
            c.bound_hi = b[1];
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
    const std::string s = c.to_json().dump();
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string provenance_line(const RunConfig& c) {
    return std::string("# nkji ") + kVersion + " config_hash=" + config_hash(c) + " seed=" + std::to_string(c.seed);
}

std::string usage_text() {
    return "usage: nkji <command> [options]\n"
           "commands:\n"
           "  simulate     simulate paths under a regime\n"
           "  determinacy  Blanchard-Kahn status and sunspot roots\n"
           "  learning     T-map fixed point and E-stability\n"
           "  filter       Kalman filter a signal series\n"
           "  insecurity   job-insecurity index along a simulated path\n"
           "  estimate     SMM estimation of the shock persistences\n"
           "  ingest       transform quarterly CSV series\n"
           "  validate     regression and diagnostics on standardized series\n"
           "run 'nkji <command> --help' for options\n";
}

namespace {

struct Common {
    std::string config, out;
    std::optional<uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> regime;
};

void add_common(CLI::App* sub, Common& c, bool with_regime) {
    sub->add_option("--config", c.config, "JSON configuration file");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--threads", c.threads, "worker thread cap");
    if (with_regime) sub->add_option("--regime", c.regime, "fi or ai");
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.threads) cfg.threads = *c.threads;
    if (c.regime) {
        cfg.regime = regime_from_name(*c.regime);
        // Without explicit shocks take the calibration column matching the regime.
        if (!cfg.shocks_given) cfg.shocks = calibrated_shocks(cfg.regime == Regime::FI ? 1 : 2);
    }
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
    if (!out) throw NumericalError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Impulse parse_impulse(const std::string& s) {
    const auto eq = s.find('='), at = s.find('@');
    if (eq == std::string::npos || at == std::string::npos || at < eq)
        throw ValidationError("impulse must be <shock>=<size>@<t>: '" + s + "'");
    Impulse im;
    const auto sh = shock_from_name(s.substr(0, eq));
    if (!sh) throw ValidationError("unknown shock in impulse '" + s + "'");
    im.shock = *sh;
    try {
        im.size = std::stod(s.substr(eq + 1, at - eq - 1));
        const long t = std::stol(s.substr(at + 1));
        if (t < 0) throw std::invalid_argument("negative");
        im.t = static_cast<std::size_t>(t);
    } catch (const std::exception&) {
        throw ValidationError("bad impulse '" + s + "'");
    }
    return im;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string determinacy_row(const StructuralParams& p) {
    const StructuralSystem sys = build_system(p);
    const DeterminacyReport r = blanchard_kahn(sys);
    const SunspotReport sp = find_sunspot(p);
    std::ostringstream os;
    os << fmt(p.alpha_pi) << ',' << fmt(sys.trace()) << ',' << fmt(sys.det());
    for (const auto& e : r.eigenvalues) os << ',' << fmt(e.real()) << ',' << fmt(e.imag()) << ',' << fmt(std::abs(e));
    os << ',' << r.n_explosive << ',' << determinacy_name(r.status) << ',' << (sp.exists ? "true" : "false") << ',';
    for (std::size_t i = 0; i < sp.roots.size(); ++i) os << (i ? ";" : "") << fmt(sp.roots[i]);
    os << '\n';
    return os.str();
}

int run_determinacy(const Common& c, const std::string& sweep) {
    RunConfig cfg = resolve(c);
    cfg.validate();
    std::ostringstream os;
    os << provenance_line(cfg) << '\n';
    os << "alpha_pi,trace,det,eig1_re,eig1_im,eig1_mod,eig2_re,eig2_im,eig2_mod,n_explosive,status,sunspot_exists,"
          "sunspot_roots\n";
    if (sweep.empty()) {
        os << determinacy_row(cfg.params);
    } else {
        const std::string key = "alpha_pi=";
        if (sweep.rfind(key, 0) != 0) throw ValidationError("sweep must be alpha_pi=lo:hi:n");
        std::istringstream ss(sweep.substr(key.size()));
        std::string a, b, n;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, n, ':');
        double lo, hi;
        long cnt;
        try {
            lo = std::stod(a);
            hi = std::stod(b);
            cnt = std::stol(n);
        } catch (const std::exception&) {
            throw ValidationError("sweep must be alpha_pi=lo:hi:n");
        }
        require(cnt >= 1 && lo <= hi, "sweep needs n >= 1 and lo <= hi");
        for (long i = 0; i < cnt; ++i) {
            StructuralParams p = cfg.params;
            p.alpha_pi = cnt == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cnt - 1);
            p.validate();
            os << determinacy_row(p);
        }
    }
    emit(c.out, os.str());
    return kExitOk;
}

int run_simulate(const Common& c, std::optional<std::size_t> horizon, const std::vector<std::string>& impulses) {
    RunConfig cfg = resolve(c);
    if (horizon) cfg.horizon = *horizon;
    cfg.validate();
    SimOptions opt;
    opt.burn_in = cfg.burn_in;
    for (const auto& s : impulses) opt.impulses.push_back(parse_impulse(s));
    for (const auto& im : opt.impulses) require(im.t < cfg.horizon, "impulse date beyond the horizon");
    const PathSet ps = simulate_paths(cfg.params, cfg.shocks, cfg.regime, cfg.horizon, cfg.seed, opt);
    emit(c.out, provenance_line(cfg) + " regime=" + regime_name(cfg.regime) + '\n' + pathset_csv(ps));
    return kExitOk;
}

nlohmann::json mat_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> r(m.cols());
        for (Eigen::Index j = 0; j < m.cols(); ++j) r[j] = m(i, j);
        rows.push_back(r);
    }
    return rows;
}

int run_learning(const Common& c) {
    RunConfig cfg = resolve(c);
    cfg.validate();
    const StructuralSystem sys = build_system(cfg.params);
    const TMapFixedPoint fp = t_map_fixed_point(sys);
    const OdeTrajectory ode =
        ode_convergence_check(Eigen::Matrix2d::Zero(), Eigen::Matrix<double, 2, 5>::Zero(), sys, 10.0);
    const auto& s = cfg.shocks;
    const EStabilityReport es = sunspot_e_stability(
        sys, {s.rho(Shock::eps_pi), s.rho(Shock::eps_i), 0.0, s.rho(Shock::q), s.rho(Shock::eps_b), 0.0,
              s.rho(Shock::g), cfg.rho_z});
    nlohmann::json traj = nlohmann::json::array();
    for (double t : {1.0, 5.0, 10.0}) {
        const std::size_t i = static_cast<std::size_t>(std::lround(t / 0.01));
        traj.push_back({{"t", t}, {"deviation", ode.deviation.at(i)}, {"relative", ode.deviation.at(i) / ode.deviation[0]}});
    }
    nlohmann::json out = {{"provenance", {{"version", kVersion}, {"config_hash", config_hash(cfg)}, {"seed", cfg.seed}}},
                          {"k1_star", mat_json(fp.k1_star)},
                          {"k2_star", mat_json(fp.k2_star)},
                          {"ode", traj},
                          {"determinacy", determinacy_name(blanchard_kahn(sys).status)},
                          {"rho_z", cfg.rho_z},
                          {"max_real_part", es.max_real_part},
                          {"max_modulus", es.max_modulus},
                          {"e_stable", es.e_stable}};
    emit(c.out, out.dump(2) + '\n');
    return kExitOk;
}

// Two-column CSV (label, value) with a header line; '#' lines are skipped.
std::vector<double> read_value_column(const std::string& path) {
    std::istringstream is(read_text(path));
    std::string line;
    std::vector<double> v;
    int lineno = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": expected two fields");
        const std::string cell = line.substr(comma + 1);
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(cell, &pos));
            if (pos != cell.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("line " + std::to_string(lineno) + ": bad number '" + cell + "'");
        }
    }
    require(!v.empty(), "no observations in '" + path + "'");
    return v;
}

int run_filter(const Common& c, const std::string& in) {
    RunConfig cfg = resolve(c);
    cfg.validate();
    require(!in.empty(), "filter needs --in");
    const std::vector<double> a = read_value_column(in);
    const SignalModel m = SignalModel::from_shocks(cfg.shocks);
    const FilterGain g = steady_state_gain(m);
    const FilteredPath fp = run_filter(m, g, a);
    std::ostringstream os;
    os.precision(17);
    os << provenance_line(cfg) << " K=" << g.steady_K(0) << ';' << g.steady_K(1) << '\n';
    os << "t,a,q_hat,eb_hat,innovation,innovation_var\n";
    for (std::size_t t = 0; t < a.size(); ++t)
        os << t << ',' << a[t] << ',' << fp.q_hat[t] << ',' << fp.eb_hat[t] << ',' << fp.innovations[t] << ','
           << fp.innovation_var[t] << '\n';
    emit(c.out, os.str());
    return kExitOk;
}

int run_insecurity(const Common& c, std::optional<int> steps, std::optional<std::string> order,
                   std::optional<std::size_t> horizon) {
    RunConfig cfg = resolve(c);
    if (steps) cfg.horizon_steps = *steps;
    if (order) cfg.order = *order;
    if (horizon) cfg.horizon = *horizon;
    cfg.validate();
    SimOptions opt;
    opt.burn_in = cfg.burn_in;
    const PathSet ps = simulate_paths(cfg.params, cfg.shocks, cfg.regime, cfg.horizon, cfg.seed, opt);
    const ReducedForm rf = fi_reduced_form(cfg.params, cfg.shocks);
    const StateSpaceSolution sol = solve_regime(cfg.params, cfg.shocks, cfg.regime);
    const InsecuritySeries js =
        ji_series(ps, sol, rf, cfg.horizon_steps, cfg.delta, ji_order_from_name(cfg.order));
    emit(c.out, provenance_line(cfg) + " regime=" + regime_name(cfg.regime) + '\n' + insecurity_csv(js));
    return kExitOk;
}

int run_estimate(const Common& c, const std::string& targets, const std::string& trace) {
    RunConfig cfg = resolve(c);
    cfg.validate();
    require(!targets.empty(), "estimate needs --targets");
    SmmProblem pr;
    pr.targets = moments_from_csv(read_text(targets));
    pr.bounds.fill({cfg.bound_lo, cfg.bound_hi});
    pr.replications = cfg.replications;
    pr.sim_length = cfg.sim_length;
    pr.burn_in = cfg.burn_in;
    pr.regime = cfg.regime;
    pr.params = cfg.params;
    pr.shocks = cfg.shocks;
    pr.seed = cfg.seed;
    DeConfig de = cfg.de;
    de.threads = cfg.threads;
    const EstimateReport rep = estimate_report(pr, de);
    emit(c.out, provenance_line(cfg) + " regime=" + regime_name(cfg.regime) + '\n' + report_csv(rep));
    if (!trace.empty()) {
        std::vector<std::string> names(kThetaNames.begin(), kThetaNames.end());
        emit(trace, provenance_line(cfg) + '\n' + de_trace_csv(rep.de, names));
    }
    return kExitOk;
}

int run_ingest(const std::string& in, const std::string& transform, const std::string& stock, const std::string& out,
               int lead, int lags) {
    require(!in.empty(), "ingest needs --in");
    std::string text = "# nkji " + std::string(kVersion) + " transform=" + transform + '\n';
    if (transform == "survey") {
        text += series_csv(survey_index(read_survey_csv(read_text(in))));
    } else {
        const QuarterlySeries s = read_series_file(in);
        if (transform == "hamilton")
            text += series_csv(hamilton_filter(s, lead, lags).cycle);
        else if (transform == "intensity")
            text += series_csv(intensity_from_probability(s));
        else if (transform == "standardize")
            text += series_csv(demean_standardize(s, lead, lags));
        else if (transform == "probability") {
            require(!stock.empty(), "probability transform needs --stock");
            text += series_csv(transition_probability(s, read_series_file(stock)));
        } else
            throw ValidationError("unknown transform '" + transform + "'");
    }
    emit(out, text);
    return kExitOk;
}

// Aligns series on their common quarter range.
std::vector<NamedSeries> align(const std::vector<QuarterlySeries>& ss) {
    int lo = ss[0].quarters.front().index(), hi = ss[0].quarters.back().index();
    for (const auto& s : ss) {
        s.validate();
        lo = std::max(lo, s.quarters.front().index());
        hi = std::min(hi, s.quarters.back().index());
    }
    require(hi >= lo, "series share no common quarters");
    std::vector<NamedSeries> out;
    for (const auto& s : ss) {
        const int off = lo - s.quarters.front().index();
        out.push_back({s.name, std::vector<double>(s.values.begin() + off, s.values.begin() + off + (hi - lo + 1))});
    }
    return out;
}

std::string stem(const std::string& path) {
    auto b = path.find_last_of('/');
    std::string f = b == std::string::npos ? path : path.substr(b + 1);
    auto d = f.find_last_of('.');
    return d == std::string::npos ? f : f.substr(0, d);
}

int run_validate(const std::string& y, const std::vector<std::string>& x, const std::vector<std::string>& z,
                 const std::string& out, int adf_lags, int lb_lags) {
    require(!y.empty() && !x.empty(), "validate needs --y and at least one --x");
    std::vector<QuarterlySeries> all;
    auto load = [&](const std::string& p) {
        QuarterlySeries s = read_series_file(p);
        s.name = stem(p);
        all.push_back(s);
    };
    load(y);
    for (const auto& p : x) load(p);
    for (const auto& p : z) load(p);
    const auto al = align(all);
    const std::vector<NamedSeries> xs(al.begin() + 1, al.begin() + 1 + static_cast<long>(x.size()));
    const std::vector<NamedSeries> zs(al.begin() + 1 + static_cast<long>(x.size()), al.end());
    nlohmann::json rep = validation_report(al[0], xs, zs, adf_lags, lb_lags);
    rep["provenance"] = {{"version", kVersion}};
    emit(out, rep.dump(2) + '\n');
    return kExitOk;
}

bool known_command(const std::string& s) {
    static const char* cmds[] = {"simulate", "determinacy", "learning", "filter",
                                 "insecurity", "estimate", "ingest", "validate"};
    for (const char* c : cmds)
        if (s == c) return true;
    return false;
}

}  // namespace

int dispatch(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << usage_text();
        return kExitUsage;
    }
    const std::string first = argv[1];
    if (first == "--help" || first == "-h") {
        std::cout << usage_text();
        return kExitOk;
    }
    if (first == "--version") {
        std::cout << "nkji " << kVersion << '\n';
        return kExitOk;
    }
    if (!known_command(first)) {
        std::cerr << "unknown command '" << first << "'\n" << usage_text();
        return kExitUsage;
    }

    CLI::App app{"nkji"};
    app.require_subcommand(1);
    Common c;

    auto* det = app.add_subcommand("determinacy", "Blanchard-Kahn status and sunspot roots");
    add_common(det, c, false);
    std::string sweep;
    det->add_option("--sweep", sweep, "alpha_pi=lo:hi:n");

    auto* sim = app.add_subcommand("simulate", "simulate paths");
    add_common(sim, c, true);
    std::optional<std::size_t> horizon;
    std::vector<std::string> impulses;
    sim->add_option("--horizon", horizon, "reported periods");
    sim->add_option("--impulse", impulses, "<shock>=<size>@<t>");

    auto* lrn = app.add_subcommand("learning", "T-map fixed point and E-stability");
    add_common(lrn, c, false);

    auto* flt = app.add_subcommand("filter", "Kalman filter a signal");
    add_common(flt, c, false);
    std::string in;
    flt->add_option("--in", in, "signal CSV");

    auto* ins = app.add_subcommand("insecurity", "job-insecurity index");
    add_common(ins, c, true);
    std::optional<int> steps;
    std::optional<std::string> order;
    std::optional<std::size_t> ins_horizon;
    ins->add_option("--horizon-steps", steps, "forecast steps H");
    ins->add_option("--order", order, "mean or second");
    ins->add_option("--horizon", ins_horizon, "simulated periods");

    auto* est = app.add_subcommand("estimate", "SMM estimation");
    add_common(est, c, true);
    std::string targets, trace;
    est->add_option("--targets", targets, "moment targets CSV");
    est->add_option("--trace", trace, "DE trace CSV");

    auto* ing = app.add_subcommand("ingest", "transform quarterly series");
    std::string ing_in, transform, stock, ing_out;
    int lead = 8, lags = 4;
    ing->add_option("--in", ing_in, "input CSV")->required();
    ing->add_option("--transform", transform, "hamilton|intensity|survey|standardize|probability")->required();
    ing->add_option("--stock", stock, "stock CSV for the probability transform");
    ing->add_option("--out", ing_out, "output CSV");
    ing->add_option("--lead", lead, "Hamilton lead");
    ing->add_option("--lags", lags, "Hamilton lags");

    auto* val = app.add_subcommand("validate", "regression diagnostics");
    std::string vy, vout;
    std::vector<std::string> vx, vz;
    int adf_lags = 1, lb_lags = 8;
    val->add_option("--y", vy, "dependent series CSV")->required();
    val->add_option("--x", vx, "regressor CSVs")->required();
    val->add_option("--instruments", vz, "instrument CSVs");
    val->add_option("--out", vout, "report JSON");
    val->add_option("--adf-lags", adf_lags, "ADF augmentation lags");
    val->add_option("--lb-lags", lb_lags, "portmanteau lags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*det) return run_determinacy(c, sweep);
        if (*sim) return run_simulate(c, horizon, impulses);
        if (*lrn) return run_learning(c);
        if (*flt) return run_filter(c, in);
        if (*ins) return run_insecurity(c, steps, order, ins_horizon);
        if (*est) return run_estimate(c, targets, trace);
        if (*ing) return run_ingest(ing_in, transform, stock, ing_out, lead, lags);
        if (*val) return run_validate(vy, vx, vz, vout, adf_lags, lb_lags);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cerr << usage_text();
    return kExitUsage;
}

}  // namespace nkji
