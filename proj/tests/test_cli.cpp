#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nkji/cli.hpp"
#include "nkji/moments.hpp"
#include "nkji/smm.hpp"

namespace fs = std::filesystem;

namespace {
std::string cli() {
    const char* p = std::getenv("NKJI_CLI");
    REQUIRE_MESSAGE(p != nullptr, "NKJI_CLI must point at the nkji binary");
    return p;
}

fs::path workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("nkji_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::string& args) {
    static int counter = 0;
    const fs::path o = workdir() / ("stdout_" + std::to_string(counter));
    const fs::path e = workdir() / ("stderr_" + std::to_string(counter++));
    const std::string cmd = cli() + " " + args + " > " + o.string() + " 2> " + e.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

fs::path config(const std::string& name, const nlohmann::json& j) {
    const fs::path p = workdir() / name;
    write(p, j.dump(2));
    return p;
}

std::string series_text(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    os << "quarter,value\n";
    int year = 2000, q = 1;
    for (double x : v) {
        os << year << "-Q" << q << ',' << x << '\n';
        if (++q == 5) {
            q = 1;
            ++year;
        }
    }
    return os.str();
}

std::vector<double> walk(uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    double acc = 0;
    for (double& x : v) x = acc += nd(rng);
    return v;
}
}  // namespace

TEST_CASE("no arguments prints usage and exits 64") {
    const Run r = run("");
    CHECK(r.code == nkji::kExitUsage);
    CHECK(r.err.find("usage") != std::string::npos);
}

TEST_CASE("help, version and unknown commands") {
    CHECK(run("--help").code == 0);
    const Run v = run("--version");
    CHECK(v.code == 0);
    CHECK(v.out.find("1.0.0") != std::string::npos);
    CHECK(run("frobnicate").code == nkji::kExitUsage);
    CHECK(run("simulate --no-such-flag").code == nkji::kExitValidation);
}

TEST_CASE("determinacy at the baseline and passive calibrations") {
    const Run a = run("determinacy --config " + config("active.json", {{"params", {{"alpha_pi", 1.15}}}}).string());
    CHECK(a.code == 0);
    CHECK(a.out.rfind("# nkji 1.0.0 config_hash=", 0) == 0);
    CHECK(a.out.find(",Determinate,") != std::string::npos);
    const Run p = run("determinacy --config " + config("passive.json", {{"params", {{"alpha_pi", 0.85}}}}).string());
    CHECK(p.code == 0);
    CHECK(p.out.find(",Indeterminate,true,") != std::string::npos);
}

TEST_CASE("determinacy sweep") {
    const Run r = run("determinacy --sweep alpha_pi=0.8:1.2:5");
    CHECK(r.code == 0);
    int rows = 0;
    std::istringstream is(r.out);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#' && line.rfind("alpha_pi", 0) != 0) ++rows;
    CHECK(rows == 5);
    CHECK(run("determinacy --sweep alpha_pi=1.2:0.8").code == nkji::kExitValidation);
}

TEST_CASE("simulate is byte-identical for a fixed seed") {
    const fs::path a = workdir() / "sim_a.csv", b = workdir() / "sim_b.csv", c = workdir() / "sim_c.csv";
    CHECK(run("simulate --regime ai --seed 7 --out " + a.string()).code == 0);
    CHECK(run("simulate --regime ai --seed 7 --out " + b.string()).code == 0);
    CHECK(run("simulate --regime ai --seed 8 --out " + c.string()).code == 0);
    const std::string sa = slurp(a);
    CHECK(!sa.empty());
    CHECK(sa == slurp(b));
    CHECK(sa != slurp(c));
    CHECK(sa.find("seed=7") != std::string::npos);
}

TEST_CASE("simulate flags override the config") {
    const fs::path cfg = config("sim.json", {{"horizon", 20}, {"seed", 3}});
    const Run r = run("simulate --config " + cfg.string() + " --horizon 12 --impulse eps_i=1@2");
    CHECK(r.code == 0);
    int rows = 0;
    std::istringstream is(r.out);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 13);  // header plus 12 periods
    CHECK(run("simulate --impulse nope=1@2").code == nkji::kExitValidation);
}

TEST_CASE("invalid configuration exits 1") {
    CHECK(run("simulate --config " + config("bad_key.json", {{"sede", 3}}).string()).code == nkji::kExitValidation);
    CHECK(run("simulate --config " + config("bad_param.json", {{"params", {{"beta", 1.5}}}}).string()).code ==
          nkji::kExitValidation);
    const fs::path broken = workdir() / "broken.json";
    write(broken, "{ not json");
    CHECK(run("simulate --config " + broken.string()).code == nkji::kExitValidation);
    CHECK(run("simulate --config " + (workdir() / "missing.json").string()).code == nkji::kExitValidation);
    CHECK(run("simulate --regime xi").code == nkji::kExitValidation);
}

TEST_CASE("learning emits JSON") {
    const Run r = run("learning --config " + config("learn.json", {{"params", {{"alpha_pi", 0.85}}}}).string());
    CHECK(r.code == 0);
    const auto pos = r.out.find('{');
    REQUIRE(pos != std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(r.out.substr(pos));
    CHECK(j.is_object());
}

TEST_CASE("filter on a signal file") {
    const fs::path in = workdir() / "signal.csv";
    std::ostringstream os;
    os << "t,a\n";
    for (int t = 0; t < 30; ++t) os << t << ',' << std::sin(0.3 * t) << '\n';
    write(in, os.str());
    const std::string before = slurp(in);
    const Run r = run("filter --in " + in.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("t,a,q_hat,eb_hat,innovation,innovation_var\n") != std::string::npos);
    CHECK(slurp(in) == before);
    write(workdir() / "bad_signal.csv", "t,a\n0,abc\n");
    const Run bad = run("filter --in " + (workdir() / "bad_signal.csv").string());
    CHECK(bad.code == nkji::kExitValidation);
    CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("insecurity output columns") {
    const Run r = run("insecurity --regime fi --horizon-steps 8 --order second --horizon 20");
    CHECK(r.code == 0);
    CHECK(r.out.find("t,lambda,mu,sigma2,ji\n") != std::string::npos);
    CHECK(run("insecurity --order third").code == nkji::kExitValidation);
    CHECK(run("insecurity --horizon-steps 0").code == nkji::kExitValidation);
}

TEST_CASE("estimate on self-generated targets") {
    nkji::SmmProblem p;
    p.replications = 2;
    p.targets = nkji::SmmSimulator(p).moments(p.theta_of(p.shocks));
    const fs::path t = workdir() / "targets.csv";
    write(t, nkji::moments_csv(p.targets));
    const fs::path cfg = config(
        "est.json", {{"seed", p.seed},
                     {"de", {{"population", 12}, {"max_generations", 3}, {"polish", false}}},
                     {"smm", {{"replications", 2}}}});
    const fs::path out = workdir() / "report.csv", trace = workdir() / "trace.csv";
    const Run r = run("estimate --config " + cfg.string() + " --targets " + t.string() + " --out " + out.string() +
                      " --trace " + trace.string());
    CHECK(r.code == 0);
    const std::string rep = slurp(out);
    CHECK(rep.find("moment,observed,estimated,difference,flagged") != std::string::npos);
    CHECK(slurp(trace).find("generation,best_objective,rho_eps_pi") != std::string::npos);
    CHECK(run("estimate --config " + cfg.string()).code == nkji::kExitValidation);
}

TEST_CASE("ingest transforms") {
    const fs::path in = workdir() / "gdp.csv";
    write(in, series_text(walk(1, 80)));
    const Run h = run("ingest --in " + in.string() + " --transform hamilton");
    CHECK(h.code == 0);
    CHECK(h.out.find("quarter,value\n2002-Q4,") != std::string::npos);
    CHECK(run("ingest --in " + in.string() + " --transform standardize").code == 0);
    CHECK(run("ingest --in " + in.string() + " --transform bogus").code == nkji::kExitValidation);

    const fs::path p = workdir() / "prob.csv";
    write(p, "quarter,value\n2001-Q1,0.03\n2001-Q2,0\n");
    const Run i = run("ingest --in " + p.string() + " --transform intensity");
    CHECK(i.code == 0);
    CHECK(i.out.find("2001-Q1,0.0304592") != std::string::npos);

    const fs::path s = workdir() / "survey.csv";
    write(s, "quarter,hi,mi,ni,ld,sd\n2010-Q1,40,30,20,7,3\n");
    const Run sv = run("ingest --in " + s.string() + " --transform survey");
    CHECK(sv.code == 0);
    CHECK(sv.out.find("2010-Q1,48.5") != std::string::npos);

    const fs::path bad = workdir() / "gap.csv";
    write(bad, "quarter,value\n2001-Q1,1\n2001-Q3,2\n");
    const Run b = run("ingest --in " + bad.string() + " --transform intensity");
    CHECK(b.code == nkji::kExitValidation);
    CHECK(b.err.find("line 3") != std::string::npos);
}

TEST_CASE("validate writes a JSON report") {
    const fs::path y = workdir() / "y.csv", a = workdir() / "a.csv", b = workdir() / "b.csv";
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    std::vector<double> va(86), vb(86), vy(86);
    for (int i = 0; i < 86; ++i) {
        va[i] = nd(rng);
        vb[i] = nd(rng);
        vy[i] = -0.4 * va[i] + 0.5 * vb[i] + 0.5 * nd(rng);
    }
    write(y, series_text(vy));
    write(a, series_text(va));
    write(b, series_text(vb));
    const fs::path out = workdir() / "report.json";
    const Run r = run("validate --y " + y.string() + " --x " + a.string() + " " + b.string() + " --out " + out.string());
    CHECK(r.code == 0);
    std::string text = slurp(out);
    const auto pos = text.find('{');
    REQUIRE(pos != std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(text.substr(pos));
    CHECK(j["n"] == 86);
    CHECK(std::abs(j["coefficients"][0]["estimate"].get<double>()) < 1e-12);
}
