#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int rc = -1;
    std::string out, err;
    json j() const { return json::parse(out); }
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

// env entries are "NAME=value"; every PPELIM_ variable not listed is cleared
Run run(const std::vector<std::string>& args, const std::vector<std::string>& env = {}) {
    static int n = 0;
    fs::path err = fs::temp_directory_path() / ("ppelim-cli-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::string cmd = "env";
    for (const char* v : {"PPELIM_FIELD", "PPELIM_SIGNATURE", "PPELIM_NORM_BOUND", "PPELIM_BOX", "PPELIM_FLOOR",
                          "PPELIM_LMFDB_URL", "PPELIM_CACHE_DIR", "PPELIM_FIXTURES", "PPELIM_OFFLINE"})
        cmd += std::string(" -u ") + v;
    for (const std::string& e : env) cmd += " " + quote(e);
    cmd += " " + quote(PPELIM_CLI);
    for (const std::string& a : args) cmd += " " + quote(a);
    cmd += " 2>" + quote(err.string());
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f);
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, k);
    int st = pclose(f);
    r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    r.err = ss.str();
    fs::remove(err);
    return r;
}

std::string fx() { return testutil::fixtures(); }

long max_aux_norm(const json& j) {
    long best = 0;
    for (const auto& q : j["auxiliary_primes"]) {
        std::string s = q.get<std::string>();
        best = std::max(best, std::stol(s.substr(0, s.find('.'))));
    }
    return best;
}

}  // namespace

TEST_CASE("bounds examples") {
    Run a = run({"bounds", "--field", "-11", "--signature", "ppq2-effective", "--fixtures", fx()});
    CHECK(a.rc == 0);
    CHECK(a.j()["C_K"] == 17);
    Run b = run({"bounds", "--field", "19", "--signature", "ppq2-effective", "--fixtures", fx()});
    CHECK(b.rc == 0);
    CHECK(b.j()["C_K"] == 19);
    CHECK(b.j()["excluded"] == json::array({19}));
}

TEST_CASE("eliminate flags the d = 14 cubic form for inertia") {
    Run r = run({"eliminate", "--field", "14", "--signature", "ppq3", "--fixtures", fx()});
    CHECK(r.rc == 0);
    json j = r.j();
    REQUIRE(j["inertia_flagged"].size() == 1);
    std::string curve = j["inertia_flagged"][0]["curve"];
    CHECK(curve.rfind("2.2.56-14.1", 0) == 0);
    CHECK(j["inertia_flagged"][0]["eliminated"] == true);
    CHECK_FALSE(j.contains("C_K"));
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    std::vector<std::string> args{"bounds", "--fixtures", fx()};
    Run a = run(args);
    Run b = run(args);
    auto t = args;
    t.insert(t.end(), {"--threads", "4"});
    Run c = run(t);
    CHECK(a.rc == b.rc);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK_FALSE(a.out.empty());
    CHECK(a.out.back() == '\n');
    CHECK(a.j()["cases"].size() >= 10);
    auto md = args;
    md.insert(md.end(), {"--format", "md"});
    Run m1 = run(md), m2 = run(md);
    CHECK(m1.out == m2.out);
    CHECK(m1.out.find("| level |") != std::string::npos);
}

TEST_CASE("canonical JSON") {
    Run r = run({"frey", "--field", "3", "--signature", "ppq2-effective", "--d", "3", "--p", "3", "--a", "1", "--b", "2",
                 "--c", "5"});
    REQUIRE(r.rc == 0);
    json j = r.j();
    CHECK(r.out == j.dump(1) + "\n");
    // a4 = 3/8 as a reduced rational string
    CHECK(r.out.find("\"3/8\"") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({"bounds", "--field", "-11", "--fixtures", fx()}).rc == 0);
    Run neg = run({"sunit", "--mode", "descent", "--q", "13", "--ell", "29"});
    CHECK(neg.rc == 2);
    CHECK(neg.j()["holds"] == false);
    CHECK(run({"sunit", "--mode", "descent", "--q", "13", "--ell", "37"}).rc == 0);
    Run unknown = run({"fetch", "--field-label", "2.0.11.1", "--level", "11.2", "--kind", "BIANCHI", "--offline",
                       "--cache-dir", fx() + "/newforms"});
    CHECK(unknown.rc == 2);

    Run bad = run({"frey", "--field", "3", "--signature", "ppq2-effective", "--d", "3", "--p", "3", "--a", "1", "--b",
                   "2", "--c", "5+"});
    CHECK(bad.rc == 1);
    CHECK(bad.err.find("--c") != std::string::npos);
    CHECK(run({"frey", "--field", "3", "--signature", "ppq2-effective", "--d", "3", "--p", "3", "--a", "1", "--b", "2",
               "--c", "6"})
              .rc == 1);
    CHECK(run({"bounds", "--bogus"}).rc == 1);
    CHECK(run({}).rc == 1);
    CHECK(run({"bounds", "--field", "4", "--fixtures", fx()}).rc == 1);
    CHECK(run({"bounds", "--field", "-11", "--norm-bound", "0", "--fixtures", fx()}).rc == 1);
    CHECK(run({"bounds", "--field", "-11", "--fixtures", "/nonexistent"}).rc == 1);
    Run off = run({"fetch", "--field-label", "2.0.11.1", "--level", "3.1", "--kind", "BIANCHI", "--offline",
                   "--cache-dir", fx() + "/newforms"});
    CHECK(off.rc == 1);
    CHECK_FALSE(off.err.empty());
}

TEST_CASE("configuration precedence: flags > file > env > defaults") {
    fs::path dir = testutil::scratch_dir("cli");
    fs::path cfg = dir / "run.ini";
    {
        std::ofstream o(cfg);
        o << "norm-bound=40\n";
    }
    std::vector<std::string> base{"eliminate", "--field", "-11", "--signature", "ppq2-effective", "--fixtures", fx()};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };
    CHECK(max_aux_norm(run(base).j()) == 49);
    CHECK(max_aux_norm(run(base, {"PPELIM_NORM_BOUND=30"}).j()) == 23);
    CHECK(max_aux_norm(run(with({"--config", cfg.string()}), {"PPELIM_NORM_BOUND=30"}).j()) == 37);
    CHECK(max_aux_norm(run(with({"--config", cfg.string(), "--norm-bound", "20"}), {"PPELIM_NORM_BOUND=30"}).j()) == 5);
    CHECK(max_aux_norm(run(with({"--norm-bound", "20"}), {"PPELIM_NORM_BOUND=30"}).j()) == 5);

    // field and fixtures from the environment alone
    Run e = run({"bounds"}, {"PPELIM_FIELD=-11", "PPELIM_SIGNATURE=ppq2-effective", "PPELIM_FIXTURES=" + fx()});
    CHECK(e.rc == 0);
    CHECK(e.j()["C_K"] == 17);
    fs::remove_all(dir);
}
