#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef HESSQUOT_BIN
#error "HESSQUOT_BIN must point at the built binary"
#endif
#ifndef CONFIG_DIR
#error "CONFIG_DIR must point at the preset configs"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "hessquot_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout." + std::to_string(counter));
    const fs::path err = work_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(HESSQUOT_BIN) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

std::string preset(const char* name) {
    return (fs::path(CONFIG_DIR) / name).string();
}

}  // namespace

TEST_CASE("solve on the Poisson preset exits zero and reports convergence") {
    const fs::path out = work_dir() / "poisson";
    const RunResult r =
        run_cli("solve " + preset("poisson2d.cfg") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("converged") != std::string::npos);

    const json report = json::parse(read_file(out / "report.json"));
    CHECK(report.at("schema") == 1);
    CHECK(report.at("command") == "solve");
    CHECK(report.at("solve").at("converged") == true);
    CHECK(report.at("bounds").at("c0_bound").at("ok") == true);
    CHECK(fs::exists(out / "field.csv"));

    const std::string csv = read_file(out / "field.csv");
    CHECK(csv.rfind("# grid n=2 dims=17,17", 0) == 0);
}

TEST_CASE("a signature with l >= k is rejected with the constraint spelled out") {
    const fs::path cfg = write_config("bad_l.cfg",
                                      "problem.n = 2\n"
                                      "problem.p = 1\n"
                                      "problem.k = 1\n"
                                      "problem.l = 1\n"
                                      "problem.domain = box\n"
                                      "problem.box_lo = 0 0\n"
                                      "problem.box_hi = 1 1\n"
                                      "problem.psi_tilde = \"2\"\n"
                                      "problem.phi = \"-u\"\n");
    const RunResult r = run_cli("solve " + cfg.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("0 <= l < k") != std::string::npos);
}

TEST_CASE("verify flags an undeclarable alpha0 but still exits zero") {
    const fs::path cfg = write_config("const_psi.cfg",
                                      "problem.n = 2\n"
                                      "problem.p = 1\n"
                                      "problem.k = 1\n"
                                      "problem.l = 0\n"
                                      "problem.domain = box\n"
                                      "problem.box_lo = 0 0\n"
                                      "problem.box_hi = 1 1\n"
                                      "problem.psi_tilde = \"2\"\n"
                                      "problem.phi = \"-u\"\n"
                                      "structural.alpha0 = 0.1\n"
                                      "output.dir = " +
                                          (work_dir() / "const_psi").string() +
                                          "\n");
    const RunResult r = run_cli("verify " + cfg.string());
    CHECK(r.exit_code == 0);
    const json report =
        json::parse(read_file(work_dir() / "const_psi" / "report.json"));
    CHECK(report.at("command") == "verify");
    CHECK(report.at("structural").at("alpha0_ok") == false);
    CHECK(report.at("structural").at("alpha0_measured") == 0.0);
    CHECK(report.at("growth").is_null());  // no growth constants declared
}

TEST_CASE("repeated seeded runs produce byte-identical outputs") {
    const fs::path a = work_dir() / "det_a";
    const fs::path b = work_dir() / "det_b";
    const std::string base =
        "solve " + preset("poisson2d.cfg") + " --seed 5 --quiet --out ";
    const RunResult ra = run_cli(base + a.string());
    const RunResult rb = run_cli(base + b.string());
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    CHECK(ra.out.empty());  // --quiet suppresses progress chatter
    CHECK(read_file(a / "report.json") == read_file(b / "report.json"));
    CHECK(read_file(a / "field.csv") == read_file(b / "field.csv"));
}

TEST_CASE("sweep runs the refinement ladder and records ratio stability") {
    const fs::path cfg = write_config("ball_small.cfg",
                                      "problem.n = 3\n"
                                      "problem.p = 2\n"
                                      "problem.k = 2\n"
                                      "problem.l = 1\n"
                                      "problem.domain = ball\n"
                                      "problem.ball_radius = 1.0\n"
                                      "problem.psi_tilde = \"2 + u\"\n"
                                      "problem.phi = \"0.5 - u\"\n"
                                      "solver.sweep = 9 17 33\n"
                                      "output.dir = " +
                                          (work_dir() / "sweep").string() + "\n");
    const RunResult r = run_cli("sweep " + cfg.string());
    CHECK(r.exit_code == 0);
    const json report =
        json::parse(read_file(work_dir() / "sweep" / "report.json"));
    CHECK(report.at("command") == "sweep");
    CHECK(report.at("sweep").size() == 3);
    CHECK(report.at("sweep")[0].at("nodes") == 9);
    CHECK(report.at("sweep")[2].at("solve").at("converged") == true);
    CHECK(report.at("ratios").size() == 3);
    CHECK(report.at("ratios_stable") == true);
    CHECK(fs::exists(work_dir() / "sweep" / "field.csv"));
}

TEST_CASE("usage errors exit one") {
    CHECK(run_cli("polish " + preset("poisson2d.cfg")).exit_code == 1);
    CHECK(run_cli("solve " + (work_dir() / "missing.cfg").string()).exit_code == 1);

    const fs::path cfg = write_config("unknown_key.cfg",
                                      "problem.n = 2\n"
                                      "problem.p = 1\n"
                                      "problem.k = 1\n"
                                      "problem.l = 0\n"
                                      "problem.domain = box\n"
                                      "problem.box_lo = 0 0\n"
                                      "problem.box_hi = 1 1\n"
                                      "problem.psi_tilde = \"2\"\n"
                                      "problem.phi = \"-u\"\n"
                                      "problem.colour = 3\n");
    const RunResult r = run_cli("solve " + cfg.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown key") != std::string::npos);
}
