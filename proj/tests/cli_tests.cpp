// End-to-end CLI checks: exit codes, file formats, determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
const std::string kCli = PEVANS_CLI_PATH;
const std::string kData = PEVANS_DATA_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pevans_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args, const fs::path& stdout_file = {},
        const std::string& env_prefix = {}) {
    std::string cmd = env_prefix + kCli + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file.string() + " 2>&1";
    else cmd += " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("describe: free scalar summary") {
    TempDir tmp;
    fs::path out = tmp.path / "describe.txt";
    int rc = run("describe --problem " + kData + "/free_scalar.json", out);
    CHECK(rc == 0);
    std::string text = slurp(out);
    CHECK(text.find("n: 1") != std::string::npos);
    CHECK(text.find("definiteness_margin: 1") != std::string::npos);
    CHECK(text.find("definiteness_sign: +1") != std::string::npos);
}

TEST_CASE("exit codes: config, validation, numerical") {
    TempDir tmp;
    CHECK(run("describe") == 1);                       // missing required flag
    CHECK(run("nonsense") == 1);                       // unknown subcommand
    CHECK(run("describe --problem /nonexistent.json") == 1);

    fs::path bad = tmp.path / "indefinite.json";
    std::ofstream(bad) << R"({"n":1,"period":6.283185307179586,"A1":[],"A0":[],
        "B0":[{"k":1,"re":[[1.0]]},{"k":-1,"re":[[1.0]]}]})";
    CHECK(run("describe --problem " + bad.string()) == 2);  // indefinite Re B0

    fs::path syntax = tmp.path / "syntax.json";
    std::ofstream(syntax) << "{not json";
    CHECK(run("describe --problem " + syntax.string()) == 1);

    CHECK(run("evans --problem " + kData + "/free_scalar.json --lambda 1,0 --tol 1") == 1);
}

TEST_CASE("hill sweep CSV shape") {
    TempDir tmp;
    fs::path out = tmp.path / "hill.csv";
    int rc = run("hill --problem " + kData + "/free_scalar.json --J 4 8 --region -5,1,-1,1 "
                 "--output " + out.string());
    CHECK(rc == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("J,re_lambda,im_lambda,match_distance_to_previous_J\n", 0) == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 5 + 5);  // header + five eigenvalues per J
}

TEST_CASE("evans and det sweeps run and are deterministic") {
    TempDir tmp;
    fs::path a = tmp.path / "a.csv", b = tmp.path / "b.csv";
    std::string args = "det --problem " + kData + "/mathieu_q05.json --J 8 16 "
                       "--grid -1,1,-0.5,0.5,3,2 --output ";
    CHECK(run(args + a.string()) == 0);
    CHECK(run(args + b.string()) == 0);
    std::string ca = slurp(a), cb = slurp(b);
    CHECK(!ca.empty());
    CHECK(ca == cb);  // byte-identical

    fs::path e = tmp.path / "e.csv";
    CHECK(run("evans --problem " + kData + "/free_scalar.json --grid -2,1,-1,1,4,3 --tol 1e-10 "
              "--output " + e.string()) == 0);
    std::string ce = slurp(e);
    int lines = 0;
    for (char c : ce)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 12);

    // Output is independent of the worker thread count.
    fs::path t1 = tmp.path / "t1.csv", t4 = tmp.path / "t4.csv";
    std::string eargs = "evans --problem " + kData + "/free_scalar.json --grid -2,1,-1,1,5,4 "
                        "--tol 1e-10 --output ";
    CHECK(run(eargs + t1.string(), {}, "PEVANS_THREADS=1 ") == 0);
    CHECK(run(eargs + t4.string(), {}, "PEVANS_THREADS=4 ") == 0);
    CHECK(slurp(t1) == slurp(t4));

    // The verbatim field-name spelling of the problem flag also works.
    CHECK(run("describe --problem_path " + kData + "/free_scalar.json") == 0);
}

TEST_CASE("verify produces a JSON report plus CSV mirror") {
    TempDir tmp;
    fs::path out = tmp.path / "verify.json";
    int rc = run("verify --problem " + kData + "/free_scalar.json --J 8 16 "
                 "--lambda_list \"1,0;0.3,0.4\" --tol 0.5 --output " + out.string());
    CHECK(rc == 0);
    auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["entries"].size() == 2 * 2 * 2);  // lambda x J x reading
    for (const auto& e : doc["entries"]) {
        CHECK(e.contains("lambda"));
        CHECK(e.contains("J"));
        CHECK(e.contains("ratio_logmag_error"));
        CHECK(e.contains("ratio_phase_error"));
        CHECK(e.contains("delta_reading"));
    }
    CHECK(fs::exists(tmp.path / "verify.csv"));

    // Literal factor form is available and reports non-convergence honestly.
    fs::path lit = tmp.path / "literal.json";
    int rc2 = run("verify --problem " + kData + "/free_scalar.json --J 8 16 "
                  "--lambda_list \"1,0\" --tol 0.5 --factor_form literal --output " +
                  lit.string());
    CHECK(rc2 == 3);
    auto doc2 = nlohmann::json::parse(slurp(lit));
    CHECK(!doc2["passed"].get<bool>());
}

TEST_CASE("locate emits the eigen report schema") {
    TempDir tmp;
    fs::path out = tmp.path / "locate.json";
    int rc = run("locate --problem " + kData + "/mathieu_q05.json --region -2,4,-1,1 "
                 "--method all --J 32 --output " + out.string());
    CHECK(rc == 0);
    auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["totals_agree"].get<bool>());
    CHECK(doc["total_hill"].get<int>() == 3);  // ~0.378, ~-0.918, ~-1.293
    for (const auto& rep : doc["reports"]) {
        CHECK(rep.contains("method"));
        CHECK(rep.contains("eigenvalues"));
        CHECK(rep.contains("region"));
        CHECK(rep.contains("total_winding"));
        for (const auto& e : rep["eigenvalues"]) {
            CHECK(e.contains("re"));
            CHECK(e.contains("im"));
            CHECK(e.contains("mult"));
            CHECK(e.contains("residual"));
        }
    }

    fs::path single = tmp.path / "hill.json";
    CHECK(run("locate --problem " + kData + "/mathieu_q05.json --region -2,4,-1,1 "
              "--method hill --J 32 --output " + single.string()) == 0);
    auto hdoc = nlohmann::json::parse(slurp(single));
    CHECK(hdoc["method"].get<std::string>() == "hill");
    CHECK(hdoc["total_winding"].get<int>() == 3);
}

TEST_CASE("sweep grid CSV") {
    TempDir tmp;
    fs::path out = tmp.path / "field.csv";
    int rc = run("sweep --problem " + kData + "/free_scalar.json --grid -2,0,-1,1,3,3 --J 16 "
                 "--output " + out.string());
    CHECK(rc == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("re_lambda,im_lambda,abs_E,DJ_logmag\n", 0) == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 9);
}
