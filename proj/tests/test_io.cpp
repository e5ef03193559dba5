#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pevans/problem_io.hpp"

using namespace pevans;

namespace {
namespace fs = std::filesystem;
const std::string kData = PEVANS_DATA_DIR;

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / ("pevans_io_" + std::to_string(::getpid()) + name);
    std::ofstream(p) << content;
    return p;
}
}  // namespace

TEST_CASE("load_problem: shipped samples") {
    auto p = load_problem(kData + "/free_scalar.json");
    CHECK(p.n == 1);
    CHECK(p.X == doctest::Approx(6.283185307179586));
    CHECK(p.definiteness_sign == +1);
    CHECK(p.A0.k_max() == 0);

    auto m = load_problem(kData + "/mathieu_q05.json");
    CHECK(m.A0.coeff(1)(0, 0) == Complex{0.5, 0.0});
    CHECK(m.A0.real_valued());

    auto c = load_problem(kData + "/complex_coeff.json");
    CHECK(!c.A0.real_valued());
    CHECK(c.B0.coeff(0)(0, 0) == Complex{1.0, 0.3});

    auto s = load_problem(kData + "/system2x2.json");
    CHECK(s.n == 2);
    CHECK(s.A1.coeff(0).trace() == Complex{0.5, 0.0});
    CHECK(std::abs(s.A0.coeff(0).trace() - Complex{-0.3, 0.0}) < 1e-15);
}

TEST_CASE("load_problem: error paths") {
    CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ConfigError);

    auto syntax = write_temp("syntax.json", "{ not json");
    CHECK_THROWS_AS(load_problem(syntax), ConfigError);
    fs::remove(syntax);

    auto dup = write_temp("dup.json", R"({"n":1,"period":6.283185307179586,
        "A0":[{"k":1,"re":[[0.5]]},{"k":1,"re":[[0.5]]}],"B0":[{"k":0,"re":[[1.0]]}]})");
    CHECK_THROWS_AS(load_problem(dup), ValidationError);
    fs::remove(dup);

    auto ragged = write_temp("ragged.json", R"({"n":2,"period":6.283185307179586,
        "B0":[{"k":0,"re":[[1.0,0.0],[0.0]]}]})");
    CHECK_THROWS_AS(load_problem(ragged), ValidationError);
    fs::remove(ragged);

    auto nore = write_temp("nore.json", R"({"n":1,"period":6.283185307179586,
        "B0":[{"k":0,"im":[[1.0]]}]})");
    CHECK_THROWS_AS(load_problem(nore), ValidationError);
    fs::remove(nore);
}
