#include <doctest.h>

#include <numbers>
#include <random>

#include "pevans/verify.hpp"
#include "test_support.hpp"

using namespace pevans;
using namespace pevans::testing;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix scalar(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
}

SpectralProblem free_scalar() {
    auto zero = FourierSeries::make(1, kTwoPi, {});
    return SpectralProblem::make(zero, zero, FourierSeries::make(1, kTwoPi, {{0, scalar(1.0)}}));
}

SpectralProblem mathieu(double q) {
    auto zero = FourierSeries::make(1, kTwoPi, {});
    auto a0 = FourierSeries::make(1, kTwoPi, {{1, scalar(q)}, {-1, scalar(q)}});
    return SpectralProblem::make(zero, a0, FourierSeries::make(1, kTwoPi, {{0, scalar(1.0)}}));
}

// n = 2 problem with tr A1_hat_0 != tr A0_hat_0, so the two delta readings
// genuinely differ.
SpectralProblem system2x2() {
    Matrix a1_0(2, 2), a1_1(2, 2), a0_0(2, 2), a0_1(2, 2), b0_0(2, 2);
    a1_0 << 0.3, 0.0, 0.0, 0.2;
    a1_1 << 0.0, 0.05, 0.05, 0.0;
    a0_0 << -0.4, 0.0, 0.0, 0.1;
    a0_1 << 0.1, 0.0, 0.0, -0.05;
    b0_0 << 1.0, 0.1, 0.1, 1.2;
    Matrix b0_1 = 0.05 * Matrix::Identity(2, 2);
    auto A1 = FourierSeries::make(2, kTwoPi, {{0, a1_0}, {1, a1_1}, {-1, a1_1}});
    auto A0 = FourierSeries::make(2, kTwoPi, {{0, a0_0}, {1, a0_1}, {-1, a0_1}});
    auto B0 = FourierSeries::make(2, kTwoPi, {{0, b0_0}, {1, b0_1}, {-1, b0_1}});
    return SpectralProblem::make(A1, A0, B0);
}
}  // namespace

TEST_CASE("verify_relation: free scalar r1 and r2 behave as expected") {
    auto report = verify_relation(free_scalar(), {Complex{1.0, 0.0}, Complex{0.3, 0.4}},
                                  {8, 16, 32}, 1e-2);
    CHECK(report.passed);
    CHECK(report.r1_monotone);
    CHECK(report.final_median_r1 < 1e-3);  // O(J^-3) route
    CHECK(report.r2_monotone);
    CHECK(report.final_median_r2 < 0.2);   // O(1/J) route, much slower
    CHECK(report.final_median_r2 > report.final_median_r1);
    CHECK(!report.readings_differ);        // A0 and A1 zero-mode traces both vanish
}

TEST_CASE("verify_relation: Mathieu converges under the corrected factor") {
    auto report = verify_relation(mathieu(0.5), {Complex{0.1, 0.2}}, {8, 16, 32, 64}, 1e-2);
    CHECK(report.passed);
    CHECK(report.final_median_r1 < 1e-4);
    // r1 shrinks by roughly 8x per J doubling.
    for (std::size_t i = 1; i < report.median_r1.size(); ++i)
        CHECK(report.median_r1[i] < 0.5 * report.median_r1[i - 1]);
}

TEST_CASE("verify_relation: literal factor form does not converge") {
    VerifyOptions options;
    options.form = FactorForm::literal;
    auto report = verify_relation(mathieu(0.5), {Complex{0.1, 0.2}}, {8, 16, 32}, 1e-2, options);
    CHECK(!report.passed);
    CHECK(report.final_median_r1 > 1.0);
}

TEST_CASE("verify_relation: the a0 reading wins when the readings differ") {
    auto p = system2x2();
    auto report = verify_relation(p, {Complex{0.3, 0.15}}, {8, 16, 32, 64}, 5e-2);
    CHECK(report.readings_differ);
    CHECK(report.converging_reading == DeltaReading::a0);
    CHECK(report.r1_monotone);
    // The a1 reading stalls at a lambda-independent constant offset.
    CHECK(report.median_r1_alt.back() > 0.5);
    CHECK(report.final_median_r1 < 5e-2);
}

TEST_CASE("verify_relation: partial constants reproduce the F_J route exactly") {
    // With finite-J constants the corrected factor turns r1 into r2.
    VerifyOptions options;
    options.constants = ConstantsMode::partial;
    auto report = verify_relation(mathieu(0.5), {Complex{0.1, 0.2}}, {8, 16}, 1.0, options);
    REQUIRE(report.median_r1.size() == 2);
    CHECK(report.median_r1[0] == doctest::Approx(report.median_r2[0]).epsilon(1e-8));
    CHECK(report.median_r1[1] == doctest::Approx(report.median_r2[1]).epsilon(1e-8));
}

TEST_CASE("verify_relation: eigenvalue-adjacent lambda points are skipped") {
    auto report = verify_relation(free_scalar(), {Complex{0.0, 0.0}, Complex{1.0, 0.0}}, {8}, 1.0);
    int skipped = 0, live = 0;
    for (const auto& e : report.entries) (e.skipped ? skipped : live)++;
    CHECK(skipped == 2);  // both readings of the lambda = 0 point
    CHECK(live == 2);
}

TEST_CASE("verify_relation rejects unnormalized problems and bad J lists") {
    auto zero = FourierSeries::make(1, 4.0, {});
    auto p4 = SpectralProblem::make(zero, zero, FourierSeries::make(1, 4.0, {{0, scalar(1.0)}}));
    CHECK_THROWS_AS(verify_relation(p4, {Complex{1.0, 0.0}}, {8}, 1e-2), ValidationError);
    CHECK_THROWS_AS(verify_relation(free_scalar(), {Complex{1.0, 0.0}}, {8, 8}, 1e-2),
                    ConfigError);
}
