#include <doctest.h>

#include <numbers>
#include <random>

#include "pevans/hill.hpp"
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
    auto a0 = FourierSeries::make(1, kTwoPi, {{1, scalar(q)}, {-1, scalar(q)}});  // 2q cos x
    return SpectralProblem::make(zero, a0, FourierSeries::make(1, kTwoPi, {{0, scalar(1.0)}}));
}
}  // namespace

TEST_CASE("build_truncation: free scalar J=1") {
    auto t = build_truncation(free_scalar(), 1);
    CHECK(t.N == 3);
    CHECK(std::abs(t.D_diag(0) - Complex{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(t.D_diag(1)) < 1e-15);
    CHECK(std::abs(t.D_diag(2) - Complex{0.0, 1.0}) < 1e-15);
    CHECK(t.A0J.cwiseAbs().maxCoeff() == 0.0);
    CHECK((t.B0J - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_truncation: cosine Toeplitz structure") {
    auto t = build_truncation(mathieu(1.0), 1);  // A0 = 2 cos x
    Matrix expect = Matrix::Zero(3, 3);
    expect(0, 1) = expect(1, 0) = expect(1, 2) = expect(2, 1) = 1.0;
    CHECK((t.A0J - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("build_truncation: constant n=2 coefficient is block diagonal") {
    std::mt19937 rng(3);
    Matrix M = random_matrix(rng, 2, 2);
    auto zero = FourierSeries::make(2, kTwoPi, {});
    auto p = SpectralProblem::make(zero, FourierSeries::make(2, kTwoPi, {{0, M}}),
                                   FourierSeries::make(2, kTwoPi, {{0, Matrix::Identity(2, 2)}}));
    auto t = build_truncation(p, 2);
    for (int j = 0; j < 5; ++j)
        CHECK((t.A0J.block(2 * j, 2 * j, 2, 2) - M).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.A0J.cwiseAbs().sum() == doctest::Approx(5.0 * M.cwiseAbs().sum()));
}

TEST_CASE("block-Toeplitz invariant on random problems") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        auto p = random_complex_problem(rng, 2, 2);
        auto t = build_truncation(p, 4);
        const int n = 2;
        for (int j = -4; j <= 4; ++j)
            for (int k = -4; k <= 4; ++k) {
                Matrix blk = t.A0J.block((j + 4) * n, (k + 4) * n, n, n);
                Matrix expect = (std::abs(j - k) <= p.A0.k_max()) ? p.A0.coeff(j - k)
                                                                  : Matrix(Matrix::Zero(n, n));
                CHECK((blk - expect).cwiseAbs().maxCoeff() == 0.0);
            }
    }
}

TEST_CASE("assemble_LJ: free scalar diag(-j^2); scalar shift and scaling") {
    auto t = build_truncation(free_scalar(), 2);
    Matrix L = assemble_LJ(t);
    Vector expect(5);
    expect << -4.0, -1.0, 0.0, -1.0, -4.0;
    CHECK((L - Matrix(expect.asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);

    // B0 = 2, A0 = c: L = diag((-j^2 + c)/2).
    auto zero = FourierSeries::make(1, kTwoPi, {});
    auto p = SpectralProblem::make(zero, FourierSeries::make(1, kTwoPi, {{0, scalar(0.7)}}),
                                   FourierSeries::make(1, kTwoPi, {{0, scalar(2.0)}}));
    Matrix L2 = assemble_LJ(build_truncation(p, 2));
    for (int j = -2; j <= 2; ++j)
        CHECK(std::abs(L2(j + 2, j + 2) - Complex{(-double(j * j) + 0.7) / 2.0, 0.0}) < 1e-14);
}

TEST_CASE("hill_eigenvalues: free spectrum with pairing, constant shift") {
    auto ev = hill_eigenvalues(build_truncation(free_scalar(), 2));
    REQUIRE(ev.size() == 5);
    std::vector<double> expect{-4.0, -4.0, -1.0, -1.0, 0.0};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(ev[i] - expect[i]) < 1e-12);

    auto zero = FourierSeries::make(1, kTwoPi, {});
    auto p = SpectralProblem::make(zero, FourierSeries::make(1, kTwoPi, {{0, scalar(2.5)}}),
                                   FourierSeries::make(1, kTwoPi, {{0, scalar(1.0)}}));
    auto evc = hill_eigenvalues(build_truncation(p, 3));
    std::vector<double> expc{-6.5, -6.5, -1.5, -1.5, 1.5, 1.5, 2.5};
    for (int i = 0; i < 7; ++i) CHECK(std::abs(evc[i] - expc[i]) < 1e-12);
}

TEST_CASE("Mathieu eigenvalues: Cauchy convergence as J doubles") {
    auto p = mathieu(0.5);  // A0 = 2 q cos x with q = 0.5
    auto near_zero = [&](int J) {
        auto ev = hill_eigenvalues(build_truncation(p, J));
        Complex best = ev[0];
        for (Complex e : ev)
            if (std::abs(e) < std::abs(best)) best = e;
        return best;
    };
    CHECK(std::abs(near_zero(16) - near_zero(32)) < 1e-8);

    auto q1 = mathieu(1.0);
    auto low = [&](int J) {
        std::vector<Complex> out;
        for (Complex e : hill_eigenvalues(build_truncation(q1, J)))
            if (std::abs(e) <= 10.0) out.push_back(e);
        return out;
    };
    auto d = greedy_match_distances(low(16), low(8));
    for (double x : d) CHECK(x < 1e-6);
}

TEST_CASE("constant-coefficient L_J spectrum equals union of symbol spectra") {
    std::mt19937 rng(13);
    const int n = 2, J = 3;
    Matrix A1 = random_matrix(rng, n, n, 0.4);
    Matrix A0 = random_matrix(rng, n, n, 0.8);
    Matrix B0 = Matrix::Identity(n, n) + 0.2 * random_matrix(rng, n, n, 0.5);
    auto mk = [&](Matrix C) { return FourierSeries::make(n, kTwoPi, {{0, C}}); };
    auto p = SpectralProblem::make(mk(A1), mk(A0), mk(B0));

    auto ev = hill_eigenvalues(build_truncation(p, J));
    std::vector<Complex> direct;
    for (int j = -J; j <= J; ++j) {
        Complex d{0.0, static_cast<double>(j)};
        Matrix symbol = B0.partialPivLu().solve(d * d * Matrix::Identity(n, n) + d * A1 + A0);
        Eigen::ComplexEigenSolver<Matrix> es(symbol, false);
        for (int i = 0; i < n; ++i) direct.push_back(es.eigenvalues()(i));
    }
    auto dist = greedy_match_distances(ev, direct);
    for (double x : dist) CHECK(x < 1e-10);
}

TEST_CASE("real coefficients: spectrum closed under conjugation") {
    std::mt19937 rng(19);
    auto p = random_real_problem(rng, 2, 2);
    auto ev = hill_eigenvalues(build_truncation(p, 8));
    std::vector<Complex> conj;
    for (Complex e : ev) conj.push_back(std::conj(e));
    auto dist = greedy_match_distances(ev, conj);
    for (double x : dist) CHECK(x < 1e-10);
}

TEST_CASE("assemble_LJ rejects ill-conditioned B0J") {
    // Nearly singular constant B0 (condition number ~ 4e13).  Such a B0 does
    // not pass problem validation, so patch it in after construction purely
    // to exercise the guard.
    auto zero = FourierSeries::make(2, kTwoPi, {});
    auto p = SpectralProblem::make(zero, zero,
                                   FourierSeries::make(2, kTwoPi, {{0, Matrix::Identity(2, 2)}}));
    Matrix bad(2, 2);
    bad << 1.0, 1.0, 1.0, 1.0 + 1e-13;
    p.B0 = FourierSeries::make(2, kTwoPi, {{0, bad}});
    auto t = build_truncation(p, 1);
    CHECK_THROWS_AS(assemble_LJ(t), NumericalError);
}

TEST_CASE("convergence_sweep on free scalar and Mathieu") {
    Region r{-5.0, 1.0, -1.0, 1.0};
    auto rows = convergence_sweep(free_scalar(), {4, 8}, r);
    int count4 = 0, count8 = 0;
    for (const auto& row : rows) {
        if (row.J == 4) ++count4;
        if (row.J == 8) {
            ++count8;
            CHECK(row.match_distance < 1e-12);
        }
    }
    CHECK(count4 == 5);
    CHECK(count8 == 5);

    // Matching distances nonincreasing in J beyond J=8.
    Region r10{-10.0, 10.0, -1.0, 1.0};
    auto mrows = convergence_sweep(mathieu(1.0), {8, 16, 32}, r10);
    double d16 = 0.0, d32 = 0.0;
    for (const auto& row : mrows) {
        if (row.J == 16 && std::isfinite(row.match_distance))
            d16 = std::max(d16, row.match_distance);
        if (row.J == 32 && std::isfinite(row.match_distance))
            d32 = std::max(d32, row.match_distance);
    }
    CHECK(d32 <= d16 + 1e-12);

    CHECK_THROWS_AS(convergence_sweep(free_scalar(), {8, 4}, r), ConfigError);
}
