#include "pevans/evans.hpp"

#include <algorithm>
#include <cmath>

#include "pevans/bridge.hpp"
#include "pevans/logdet.hpp"

namespace pevans {

Matrix FirstOrderSystem::coefficient(double x) const {
    const int n = problem.n;
    Matrix A = Matrix::Zero(2 * n, 2 * n);
    A.block(0, n, n, n) = Matrix::Identity(n, n);
    A.block(n, 0, n, n) =
        lambda * problem.B0.evaluate(x) - problem.A0.evaluate(x) - dA1.evaluate(x);
    A.block(n, n, n, n) = -problem.A1.evaluate(x);
    return A;
}

FirstOrderSystem build_system(const SpectralProblem& problem, Complex lambda) {
    return {problem, lambda, problem.A1.differentiate()};
}

namespace {

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bstar (error weights), with the 4th-order weights bstar.
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Monodromy monodromy(const FirstOrderSystem& system, double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw ConfigError("monodromy: tol must lie in [1e-13, 1e-6]");

    const double X = system.problem.X;
    const int m = system.size();
    Matrix Y = Matrix::Identity(m, m);

    double x = 0.0;
    double h = X / 1000.0;
    const double h_min = 1e-15 * X;
    const long max_steps = 10'000'000;

    IntegratorStats stats;
    Matrix k1 = system.coefficient(0.0) * Y;

    while (x < X) {
        if (h < h_min)
            throw NumericalError("monodromy: step size underflow at x = " + std::to_string(x));
        if (stats.steps + stats.rejected > max_steps)
            throw NumericalError("monodromy: step budget exhausted at x = " + std::to_string(x));
        h = std::min(h, X - x);

        Matrix k2 = system.coefficient(x + c2 * h) * (Y + h * (a21 * k1));
        Matrix k3 = system.coefficient(x + c3 * h) * (Y + h * (a31 * k1 + a32 * k2));
        Matrix k4 = system.coefficient(x + c4 * h) * (Y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Matrix k5 = system.coefficient(x + c5 * h) *
                    (Y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Matrix k6 = system.coefficient(x + h) *
                    (Y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Matrix y5 = Y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Matrix k7 = system.coefficient(x + h) * y5;  // FSAL
        Matrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        // Error per unit step, so that accepted local errors sum to ~tol
        // over the whole period.
        double scaled = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double sc = tol * (h / X) * (1.0 + std::max(std::abs(Y(i, j)), std::abs(y5(i, j))));
                scaled = std::max(scaled, std::abs(err(i, j)) / sc);
            }

        if (scaled <= 1.0) {
            x += h;
            Y = std::move(y5);
            k1 = std::move(k7);
            ++stats.steps;
            stats.max_local_error = std::max(stats.max_local_error, scaled * tol * h / X);
        } else {
            ++stats.rejected;
        }
        double factor = 0.9 * std::pow(std::max(scaled, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }

    Monodromy out;
    out.psi_X = std::move(Y);
    out.stats = stats;

    Complex tr_A1_ave = system.problem.A1.coeff(0).trace();
    Complex expected = std::exp(-X * tr_A1_ave);
    Complex det_psi = out.psi_X.determinant();
    out.abel_residual = std::abs(det_psi - expected) / std::max(1.0, std::abs(expected));
    return out;
}

Complex gardner_E(const SpectralProblem& problem, Complex lambda, double tol) {
    Monodromy mono = monodromy(build_system(problem, lambda), tol);
    const int m = 2 * problem.n;
    return (mono.psi_X - Matrix::Identity(m, m)).determinant();
}

Complex closed_form_F(const SpectralProblem& problem, Complex lambda, double tol) {
    Monodromy mono = monodromy(build_system(problem, lambda), tol);
    const int m = 2 * problem.n;
    const double X = problem.X;
    Complex E = (mono.psi_X - Matrix::Identity(m, m)).determinant();

    // gamma (e^X - 1)^{-2n} E, combined in log space to dodge overflow at
    // large X or n.
    Complex gamma_exponent = gamma_exponent_const(problem);
    LogDet base = exp_logdet(gamma_exponent) * pow_int(LogDet::from_complex(std::expm1(X)), -m);
    LogDet direct = base * LogDet::from_complex(E);

    // Equivalent form gamma det(I - e^X/(1-e^X) (e^{-X} Psi - I)); the scalar
    // 1 + e^X/(1-e^X) = 1/(1-e^X) is formed without cancellation.
    double inv_1meX = -1.0 / std::expm1(X);  // 1/(1 - e^X)
    double cx = std::exp(X) * inv_1meX;
    Matrix inner = inv_1meX * Matrix::Identity(m, m) - (cx * std::exp(-X)) * mono.psi_X;
    LogDet alt = exp_logdet(gamma_exponent) * logdet_lu(inner);

    // Agreement to 1e-9 relative, with the determinant's natural scale as a
    // floor so near-zeros of E do not inflate the relative error.
    Complex direct_c = direct.to_complex();
    Complex alt_c = alt.to_complex();
    double det_scale = std::pow(1.0 + mono.psi_X.cwiseAbs().maxCoeff(), m);
    double floor = std::abs(base.to_complex()) * det_scale * 1e-3;
    double rel = std::abs(alt_c - direct_c) /
                 std::max({std::abs(direct_c), std::abs(alt_c), floor});
    if (rel > 1e-9)
        throw NumericalError("closed_form_F: internal forms disagree by " + std::to_string(rel));
    return direct_c;
}

Complex backward_evans(const SpectralProblem& problem, Complex lambda, double tol) {
    Monodromy mono = monodromy(build_system(problem, lambda), tol);
    const int m = 2 * problem.n;
    Complex tr_A1_ave = problem.A1.coeff(0).trace();
    Complex expected = std::exp(-problem.X * tr_A1_ave);
    Complex det_psi = mono.psi_X.determinant();
    if (std::abs(det_psi) / std::max(1.0, std::abs(expected)) < 1e-12)
        throw NumericalError("backward_evans: singular monodromy");
    Matrix inv = mono.psi_X.partialPivLu().inverse();
    return (Matrix::Identity(m, m) - inv).determinant();
}

}  // namespace pevans
