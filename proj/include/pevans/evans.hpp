#pragma once

// Shooting Evans function: integrate the first-order companion system over
// one period to get the monodromy matrix Psi(X), then E(lambda) =
// det(Psi(X) - I).  Also the closed-form first-order determinant
// F(lambda) = gamma (e^X - 1)^{-2n} E(lambda).

#include "pevans/fourier_series.hpp"
#include "pevans/types.hpp"

namespace pevans {

/// W' = A(lambda)(x) W with A = [[0, I], [lambda B0 - A0 - dA1, -A1]].
struct FirstOrderSystem {
    SpectralProblem problem;
    Complex lambda;
    FourierSeries dA1;  // derivative series of A1

    /// The 2n x 2n coefficient matrix at position x.
    Matrix coefficient(double x) const;
    int size() const { return 2 * problem.n; }
};

FirstOrderSystem build_system(const SpectralProblem& problem, Complex lambda);

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    double max_local_error = 0.0;  // largest accepted scaled error estimate
};

struct Monodromy {
    Matrix psi_X;  // fundamental solution at x = X, Psi(0) = I
    IntegratorStats stats;
    /// |det Psi(X) - e^{-X tr A1_ave}| relative to the expected value.
    double abel_residual = 0.0;
};

/// Adaptive Dormand-Prince 5(4) integration of Psi' = A Psi, Psi(0) = I.
/// tol bounds the local error per step; tol must lie in [1e-13, 1e-6].
Monodromy monodromy(const FirstOrderSystem& system, double tol);

/// E(lambda) = det(Psi(X) - I).
Complex gardner_E(const SpectralProblem& problem, Complex lambda, double tol = 1e-10);

/// F(lambda) = gamma (e^X - 1)^{-2n} E(lambda); evaluated both directly and
/// as gamma det(I - e^X/(1-e^X) (e^{-X} Psi(X) - I)), which must agree to
/// 1e-9 relative.
Complex closed_form_F(const SpectralProblem& problem, Complex lambda, double tol = 1e-10);

/// det(I - Psi(X)^{-1}); satisfies E = det Psi * backward_evans exactly.
Complex backward_evans(const SpectralProblem& problem, Complex lambda, double tol = 1e-10);

}  // namespace pevans
