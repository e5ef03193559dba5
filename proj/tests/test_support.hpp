#pragma once

// Shared test helpers: seeded random matrices and problems, a matrix
// exponential oracle independent of the RK integrator, and small utilities.

#include <map>
#include <random>

#include "pevans/fourier_series.hpp"
#include "pevans/types.hpp"

namespace pevans::testing {

inline Matrix random_matrix(std::mt19937& rng, int rows, int cols, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = scale * Complex{dist(rng), dist(rng)};
    return M;
}

inline Complex random_complex(std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return scale * Complex{dist(rng), dist(rng)};
}

/// Random real-valued trig-polynomial problem: coefficients satisfy
/// C_{-k} = conj(C_k); B0 stays near the identity so Re B0 is definite.
inline SpectralProblem random_real_problem(std::mt19937& rng, int n, int k_max,
                                           double strength = 0.3) {
    auto real_series = [&](double s, bool near_identity) {
        std::map<int, Matrix> c;
        Matrix zero_mode = s * random_matrix(rng, n, n, 1.0);
        zero_mode = 0.5 * (zero_mode + zero_mode.conjugate().eval());  // real matrix
        c[0] = near_identity ? Matrix(Matrix::Identity(n, n) + 0.2 * s * zero_mode) : zero_mode;
        for (int k = 1; k <= k_max; ++k) {
            Matrix C = (near_identity ? 0.2 * s : s) * random_matrix(rng, n, n, 1.0 / k);
            c[k] = C;
            c[-k] = C.conjugate();
        }
        return FourierSeries::make(n, 2.0 * std::numbers::pi, c);
    };
    return SpectralProblem::make(real_series(strength, false), real_series(strength, false),
                                 real_series(strength, true));
}

/// Random complex-coefficient problem (no conjugate symmetry); B0 = I + small.
inline SpectralProblem random_complex_problem(std::mt19937& rng, int n, int k_max,
                                              double strength = 0.3) {
    auto series = [&](double s, bool near_identity) {
        std::map<int, Matrix> c;
        for (int k = -k_max; k <= k_max; ++k)
            c[k] = s * random_matrix(rng, n, n, 1.0 / (1 + std::abs(k)));
        if (near_identity) c[0] = Matrix::Identity(n, n) + 0.1 * c[0];
        return FourierSeries::make(n, 2.0 * std::numbers::pi, c);
    };
    return SpectralProblem::make(series(strength, false), series(strength, false),
                                 series(strength, true));
}

/// Scaling-and-squaring matrix exponential with a long Taylor series; the
/// oracle for constant-coefficient monodromy.
inline Matrix expm_oracle(const Matrix& A) {
    double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    Matrix S = A;
    while (norm > 0.25) {
        S *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    Matrix E = Matrix::Identity(A.rows(), A.cols());
    Matrix term = E;
    for (int k = 1; k <= 40; ++k) {
        term = (term * S) / static_cast<double>(k);
        E += term;
        if (term.cwiseAbs().maxCoeff() < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) E = E * E;
    return E;
}

}  // namespace pevans::testing
