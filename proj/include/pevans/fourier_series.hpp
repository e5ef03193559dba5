#pragma once

// Matrix-valued X-periodic coefficient functions stored as finitely supported
// Fourier series, plus the validated spectral problem triple (A1, A0, B0).

#include <map>
#include <utility>
#include <vector>

#include "pevans/types.hpp"

namespace pevans {

/// f(x) = sum_k C_k e^{2 pi i k x / X} with C_k complex n x n, |k| <= k_max.
/// The zero mode is always stored (as the zero matrix if absent).
class FourierSeries {
  public:
    FourierSeries() = default;

    /// Build from an explicit coefficient map.  The real-valued flag is
    /// auto-detected from conjugate symmetry C_{-k} == conj(C_k) within 1e-14.
    static FourierSeries make(int n, double X, const std::map<int, Matrix>& coeffs);

    /// Build from samples (x_j, f(x_j)) on the uniform grid x_j = j X / M,
    /// j = 0..M-1, keeping modes |k| <= k_max.  Requires M >= 2 k_max + 1.
    static FourierSeries from_samples(int n, double X,
                                      const std::vector<std::pair<double, Matrix>>& samples,
                                      int k_max);

    Matrix evaluate(double x) const;
    FourierSeries differentiate() const;  // mode k multiplied by 2 pi i k / X

    int dim() const { return n_; }
    double period() const { return X_; }
    int k_max() const { return k_max_; }
    bool real_valued() const { return real_valued_; }

    /// Coefficient of mode k (zero matrix when not stored).
    Matrix coeff(int k) const;
    const std::map<int, Matrix>& coeffs() const { return c_; }

    friend FourierSeries operator+(const FourierSeries& a, const FourierSeries& b);
    friend FourierSeries operator*(Complex s, const FourierSeries& a);

  private:
    int n_ = 0;
    double X_ = 0.0;
    int k_max_ = 0;
    bool real_valued_ = false;
    std::map<int, Matrix> c_;
};

/// The second-order periodic problem (d_x^2 + d_x A1 + A0 - lambda B0) U = 0
/// with Re B0 = (B0 + B0^*)/2 definite of a fixed sign.
struct SpectralProblem {
    int n = 0;
    double X = 0.0;
    FourierSeries A1, A0, B0;
    int definiteness_sign = +1;

    /// Validates shared dimension/period and grid-samples Re B0 for
    /// definiteness (sign auto-detected).  Throws ValidationError.
    static SpectralProblem make(const FourierSeries& A1, const FourierSeries& A0,
                                const FourierSeries& B0);
};

/// Smallest eigenvalue of sign * Re B0(x) over an equispaced validation grid
/// of at least 64 (k_max + 1) points.
double definiteness_margin(const FourierSeries& B0, int sign);

/// Change of variable y = 2 pi x / X mapping the problem to period 2 pi:
/// A1 -> (X/2pi) A1, A0 -> (X/2pi)^2 A0, B0 -> (X/2pi)^2 B0, mode indices
/// unchanged.  Periodic eigenvalues are preserved; idempotent at X = 2 pi.
SpectralProblem normalize_period(const SpectralProblem& problem);

/// Inverse of normalize_period: rescale a problem to period X_new.
SpectralProblem rescale_period(const SpectralProblem& problem, double X_new);

}  // namespace pevans
