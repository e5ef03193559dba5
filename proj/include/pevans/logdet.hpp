#pragma once

// Overflow-safe complex determinants: a determinant is carried around as
// (log magnitude, phase) instead of a raw complex number, since determinants
// of the truncated Fourier systems overflow double precision already at
// moderate truncation order.

#include <cmath>
#include <limits>

#include "pevans/types.hpp"

namespace pevans {

/// Wrap an angle into (-pi, pi].
double wrap_phase(double p);

/// A complex determinant value stored as e^{log_mag} * e^{i phase}.
/// An exact zero is log_mag = -inf with phase 0.
struct LogDet {
    double log_mag = 0.0;
    double phase = 0.0;  // in (-pi, pi]

    static LogDet one() { return {0.0, 0.0}; }
    static LogDet zero() { return {-std::numeric_limits<double>::infinity(), 0.0}; }
    static LogDet from_complex(Complex z);

    /// e^{log_mag} e^{i phase}; faithful whenever log_mag <= 300 (no overflow).
    Complex to_complex() const;
    bool is_zero() const { return std::isinf(log_mag) && log_mag < 0.0; }
};

LogDet operator*(const LogDet& a, const LogDet& b);
LogDet operator/(const LogDet& a, const LogDet& b);
LogDet inverse(const LogDet& a);
LogDet pow_int(const LogDet& a, int k);

/// e^z as a LogDet (magnitude e^{Re z}, phase Im z wrapped).
LogDet exp_logdet(Complex z);

/// a/b as a complex number; safe when the two are of comparable size.
Complex ratio_complex(const LogDet& a, const LogDet& b);

/// det(A) by LU factorization with per-pivot phase accumulation.
LogDet logdet_lu(const Matrix& A);

/// 2-modified determinant det2(I - A) = det(I - A) * e^{tr A} for a finite
/// square matrix A.  Singular I - A yields the zero LogDet.
LogDet det2_finite(const Matrix& A);

}  // namespace pevans
