#include "pevans/fredholm.hpp"

namespace pevans {

namespace {

// Row scaling of (DJ^2 - I)^{-1}: always invertible, diagonal entries
// -(2 pi j / X)^2 - 1 <= -1.
Vector resolvent2_diag(const TruncatedSystem& t) {
    Vector r(t.N);
    for (int i = 0; i < t.N; ++i) r(i) = 1.0 / (t.D_diag(i) * t.D_diag(i) - 1.0);
    return r;
}

}  // namespace

Matrix build_KJ(const TruncatedSystem& t, Complex lambda) {
    Vector r = resolvent2_diag(t);
    Matrix rhs = t.A0J - lambda * t.B0J;
    rhs += Matrix::Identity(t.N, t.N);
    Matrix K = -(r.asDiagonal() * (Matrix(t.D_diag.asDiagonal()) * t.A1J + rhs));
    return K;
}

Complex trace_KJ(const TruncatedSystem& t, Complex lambda) {
    Complex tr = 0.0;
    for (int i = 0; i < t.N; ++i) {
        Complex d = t.D_diag(i);
        Complex r = 1.0 / (d * d - 1.0);
        tr -= r * (d * t.A1J(i, i) + t.A0J(i, i) + 1.0 - lambda * t.B0J(i, i));
    }
    return tr;
}

LogDet DJ_det(const TruncatedSystem& t, Complex lambda) {
    return det2_finite(build_KJ(t, lambda));
}

LogDet logdet_DJ2_minus_I(const TruncatedSystem& t) {
    LogDet out = LogDet::one();
    for (int i = 0; i < t.N; ++i)
        out = out * LogDet::from_complex(t.D_diag(i) * t.D_diag(i) - 1.0);
    return out;
}

LogDet logdet_DJ_minus_I(const TruncatedSystem& t) {
    LogDet out = LogDet::one();
    for (int i = 0; i < t.N; ++i) out = out * LogDet::from_complex(t.D_diag(i) - 1.0);
    return out;
}

LogDet DJ_factored(const TruncatedSystem& t, Complex lambda) {
    Matrix LJ = assemble_LJ(t);
    LogDet f1 = inverse(logdet_DJ2_minus_I(t));
    LogDet f2 = logdet_lu(t.B0J);
    LogDet f3 = exp_logdet(trace_KJ(t, lambda));
    LJ -= lambda * Matrix::Identity(t.N, t.N);
    LogDet f4 = logdet_lu(LJ);
    return f1 * f2 * f3 * f4;
}

Matrix build_KhatJ(const TruncatedSystem& t, Complex lambda) {
    const int N = t.N;
    Vector rm(N);  // (DJ - I)^{-1}, diagonal entries 2 pi i j / X - 1 != 0
    for (int i = 0; i < N; ++i) rm(i) = 1.0 / (t.D_diag(i) - 1.0);

    Matrix K = Matrix::Zero(2 * N, 2 * N);
    // I - Khat = [(DJ-I)^{-1} DJ, -(DJ-I)^{-1}; (DJ-I)^{-1} (BJ + dA1J), (DJ-I)^{-1} (DJ + A1J)]
    // with BJ = A0J - lambda B0J, so:
    for (int i = 0; i < N; ++i) {
        K(i, i) = -rm(i);         // I - (DJ-I)^{-1} DJ
        K(i, N + i) = rm(i);      // -(-(DJ-I)^{-1})
    }
    K.block(N, 0, N, N) = -(rm.asDiagonal() * (t.A0J - lambda * t.B0J + t.dA1J));
    K.block(N, N, N, N) = -(rm.asDiagonal() * t.A1J);
    for (int i = 0; i < N; ++i) K(N + i, N + i) -= rm(i);  // I - (DJ-I)^{-1}(DJ + A1J)
    return K;
}

Complex trace_KhatJ(const TruncatedSystem& t) {
    Complex tr = 0.0;
    for (int i = 0; i < t.N; ++i) tr -= (2.0 + t.A1J(i, i)) / (t.D_diag(i) - 1.0);
    return tr;
}

LogDet FJ_det(const TruncatedSystem& t, Complex lambda) {
    return det2_finite(build_KhatJ(t, lambda));
}

LogDet FJ_factored(const TruncatedSystem& t, Complex lambda) {
    Matrix LJ = assemble_LJ(t);
    LogDet g1 = inverse(pow_int(logdet_DJ_minus_I(t), 2));
    LogDet g2 = logdet_lu(t.B0J);
    LogDet g3 = exp_logdet(trace_KhatJ(t));
    LJ -= lambda * Matrix::Identity(t.N, t.N);
    LogDet g4 = logdet_lu(LJ);
    return g1 * g2 * g3 * g4;
}

double hs_norm(const SpectralProblem& problem, int J, Complex lambda) {
    if (J < 1) throw ConfigError("hs_norm: J must be >= 1");
    return build_KJ(build_truncation(problem, J), lambda).norm();
}

DeterminantSample sample_determinants(const TruncatedSystem& t, Complex lambda) {
    return {lambda, DJ_det(t, lambda), FJ_det(t, lambda), t.J};
}

}  // namespace pevans
