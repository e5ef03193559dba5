#include "pevans/logdet.hpp"

#include <numbers>

namespace pevans {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap_phase(double p) {
    p = std::remainder(p, 2.0 * kPi);  // lands in [-pi, pi]
    if (p <= -kPi) p = kPi;
    return p;
}

LogDet LogDet::from_complex(Complex z) {
    double a = std::abs(z);
    if (a == 0.0) return zero();
    return {std::log(a), std::arg(z)};
}

Complex LogDet::to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::exp(log_mag) * Complex{std::cos(phase), std::sin(phase)};
}

LogDet operator*(const LogDet& a, const LogDet& b) {
    if (a.is_zero() || b.is_zero()) return LogDet::zero();
    return {a.log_mag + b.log_mag, wrap_phase(a.phase + b.phase)};
}

LogDet operator/(const LogDet& a, const LogDet& b) {
    if (a.is_zero()) return LogDet::zero();
    return {a.log_mag - b.log_mag, wrap_phase(a.phase - b.phase)};
}

LogDet inverse(const LogDet& a) {
    return {-a.log_mag, wrap_phase(-a.phase)};
}

LogDet pow_int(const LogDet& a, int k) {
    if (a.is_zero()) return k == 0 ? LogDet::one() : LogDet::zero();
    return {a.log_mag * k, wrap_phase(a.phase * k)};
}

LogDet exp_logdet(Complex z) {
    return {z.real(), wrap_phase(z.imag())};
}

Complex ratio_complex(const LogDet& a, const LogDet& b) {
    if (a.is_zero()) return {0.0, 0.0};
    double lm = a.log_mag - b.log_mag;
    double ph = wrap_phase(a.phase - b.phase);
    return std::exp(lm) * Complex{std::cos(ph), std::sin(ph)};
}

LogDet logdet_lu(const Matrix& A) {
    Eigen::PartialPivLU<Matrix> lu(A);
    const auto& diag = lu.matrixLU().diagonal();
    double lm = 0.0;
    double ph = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        double a = std::abs(diag(i));
        if (a == 0.0) return LogDet::zero();
        lm += std::log(a);
        ph = wrap_phase(ph + std::arg(diag(i)));
    }
    if (lu.permutationP().determinant() < 0) ph = wrap_phase(ph + kPi);
    return {lm, ph};
}

LogDet det2_finite(const Matrix& A) {
    if (A.rows() != A.cols()) throw ConfigError("det2_finite: matrix must be square");
    Matrix M = Matrix::Identity(A.rows(), A.cols()) - A;
    LogDet ld = logdet_lu(M);
    if (ld.is_zero()) return LogDet::zero();
    Complex t = A.trace();
    return {ld.log_mag + t.real(), wrap_phase(ld.phase + t.imag())};
}

}  // namespace pevans
