#include "pevans/fourier_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pevans {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_entries(const Matrix& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            if (!std::isfinite(M(i, j).real()) || !std::isfinite(M(i, j).imag())) return false;
    return true;
}

bool detect_real_valued(const std::map<int, Matrix>& c, int n) {
    double scale = 1.0;
    for (const auto& [k, M] : c) scale = std::max(scale, M.cwiseAbs().maxCoeff());
    for (const auto& [k, M] : c) {
        Matrix other = Matrix::Zero(n, n);
        auto it = c.find(-k);
        if (it != c.end()) other = it->second;
        if ((other - M.conjugate()).cwiseAbs().maxCoeff() > 1e-14 * scale) return false;
    }
    return true;
}

}  // namespace

FourierSeries FourierSeries::make(int n, double X, const std::map<int, Matrix>& coeffs) {
    if (n < 1) throw ValidationError("FourierSeries: dimension must be positive");
    if (!(X > 0.0)) throw ValidationError("FourierSeries: period must be positive");
    FourierSeries s;
    s.n_ = n;
    s.X_ = X;
    for (const auto& [k, M] : coeffs) {
        if (M.rows() != n || M.cols() != n)
            throw ValidationError("FourierSeries: coefficient of mode " + std::to_string(k) +
                                  " is not " + std::to_string(n) + "x" + std::to_string(n));
        if (!finite_entries(M))
            throw ValidationError("FourierSeries: non-finite entry in mode " + std::to_string(k));
        s.c_[k] = M;
        s.k_max_ = std::max(s.k_max_, std::abs(k));
    }
    if (!s.c_.count(0)) s.c_[0] = Matrix::Zero(n, n);
    s.real_valued_ = detect_real_valued(s.c_, n);
    return s;
}

FourierSeries FourierSeries::from_samples(int n, double X,
                                          const std::vector<std::pair<double, Matrix>>& samples,
                                          int k_max) {
    const int M = static_cast<int>(samples.size());
    if (k_max < 0) throw ValidationError("from_samples: k_max must be nonnegative");
    if (M < 2 * k_max + 1)
        throw ValidationError("from_samples: need at least 2*k_max+1 = " +
                              std::to_string(2 * k_max + 1) + " samples, got " + std::to_string(M));
    for (int j = 0; j < M; ++j) {
        if (std::abs(samples[j].first - j * X / M) > 1e-9 * X)
            throw ValidationError("from_samples: grid is not uniform starting at 0");
    }
    std::map<int, Matrix> coeffs;
    for (int k = -k_max; k <= k_max; ++k) {
        Matrix C = Matrix::Zero(n, n);
        for (int j = 0; j < M; ++j) {
            double ang = -kTwoPi * k * j / static_cast<double>(M);
            C += samples[j].second * Complex{std::cos(ang), std::sin(ang)};
        }
        coeffs[k] = C / static_cast<double>(M);
    }
    return make(n, X, coeffs);
}

Matrix FourierSeries::evaluate(double x) const {
    Matrix M = Matrix::Zero(n_, n_);
    for (const auto& [k, C] : c_) {
        double ang = kTwoPi * k * x / X_;
        M += C * Complex{std::cos(ang), std::sin(ang)};
    }
    return M;
}

FourierSeries FourierSeries::differentiate() const {
    FourierSeries d = *this;
    for (auto& [k, C] : d.c_) C *= Complex{0.0, kTwoPi * k / X_};
    d.real_valued_ = detect_real_valued(d.c_, n_);
    return d;
}

Matrix FourierSeries::coeff(int k) const {
    auto it = c_.find(k);
    if (it == c_.end()) return Matrix::Zero(n_, n_);
    return it->second;
}

FourierSeries operator+(const FourierSeries& a, const FourierSeries& b) {
    if (a.n_ != b.n_ || std::abs(a.X_ - b.X_) > 1e-12 * a.X_)
        throw ValidationError("FourierSeries: incompatible operands");
    std::map<int, Matrix> c = a.c_;
    for (const auto& [k, C] : b.c_) {
        auto it = c.find(k);
        if (it == c.end())
            c[k] = C;
        else
            it->second += C;
    }
    return FourierSeries::make(a.n_, a.X_, c);
}

FourierSeries operator*(Complex s, const FourierSeries& a) {
    std::map<int, Matrix> c = a.c_;
    for (auto& [k, C] : c) C *= s;
    return FourierSeries::make(a.n_, a.X_, c);
}

double definiteness_margin(const FourierSeries& B0, int sign) {
    const int grid = 64 * (B0.k_max() + 1);
    double margin = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid; ++g) {
        Matrix B = B0.evaluate(g * B0.period() / grid);
        Matrix H = 0.5 * static_cast<double>(sign) * (B + B.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
        margin = std::min(margin, es.eigenvalues().minCoeff());
    }
    return margin;
}

SpectralProblem SpectralProblem::make(const FourierSeries& A1, const FourierSeries& A0,
                                      const FourierSeries& B0) {
    if (A1.dim() != A0.dim() || A0.dim() != B0.dim())
        throw ValidationError("SpectralProblem: A1, A0, B0 dimensions differ");
    double X = B0.period();
    if (std::abs(A1.period() - X) > 1e-12 * X || std::abs(A0.period() - X) > 1e-12 * X)
        throw ValidationError("SpectralProblem: A1, A0, B0 periods differ");

    SpectralProblem p;
    p.n = B0.dim();
    p.X = X;
    p.A1 = A1;
    p.A0 = A0;
    p.B0 = B0;

    constexpr double kMinEig = 1e-10;
    if (definiteness_margin(B0, +1) >= kMinEig) {
        p.definiteness_sign = +1;
    } else if (definiteness_margin(B0, -1) >= kMinEig) {
        p.definiteness_sign = -1;
    } else {
        throw ValidationError("SpectralProblem: Re B0 is not definite on the validation grid");
    }
    return p;
}

SpectralProblem normalize_period(const SpectralProblem& problem) {
    return rescale_period(problem, kTwoPi);
}

SpectralProblem rescale_period(const SpectralProblem& problem, double X_new) {
    if (!(X_new > 0.0)) throw ValidationError("rescale_period: period must be positive");
    if (problem.X == X_new) return problem;
    // y = X_new x / X; one x-derivative contributes a factor X / X_new.
    double s = problem.X / X_new;
    std::map<int, Matrix> a1, a0, b0;
    for (const auto& [k, C] : problem.A1.coeffs()) a1[k] = s * C;
    for (const auto& [k, C] : problem.A0.coeffs()) a0[k] = s * s * C;
    for (const auto& [k, C] : problem.B0.coeffs()) b0[k] = s * s * C;
    return SpectralProblem::make(FourierSeries::make(problem.n, X_new, a1),
                                 FourierSeries::make(problem.n, X_new, a0),
                                 FourierSeries::make(problem.n, X_new, b0));
}

}  // namespace pevans
