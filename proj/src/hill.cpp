#include "pevans/hill.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pevans {

Matrix block_toeplitz(const FourierSeries& series, int J) {
    const int n = series.dim();
    const int N = (2 * J + 1) * n;
    Matrix M = Matrix::Zero(N, N);
    for (int m = -series.k_max(); m <= series.k_max(); ++m) {
        Matrix C = series.coeff(m);
        if (C.cwiseAbs().maxCoeff() == 0.0) continue;
        for (int j = -J; j <= J; ++j) {
            int k = j - m;
            if (k < -J || k > J) continue;
            M.block((j + J) * n, (k + J) * n, n, n) = C;
        }
    }
    return M;
}

TruncatedSystem build_truncation(const SpectralProblem& problem, int J) {
    if (J < 0) throw ConfigError("build_truncation: J must be nonnegative");
    TruncatedSystem t;
    t.J = J;
    t.n = problem.n;
    t.X = problem.X;
    t.N = (2 * J + 1) * problem.n;
    t.problem = problem;

    t.D_diag = Vector::Zero(t.N);
    for (int j = -J; j <= J; ++j) {
        Complex d{0.0, 2.0 * std::numbers::pi * j / problem.X};
        for (int i = 0; i < t.n; ++i) t.D_diag((j + J) * t.n + i) = d;
    }
    t.A1J = block_toeplitz(problem.A1, J);
    t.A0J = block_toeplitz(problem.A0, J);
    t.B0J = block_toeplitz(problem.B0, J);
    t.dA1J = block_toeplitz(problem.A1.differentiate(), J);
    return t;
}

Matrix assemble_LJ(const TruncatedSystem& t) {
    Eigen::PartialPivLU<Matrix> lu(t.B0J);
    double norm1 = t.B0J.cwiseAbs().colwise().sum().maxCoeff();
    Matrix inv = lu.inverse();
    double inv_norm1 = inv.cwiseAbs().colwise().sum().maxCoeff();
    double cond = norm1 * inv_norm1;
    if (!std::isfinite(cond) || cond > 1e12)
        throw NumericalError("assemble_LJ: B0J ill-conditioned, cond estimate " +
                             std::to_string(cond));
    Matrix rhs = Matrix(t.D_diag.asDiagonal()) * Matrix(t.D_diag.asDiagonal());
    rhs += Matrix(t.D_diag.asDiagonal()) * t.A1J;
    rhs += t.A0J;
    return lu.solve(rhs);
}

std::vector<Complex> hill_eigenvalues(const Matrix& LJ) {
    Eigen::ComplexEigenSolver<Matrix> es(LJ, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericalError("hill_eigenvalues: eigensolver failed");
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + LJ.rows());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

std::vector<Complex> hill_eigenvalues(const TruncatedSystem& t) {
    return hill_eigenvalues(assemble_LJ(t));
}

std::vector<double> greedy_match_distances(const std::vector<Complex>& a,
                                           const std::vector<Complex>& b) {
    std::vector<double> out(a.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
    const std::size_t pairs = std::min(a.size(), b.size());
    for (std::size_t p = 0; p < pairs; ++p) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (used_b[j]) continue;
                double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = true;
        used_b[bj] = true;
        out[bi] = best;
    }
    return out;
}

std::vector<SweepRow> convergence_sweep(const SpectralProblem& problem,
                                        const std::vector<int>& J_list, const Region& region) {
    for (std::size_t i = 1; i < J_list.size(); ++i)
        if (J_list[i] <= J_list[i - 1])
            throw ConfigError("convergence_sweep: J_list must be increasing");

    std::vector<SweepRow> rows;
    std::vector<Complex> prev;
    bool have_prev = false;
    for (int J : J_list) {
        std::vector<Complex> in_region;
        for (Complex ev : hill_eigenvalues(build_truncation(problem, J)))
            if (region.contains(ev)) in_region.push_back(ev);
        std::vector<double> dist(in_region.size(), std::numeric_limits<double>::quiet_NaN());
        if (have_prev) dist = greedy_match_distances(in_region, prev);
        for (std::size_t i = 0; i < in_region.size(); ++i)
            rows.push_back({J, in_region[i], dist[i]});
        prev = std::move(in_region);
        have_prev = true;
    }
    return rows;
}

}  // namespace pevans
