#pragma once

// Hill's method: truncate the Fourier-side system at wave number J, giving
// block matrices of size N = (2J+1) n, and take eigenvalues of the resulting
// operator matrix L_J.

#include <limits>
#include <vector>

#include "pevans/fourier_series.hpp"
#include "pevans/types.hpp"

namespace pevans {

/// The J-truncated Fourier-side matrices.  Mode ordering is j = -J..J with
/// block row index (j + J) * n; this ordering is part of the output contract.
struct TruncatedSystem {
    int J = 0;
    int n = 0;
    double X = 0.0;
    int N = 0;  // (2J+1) n

    Vector D_diag;           // diagonal of DJ: block j is (2 pi i j / X) I_n
    Matrix A1J, A0J, B0J;    // block-Toeplitz, block (j,k) = hat{.}_{j-k}
    Matrix dA1J;             // block-Toeplitz image of d_x A1
    SpectralProblem problem; // the problem this truncation was built from

    Matrix DJ() const { return Matrix(D_diag.asDiagonal()); }
};

/// Block-Toeplitz matrix of a series at truncation J: block (j,k) = coeff(j-k).
Matrix block_toeplitz(const FourierSeries& series, int J);

TruncatedSystem build_truncation(const SpectralProblem& problem, int J);

/// L_J = B0J^{-1} (DJ^2 + DJ A1J + A0J).  The spectral parameter enters only
/// through det(L_J - lambda) downstream.  Throws NumericalError when B0J is
/// ill-conditioned (1-norm condition estimate above 1e12).
Matrix assemble_LJ(const TruncatedSystem& trunc);

/// Eigenvalues of L_J, sorted by (Re, Im) ascending, repeated by algebraic
/// multiplicity; length N.
std::vector<Complex> hill_eigenvalues(const TruncatedSystem& trunc);
std::vector<Complex> hill_eigenvalues(const Matrix& LJ);

/// Greedy nearest-pair matching: repeatedly match the globally closest
/// (a, b) pair.  Returns for each element of `a` the distance to its match,
/// or NaN for unmatched elements.
std::vector<double> greedy_match_distances(const std::vector<Complex>& a,
                                           const std::vector<Complex>& b);

struct SweepRow {
    int J = 0;
    Complex lambda;
    double match_distance = std::numeric_limits<double>::quiet_NaN();
};

/// For each J in increasing J_list: eigenvalues of L_J inside `region`
/// together with greedy matching distances to the previous J's list.
std::vector<SweepRow> convergence_sweep(const SpectralProblem& problem,
                                        const std::vector<int>& J_list, const Region& region);

}  // namespace pevans
