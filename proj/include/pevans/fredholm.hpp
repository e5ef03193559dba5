#pragma once

// Truncated Birman-Schwinger determinants.  The second-order operator is
// preconditioned by (d_x^2 - 1)^{-1}, giving a Hilbert-Schmidt perturbation
// of the identity whose 2-modified determinant D_J vanishes exactly at the
// eigenvalues of L_J; the first-order variant F_J plays the same role for
// the companion system and is the bridge to the shooting Evans function.

#include "pevans/hill.hpp"
#include "pevans/logdet.hpp"
#include "pevans/types.hpp"

namespace pevans {

/// K_J(lambda) = -[ DJ (DJ^2-I)^{-1} A1J + (DJ^2-I)^{-1} (A0J + I - lambda B0J) ].
/// The sign is fixed so that
///   I - K_J = (DJ^2-I)^{-1} (DJ^2 + DJ A1J + A0J - lambda B0J)
/// holds exactly, making zeros of det2(I - K_J) the eigenvalues of L_J.
Matrix build_KJ(const TruncatedSystem& trunc, Complex lambda);

/// tr K_J(lambda), accumulated from the diagonal in O(N).
Complex trace_KJ(const TruncatedSystem& trunc, Complex lambda);

/// D_J(lambda) = det2(I - K_J(lambda)).
LogDet DJ_det(const TruncatedSystem& trunc, Complex lambda);

/// The factored route to the same value:
///   det(DJ^2-I)^{-1} * det B0J * e^{tr K_J} * det(L_J - lambda).
/// Must agree with DJ_det to 1e-10 (relative log magnitude, absolute phase).
LogDet DJ_factored(const TruncatedSystem& trunc, Complex lambda);

/// First-order companion operator: Khat_J = I - P, where
///   P = [(DJ-I) (+) (DJ-I)]^{-1} [[DJ, -I], [A0J - lambda B0J + dA1J, DJ + A1J]].
Matrix build_KhatJ(const TruncatedSystem& trunc, Complex lambda);

/// tr Khat_J (lambda-independent), accumulated from the diagonal in O(N).
Complex trace_KhatJ(const TruncatedSystem& trunc);

/// F_J(lambda) = det2(I - Khat_J(lambda)).
LogDet FJ_det(const TruncatedSystem& trunc, Complex lambda);

/// Factored route: det(DJ-I)^{-2} * det B0J * e^{tr Khat_J} * det(L_J - lambda).
LogDet FJ_factored(const TruncatedSystem& trunc, Complex lambda);

/// det(DJ^2 - I) and det(DJ - I) as LogDet (diagonal products).
LogDet logdet_DJ2_minus_I(const TruncatedSystem& trunc);
LogDet logdet_DJ_minus_I(const TruncatedSystem& trunc);

/// Hilbert-Schmidt (Frobenius) norm of K_J(lambda); bounded in J.
double hs_norm(const SpectralProblem& problem, int J, Complex lambda);

struct DeterminantSample {
    Complex lambda;
    LogDet DJ;
    LogDet FJ;
    int J = 0;
};

DeterminantSample sample_determinants(const TruncatedSystem& trunc, Complex lambda);

}  // namespace pevans
