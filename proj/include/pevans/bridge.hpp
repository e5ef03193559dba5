#pragma once

// The explicit constants tying the three spectral functions together at
// X = 2 pi: gamma, the trace limits delta and delta_hat, the regularizing
// product epsilon, and the predicted ratio D(lambda)/E(lambda).

#include <utility>

#include "pevans/fourier_series.hpp"
#include "pevans/logdet.hpp"
#include "pevans/types.hpp"

namespace pevans {

/// Sentinel J value selecting the closed-form constants.
inline constexpr int kClosedForm = -1;

/// Which zero-mode trace enters delta.  The two readings differ whenever
/// tr A0_hat_0 != tr A1_hat_0; a0 is the default (it is the trace the
/// preconditioned operator actually has) and a1 is the literal printed
/// formula, kept selectable so the disagreement stays observable.
enum class DeltaReading { a0, a1 };

/// corrected: (-1)^n e^{-delta - delta_hat} gamma (e^X-1)^{-2n}, the factor
///            consistent with the exact finite-J identity
///            D_J = (-1)^n e^{tr K_J - tr Khat_J} F_J  (see decisions notes);
/// literal:   e^{delta - delta_hat} / epsilon * gamma (e^X-1)^{-2n}.
enum class FactorForm { corrected, literal };

enum class ConstantsMode { closed, partial };

/// gamma = exp(e^X/(e^X-1) (tr A1_ave + 2n) X); A1_ave is the zero mode.
Complex gamma_const(const SpectralProblem& problem);
/// The exponent of gamma (for log-space composition).
Complex gamma_exponent_const(const SpectralProblem& problem);

/// delta     = -tr(A_hat_0 + I - lambda B0_hat_0) * sum_{|j|<=J} 1/(j^2+1),
///             with A_hat_0 the A0 (default) or A1 zero mode;
/// delta_hat =  tr(A1_hat_0 + 2I) * (1 + sum_{1<=|j|<=J} 1/(j^2+ij)).
/// J = kClosedForm uses sum_j 1/(j^2+1) = pi coth(pi) for both sums.
/// Requires X = 2 pi.
std::pair<Complex, Complex> delta_consts(const SpectralProblem& problem, Complex lambda,
                                         long J = kClosedForm,
                                         DeltaReading reading = DeltaReading::a0);

/// Partial sums sum_{|j|<=J} 1/(j^2+1) and 1 + sum_{1<=|j|<=J} 1/(j^2+ij).
double s_sum_partial(long J);
Complex t_sum_partial(long J);
/// sum_{j in Z} 1/(j^2+1) = pi coth(pi); also the limit of t_sum_partial.
double s_sum_closed();

/// Partial product prod_{|j|<=J} (1 + 2/(ij+1)); +-j pairs combine to
/// (j^2+9)/(j^2+1) and the j=0 factor is 3, so the limit is real.
Complex epsilon_partial(long J);
double epsilon_const(long J);
/// lim_J epsilon_const(J) = sinh(3 pi) / sinh(pi).
double epsilon_closed();

struct FactorOptions {
    DeltaReading reading = DeltaReading::a0;
    FactorForm form = FactorForm::corrected;
    long J = kClosedForm;  // kClosedForm or a truncation order for partial sums
};

/// The predicted ratio D(lambda)/E(lambda); never vanishes.  Requires X = 2 pi.
Complex predicted_factor(const SpectralProblem& problem, Complex lambda,
                         const FactorOptions& options = {});
LogDet predicted_factor_logdet(const SpectralProblem& problem, Complex lambda,
                               const FactorOptions& options = {});

struct BridgeConstants {
    Complex gamma;
    Complex delta;
    Complex delta_hat;
    double epsilon = 0.0;
    long J_used = kClosedForm;
    double X = 0.0;
};

BridgeConstants bridge_constants(const SpectralProblem& problem, Complex lambda,
                                 long J = kClosedForm, DeltaReading reading = DeltaReading::a0);

}  // namespace pevans
