#pragma once

// End-to-end check of the determinant/Evans relation: the ratios
//   r1(J) = D_J(lambda) / (predicted_factor * E(lambda))
//   r2(J) = F_J(lambda) / closed_form_F(lambda)
// must approach 1 as J grows, with both delta readings reported so that the
// ambiguous zero-mode trace stays an observable experiment.

#include <vector>

#include "pevans/bridge.hpp"
#include "pevans/fourier_series.hpp"
#include "pevans/types.hpp"

namespace pevans {

struct VerifyOptions {
    FactorForm form = FactorForm::corrected;
    ConstantsMode constants = ConstantsMode::closed;
    DeltaReading default_reading = DeltaReading::a0;
    double integrator_tol = 1e-10;
    double min_abs_E = 1e-6;  // lambda points with |E| below this are skipped
};

struct VerifyEntry {
    Complex lambda;
    int J = 0;
    DeltaReading reading = DeltaReading::a0;
    bool skipped = false;  // |E| too small at this lambda
    double ratio_logmag_error = 0.0;  // log|r1|
    double ratio_phase_error = 0.0;   // arg r1
    double r1_abs_error = 0.0;        // |r1 - 1|
    double r2_logmag_error = 0.0;
    double r2_phase_error = 0.0;
    double r2_abs_error = 0.0;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    std::vector<int> J_list;
    // Medians of |r - 1| over the lambda points, per J, default reading.
    std::vector<double> median_r1;
    std::vector<double> median_r2;
    std::vector<double> median_r1_alt;  // the other delta reading
    bool r1_monotone = false;
    bool r2_monotone = false;
    double final_median_r1 = 0.0;
    double final_median_r2 = 0.0;
    bool readings_differ = false;       // tr A0_hat_0 != tr A1_hat_0
    DeltaReading converging_reading = DeltaReading::a0;
    double tol = 0.0;
    bool passed = false;  // r1 monotone decreasing and final median <= tol

    VerifyOptions options;
};

/// Requires the problem normalized to X = 2 pi.
VerifyReport verify_relation(const SpectralProblem& problem, const std::vector<Complex>& lambdas,
                             const std::vector<int>& J_list, double tol,
                             const VerifyOptions& options = {});

}  // namespace pevans
