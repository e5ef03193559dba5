#include "pevans/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pevans/evans.hpp"
#include "pevans/fredholm.hpp"
#include "pevans/hill.hpp"
#include "pevans/logdet.hpp"

namespace pevans {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return (v.size() % 2 == 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

bool monotone_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

struct RatioErrors {
    double logmag, phase, abs;
};

RatioErrors ratio_errors(const LogDet& num, const LogDet& den) {
    double lm = num.log_mag - den.log_mag;
    double ph = wrap_phase(num.phase - den.phase);
    Complex r = std::exp(lm) * Complex{std::cos(ph), std::sin(ph)};
    return {lm, ph, std::abs(r - 1.0)};
}

}  // namespace

VerifyReport verify_relation(const SpectralProblem& problem, const std::vector<Complex>& lambdas,
                             const std::vector<int>& J_list, double tol,
                             const VerifyOptions& options) {
    if (std::abs(problem.X - 2.0 * std::numbers::pi) > 1e-12 * problem.X)
        throw ValidationError("verify_relation: problem must be normalized to X = 2 pi");
    for (std::size_t i = 1; i < J_list.size(); ++i)
        if (J_list[i] <= J_list[i - 1])
            throw ConfigError("verify_relation: J_list must be increasing");

    VerifyReport report;
    report.J_list = J_list;
    report.tol = tol;
    report.options = options;

    Complex trA0 = problem.A0.coeff(0).trace();
    Complex trA1 = problem.A1.coeff(0).trace();
    report.readings_differ = std::abs(trA0 - trA1) > 1e-14 * (1.0 + std::abs(trA0));

    // lambda-wise data reused across J.
    struct PerLambda {
        bool skipped = false;
        LogDet E;
        LogDet cf;  // closed_form_F
        LogDet pred_E_a0, pred_E_a1;
    };
    std::vector<PerLambda> per(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        Complex E = gardner_E(problem, lambdas[i], options.integrator_tol);
        if (std::abs(E) < options.min_abs_E) {
            per[i].skipped = true;
            continue;
        }
        per[i].E = LogDet::from_complex(E);
        per[i].cf = LogDet::from_complex(closed_form_F(problem, lambdas[i], options.integrator_tol));
    }

    for (int J : J_list) {
        TruncatedSystem trunc = build_truncation(problem, J);
        long constJ = options.constants == ConstantsMode::closed ? kClosedForm : J;
        std::vector<double> r1_a0, r1_a1, r2;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (per[i].skipped) {
                for (DeltaReading rd : {DeltaReading::a0, DeltaReading::a1}) {
                    VerifyEntry e;
                    e.lambda = lambdas[i];
                    e.J = J;
                    e.reading = rd;
                    e.skipped = true;
                    report.entries.push_back(e);
                }
                continue;
            }
            LogDet DJ = DJ_det(trunc, lambdas[i]);
            LogDet FJ = FJ_det(trunc, lambdas[i]);
            RatioErrors e2 = ratio_errors(FJ, per[i].cf);
            r2.push_back(e2.abs);
            for (DeltaReading rd : {DeltaReading::a0, DeltaReading::a1}) {
                FactorOptions fo{rd, options.form, constJ};
                LogDet pred = predicted_factor_logdet(problem, lambdas[i], fo) * per[i].E;
                RatioErrors e1 = ratio_errors(DJ, pred);
                VerifyEntry e;
                e.lambda = lambdas[i];
                e.J = J;
                e.reading = rd;
                e.ratio_logmag_error = e1.logmag;
                e.ratio_phase_error = e1.phase;
                e.r1_abs_error = e1.abs;
                e.r2_logmag_error = e2.logmag;
                e.r2_phase_error = e2.phase;
                e.r2_abs_error = e2.abs;
                report.entries.push_back(e);
                (rd == DeltaReading::a0 ? r1_a0 : r1_a1).push_back(e1.abs);
            }
        }
        bool default_a0 = options.default_reading == DeltaReading::a0;
        report.median_r1.push_back(median(default_a0 ? r1_a0 : r1_a1));
        report.median_r1_alt.push_back(median(default_a0 ? r1_a1 : r1_a0));
        report.median_r2.push_back(median(r2));
    }

    report.r1_monotone = monotone_decreasing(report.median_r1);
    report.r2_monotone = monotone_decreasing(report.median_r2);
    report.final_median_r1 = report.median_r1.empty() ? 0.0 : report.median_r1.back();
    report.final_median_r2 = report.median_r2.empty() ? 0.0 : report.median_r2.back();
    if (report.readings_differ) {
        double a0_final = options.default_reading == DeltaReading::a0 ? report.final_median_r1
                                                                      : report.median_r1_alt.back();
        double a1_final = options.default_reading == DeltaReading::a0 ? report.median_r1_alt.back()
                                                                      : report.final_median_r1;
        report.converging_reading = a0_final <= a1_final ? DeltaReading::a0 : DeltaReading::a1;
    } else {
        report.converging_reading = options.default_reading;
    }
    report.passed = report.r1_monotone && report.final_median_r1 <= tol;
    return report;
}

}  // namespace pevans
