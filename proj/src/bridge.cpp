#include "pevans/bridge.hpp"

#include <cmath>
#include <numbers>

namespace pevans {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_2pi(const SpectralProblem& problem, const char* who) {
    if (std::abs(problem.X - kTwoPi) > 1e-12 * kTwoPi)
        throw ConfigError(std::string(who) + ": problem must be normalized to X = 2 pi");
}

}  // namespace

Complex gamma_exponent_const(const SpectralProblem& problem) {
    const double X = problem.X;
    Complex tr_A1_ave = problem.A1.coeff(0).trace();
    double ratio = std::exp(X) / std::expm1(X);
    return ratio * (tr_A1_ave + 2.0 * problem.n) * X;
}

Complex gamma_const(const SpectralProblem& problem) {
    return std::exp(gamma_exponent_const(problem));
}

double s_sum_partial(long J) {
    double s = 1.0;  // j = 0
    for (long j = 1; j <= J; ++j) s += 2.0 / (static_cast<double>(j) * j + 1.0);
    return s;
}

Complex t_sum_partial(long J) {
    Complex s = 1.0;
    for (long j = 1; j <= J; ++j) {
        double jj = static_cast<double>(j);
        s += 1.0 / Complex{jj * jj, jj} + 1.0 / Complex{jj * jj, -jj};
    }
    return s;
}

double s_sum_closed() {
    return std::numbers::pi / std::tanh(std::numbers::pi);
}

std::pair<Complex, Complex> delta_consts(const SpectralProblem& problem, Complex lambda, long J,
                                         DeltaReading reading) {
    require_2pi(problem, "delta_consts");
    if (J != kClosedForm && J < 1) throw ConfigError("delta_consts: J must be >= 1");

    const int n = problem.n;
    Complex tr_a = (reading == DeltaReading::a0) ? problem.A0.coeff(0).trace()
                                                 : problem.A1.coeff(0).trace();
    Complex tr_b = problem.B0.coeff(0).trace();
    Complex tr_a1 = problem.A1.coeff(0).trace();

    double s = (J == kClosedForm) ? s_sum_closed() : s_sum_partial(J);
    Complex t = (J == kClosedForm) ? Complex{s_sum_closed(), 0.0} : t_sum_partial(J);

    Complex delta = -(tr_a + static_cast<double>(n) - lambda * tr_b) * s;
    Complex delta_hat = (tr_a1 + 2.0 * n) * t;
    return {delta, delta_hat};
}

Complex epsilon_partial(long J) {
    Complex p = 3.0;  // j = 0 factor: 1 + 2/(i*0 + 1)
    for (long j = 1; j <= J; ++j) {
        double jj = static_cast<double>(j);
        p *= (1.0 + 2.0 / Complex{1.0, jj}) * (1.0 + 2.0 / Complex{1.0, -jj});
    }
    return p;
}

double epsilon_const(long J) {
    if (J < 1) throw ConfigError("epsilon_const: J must be >= 1");
    return epsilon_partial(J).real();
}

double epsilon_closed() {
    return std::sinh(3.0 * std::numbers::pi) / std::sinh(std::numbers::pi);
}

LogDet predicted_factor_logdet(const SpectralProblem& problem, Complex lambda,
                               const FactorOptions& options) {
    require_2pi(problem, "predicted_factor");
    auto [delta, delta_hat] = delta_consts(problem, lambda, options.J, options.reading);
    Complex gamma_exponent = gamma_exponent_const(problem);
    LogDet base = exp_logdet(gamma_exponent) *
                  pow_int(LogDet::from_complex(std::expm1(problem.X)), -2 * problem.n);
    if (options.form == FactorForm::corrected) {
        LogDet sign = (problem.n % 2 == 1) ? LogDet::from_complex(-1.0) : LogDet::one();
        return sign * exp_logdet(-delta - delta_hat) * base;
    }
    double eps = (options.J == kClosedForm) ? epsilon_closed() : epsilon_const(options.J);
    return exp_logdet(delta - delta_hat) * inverse(LogDet::from_complex(eps)) * base;
}

Complex predicted_factor(const SpectralProblem& problem, Complex lambda,
                         const FactorOptions& options) {
    return predicted_factor_logdet(problem, lambda, options).to_complex();
}

BridgeConstants bridge_constants(const SpectralProblem& problem, Complex lambda, long J,
                                 DeltaReading reading) {
    auto [delta, delta_hat] = delta_consts(problem, lambda, J, reading);
    BridgeConstants c;
    c.gamma = gamma_const(problem);
    c.delta = delta;
    c.delta_hat = delta_hat;
    c.epsilon = (J == kClosedForm) ? epsilon_closed() : epsilon_const(J);
    c.J_used = J;
    c.X = problem.X;
    return c;
}

}  // namespace pevans
