#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pevans {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Bad arguments / malformed configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problem data failed validation, e.g. indefinite Re B0 (CLI exit code 2).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure in an integrator, eigensolver or contour (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Axis-aligned rectangle in the complex plane.
struct Region {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    bool contains(Complex z, double pad = 0.0) const {
        return z.real() >= re_min - pad && z.real() <= re_max + pad &&
               z.imag() >= im_min - pad && z.imag() <= im_max + pad;
    }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diameter() const { return std::hypot(width(), height()); }
    Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
};

}  // namespace pevans
