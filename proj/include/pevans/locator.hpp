#pragma once

// Argument-principle root location: winding numbers on contours with adaptive
// phase sampling, recursive subdivision, secant refinement, and a
// three-method comparison harness.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pevans/fourier_series.hpp"
#include "pevans/logdet.hpp"
#include "pevans/types.hpp"

namespace pevans {

/// Functions fed to the winding machinery return LogDet so that determinant
/// magnitudes spanning hundreds of orders stay usable (phase is all that the
/// argument principle needs).
using AnalyticFn = std::function<LogDet(Complex)>;

struct Contour {
    enum class Kind { circle, rectangle };
    Kind kind = Kind::circle;
    Complex center;        // circle
    double radius = 0.0;   // circle
    Region rect;           // rectangle
    int samples = 256;     // initial sample count, >= 64, even

    static Contour circle(Complex center, double radius, int samples = 256);
    static Contour rectangle(const Region& r, int samples = 256);

    /// Point on the contour at parameter t in [0, 1), counterclockwise.
    Complex point(double t) const;
};

/// Total phase change along the contour divided by 2 pi, accumulated by
/// unwrapping successive phase differences.  Sampling is refined (midpoint
/// insertion, up to 2^16 points) until every step is below pi/2.
/// Throws NumericalError if |f| < 1e-12 at a sample (contour through zero)
/// or if refinement is exhausted.
int winding_number(const AnalyticFn& f, const Contour& contour);

enum class Method { hill, evans, fredholm };
std::string method_name(Method m);

struct LocatedEigenvalue {
    Complex lambda;
    int multiplicity = 1;
    Method method = Method::hill;
    double residual = 0.0;  // |f| at the root relative to the contour median
    bool cluster = false;   // true when an unresolved cluster was reported
};

struct EigenReport {
    Method method = Method::hill;
    Region region;
    std::vector<LocatedEigenvalue> eigenvalues;
    int total_winding = 0;
    std::vector<Region> failed_cells;  // cells whose winding could not be computed

    int total_multiplicity() const {
        int s = 0;
        for (const auto& e : eigenvalues) s += e.multiplicity;
        return s;
    }
};

/// Locate eigenvalues in a rectangular region.
///  - Method::hill: eigenvalues of L_J in the region, clusters within 1e-6
///    merged into multiplicities.
///  - Method::evans / Method::fredholm: recursive contour subdivision on
///    E(lambda) or D_J(lambda) until each cell has winding 0 or holds a
///    cluster of diameter < 1e-8; simple roots are secant-refined.
/// J_or_tol: truncation order for hill/fredholm; integrator tolerance is
/// `tol` for the evans path.
EigenReport locate_eigenvalues(const SpectralProblem& problem, const Region& region,
                               Method method, int J, double tol = 1e-10);

/// Same machinery on an arbitrary function (used by tests and the CLI).
EigenReport locate_zeros(const AnalyticFn& f, const Region& region, Method tag);

struct MethodAgreementRow {
    std::optional<Complex> hill, fredholm, evans;
    int mult_hill = 0, mult_fredholm = 0, mult_evans = 0;
    double dist_hill_fredholm = 0.0, dist_hill_evans = 0.0, dist_fredholm_evans = 0.0;
    bool multiplicities_agree = false;
};

struct MethodAgreement {
    std::vector<MethodAgreementRow> rows;
    int total_hill = 0, total_fredholm = 0, total_evans = 0;
    bool totals_agree = false;
    double max_pairwise_distance = 0.0;
    EigenReport hill_report, fredholm_report, evans_report;
};

MethodAgreement compare_methods(const SpectralProblem& problem, const Region& region, int J,
                                double tol = 1e-10);

}  // namespace pevans
