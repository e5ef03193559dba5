#include "pevans/locator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pevans/fredholm.hpp"
#include "pevans/evans.hpp"
#include "pevans/hill.hpp"

namespace pevans {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogZeroOnContour = -27.631021115928547;  // ln(1e-12)
constexpr int kMaxContourSamples = 1 << 16;
constexpr double kClusterDiameter = 1e-8;
constexpr double kHillClusterRadius = 1e-6;

struct ContourSample {
    double t;
    LogDet v;
};

}  // namespace

Contour Contour::circle(Complex center, double radius, int samples) {
    if (!(radius > 0.0)) throw ConfigError("Contour: radius must be positive");
    Contour c;
    c.kind = Kind::circle;
    c.center = center;
    c.radius = radius;
    c.samples = std::max(64, samples + (samples % 2));
    return c;
}

Contour Contour::rectangle(const Region& r, int samples) {
    if (!(r.width() > 0.0) || !(r.height() > 0.0))
        throw ConfigError("Contour: degenerate rectangle");
    Contour c;
    c.kind = Kind::rectangle;
    c.rect = r;
    c.samples = std::max(64, samples + (samples % 2));
    return c;
}

Complex Contour::point(double t) const {
    t -= std::floor(t);
    if (kind == Kind::circle) {
        double ang = 2.0 * kPi * t;
        return center + radius * Complex{std::cos(ang), std::sin(ang)};
    }
    const double w = rect.width(), h = rect.height();
    const double per = 2.0 * (w + h);
    double s = t * per;
    if (s < w) return {rect.re_min + s, rect.im_min};
    s -= w;
    if (s < h) return {rect.re_max, rect.im_min + s};
    s -= h;
    if (s < w) return {rect.re_max - s, rect.im_max};
    s -= w;
    return {rect.re_min, rect.im_max - s};
}

namespace {

// Winding together with the smallest boundary log-magnitude seen (tells
// subdivision when further refinement would hit the |f| >= 1e-12 floor) and
// the zero-centroid integral (1/2ipi) contour-sum of z dlog f, which equals
// the sum of the enclosed zeros.
struct WindingResult {
    int winding = 0;
    double min_logmag = 0.0;
    Complex zero_sum;
};

// An even-order zero close to the contour produces a true phase step near
// 2 pi between adjacent samples, which wraps to ~0 and would silently drop
// winding units.  Such zeros always betray themselves by a sharp magnitude
// dip (|f| ~ dist^2 gives adjacent-interval ratios near 4), so intervals are
// refined on either a large phase step or a large magnitude step.
constexpr double kMaxMagStep = 1.2;  // < ln 4

WindingResult winding_number_impl(const AnalyticFn& f, const Contour& contour) {
    double min_logmag = std::numeric_limits<double>::infinity();
    struct Node {
        double t;
        Complex z;
        LogDet v;
    };
    auto eval = [&](double t) -> Node {
        Complex z = contour.point(t);
        LogDet v = f(z);
        if (v.log_mag < kLogZeroOnContour)
            throw NumericalError("winding_number: contour passes through a zero (|f| < 1e-12)");
        min_logmag = std::min(min_logmag, v.log_mag);
        return {t, z, v};
    };

    std::vector<Node> s;
    s.reserve(contour.samples);
    for (int k = 0; k < contour.samples; ++k)
        s.push_back(eval(static_cast<double>(k) / contour.samples));

    while (true) {
        // Flag steep intervals, then dilate the flags by one so that the
        // symmetric interval straddling a magnitude dip (whose own steps are
        // deceptively small) is refined by its steep neighbors.
        const std::size_t m = s.size();
        std::vector<char> flag(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            const Node& a = s[i];
            const Node& b = s[(i + 1) % m];
            double phase_step = wrap_phase(b.v.phase - a.v.phase);
            double mag_step = std::abs(b.v.log_mag - a.v.log_mag);
            if (std::abs(phase_step) >= kPi / 2.0 || mag_step >= kMaxMagStep) flag[i] = 1;
        }
        std::vector<double> midpoints;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(flag[i] || flag[(i + m - 1) % m] || flag[(i + 1) % m])) continue;
            const Node& a = s[i];
            const Node& b = s[(i + 1) % m];
            double tb = (i + 1 == m) ? b.t + 1.0 : b.t;
            midpoints.push_back(0.5 * (a.t + tb));
        }
        if (midpoints.empty()) break;
        if (s.size() + midpoints.size() > kMaxContourSamples)
            throw NumericalError("winding_number: step too large after max refinement");
        for (double t : midpoints) s.push_back(eval(t - std::floor(t)));
        std::sort(s.begin(), s.end(), [](const Node& a, const Node& b) { return a.t < b.t; });
    }

    double total = 0.0;
    Complex centroid_sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Node& a = s[i];
        const Node& b = s[(i + 1) % s.size()];
        double dphase = wrap_phase(b.v.phase - a.v.phase);
        total += dphase;
        Complex dlogf{b.v.log_mag - a.v.log_mag, dphase};
        centroid_sum += 0.5 * (a.z + b.z) * dlogf;
    }
    double w = total / (2.0 * kPi);
    int wi = static_cast<int>(std::lround(w));
    if (std::abs(w - wi) > 0.1)
        throw NumericalError("winding_number: non-integer winding " + std::to_string(w));
    return {wi, min_logmag, centroid_sum / Complex{0.0, 2.0 * kPi}};
}

}  // namespace

int winding_number(const AnalyticFn& f, const Contour& contour) {
    return winding_number_impl(f, contour).winding;
}

namespace {

// Median boundary log-magnitude, used as the reference scale for residuals.
double boundary_median_logmag(const AnalyticFn& f, const Contour& c, int samples = 64) {
    std::vector<double> v;
    v.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        LogDet d = f(c.point(static_cast<double>(k) / samples));
        if (!d.is_zero()) v.push_back(d.log_mag);
    }
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

struct RefineResult {
    Complex root;
    double residual_logmag = 0.0;
    bool ok = false;
};

// Secant iteration in LogDet form: z2 = z1 - (z1 - z0) / (1 - f0/f1).
RefineResult refine_secant(const AnalyticFn& f, Complex z0, Complex z1, double target_logmag) {
    RefineResult res;
    LogDet f0 = f(z0), f1 = f(z1);
    for (int it = 0; it < 80; ++it) {
        if (f1.is_zero()) {
            res = {z1, -std::numeric_limits<double>::infinity(), true};
            return res;
        }
        if (f1.log_mag <= target_logmag) {
            res = {z1, f1.log_mag, true};
            return res;
        }
        double dl = f0.log_mag - f1.log_mag;
        if (dl > 300.0) break;  // f0 overwhelmingly larger: secant step degenerate
        Complex ratio = f0.is_zero() ? Complex{0.0, 0.0} : ratio_complex(f0, f1);
        Complex denom = 1.0 - ratio;
        if (std::abs(denom) < 1e-300) break;
        Complex z2 = z1 - (z1 - z0) / denom;
        if (std::abs(z2 - z1) < 1e-14 * (1.0 + std::abs(z1))) {
            res = {z2, f1.log_mag, f1.log_mag <= target_logmag + 10.0};
            return res;
        }
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z1);
    }
    res.root = z1;
    res.residual_logmag = f1.log_mag;
    res.ok = false;
    return res;
}

class Subdivider {
  public:
    Subdivider(const AnalyticFn& f, EigenReport& report) : f_(f), report_(report) {}

    // Winding of one cell.  Only the outermost region may be jitter-expanded
    // on a zero-on-contour hit; child cells must fail fast so that the
    // parent can pick a different split line instead (expansion would break
    // the exact partition of the winding count).
    std::optional<WindingResult> cell_winding(const Region& cell, bool allow_expand) {
        const double jitter = 1e-7 * std::max(1.0, cell.diameter());
        const int attempts = allow_expand ? 6 : 1;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            Region r = cell;
            if (attempt > 0) {
                double d = jitter * attempt;
                r.re_min -= d;
                r.re_max += d;
                r.im_min -= d;
                r.im_max += d;
            }
            try {
                return winding_number_impl(f_, Contour::rectangle(r, 64));
            } catch (const NumericalError&) {
                continue;
            }
        }
        return std::nullopt;
    }

    void emit_cluster(const Region& cell, const WindingResult& wr) {
        LocatedEigenvalue e;
        // The centroid integral localizes the cluster far better than the
        // cell center; fall back to the center if it lands outside.
        Complex centroid = wr.zero_sum / static_cast<double>(wr.winding);
        e.lambda = cell.contains(centroid, 0.1 * cell.diameter()) ? centroid : cell.center();
        e.multiplicity = wr.winding;
        e.method = report_.method;
        e.cluster = true;
        LogDet v = f_(e.lambda);
        e.residual = v.is_zero() ? 0.0 : std::exp(v.log_mag - reference_logmag_);
        report_.eigenvalues.push_back(e);
    }

    void process(const Region& cell, const WindingResult& wr, int depth) {
        int w = wr.winding;
        if (w == 0) return;
        if (w < 0)
            throw NumericalError("locate: negative winding (function not analytic in cell)");

        // Stop when the cell is small enough, or when the boundary values sit
        // close to the zero-on-contour floor (an unresolvable cluster).
        if (cell.diameter() < kClusterDiameter || wr.min_logmag < kLogZeroOnContour + 3.0 ||
            depth > 80) {
            emit_cluster(cell, wr);
            return;
        }

        if (w == 1) {
            double cell_median = boundary_median_logmag(f_, Contour::rectangle(cell, 64));
            double target = cell_median + std::log(1e-10);
            Complex c = cell.center();
            Complex c1 = c + 0.05 * cell.diameter() * Complex{1.0, 1.0} / std::sqrt(2.0);
            RefineResult r = refine_secant(f_, c, c1, target);
            if (r.ok && cell.contains(r.root, 1e-9 * cell.diameter())) {
                LocatedEigenvalue e;
                e.lambda = r.root;
                e.multiplicity = 1;
                e.method = report_.method;
                e.residual = std::exp(r.residual_logmag - cell_median);
                report_.eigenvalues.push_back(e);
                return;
            }
        }

        split(cell, wr, depth);
    }

    void split(const Region& cell, const WindingResult& parent, int depth) {
        const int parent_w = parent.winding;
        // Split fractions nudged away from 1/2 when a zero sits on the line.
        static const double fractions[] = {0.5,        0.5 + 1e-7, 0.5 - 1e-7, 0.5 + 1e-3,
                                           0.5 - 1e-3, 0.5 + 1e-2, 0.5 - 1e-2};
        for (double fr : fractions) {
            double rm = cell.re_min + fr * cell.width();
            double im = cell.im_min + fr * cell.height();
            Region q[4] = {{cell.re_min, rm, cell.im_min, im},
                           {rm, cell.re_max, cell.im_min, im},
                           {cell.re_min, rm, im, cell.im_max},
                           {rm, cell.re_max, im, cell.im_max}};
            WindingResult ws[4];
            bool all_ok = true;
            int sum = 0;
            for (int i = 0; i < 4 && all_ok; ++i) {
                auto w = cell_winding(q[i], false);
                if (!w)
                    all_ok = false;
                else {
                    ws[i] = *w;
                    sum += w->winding;
                }
            }
            if (!all_ok || sum != parent_w) continue;
            for (int i = 0; i < 4; ++i)
                if (ws[i].winding != 0) process(q[i], ws[i], depth + 1);
            return;
        }
        // No admissible split line: report the cell as an unresolved cluster
        // rather than losing its multiplicity.
        emit_cluster(cell, parent);
        report_.failed_cells.push_back(cell);
    }

    void run(const Region& region) {
        reference_logmag_ = boundary_median_logmag(f_, Contour::rectangle(region, 64));
        auto w = cell_winding(region, true);
        if (!w) throw NumericalError("locate: winding failed on the outer contour");
        report_.total_winding = w->winding;
        if (w->winding != 0) process(region, *w, 0);
    }

  private:
    const AnalyticFn& f_;
    EigenReport& report_;
    double reference_logmag_ = 0.0;
};

std::vector<LocatedEigenvalue> cluster_merge(const std::vector<Complex>& ev, Method tag,
                                             double radius) {
    std::vector<LocatedEigenvalue> out;
    std::vector<bool> used(ev.size(), false);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (used[i]) continue;
        std::vector<Complex> group{ev[i]};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < ev.size(); ++j) {
                if (used[j]) continue;
                for (Complex g : group) {
                    if (std::abs(ev[j] - g) < radius) {
                        group.push_back(ev[j]);
                        used[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        Complex mean = 0.0;
        for (Complex g : group) mean += g;
        mean /= static_cast<double>(group.size());
        double spread = 0.0;
        for (Complex g : group) spread = std::max(spread, std::abs(g - mean));
        LocatedEigenvalue e;
        e.lambda = mean;
        e.multiplicity = static_cast<int>(group.size());
        e.method = tag;
        e.residual = spread;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const LocatedEigenvalue& a, const LocatedEigenvalue& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return out;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::hill: return "hill";
        case Method::evans: return "evans";
        case Method::fredholm: return "fredholm";
    }
    return "?";
}

EigenReport locate_zeros(const AnalyticFn& f, const Region& region, Method tag) {
    EigenReport report;
    report.method = tag;
    report.region = region;
    Subdivider sub(f, report);
    sub.run(region);
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](const LocatedEigenvalue& a, const LocatedEigenvalue& b) {
                  if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
                  return a.lambda.imag() < b.lambda.imag();
              });
    return report;
}

EigenReport locate_eigenvalues(const SpectralProblem& problem, const Region& region, Method method,
                               int J, double tol) {
    if (method == Method::hill) {
        std::vector<Complex> in_region;
        for (Complex ev : hill_eigenvalues(build_truncation(problem, J)))
            if (region.contains(ev)) in_region.push_back(ev);
        EigenReport report;
        report.method = Method::hill;
        report.region = region;
        report.eigenvalues = cluster_merge(in_region, Method::hill, kHillClusterRadius);
        report.total_winding = report.total_multiplicity();
        return report;
    }
    if (method == Method::evans) {
        AnalyticFn f = [&problem, tol](Complex lambda) {
            return LogDet::from_complex(gardner_E(problem, lambda, tol));
        };
        return locate_zeros(f, region, Method::evans);
    }
    TruncatedSystem trunc = build_truncation(problem, J);
    AnalyticFn f = [trunc](Complex lambda) { return DJ_det(trunc, lambda); };
    return locate_zeros(f, region, Method::fredholm);
}

MethodAgreement compare_methods(const SpectralProblem& problem, const Region& region, int J,
                                double tol) {
    MethodAgreement table;
    table.hill_report = locate_eigenvalues(problem, region, Method::hill, J, tol);
    table.fredholm_report = locate_eigenvalues(problem, region, Method::fredholm, J, tol);
    table.evans_report = locate_eigenvalues(problem, region, Method::evans, J, tol);

    table.total_hill = table.hill_report.total_multiplicity();
    table.total_fredholm = table.fredholm_report.total_multiplicity();
    table.total_evans = table.evans_report.total_multiplicity();
    table.totals_agree =
        table.total_hill == table.total_fredholm && table.total_hill == table.total_evans;

    // Match fredholm and evans entries against hill entries, nearest first.
    auto remaining = [](const EigenReport& r) {
        std::vector<std::pair<Complex, int>> v;
        for (const auto& e : r.eigenvalues) v.push_back({e.lambda, e.multiplicity});
        return v;
    };
    auto hill = remaining(table.hill_report);
    auto fred = remaining(table.fredholm_report);
    auto evans = remaining(table.evans_report);

    auto take_nearest = [](std::vector<std::pair<Complex, int>>& pool, Complex z)
        -> std::optional<std::pair<Complex, int>> {
        if (pool.empty()) return std::nullopt;
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (std::abs(pool[i].first - z) < std::abs(pool[best].first - z)) best = i;
        auto out = pool[best];
        pool.erase(pool.begin() + best);
        return out;
    };

    for (const auto& [hz, hm] : hill) {
        MethodAgreementRow row;
        row.hill = hz;
        row.mult_hill = hm;
        if (auto fz = take_nearest(fred, hz)) {
            row.fredholm = fz->first;
            row.mult_fredholm = fz->second;
            row.dist_hill_fredholm = std::abs(fz->first - hz);
        }
        if (auto ez = take_nearest(evans, hz)) {
            row.evans = ez->first;
            row.mult_evans = ez->second;
            row.dist_hill_evans = std::abs(ez->first - hz);
        }
        if (row.fredholm && row.evans)
            row.dist_fredholm_evans = std::abs(*row.fredholm - *row.evans);
        row.multiplicities_agree = row.mult_hill == row.mult_fredholm &&
                                   row.mult_hill == row.mult_evans;
        table.max_pairwise_distance =
            std::max({table.max_pairwise_distance, row.dist_hill_fredholm, row.dist_hill_evans,
                      row.dist_fredholm_evans});
        table.rows.push_back(row);
    }
    // Anything left unmatched becomes its own row.
    for (const auto& [z, m] : fred) {
        MethodAgreementRow row;
        row.fredholm = z;
        row.mult_fredholm = m;
        table.rows.push_back(row);
    }
    for (const auto& [z, m] : evans) {
        MethodAgreementRow row;
        row.evans = z;
        row.mult_evans = m;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace pevans
