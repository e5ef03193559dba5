// Command-line front end: load a problem file, run Hill / determinant /
// Evans computations, verification and root location, and emit CSV/JSON.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pevans/bridge.hpp"
#include "pevans/evans.hpp"
#include "pevans/fredholm.hpp"
#include "pevans/hill.hpp"
#include "pevans/locator.hpp"
#include "pevans/problem_io.hpp"
#include "pevans/verify.hpp"

namespace {

using namespace pevans;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write output file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, target);
}

int thread_count() {
    if (const char* env = std::getenv("PEVANS_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return std::min(t, 256);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-ordered parallel map; results are written by index so output is
// deterministic regardless of the thread count.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    int threads = std::min<std::size_t>(thread_count(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Region parse_region(const std::string& s) {
    Region r;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &r.re_min, &r.re_max, &r.im_min, &r.im_max) != 4)
        throw ConfigError("region must be re_min,re_max,im_min,im_max");
    if (!(r.re_max > r.re_min) || !(r.im_max > r.im_min))
        throw ConfigError("region must be nondegenerate");
    return r;
}

Complex parse_lambda(const std::string& s) {
    double re = 0.0, im = 0.0;
    int got = std::sscanf(s.c_str(), "%lf,%lf", &re, &im);
    if (got < 1) throw ConfigError("lambda must be re[,im]");
    return {re, im};
}

std::vector<Complex> parse_lambda_list(const std::string& s) {
    std::vector<Complex> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_lambda(item));
    if (out.empty()) throw ConfigError("empty lambda list");
    return out;
}

struct GridSpec {
    double re_min, re_max, im_min, im_max;
    int nx, ny;

    std::vector<Complex> points() const {
        std::vector<Complex> pts;
        pts.reserve(static_cast<std::size_t>(nx) * ny);
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                double re = nx == 1 ? re_min : re_min + ix * (re_max - re_min) / (nx - 1);
                double im = ny == 1 ? im_min : im_min + iy * (im_max - im_min) / (ny - 1);
                pts.push_back({re, im});
            }
        return pts;
    }
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf,%d,%d", &g.re_min, &g.re_max, &g.im_min, &g.im_max,
                    &g.nx, &g.ny) != 6)
        throw ConfigError("grid must be re_min,re_max,im_min,im_max,nx,ny");
    if (g.nx < 1 || g.ny < 1) throw ConfigError("grid must be nonempty");
    return g;
}

void check_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-3)) throw ConfigError("tol must lie in [1e-13, 1e-3]");
}

std::string reading_name(DeltaReading r) { return r == DeltaReading::a0 ? "a0" : "a1"; }

json region_json(const Region& r) {
    return json{{"re_min", r.re_min}, {"re_max", r.re_max}, {"im_min", r.im_min},
                {"im_max", r.im_max}};
}

json eigen_report_json(const EigenReport& report) {
    json evs = json::array();
    for (const auto& e : report.eigenvalues)
        evs.push_back(json{{"re", e.lambda.real()},
                           {"im", e.lambda.imag()},
                           {"mult", e.multiplicity},
                           {"residual", e.residual},
                           {"cluster", e.cluster}});
    json failed = json::array();
    for (const auto& c : report.failed_cells) failed.push_back(region_json(c));
    return json{{"method", method_name(report.method)},
                {"eigenvalues", evs},
                {"region", region_json(report.region)},
                {"total_winding", report.total_winding},
                {"failed_cells", failed}};
}

// ---- commands -------------------------------------------------------------

int cmd_describe(const std::string& problem_path) {
    SpectralProblem p = load_problem(problem_path);
    double margin = definiteness_margin(p.B0, p.definiteness_sign);
    std::cout << "problem: " << problem_path << "\n"
              << "n: " << p.n << "\n"
              << "period: " << fmt(p.X) << "\n"
              << "k_max: A1=" << p.A1.k_max() << " A0=" << p.A0.k_max()
              << " B0=" << p.B0.k_max() << "\n"
              << "real_valued: A1=" << p.A1.real_valued() << " A0=" << p.A0.real_valued()
              << " B0=" << p.B0.real_valued() << "\n"
              << "definiteness_sign: " << (p.definiteness_sign > 0 ? "+1" : "-1") << "\n"
              << "definiteness_margin: " << fmt(margin) << "\n"
              << "tr_A1_mode0: " << fmt(p.A1.coeff(0).trace().real()) << ","
              << fmt(p.A1.coeff(0).trace().imag()) << "\n"
              << "tr_A0_mode0: " << fmt(p.A0.coeff(0).trace().real()) << ","
              << fmt(p.A0.coeff(0).trace().imag()) << "\n";
    return 0;
}

int cmd_hill(const std::string& problem_path, std::vector<int> J_list, const std::string& region_s,
             const std::string& output) {
    SpectralProblem p = load_problem(problem_path);
    Region region = parse_region(region_s);
    auto rows = convergence_sweep(p, J_list, region);
    std::string csv = "J,re_lambda,im_lambda,match_distance_to_previous_J\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.J) + "," + fmt(r.lambda.real()) + "," + fmt(r.lambda.imag()) + ",";
        csv += std::isfinite(r.match_distance) ? fmt(r.match_distance) : std::string("nan");
        csv += "\n";
    }
    write_atomic(output, csv);
    return 0;
}

int cmd_evans(const std::string& problem_path, const std::string& lambda_s,
              const std::string& grid_s, double tol, const std::string& output) {
    SpectralProblem p = load_problem(problem_path);
    check_tol(tol);
    std::vector<Complex> pts =
        grid_s.empty() ? std::vector<Complex>{parse_lambda(lambda_s)} : parse_grid(grid_s).points();

    struct Row {
        Complex lambda, E;
        double abel;
        long steps;
    };
    std::vector<Row> rows(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        Monodromy m = monodromy(build_system(p, pts[i]), tol);
        const int dim = 2 * p.n;
        Complex E = (m.psi_X - Matrix::Identity(dim, dim)).determinant();
        rows[i] = {pts[i], E, m.abel_residual, m.stats.steps};
    });
    std::string csv = "re_lambda,im_lambda,re_E,im_E,abel_residual,steps\n";
    for (const auto& r : rows)
        csv += fmt(r.lambda.real()) + "," + fmt(r.lambda.imag()) + "," + fmt(r.E.real()) + "," +
               fmt(r.E.imag()) + "," + fmt(r.abel) + "," + std::to_string(r.steps) + "\n";
    write_atomic(output, csv);
    return 0;
}

int cmd_det(const std::string& problem_path, std::vector<int> J_list, const std::string& lambda_s,
            const std::string& grid_s, const std::string& output) {
    SpectralProblem p = load_problem(problem_path);
    std::vector<Complex> pts =
        grid_s.empty() ? std::vector<Complex>{parse_lambda(lambda_s)} : parse_grid(grid_s).points();

    std::string csv = "re_lambda,im_lambda,J,DJ_logmag,DJ_phase,FJ_logmag,FJ_phase\n";
    for (int J : J_list) {
        TruncatedSystem trunc = build_truncation(p, J);
        std::vector<DeterminantSample> samples(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            samples[i] = sample_determinants(trunc, pts[i]);
        });
        for (const auto& s : samples)
            csv += fmt(s.lambda.real()) + "," + fmt(s.lambda.imag()) + "," + std::to_string(J) +
                   "," + fmt(s.DJ.log_mag) + "," + fmt(s.DJ.phase) + "," + fmt(s.FJ.log_mag) +
                   "," + fmt(s.FJ.phase) + "\n";
    }
    write_atomic(output, csv);
    return 0;
}

int cmd_verify(const std::string& problem_path, std::vector<int> J_list,
               const std::string& lambda_list_s, double tol, const std::string& reading_s,
               const std::string& constants_s, const std::string& form_s,
               const std::string& output) {
    SpectralProblem p = normalize_period(load_problem(problem_path));
    std::vector<Complex> lambdas = parse_lambda_list(lambda_list_s);

    VerifyOptions options;
    if (reading_s == "a0")
        options.default_reading = DeltaReading::a0;
    else if (reading_s == "a1")
        options.default_reading = DeltaReading::a1;
    else
        throw ConfigError("delta_reading must be a0 or a1");
    if (constants_s == "closed")
        options.constants = ConstantsMode::closed;
    else if (constants_s == "partial")
        options.constants = ConstantsMode::partial;
    else
        throw ConfigError("constants_mode must be closed or partial");
    if (form_s == "corrected")
        options.form = FactorForm::corrected;
    else if (form_s == "literal")
        options.form = FactorForm::literal;
    else
        throw ConfigError("factor_form must be corrected or literal");

    VerifyReport report = verify_relation(p, lambdas, J_list, tol, options);

    json entries = json::array();
    for (const auto& e : report.entries) {
        entries.push_back(json{{"lambda", json{{"re", e.lambda.real()}, {"im", e.lambda.imag()}}},
                               {"J", e.J},
                               {"ratio_logmag_error", e.ratio_logmag_error},
                               {"ratio_phase_error", e.ratio_phase_error},
                               {"delta_reading", reading_name(e.reading)},
                               {"r1_abs_error", e.r1_abs_error},
                               {"r2_logmag_error", e.r2_logmag_error},
                               {"r2_phase_error", e.r2_phase_error},
                               {"r2_abs_error", e.r2_abs_error},
                               {"skipped", e.skipped}});
    }
    json doc{{"entries", entries},
             {"J_list", report.J_list},
             {"median_r1_abs_error", report.median_r1},
             {"median_r1_abs_error_alt_reading", report.median_r1_alt},
             {"median_r2_abs_error", report.median_r2},
             {"r1_monotone_decreasing", report.r1_monotone},
             {"r2_monotone_decreasing", report.r2_monotone},
             {"final_median_r1", report.final_median_r1},
             {"final_median_r2", report.final_median_r2},
             {"readings_differ", report.readings_differ},
             {"converging_reading", reading_name(report.converging_reading)},
             {"default_reading", reading_name(options.default_reading)},
             {"factor_form", form_s},
             {"constants_mode", constants_s},
             {"tol", tol},
             {"passed", report.passed}};
    write_atomic(output, doc.dump(2) + "\n");

    // CSV mirror next to the JSON output.
    std::string csv =
        "re_lambda,im_lambda,J,delta_reading,ratio_logmag_error,ratio_phase_error,"
        "r1_abs_error,r2_abs_error,skipped\n";
    for (const auto& e : report.entries)
        csv += fmt(e.lambda.real()) + "," + fmt(e.lambda.imag()) + "," + std::to_string(e.J) +
               "," + reading_name(e.reading) + "," + fmt(e.ratio_logmag_error) + "," +
               fmt(e.ratio_phase_error) + "," + fmt(e.r1_abs_error) + "," + fmt(e.r2_abs_error) +
               "," + (e.skipped ? "1" : "0") + "\n";
    if (!output.empty()) {
        std::filesystem::path mirror(output);
        mirror.replace_extension(".csv");
        write_atomic(mirror.string(), csv);
    }
    return report.passed ? 0 : 3;
}

int cmd_locate(const std::string& problem_path, const std::string& region_s,
               const std::string& method_s, int J, double tol, const std::string& output) {
    SpectralProblem p = load_problem(problem_path);
    Region region = parse_region(region_s);
    check_tol(tol);
    Method method;
    if (method_s == "hill")
        method = Method::hill;
    else if (method_s == "evans")
        method = Method::evans;
    else if (method_s == "fredholm")
        method = Method::fredholm;
    else if (method_s == "all") {
        auto table = compare_methods(p, region, J, tol);
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r;
            if (row.hill)
                r["hill"] = json{{"re", row.hill->real()}, {"im", row.hill->imag()},
                                 {"mult", row.mult_hill}};
            if (row.fredholm)
                r["fredholm"] = json{{"re", row.fredholm->real()}, {"im", row.fredholm->imag()},
                                     {"mult", row.mult_fredholm}};
            if (row.evans)
                r["evans"] = json{{"re", row.evans->real()}, {"im", row.evans->imag()},
                                  {"mult", row.mult_evans}};
            r["dist_hill_fredholm"] = row.dist_hill_fredholm;
            r["dist_hill_evans"] = row.dist_hill_evans;
            r["dist_fredholm_evans"] = row.dist_fredholm_evans;
            r["multiplicities_agree"] = row.multiplicities_agree;
            rows.push_back(r);
        }
        json doc{{"region", region_json(region)},
                 {"rows", rows},
                 {"total_hill", table.total_hill},
                 {"total_fredholm", table.total_fredholm},
                 {"total_evans", table.total_evans},
                 {"totals_agree", table.totals_agree},
                 {"max_pairwise_distance", table.max_pairwise_distance},
                 {"reports", json::array({eigen_report_json(table.hill_report),
                                          eigen_report_json(table.fredholm_report),
                                          eigen_report_json(table.evans_report)})}};
        write_atomic(output, doc.dump(2) + "\n");
        return table.totals_agree ? 0 : 3;
    } else {
        throw ConfigError("method must be hill, evans, fredholm or all");
    }

    EigenReport report = locate_eigenvalues(p, region, method, J, tol);
    write_atomic(output, eigen_report_json(report).dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& problem_path, const std::string& grid_s, int J, double tol,
              const std::string& output) {
    SpectralProblem p = load_problem(problem_path);
    GridSpec grid = parse_grid(grid_s);
    check_tol(tol);
    TruncatedSystem trunc = build_truncation(p, J);
    auto pts = grid.points();

    struct Row {
        Complex lambda;
        double abs_E, DJ_logmag;
    };
    std::vector<Row> rows(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        Complex E = gardner_E(p, pts[i], tol);
        LogDet d = DJ_det(trunc, pts[i]);
        rows[i] = {pts[i], std::abs(E), d.log_mag};
    });
    std::string csv = "re_lambda,im_lambda,abs_E,DJ_logmag\n";
    for (const auto& r : rows)
        csv += fmt(r.lambda.real()) + "," + fmt(r.lambda.imag()) + "," + fmt(r.abs_E) + "," +
               fmt(r.DJ_logmag) + "\n";
    write_atomic(output, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic spectra: Hill's method, Fredholm determinants, Evans functions"};
    app.require_subcommand(1);

    std::string problem_path, output, region_s, grid_s, lambda_s = "0.5,0.1";
    std::string lambda_list_s = "1,0;0.3,0.1;0.1,0.2;-0.5,0.3;2,0.5";
    std::string method_s = "all", reading_s = "a0", constants_s = "closed", form_s = "corrected";
    std::vector<int> J_list{8, 16, 32, 64};
    int J = 64;
    double tol = 1e-10;
    double verify_tol = 1e-2;

    auto add_problem = [&](CLI::App* cmd) {
        cmd->add_option("--problem_path,--problem", problem_path, "problem file (JSON)")
            ->required();
    };

    auto* describe = app.add_subcommand("describe", "print problem summary and definiteness");
    add_problem(describe);

    auto* hill = app.add_subcommand("hill", "Hill eigenvalue convergence sweep (CSV)");
    add_problem(hill);
    hill->add_option("--J", J_list, "truncation orders (increasing)");
    hill->add_option("--region", region_s, "re_min,re_max,im_min,im_max")->required();
    hill->add_option("--output", output, "output path (default stdout)");

    auto* evans = app.add_subcommand("evans", "Evans function sweep (CSV)");
    add_problem(evans);
    evans->add_option("--lambda", lambda_s, "single point re,im");
    evans->add_option("--grid", grid_s, "re_min,re_max,im_min,im_max,nx,ny");
    evans->add_option("--tol", tol, "integrator tolerance");
    evans->add_option("--output", output, "output path (default stdout)");

    auto* det = app.add_subcommand("det", "D_J and F_J determinant sweep (CSV)");
    add_problem(det);
    det->add_option("--J", J_list, "truncation orders");
    det->add_option("--lambda", lambda_s, "single point re,im");
    det->add_option("--grid", grid_s, "re_min,re_max,im_min,im_max,nx,ny");
    det->add_option("--output", output, "output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "determinant/Evans relation report (JSON + CSV)");
    add_problem(verify);
    verify->add_option("--J", J_list, "truncation orders (increasing)");
    verify->add_option("--lambda_list", lambda_list_s, "semicolon-separated re,im pairs");
    verify->add_option("--tol", verify_tol, "pass threshold on the final median |r1 - 1|");
    verify->add_option("--delta_reading", reading_s, "a0 | a1 (default reading in summary)");
    verify->add_option("--constants_mode", constants_s, "closed | partial");
    verify->add_option("--factor_form", form_s, "corrected | literal");
    verify->add_option("--output", output, "output path (default stdout)");

    auto* locate = app.add_subcommand("locate", "argument-principle eigenvalue report (JSON)");
    add_problem(locate);
    locate->add_option("--region", region_s, "re_min,re_max,im_min,im_max")->required();
    locate->add_option("--method", method_s, "hill | evans | fredholm | all");
    locate->add_option("--J", J, "truncation order for hill/fredholm");
    locate->add_option("--tol", tol, "integrator tolerance for evans");
    locate->add_option("--output", output, "output path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "|E| and D_J log-magnitude field on a grid (CSV)");
    add_problem(sweep);
    sweep->add_option("--grid", grid_s, "re_min,re_max,im_min,im_max,nx,ny")->required();
    sweep->add_option("--J", J, "truncation order");
    sweep->add_option("--tol", tol, "integrator tolerance");
    sweep->add_option("--output", output, "output path (default stdout)");

    try {
        app.parse(argc, argv);
        if (describe->parsed()) return cmd_describe(problem_path);
        if (hill->parsed()) return cmd_hill(problem_path, J_list, region_s, output);
        if (evans->parsed()) return cmd_evans(problem_path, lambda_s, grid_s, tol, output);
        if (det->parsed()) return cmd_det(problem_path, J_list, lambda_s, grid_s, output);
        if (verify->parsed())
            return cmd_verify(problem_path, J_list, lambda_list_s, verify_tol, reading_s,
                              constants_s, form_s, output);
        if (locate->parsed()) return cmd_locate(problem_path, region_s, method_s, J, tol, output);
        if (sweep->parsed()) return cmd_sweep(problem_path, grid_s, J, tol, output);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
