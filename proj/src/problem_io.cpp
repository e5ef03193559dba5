#include "pevans/problem_io.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

namespace pevans {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& arr, int n, const char* what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        throw ValidationError(std::string("problem file: ") + what + " must be an " +
                              std::to_string(n) + "x" + std::to_string(n) + " array");
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = arr[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ValidationError(std::string("problem file: ragged row in ") + what);
        for (int j = 0; j < n; ++j) M(i, j) = row[j].get<double>();
    }
    return M.cast<Complex>();
}

FourierSeries parse_series(const json& arr, int n, double X, const char* name) {
    if (!arr.is_array())
        throw ValidationError(std::string("problem file: ") + name + " must be an array of modes");
    std::map<int, Matrix> coeffs;
    for (const json& mode : arr) {
        if (!mode.contains("k")) throw ValidationError("problem file: mode without \"k\"");
        int k = mode["k"].get<int>();
        if (coeffs.count(k))
            throw ValidationError(std::string("problem file: duplicate mode k=") +
                                  std::to_string(k) + " in " + name);
        if (!mode.contains("re"))
            throw ValidationError(std::string("problem file: mode without \"re\" in ") + name);
        Matrix C = parse_matrix(mode["re"], n, name);
        if (mode.contains("im")) C += Complex{0.0, 1.0} * parse_matrix(mode["im"], n, name);
        coeffs[k] = C;
    }
    return FourierSeries::make(n, X, coeffs);
}

}  // namespace

SpectralProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open problem file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("problem file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.contains("n") || !doc.contains("period"))
        throw ValidationError("problem file: missing \"n\" or \"period\"");
    int n = doc["n"].get<int>();
    double X = doc["period"].get<double>();
    if (n < 1) throw ValidationError("problem file: n must be positive");
    if (!(X > 0.0)) throw ValidationError("problem file: period must be positive");

    auto series = [&](const char* name) {
        if (!doc.contains(name)) return FourierSeries::make(n, X, {});
        return parse_series(doc[name], n, X, name);
    };
    return SpectralProblem::make(series("A1"), series("A0"), series("B0"));
}

}  // namespace pevans
