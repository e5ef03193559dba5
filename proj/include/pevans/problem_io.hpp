#pragma once

#include <filesystem>

#include "pevans/fourier_series.hpp"

namespace pevans {

/// Load a problem file.  Format (JSON):
///   {
///     "n": 1, "period": 6.283185307179586,
///     "A1": [ {"k": 0, "re": [[...]], "im": [[...]]}, ... ],
///     "A0": [ ... ], "B0": [ ... ]
///   }
/// "im" may be omitted for real coefficients; unknown keys are ignored.
/// Throws ConfigError on syntax errors and ValidationError on invalid data.
SpectralProblem load_problem(const std::filesystem::path& path);

}  // namespace pevans
