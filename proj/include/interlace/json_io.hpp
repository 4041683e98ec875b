#pragma once

// JSON (de)serialization for planes, verification reports and spectra.
//
// Plane format: {"n": int, "X": [[[re,im],...],...], "Y": [[...],...]} with
// complex entries as [re, im] pairs (bare numbers accepted as real on input).
// Accepted alternatives: {"A": ..., "B": ...} (co-frame, plane = ker(A|B)) and
// {"P": ..., "Theta": ...} (projector form). Field names are exact.

#include <string>

#include "json.hpp"

#include "interlace/duistermaat.hpp"
#include "interlace/models.hpp"
#include "interlace/symplectic.hpp"

namespace interlace {

nlohmann::json complex_to_json(const Complex& z);
nlohmann::json matrix_to_json(const Matrix& m);

/// Parses a rectangular array-of-rows; entries are [re, im] pairs or bare
/// numbers. Throws InvalidInput on anything else.
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json plane_to_json(const LagrangianPlane& plane);

/// Dispatches on the fields present: X/Y frame, A/B co-frame, P/Theta
/// projector form. Validates the Lagrangian condition via the usual
/// constructors; throws InvalidInput on malformed or non-Lagrangian data.
LagrangianPlane plane_from_json(const nlohmann::json& j, const ToleranceConfig& tol = {});

/// Reads and parses one plane file. Parse errors are rethrown as InvalidInput.
LagrangianPlane load_plane_file(const std::string& path, const ToleranceConfig& tol = {});

/// {check_name: {"trials": N, "failures": [seed, ...]}, ...}
nlohmann::json report_to_json(const VerificationReport& report);

nlohmann::json slice_to_json(const SpectrumSlice& slice);

}  // namespace interlace
