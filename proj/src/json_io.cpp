#include "interlace/json_io.hpp"

#include <fstream>
#include <sstream>

namespace interlace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Complex entry_from_json(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw InvalidInput("matrix entry must be a number or an [re, im] pair");
}

}  // namespace

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw InvalidInput("matrix row must be a non-empty array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
      throw InvalidInput("matrix rows must all have the same length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = entry_from_json(j[i][k]);
  }
  return m;
}

json plane_to_json(const LagrangianPlane& plane) {
  json j;
  j["n"] = plane.n();
  j["X"] = matrix_to_json(plane.x());
  j["Y"] = matrix_to_json(plane.y());
  return j;
}

LagrangianPlane plane_from_json(const json& j, const ToleranceConfig& tol) {
  if (!j.is_object()) throw InvalidInput("plane must be a JSON object");
  const auto check_n = [&](const LagrangianPlane& plane) {
    if (j.contains("n")) {
      if (!j["n"].is_number_integer() || j["n"].get<int>() != plane.n())
        throw InvalidInput("field n disagrees with the matrix dimensions");
    }
    return plane;
  };
  if (j.contains("X") && j.contains("Y")) {
    Frame f{matrix_from_json(j["X"]), matrix_from_json(j["Y"])};
    return check_n(LagrangianPlane::from_frame(f, tol));
  }
  if (j.contains("A") && j.contains("B")) {
    CoFrame cf{matrix_from_json(j["A"]), matrix_from_json(j["B"])};
    return check_n(plane_from_coframe(cf, tol));
  }
  if (j.contains("P") && j.contains("Theta")) {
    ProjectorTheta pt{matrix_from_json(j["P"]), matrix_from_json(j["Theta"])};
    return check_n(plane_from_projector_theta(pt, tol));
  }
  throw InvalidInput("plane object must carry X/Y, A/B or P/Theta fields");
}

LagrangianPlane load_plane_file(const std::string& path, const ToleranceConfig& tol) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open plane file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("plane file " + path + ": " + e.what());
  }
  return plane_from_json(j, tol);
}

json report_to_json(const VerificationReport& report) {
  json j = json::object();
  for (const auto& [name, entry] : report.checks) {
    json e;
    e["trials"] = entry.trials;
    e["failures"] = entry.failures;
    j[name] = std::move(e);
  }
  return j;
}

json slice_to_json(const SpectrumSlice& slice) {
  json j;
  j["window"] = json::array({slice.window_a, slice.window_b});
  json evs = json::array();
  for (const auto& [lambda, mult] : slice.eigenvalues)
    evs.push_back(json::array({lambda, mult}));
  j["eigenvalues"] = std::move(evs);
  return j;
}

}  // namespace interlace
