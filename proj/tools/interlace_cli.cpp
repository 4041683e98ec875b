// Command-line front end: triple-index computation on plane files, model
// spectra, spectral-shift reports, randomized verification suites and
// parameter sweeps.
//
// Exit codes: 0 success, 1 verification failure, 2 config/input error,
// 3 epsilon-ladder failure, 4 crossing-resolution failure, 5 internal
// inconsistency.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "interlace/duistermaat.hpp"
#include "interlace/json_io.hpp"
#include "interlace/maslov.hpp"
#include "interlace/models.hpp"
#include "interlace/symplectic.hpp"

namespace {

using namespace interlace;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Potential potential_from_spec(const std::string& spec) {
  if (spec.empty() || spec == "zero") return Potential::zero();
  if (spec.rfind("const:", 0) == 0) {
    const std::string tail = spec.substr(6);
    char* end = nullptr;
    const double c = std::strtod(tail.c_str(), &end);
    if (end == tail.c_str() || *end != '\0')
      throw InvalidInput("malformed potential spec: " + spec);
    return Potential::constant_q(c);
  }
  std::ifstream in(spec);
  if (!in) throw InvalidInput("cannot open potential file: " + spec);
  return parse_potential_csv(in);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  out << content;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoAdmissibleEpsilon& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const EpsilonInExceptionSet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UnresolvedCrossing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DegenerateCrossing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Triple-index, Maslov and eigenvalue-interlacing toolkit for "
      "one-dimensional Schrodinger extensions"};
  app.require_subcommand(1);

  ToleranceConfig tol;
  app.add_option("--tol-rank", tol.rank_rel_tol, "relative singular-value cut");
  app.add_option("--tol-inertia", tol.inertia_zero_tol, "inertia zero band");
  app.add_option("--tol-root", tol.root_tol, "1-d root localization tolerance");
  std::string output;
  app.add_option("--output", output, "write the report here instead of stdout");

  // -- index ------------------------------------------------------------------
  auto* cmd_index = app.add_subcommand(
      "index", "triple index of three Lagrangian planes from JSON files");
  cmd_index->fallthrough();
  std::vector<std::string> plane_files;
  cmd_index->add_option("planes", plane_files, "three plane JSON files")
      ->expected(3)
      ->required();

  // -- spectrum ---------------------------------------------------------------
  auto* cmd_spectrum =
      app.add_subcommand("spectrum", "eigenvalues of one extension in a window");
  cmd_spectrum->fallthrough();
  std::string bc = "dirichlet";
  double coupling = 0.0;
  double length = 1.0;
  std::string potential_spec = "zero";
  std::vector<double> window;
  int grid_points = 2000;
  bool serial = false;
  cmd_spectrum->add_option("--bc", bc, "boundary condition name")->required();
  cmd_spectrum->add_option("--s", coupling, "coupling for delta / delta_prime");
  cmd_spectrum->add_option("--len", length, "interval length");
  cmd_spectrum->add_option("--potential", potential_spec,
                           "zero | const:<c> | path to x,q CSV");
  cmd_spectrum->add_option("--window", window, "window [a, b]")->expected(2)->required();
  cmd_spectrum->add_option("--grid", grid_points, "scan grid size");
  cmd_spectrum->add_flag("--serial", serial, "disable parallel scanning");

  // -- shift ------------------------------------------------------------------
  auto* cmd_shift = app.add_subcommand(
      "shift", "spectral shift of two extensions, measured and predicted");
  cmd_shift->fallthrough();
  std::string bc1, bc2;
  double s1 = 0.0, s2 = 0.0;
  double shift_length = 1.0;
  std::string shift_potential = "zero";
  double lambda = 0.0;
  int shift_grid = 2000;
  bool shift_serial = false;
  cmd_shift->add_option("--bc1", bc1, "first boundary condition")->required();
  cmd_shift->add_option("--bc2", bc2, "second boundary condition")->required();
  cmd_shift->add_option("--s1", s1, "coupling of the first boundary condition");
  cmd_shift->add_option("--s2", s2, "coupling of the second boundary condition");
  cmd_shift->add_option("--len", shift_length, "interval length");
  cmd_shift->add_option("--potential", shift_potential,
                        "zero | const:<c> | path to x,q CSV");
  cmd_shift->add_option("--lambda", lambda, "shift evaluation point")->required();
  cmd_shift->add_option("--grid", shift_grid, "scan grid size");
  cmd_shift->add_flag("--serial", shift_serial, "disable parallel scanning");

  // -- verify -----------------------------------------------------------------
  auto* cmd_verify =
      app.add_subcommand("verify", "randomized verification suites (JSON report)");
  cmd_verify->fallthrough();
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int suite_n = 3;
  bool verify_serial = false;
  cmd_verify->add_option("--suite", suite, "identities | limits | hormander | krein | models")
      ->required()
      ->check(CLI::IsMember({"identities", "limits", "hormander", "krein", "models"}));
  cmd_verify->add_option("--trials", trials, "number of random trials")->required();
  cmd_verify->add_option("--seed", seed, "master seed (mandatory: no wall-clock seeding)")
      ->required();
  cmd_verify->add_option("--n", suite_n, "boundary-space dimension (ignored by models)");
  cmd_verify->add_flag("--serial", verify_serial, "disable parallel execution");

  // -- sweep --------------------------------------------------------------------
  auto* cmd_sweep =
      app.add_subcommand("sweep", "coupling sweep of a boundary-condition family (CSV)");
  cmd_sweep->fallthrough();
  std::string family;
  std::vector<double> sweep_grid;
  int k_max = 5;
  double sweep_length = 1.0;
  std::string sweep_potential = "zero";
  bool sweep_serial = false;
  cmd_sweep->add_option("--family", family, "delta | delta_prime")
      ->required()
      ->check(CLI::IsMember({"delta", "delta_prime"}));
  cmd_sweep->add_option("--grid", sweep_grid, "s_lo s_hi steps")->expected(3)->required();
  cmd_sweep->add_option("--kmax", k_max, "eigenvalues per column")->required();
  cmd_sweep->add_option("--len", sweep_length, "interval length");
  cmd_sweep->add_option("--potential", sweep_potential,
                        "zero | const:<c> | path to x,q CSV");
  cmd_sweep->add_flag("--serial", sweep_serial, "disable parallel scanning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*cmd_index) {
    return guarded([&] {
      const LagrangianPlane l1 = load_plane_file(plane_files[0], tol);
      const LagrangianPlane l2 = load_plane_file(plane_files[1], tol);
      const LagrangianPlane l3 = load_plane_file(plane_files[2], tol);
      if (l1.n() != l2.n() || l2.n() != l3.n())
        throw InvalidInput("planes must share one boundary dimension");
      const int idx = duistermaat_index(l1, l2, l3, tol);
      const int swapped = duistermaat_index(l2, l1, l3, tol);
      const int d12 = dim_intersection(l1, l2, tol);
      const bool swap_ok = idx + swapped == l1.n() - d12;
      std::ostringstream os;
      os << "index " << idx << "\n"
         << "swap_index " << swapped << "\n"
         << "dim_intersection " << d12 << "\n"
         << "swap_identity " << (swap_ok ? "PASS" : "FAIL") << "\n";
      emit(output, os.str());
      return swap_ok ? 0 : 5;
    });
  }

  if (*cmd_spectrum) {
    return guarded([&] {
      IntervalProblem p{length, potential_from_spec(potential_spec)};
      p.validate();
      const Extension e{p, bc_catalog(bc, coupling, tol)};
      ScanOptions options{grid_points, !serial};
      const SpectrumSlice slice =
          eigenvalues_in_window(e, window[0], window[1], tol, options);
      std::ostringstream os;
      os << "lambda,multiplicity\n";
      for (const auto& [la, mult] : slice.eigenvalues)
        os << fmt_g17(la) << "," << mult << "\n";
      emit(output, os.str());
      return 0;
    });
  }

  if (*cmd_shift) {
    return guarded([&] {
      IntervalProblem p{shift_length, potential_from_spec(shift_potential)};
      p.validate();
      const Extension e1{p, bc_catalog(bc1, s1, tol)};
      const Extension e2{p, bc_catalog(bc2, s2, tol)};
      ScanOptions options{shift_grid, !shift_serial};
      const int direct = spectral_shift_direct(e1, e2, lambda, tol, options);
      const int predicted = spectral_shift_predicted(e1, e2, lambda, tol);
      const LagrangianPlane vert = vertical_plane(2);
      const int sigma_minus = duistermaat_index(e1.plane, e2.plane, vert, tol);
      const int sigma_plus = duistermaat_index(e2.plane, e1.plane, vert, tol);
      const bool bound_ok = -sigma_minus <= direct && direct <= sigma_plus;
      std::ostringstream os;
      os << "shift_direct " << direct << "\n"
         << "shift_predicted " << predicted << "\n"
         << "sigma_minus " << sigma_minus << "\n"
         << "sigma_plus " << sigma_plus << "\n"
         << "bound " << (bound_ok ? "PASS" : "FAIL") << "\n";
      emit(output, os.str());
      if (direct != predicted) return 5;
      return bound_ok ? 0 : 1;
    });
  }

  if (*cmd_verify) {
    return guarded([&] {
      VerificationReport report;
      const bool parallel = !verify_serial;
      if (suite == "identities")
        report = verify_identities(suite_n, trials, seed, tol, parallel);
      else if (suite == "limits")
        report = verify_one_sided_limits(suite_n, trials, seed, tol, parallel);
      else if (suite == "hormander")
        report = verify_hormander(suite_n, trials, seed, tol, parallel);
      else if (suite == "krein")
        report = verify_krein(suite_n, trials, seed, tol, parallel);
      else
        report = verify_models(trials, seed, tol, parallel);
      nlohmann::json j;
      j["suite"] = suite;
      if (suite != "models") j["n"] = suite_n;
      j["trials"] = trials;
      j["seed"] = seed;
      j["checks"] = report_to_json(report);
      j["all_passed"] = report.all_passed();
      emit(output, j.dump(2) + "\n");
      return report.all_passed() ? 0 : 1;
    });
  }

  return guarded([&] {  // sweep
    const double steps_raw = sweep_grid[2];
    const int steps = static_cast<int>(steps_raw);
    if (steps < 2 || static_cast<double>(steps) != steps_raw)
      throw InvalidInput("--grid steps must be an integer >= 2");
    IntervalProblem p{sweep_length, potential_from_spec(sweep_potential)};
    p.validate();
    ScanOptions options;
    options.parallel = !sweep_serial;
    const SweepResult sweep =
        family_sweep(p, family, sweep_grid[0], sweep_grid[1], steps, k_max, tol, options);
    std::ostringstream os;
    write_sweep_csv(os, sweep);
    emit(output, os.str());
    return sweep.squeeze_ok && sweep.pinned_ok ? 0 : 1;
  });
}
