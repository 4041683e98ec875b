#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>
#include <vector>

#include "interlace/duistermaat.hpp"
#include "interlace/maslov.hpp"
#include "interlace/parallel.hpp"
#include "interlace/symplectic.hpp"

using namespace interlace;

namespace {

// two-parameter graph path: crossings with the horizontal plane sit exactly
// where m0 + t d becomes singular
PlanePath singular_sweep() {
  PlanePath path;
  path.a = -1.0;
  path.b = 1.0;
  path.frame_at = [](double t) {
    Matrix x = Matrix::Identity(2, 2);
    Matrix y = Matrix::Zero(2, 2);
    y(0, 0) = -0.5 + t;
    y(1, 1) = -1.0 + 3.0 * t;
    return Frame{x, y};
  };
  path.derivative_at = [](double) {
    Matrix dx = Matrix::Zero(2, 2);
    Matrix dy = Matrix::Zero(2, 2);
    dy(0, 0) = 1.0;
    dy(1, 1) = 3.0;
    return Frame{dx, dy};
  };
  path.nondecreasing_hint = true;
  return path;
}

bool same_reports(const VerificationReport& a, const VerificationReport& b) {
  if (a.checks.size() != b.checks.size()) return false;
  for (const auto& [name, entry] : a.checks) {
    const auto it = b.checks.find(name);
    if (it == b.checks.end()) return false;
    if (entry.trials != it->second.trials) return false;
    if (entry.failures != it->second.failures) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parallel_for covers the index range exactly once") {
  const std::size_t n = 20000;
  std::vector<std::size_t> out(n, 0);
  parallel_for(n, [&](std::size_t i) { out[i] = 3 * i + 1; }, true);
  for (std::size_t i = 0; i < n; ++i) REQUIRE(out[i] == 3 * i + 1);

  std::vector<std::size_t> serial(n, 0);
  parallel_for(n, [&](std::size_t i) { serial[i] = 3 * i + 1; }, false);
  CHECK(serial == out);
}

TEST_CASE("parallel_for rethrows the worker exception") {
  CHECK_THROWS_AS(
      parallel_for(
          1000,
          [](std::size_t i) {
            if (i == 137) throw InvalidInput("index 137 objects");
          },
          true),
      InvalidInput);
  CHECK_THROWS_AS(
      parallel_for(
          10, [](std::size_t) { throw std::runtime_error("plain"); }, false),
      std::runtime_error);
}

TEST_CASE("crossing scans are identical in serial and parallel mode") {
  const PlanePath path = singular_sweep();
  const LagrangianPlane ref = horizontal_plane(2);
  ScanOptions serial_opts;
  serial_opts.parallel = false;
  ScanOptions parallel_opts;
  parallel_opts.parallel = true;

  const auto cs = find_crossings(path, ref, {}, serial_opts);
  const auto cp = find_crossings(path, ref, {}, parallel_opts);
  REQUIRE(cs.size() == 2);
  REQUIRE(cp.size() == cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CHECK(cs[i].t == cp[i].t);  // bitwise: same grid, same refinement
    CHECK(cs[i].multiplicity == cp[i].multiplicity);
  }
  CHECK(cs[0].t == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(cs[1].t == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("verification batches are reproducible across modes") {
  const auto ser_id = verify_identities(3, 40, 20240817, {}, false);
  const auto par_id = verify_identities(3, 40, 20240817, {}, true);
  CHECK(ser_id.all_passed());
  CHECK(same_reports(ser_id, par_id));

  const auto ser_kr = verify_krein(3, 40, 771177, {}, false);
  const auto par_kr = verify_krein(3, 40, 771177, {}, true);
  CHECK(ser_kr.all_passed());
  CHECK(same_reports(ser_kr, par_kr));
}

TEST_CASE("per-trial seeds do not collide") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(trial_seed(99, t));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(99, 0) != trial_seed(100, 0));
}
