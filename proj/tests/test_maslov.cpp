#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "interlace/linalg.hpp"
#include "interlace/maslov.hpp"
#include "interlace/models.hpp"

using namespace interlace;

namespace {

// A line in C ⊕ C rotating counterclockwise; crossings with the horizontal
// plane sit at integer multiples of pi, all with positive crossing form.
PlanePath rotating_line(double a, double b, double speed = 1.0) {
  PlanePath path;
  path.a = a;
  path.b = b;
  path.frame_at = [speed](double t) {
    Matrix x(1, 1), y(1, 1);
    x(0, 0) = std::cos(speed * t);
    y(0, 0) = std::sin(speed * t);
    return Frame{x, y};
  };
  path.derivative_at = [speed](double t) {
    Matrix x(1, 1), y(1, 1);
    x(0, 0) = -speed * std::sin(speed * t);
    y(0, 0) = speed * std::cos(speed * t);
    return Frame{x, y};
  };
  path.nondecreasing_hint = speed > 0.0;
  return path;
}

PlanePath graph_path(const Matrix& m0, const Matrix& d, double a, double b) {
  PlanePath path;
  path.a = a;
  path.b = b;
  const int n = static_cast<int>(m0.rows());
  path.frame_at = [m0, d, n](double t) {
    return Frame{Matrix::Identity(n, n), Matrix(m0 + t * d)};
  };
  path.derivative_at = [d, n](double) {
    return Frame{Matrix::Zero(n, n), d};
  };
  return path;
}

}  // namespace

TEST_CASE("rotating line against the horizontal plane") {
  const LagrangianPlane h = horizontal_plane(1);
  const PlanePath path = rotating_line(-0.5, 3.5);

  const auto crossings = find_crossings(path, h);
  REQUIRE(crossings.size() == 2);
  CHECK(crossings[0].t == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(crossings[1].t == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK(crossings[0].multiplicity == 1);
  CHECK(crossings[1].multiplicity == 1);

  CHECK(maslov_increasing(path, h) == 2);
  CHECK(maslov_regular(path, h) == 2);
  CHECK(maslov_reference_first(path, h) == -2);

  // the full-plane crossing form at t = 0 is X*Y' - Y*X' = 1 > 0
  const Matrix form = crossing_form(path, 0.0);
  CHECK(form(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reversed rotation flips every convention") {
  const LagrangianPlane h = horizontal_plane(1);
  const PlanePath reversed = rotating_line(-3.5, 0.5, -1.0);
  CHECK(maslov_regular(reversed, h) == -2);
  CHECK_THROWS_AS(maslov_increasing(reversed, h), MonotonicityViolated);
}

TEST_CASE("graph path with an indefinite direction") {
  Matrix d(2, 2);
  d << 1, 0, 0, -1;
  const Matrix m0 = Matrix::Zero(2, 2);
  const LagrangianPlane h = horizontal_plane(2);

  // double crossing at t = 0 with signature (+1, -1)
  const auto reports = crossing_reports(graph_path(m0, d, -1.0, 1.0), h);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].multiplicity == 2);
  CHECK(reports[0].form.n_plus == 1);
  CHECK(reports[0].form.n_minus == 1);
  CHECK(reports[0].form.n_zero == 0);

  CHECK(maslov_regular(graph_path(m0, d, -1.0, 1.0), h) == 0);
  // as a start point the crossing contributes its positive part
  CHECK(maslov_regular(graph_path(m0, d, 0.0, 1.0), h) == 1);

  std::ostringstream os;
  write_crossing_csv(os, reports);
  std::istringstream in(os.str());
  std::string header, row;
  REQUIRE(std::getline(in, header));
  CHECK(header == "t,intersection_dim,n_minus,n_zero,n_plus");
  REQUIRE(std::getline(in, row));
  double t = 1.0;
  int dim = 0, nm = 0, nz = 0, np = 0;
  REQUIRE(std::sscanf(row.c_str(), "%lf,%d,%d,%d,%d", &t, &dim, &nm, &nz, &np) == 5);
  CHECK(std::abs(t) <= 1e-6);
  CHECK(dim == 2);
  CHECK(nm == 1);
  CHECK(nz == 0);
  CHECK(np == 1);
}

TEST_CASE("plane_at canonicalizes the raw frame") {
  Matrix m0(2, 2);
  m0 << 0.25, 0, 0, -1.5;
  const PlanePath path = graph_path(m0, Matrix::Identity(2, 2), 0.0, 1.0);
  CHECK(same_plane(plane_at(path, 0.5),
                   graph_plane(Matrix(m0 + 0.5 * Matrix::Identity(2, 2)))));
}

TEST_CASE("restricted form requires a crossing") {
  const PlanePath path = rotating_line(-0.5, 3.5);
  CHECK_THROWS_AS(restricted_crossing_form(path, horizontal_plane(1), 0.7),
                  EmptyIntersection);
}

TEST_CASE("tangent touch is located but rejected by signed counts") {
  PlanePath path;
  path.a = -0.4;
  path.b = 0.4;
  path.frame_at = [](double t) {
    Matrix x(1, 1), y(1, 1);
    x(0, 0) = 1.0;
    y(0, 0) = t * t;  // touches the horizontal plane quadratically at t = 0
    return Frame{x, y};
  };
  const auto crossings = find_crossings(path, horizontal_plane(1));
  REQUIRE(crossings.size() == 1);
  CHECK(crossings[0].t == doctest::Approx(0.0).epsilon(1e-4));
  CHECK_THROWS_AS(maslov_regular(path, horizontal_plane(1)), DegenerateCrossing);
}

TEST_CASE("a path resting on the reference plane is rejected") {
  PlanePath path;
  path.a = 0.0;
  path.b = 1.0;
  path.frame_at = [](double) {
    return Frame{Matrix::Identity(1, 1), Matrix::Zero(1, 1)};
  };
  CHECK_THROWS_AS(find_crossings(path, horizontal_plane(1)), UnresolvedCrossing);
}

TEST_CASE("eigenvalue crossings of the boundary-data path, zero potential") {
  IntervalProblem p;  // length 1, q = 0
  const CauchyEvaluator ev(p);
  const PlanePath path = cauchy_path_u(ev, u_of_lambda(1.0), u_of_lambda(50.0));
  const auto crossings = find_crossings(path, bc_catalog("dirichlet"));
  REQUIRE(crossings.size() == 2);
  CHECK(lambda_of_u(crossings[0].t) ==
        doctest::Approx(M_PI * M_PI).epsilon(1e-8));
  CHECK(lambda_of_u(crossings[1].t) ==
        doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-8));
  CHECK(maslov_increasing(path, bc_catalog("dirichlet")) == 2);
}

TEST_CASE("difference identity on monotone graph paths") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 2;
    const Matrix m0 = random_hermitian(n, rng);
    Matrix d = random_hermitian(n, rng);
    d = (d * d) / static_cast<double>(n) + 0.4 * Matrix::Identity(n, n);
    const PlanePath path = graph_path(m0, d, -0.8, 0.9);
    const LagrangianPlane l1 = random_lagrangian(n, rng);
    const LagrangianPlane l2 =
        trial % 3 == 0 ? plane_at(path, -0.8 + 1.7 * 0.37) : random_lagrangian(n, rng);
    const HormanderReport rep = hormander_check(path, l1, l2);
    CHECK(rep.pass());
  }

  CHECK(verify_hormander(3, 25, 606).all_passed());
}

TEST_CASE("scan results do not depend on the grid resolution") {
  const LagrangianPlane h = horizontal_plane(1);
  const PlanePath path = rotating_line(-0.5, 3.5);
  for (const int grid : {900, 2000, 5000}) {
    ScanOptions options;
    options.grid_points = grid;
    const auto crossings = find_crossings(path, h, {}, options);
    REQUIRE(crossings.size() == 2);
    CHECK(crossings[0].t == doctest::Approx(0.0).epsilon(1e-8));
  }
}
