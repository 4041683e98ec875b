#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "interlace/linalg.hpp"

using namespace interlace;

namespace {

Matrix diag(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                          static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

}  // namespace

TEST_CASE("hermitian inertia counts signs with a relative zero band") {
  CHECK(hermitian_inertia(diag({3.0, -2.0, 0.0, 1e-12})) == Inertia{1, 2, 1});
  CHECK(hermitian_inertia(diag({-1.0, -1.0, -1.0})) == Inertia{3, 0, 0});
  CHECK(hermitian_inertia(Matrix::Zero(2, 2)) == Inertia{0, 2, 0});
  // 1e-5 is far above the zero band relative to the norm 3
  CHECK(hermitian_inertia(diag({3.0, 1e-5})) == Inertia{0, 0, 2});
}

TEST_CASE("inertia is invariant under unitary conjugation") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g;
  const Matrix d = diag({2.0, -1.0, 0.0, 5.0, -3.0});
  // build a unitary via QR of a Ginibre sample
  Matrix z(5, 5);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) z(i, j) = Complex(g(rng), g(rng));
  const Matrix q = Eigen::HouseholderQR<Matrix>(z).householderQ();
  CHECK(hermitian_inertia(Matrix(q * d * q.adjoint())) == Inertia{2, 1, 2});
}

TEST_CASE("inertia symmetrizes small deviations and rejects large ones") {
  Matrix a = diag({1.0, -1.0});
  a(0, 1) = Complex(0.0, 1e-13);  // below the rejection threshold
  CHECK(hermitian_inertia(a) == Inertia{1, 0, 1});

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;  // wildly non-Hermitian
  CHECK_THROWS_AS(hermitian_inertia(bad), InvalidInput);
}

TEST_CASE("rank honors the relative singular value cut") {
  CHECK(rank_with_tol(diag({1.0, 1e-15})) == 1);
  CHECK(rank_with_tol(diag({1.0, 1e-5})) == 2);
  CHECK(rank_with_tol(Matrix::Zero(3, 2)) == 0);
  CHECK(rank_with_tol(Matrix(0, 0)) == 0);

  Vector u(3);
  u << 1.0, Complex(0, 2), -1.0;
  CHECK(rank_with_tol(Matrix(u * u.adjoint())) == 1);
}

TEST_CASE("nullspace returns an orthonormal kernel basis") {
  Matrix a(2, 2);
  a << 1, 1, 1, 1;
  const Matrix n = nullspace(a);
  REQUIRE(n.cols() == 1);
  CHECK((a * n).norm() <= 1e-12);
  CHECK((n.adjoint() * n - Matrix::Identity(1, 1)).norm() <= 1e-12);

  CHECK(nullspace(Matrix::Identity(3, 3)).cols() == 0);
  CHECK(nullspace(Matrix::Zero(2, 3)).cols() == 3);
}

TEST_CASE("orthonormal range spans the column space") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Matrix b(4, 2), c(2, 5);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) b(i, j) = Complex(g(rng), g(rng));
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) c(i, j) = Complex(g(rng), g(rng));
  const Matrix a = b * c;
  const Matrix q = orthonormal_range(a);
  REQUIRE(q.cols() == 2);
  CHECK((q.adjoint() * q - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK((a - q * (q.adjoint() * a)).norm() <= 1e-10 * a.norm());
}

TEST_CASE("subspace intersection dimension") {
  Matrix e12 = Matrix::Zero(4, 2), e23 = Matrix::Zero(4, 2);
  e12(0, 0) = 1.0;
  e12(1, 1) = 1.0;
  e23(1, 0) = 1.0;
  e23(2, 1) = 1.0;
  CHECK(subspace_intersection_dim(e12, e23) == 1);
  CHECK(subspace_intersection_dim(e12, e12) == 2);

  Matrix e34 = Matrix::Zero(4, 2);
  e34(2, 0) = 1.0;
  e34(3, 1) = 1.0;
  CHECK(subspace_intersection_dim(e12, e34) == 0);
}

TEST_CASE("norm helpers") {
  CHECK(spectral_norm(diag({-7.0, 2.0})) == doctest::Approx(7.0));
  CHECK(smallest_singular_value(diag({3.0, 0.5})) == doctest::Approx(0.5));
  CHECK(smallest_singular_value(Matrix(0, 0)) == 0.0);
}
