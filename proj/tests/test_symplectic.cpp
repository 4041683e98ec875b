#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <Eigen/SVD>

#include "interlace/linalg.hpp"
#include "interlace/symplectic.hpp"

using namespace interlace;

namespace {

Vector stack2(Complex u0, Complex u1) {
  Vector v(2);
  v << u0, u1;
  return v;
}

}  // namespace

TEST_CASE("symplectic form is sesquilinear with the expected signs") {
  const Vector u = stack2(1.0, 0.0);
  const Vector v = stack2(0.0, 1.0);
  CHECK(omega(u, v) == Complex(1.0, 0.0));
  CHECK(omega(v, u) == Complex(-1.0, 0.0));
  CHECK(omega(u, u) == Complex(0.0, 0.0));
  // conjugate-linear in the first argument, linear in the second
  const Complex i(0.0, 1.0);
  CHECK(omega(Vector(i * u), v) == -i);
  CHECK(omega(u, Vector(i * v)) == i);
}

TEST_CASE("standard J squares to minus one and is symplectic") {
  const Matrix j = standard_j(3);
  CHECK((j * j + Matrix::Identity(6, 6)).norm() <= 1e-15);
  CHECK(is_symplectic(j));

  // omega(u, v) = <u, J v> on a nontrivial pair
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Vector u(6), v(6);
  for (int k = 0; k < 6; ++k) {
    u(k) = Complex(g(rng), g(rng));
    v(k) = Complex(g(rng), g(rng));
  }
  CHECK(std::abs(omega(u, v) - (u.adjoint() * j * v)(0, 0)) <= 1e-12);
}

TEST_CASE("lagrangian predicate on frames") {
  Matrix h(2, 2);
  h << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), -3.0;
  CHECK(is_lagrangian(Frame{Matrix::Identity(2, 2), h}));

  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;  // not Hermitian: X*Y != Y*X
  CHECK_FALSE(is_lagrangian(Frame{Matrix::Identity(2, 2), nh}));

  // rank-deficient stack
  CHECK_FALSE(is_lagrangian(Frame{Matrix::Zero(2, 2), Matrix::Zero(2, 2)}));

  CHECK_THROWS_AS(
      LagrangianPlane::from_frame(Frame{Matrix::Identity(2, 2), nh}),
      InvalidInput);
}

TEST_CASE("planes are frame independent") {
  std::mt19937_64 rng(11);
  const Matrix h = random_hermitian(3, rng);
  Matrix g(3, 3);
  g << 2.0, 1.0, 0.0, 0.0, 1.0, Complex(0.0, 1.0), 0.0, 0.0, -1.0;  // invertible
  const LagrangianPlane l1 = LagrangianPlane::from_frame({Matrix::Identity(3, 3), h});
  const LagrangianPlane l2 = LagrangianPlane::from_frame({g, Matrix(h * g)});
  CHECK(same_plane(l1, l2));
  CHECK(gap_distance(l1, l2) <= 1e-12);
}

TEST_CASE("horizontal and vertical planes") {
  const LagrangianPlane h = horizontal_plane(2);
  const LagrangianPlane v = vertical_plane(2);
  CHECK(dim_intersection(h, v) == 0);
  CHECK(gap_distance(h, v) == doctest::Approx(1.0));
  CHECK((unitary_param(h) - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK((unitary_param(v) + Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("engineered intersections have exact dimension") {
  std::mt19937_64 rng(23);
  const int n = 4;
  const LagrangianPlane base = random_lagrangian(n, rng);
  for (int k = 0; k <= n; ++k) {
    const LagrangianPlane other = random_plane_with_intersection(base, k, rng);
    CHECK(dim_intersection(base, other) == k);
    if (k == n) CHECK(same_plane(base, other));
    // the unitary parameters detect the same intersection; the difference of
    // unitaries has natural scale 1, so the zero cut here is absolute
    const Matrix du = unitary_param(base) - unitary_param(other);
    const Eigen::JacobiSVD<Matrix> svd(du);
    int zero_dim = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] < 1e-8) ++zero_dim;
    CHECK(zero_dim == k);
  }
}

TEST_CASE("intersection basis lies in both planes") {
  std::mt19937_64 rng(31);
  const LagrangianPlane l1 = random_lagrangian(3, rng);
  const LagrangianPlane l2 = random_plane_with_intersection(l1, 2, rng);
  const Matrix b = intersection_basis(l1, l2);
  REQUIRE(b.cols() == 2);
  CHECK((b - l1.projector() * b).norm() <= 1e-8);
  CHECK((b - l2.projector() * b).norm() <= 1e-8);
}

TEST_CASE("parametrization round trips") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    const LagrangianPlane l = random_lagrangian(3, rng);

    const CoFrame cf = coframe_from_plane(l);
    CHECK((cf.a * cf.b.adjoint() - cf.b * cf.a.adjoint()).norm() <= 1e-10);
    CHECK(same_plane(plane_from_coframe(cf), l));

    const ProjectorTheta pt = projector_theta_from_plane(l);
    CHECK((pt.p * pt.p - pt.p).norm() <= 1e-10);
    CHECK((pt.theta - pt.theta.adjoint()).norm() <= 1e-9);
    CHECK((pt.theta - pt.p * pt.theta * pt.p).norm() <= 1e-9);
    CHECK(same_plane(plane_from_projector_theta(pt), l));

    const Matrix u = unitary_param(l);
    CHECK((u * u.adjoint() - Matrix::Identity(3, 3)).norm() <= 1e-10);
    CHECK(same_plane(plane_from_unitary(u), l));
  }
}

TEST_CASE("graphs of Hermitian matrices") {
  std::mt19937_64 rng(59);
  const Matrix h = random_hermitian(3, rng);
  const LagrangianPlane l = graph_plane(h);
  CHECK((graph_operator(l) - h).norm() <= 1e-10);
  CHECK(dim_intersection(l, vertical_plane(3)) == 0);
  CHECK_THROWS_AS(graph_operator(vertical_plane(3)), MultivaluedRelation);
}

TEST_CASE("relation arithmetic on graphs") {
  std::mt19937_64 rng(71);
  const Matrix h1 = random_hermitian(3, rng);
  const Matrix h2 = random_hermitian(3, rng);

  const LinearRelation diff = relation_difference(graph_plane(h1), graph_plane(h2));
  CHECK(relation_is_lagrangian(diff));
  CHECK((graph_operator(diff) - (h1 - h2)).norm() <= 1e-9);

  Matrix hs(2, 2);
  hs << 2.0, 0.0, 0.0, -0.5;
  const LinearRelation inv = relation_inverse(graph_plane(hs));
  CHECK((graph_operator(inv) - hs.inverse()).norm() <= 1e-10);

  // kernel and multivalued part of the graph of a singular matrix
  Matrix hk = Matrix::Zero(2, 2);
  hk(0, 0) = 3.0;
  const LinearRelation gk{graph_plane(hk).stacked()};
  CHECK(relation_kernel(gk).cols() == 1);
  CHECK(relation_mul(gk).cols() == 0);
  const LinearRelation vert{vertical_plane(2).stacked()};
  CHECK(relation_kernel(vert).cols() == 0);
  CHECK(relation_mul(vert).cols() == 2);
}

TEST_CASE("symplectic maps preserve planes and intersections") {
  std::mt19937_64 rng(83);
  const Matrix g = random_symplectic(3, rng);
  REQUIRE(is_symplectic(g));

  const LagrangianPlane l1 = random_lagrangian(3, rng);
  const LagrangianPlane l2 = random_plane_with_intersection(l1, 1, rng);
  const LagrangianPlane gl1 = symplectic_apply(g, l1);
  const LagrangianPlane gl2 = symplectic_apply(g, l2);
  CHECK(is_lagrangian(gl1.frame()));
  CHECK(dim_intersection(gl1, gl2) == 1);

  Matrix not_g = Matrix::Identity(6, 6);
  not_g(0, 0) = 2.0;
  CHECK_FALSE(is_symplectic(not_g));
  CHECK_THROWS_AS(symplectic_apply(not_g, l1), NotSymplectic);
}

TEST_CASE("symplectic complement of a Lagrangian plane is the plane") {
  std::mt19937_64 rng(97);
  const LagrangianPlane l = random_lagrangian(3, rng);
  const Matrix comp = symplectic_complement(l.stacked());
  REQUIRE(comp.cols() == 3);
  CHECK(subspace_intersection_dim(comp, l.stacked()) == 3);
}

TEST_CASE("random draws are reproducible from the seed") {
  const LagrangianPlane a = random_lagrangian(4, 12345);
  const LagrangianPlane b = random_lagrangian(4, 12345);
  const LagrangianPlane c = random_lagrangian(4, 54321);
  CHECK((a.stacked() - b.stacked()).norm() == 0.0);
  CHECK_FALSE(same_plane(a, c));
}
