#pragma once

// Complex symplectic linear algebra on K ⊕ K, K = C^n, with the sesquilinear
// symplectic form
//
//     omega(u, v) = <u0, v1> - <u1, v0>,      u = (u0, u1), v = (v0, v1),
//
// conjugate-linear in u and linear in v, i.e. omega(u, v) = <u, J v> with
// J = [[0, I], [-I, 0]]. A subspace L is Lagrangian iff J L = L^perp, iff any
// frame (X; Y) of L satisfies X*Y = Y*X with full column rank.
//
// Four interchangeable descriptions of a Lagrangian plane are supported:
// frames (X; Y), co-frames (A | B) with A B* = B A* (the plane is ker(A | B)),
// projector pairs (P, Theta) reading "(I-P) u0 = 0, P u1 = Theta P u0", and
// unitary parameters U = (X + iY)(X - iY)^{-1}.

#include <cstdint>
#include <random>

#include "interlace/common.hpp"
#include "interlace/linalg.hpp"

namespace interlace {

/// A (not necessarily orthonormal) frame: the plane is the column span of the
/// stacked 2n x k matrix (X; Y).
struct Frame {
  Matrix x;
  Matrix y;

  int boundary_dim() const { return static_cast<int>(x.cols() ? x.rows() : y.rows()); }
  int span_dim() const { return static_cast<int>(x.cols()); }
  Matrix stacked() const {
    Matrix z(x.rows() + y.rows(), x.cols());
    z << x, y;
    return z;
  }
};

/// Co-frame: the plane is { u : A u0 + B u1 = 0 }; requires A B* = B A* and
/// full row rank of (A | B). Equivalent frame: (B*; -A*).
struct CoFrame {
  Matrix a;
  Matrix b;
};

/// (P, Theta) boundary-condition form: P orthogonal projector on K, Theta
/// Hermitian on range(P) (stored as an n x n matrix with Theta = P Theta P).
/// The plane is the frame span of (P; P Theta P + P - I).
struct ProjectorTheta {
  Matrix p;
  Matrix theta;
};

class LagrangianPlane {
 public:
  /// Validates rank and the Lagrangian condition, then stores an orthonormal
  /// stacked frame. Throws InvalidInput otherwise.
  static LagrangianPlane from_frame(const Frame& f, const ToleranceConfig& tol = {});

  /// Same, from an already-stacked 2n x n matrix.
  static LagrangianPlane from_stacked(const Matrix& z, const ToleranceConfig& tol = {});

  int n() const { return n_; }
  /// Orthonormal stacked frame, 2n x n.
  const Matrix& stacked() const { return z_; }
  Matrix x() const { return z_.topRows(n_); }
  Matrix y() const { return z_.bottomRows(n_); }
  Frame frame() const { return {x(), y()}; }
  /// Orthogonal projector onto the plane (z z*).
  Matrix projector() const { return z_ * z_.adjoint(); }

 private:
  LagrangianPlane(Matrix z, int n) : z_(std::move(z)), n_(n) {}
  Matrix z_;
  int n_ = 0;
};

/// A linear relation on K: any subspace of K ⊕ K, held as an orthonormal
/// basis. Lagrangian planes are the maximal symmetric ones.
struct LinearRelation {
  Matrix basis;  // 2n x k, orthonormal columns

  int boundary_dim() const { return static_cast<int>(basis.rows()) / 2; }
  int dim() const { return static_cast<int>(basis.cols()); }
  Matrix top() const { return basis.topRows(boundary_dim()); }
  Matrix bottom() const { return basis.bottomRows(boundary_dim()); }

  static LinearRelation from_span(const Matrix& span, const ToleranceConfig& tol = {});
};

// -- form and predicates -----------------------------------------------------

/// omega(u, v) = <u0, v1> - <u1, v0> for vectors in K ⊕ K.
Complex omega(const Vector& u, const Vector& v);

/// The matrix J with omega(u, v) = <u, J v>.
Matrix standard_j(int n);

/// True iff ||X*Y - Y*X|| <= 10 * inertia_zero_tol * (||X|| ||Y|| + 1) and the
/// stacked frame has full column rank n.
bool is_lagrangian(const Frame& f, const ToleranceConfig& tol = {});

/// dim(L1 ∩ L2).
int dim_intersection(const LagrangianPlane& l1, const LagrangianPlane& l2,
                     const ToleranceConfig& tol = {});

/// Orthonormal basis of L1 ∩ L2 as vectors in K ⊕ K (may be empty).
Matrix intersection_basis(const LagrangianPlane& l1, const LagrangianPlane& l2,
                          const ToleranceConfig& tol = {});

/// Subspace equality test via intersection dimension.
bool same_plane(const LagrangianPlane& l1, const LagrangianPlane& l2,
                const ToleranceConfig& tol = {});

/// Gap distance ||P_L1 - P_L2|| (spectral norm of projector difference).
double gap_distance(const LagrangianPlane& l1, const LagrangianPlane& l2);

/// omega-orthogonal complement of span(w) = (J span(w))^perp, as an
/// orthonormal basis. For Lagrangian L this equals L itself.
Matrix symplectic_complement(const Matrix& w, const ToleranceConfig& tol = {});

// -- parametrizations --------------------------------------------------------

LagrangianPlane plane_from_coframe(const CoFrame& cf, const ToleranceConfig& tol = {});
CoFrame coframe_from_plane(const LagrangianPlane& l);

LagrangianPlane plane_from_projector_theta(const ProjectorTheta& pt,
                                           const ToleranceConfig& tol = {});
/// Splits the plane into Robin directions (range of the X block) and Dirichlet
/// directions; Theta is recovered by solving P y_j = Theta P x_j over a basis.
ProjectorTheta projector_theta_from_plane(const LagrangianPlane& l,
                                          const ToleranceConfig& tol = {});

/// U = (X + iY)(X - iY)^{-1}; unitary for Lagrangian planes. Horizontal plane
/// (I; 0) -> I, vertical plane (0; I) -> -I.
Matrix unitary_param(const LagrangianPlane& l);
/// Inverse map: the plane spanned by (I + U; i(I - U)).
LagrangianPlane plane_from_unitary(const Matrix& u, const ToleranceConfig& tol = {});

/// Graph of a Hermitian matrix h: frame (I; h).
LagrangianPlane graph_plane(const Matrix& h, const ToleranceConfig& tol = {});

/// Horizontal plane K ⊕ 0 and vertical plane 0 ⊕ K.
LagrangianPlane horizontal_plane(int n);
LagrangianPlane vertical_plane(int n);

/// The Hermitian matrix whose graph the plane is; throws MultivaluedRelation
/// if the X block is rank-deficient.
Matrix graph_operator(const LagrangianPlane& l, const ToleranceConfig& tol = {});
Matrix graph_operator(const LinearRelation& rel, const ToleranceConfig& tol = {});

// -- relation arithmetic -----------------------------------------------------

/// L - M = { (u, v - w) : (u, v) in L, (u, w) in M }. The difference of two
/// Lagrangian planes is again Lagrangian.
LinearRelation relation_difference(const LinearRelation& l, const LinearRelation& m,
                                   const ToleranceConfig& tol = {});
LinearRelation relation_difference(const LagrangianPlane& l, const LagrangianPlane& m,
                                   const ToleranceConfig& tol = {});

/// L^{-1}: swap the two components.
LinearRelation relation_inverse(const LinearRelation& l);
LinearRelation relation_inverse(const LagrangianPlane& l);

/// ker L = { u : (u, 0) in L } and mul L = { v : (0, v) in L }, both as
/// orthonormal bases of subspaces of K.
Matrix relation_kernel(const LinearRelation& l, const ToleranceConfig& tol = {});
Matrix relation_mul(const LinearRelation& l, const ToleranceConfig& tol = {});

/// True iff the relation has dimension n and omega vanishes on it.
bool relation_is_lagrangian(const LinearRelation& l, const ToleranceConfig& tol = {});

// -- group action and random draws -------------------------------------------

/// Checks g* J g = J (within tolerance) and maps the plane through g.
LagrangianPlane symplectic_apply(const Matrix& g, const LagrangianPlane& l,
                                 const ToleranceConfig& tol = {});

bool is_symplectic(const Matrix& g, const ToleranceConfig& tol = {});

/// Haar-distributed unitary via QR of a complex Ginibre sample.
Matrix random_unitary(int n, std::mt19937_64& rng);
Matrix random_hermitian(int n, std::mt19937_64& rng);
/// Random symplectic matrix: product of generators [[A,0],[0,A^{-*}]],
/// [[I,B],[0,I]] (B Hermitian) and J.
Matrix random_symplectic(int n, std::mt19937_64& rng);

/// Random Lagrangian plane from a Haar-ish unitary parameter.
LagrangianPlane random_lagrangian(int n, std::uint64_t seed);
LagrangianPlane random_lagrangian(int n, std::mt19937_64& rng);

/// Random plane whose intersection with `base` has dimension exactly k:
/// multiplies the unitary parameter by a unitary with eigenvalue 1 of
/// multiplicity k and the remaining phases bounded away from 1.
LagrangianPlane random_plane_with_intersection(const LagrangianPlane& base, int k,
                                               std::mt19937_64& rng,
                                               const ToleranceConfig& tol = {});

}  // namespace interlace
