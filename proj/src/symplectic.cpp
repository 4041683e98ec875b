#include "interlace/symplectic.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

namespace interlace {

namespace {

// Orthonormalize the columns of z (assumed full column rank) via Householder QR.
Matrix orthonormalize(const Matrix& z) {
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(z.rows(), z.cols());
  return q;
}

double lagrangian_residual_scale(const Frame& f) {
  return spectral_norm(f.x) * spectral_norm(f.y) + 1.0;
}

}  // namespace

// -- LagrangianPlane ----------------------------------------------------------

LagrangianPlane LagrangianPlane::from_frame(const Frame& f, const ToleranceConfig& tol) {
  tol.validate();
  if (f.x.rows() != f.y.rows() || f.x.cols() != f.y.cols())
    throw InvalidInput("LagrangianPlane: frame blocks have mismatched shapes");
  const int n = static_cast<int>(f.x.rows());
  if (static_cast<int>(f.x.cols()) != n)
    throw InvalidInput("LagrangianPlane: frame must have n columns");
  return from_stacked(f.stacked(), tol);
}

LagrangianPlane LagrangianPlane::from_stacked(const Matrix& z, const ToleranceConfig& tol) {
  tol.validate();
  if (z.rows() % 2 != 0) throw InvalidInput("LagrangianPlane: odd ambient dimension");
  const int n = static_cast<int>(z.rows()) / 2;
  if (static_cast<int>(z.cols()) != n)
    throw InvalidInput("LagrangianPlane: expected n frame columns");
  if (!z.allFinite()) throw InvalidInput("LagrangianPlane: frame has non-finite entries");
  if (rank_with_tol(z, tol) != n)
    throw InvalidInput("LagrangianPlane: frame is rank-deficient");
  Matrix q = orthonormalize(z);
  Frame f{q.topRows(n), q.bottomRows(n)};
  if (!is_lagrangian(f, tol))
    throw InvalidInput("LagrangianPlane: frame does not satisfy X*Y = Y*X");
  return LagrangianPlane(std::move(q), n);
}

LinearRelation LinearRelation::from_span(const Matrix& span, const ToleranceConfig& tol) {
  if (span.rows() % 2 != 0) throw InvalidInput("LinearRelation: odd ambient dimension");
  return LinearRelation{orthonormal_range(span, tol)};
}

// -- form and predicates -------------------------------------------------------

Complex omega(const Vector& u, const Vector& v) {
  if (u.size() != v.size() || u.size() % 2 != 0)
    throw InvalidInput("omega: vectors must share an even dimension");
  const Eigen::Index n = u.size() / 2;
  return u.head(n).dot(v.tail(n)) - u.tail(n).dot(v.head(n));
}

Matrix standard_j(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

bool is_lagrangian(const Frame& f, const ToleranceConfig& tol) {
  tol.validate();
  if (f.x.rows() != f.y.rows() || f.x.cols() != f.y.cols()) return false;
  const int n = static_cast<int>(f.x.rows());
  if (static_cast<int>(f.x.cols()) != n) return false;
  if (rank_with_tol(f.stacked(), tol) != n) return false;
  const Matrix defect = f.x.adjoint() * f.y - f.y.adjoint() * f.x;
  return defect.norm() <= 10.0 * tol.inertia_zero_tol * lagrangian_residual_scale(f);
}

int dim_intersection(const LagrangianPlane& l1, const LagrangianPlane& l2,
                     const ToleranceConfig& tol) {
  return subspace_intersection_dim(l1.stacked(), l2.stacked(), tol);
}

bool same_plane(const LagrangianPlane& l1, const LagrangianPlane& l2,
                const ToleranceConfig& tol) {
  return l1.n() == l2.n() && dim_intersection(l1, l2, tol) == l1.n();
}

Matrix intersection_basis(const LagrangianPlane& l1, const LagrangianPlane& l2,
                          const ToleranceConfig& tol) {
  const int n = l1.n();
  if (l2.n() != n) throw InvalidInput("intersection_basis: ambient dimensions differ");
  Matrix joint(2 * n, 2 * n);
  joint << l1.stacked(), l2.stacked();
  const Matrix null = nullspace(joint, tol);
  if (null.cols() == 0) return Matrix(2 * n, 0);
  return orthonormal_range(l1.stacked() * null.topRows(n), tol);
}

double gap_distance(const LagrangianPlane& l1, const LagrangianPlane& l2) {
  return spectral_norm(l1.projector() - l2.projector());
}

Matrix symplectic_complement(const Matrix& w, const ToleranceConfig& tol) {
  if (w.rows() % 2 != 0) throw InvalidInput("symplectic_complement: odd ambient dimension");
  const int n = static_cast<int>(w.rows()) / 2;
  if (w.cols() == 0) return Matrix::Identity(2 * n, 2 * n);
  const Matrix jw = standard_j(n) * w;
  return nullspace(jw.adjoint(), tol);
}

// -- parametrizations ----------------------------------------------------------

LagrangianPlane plane_from_coframe(const CoFrame& cf, const ToleranceConfig& tol) {
  if (cf.a.rows() != cf.b.rows() || cf.a.cols() != cf.b.cols())
    throw InvalidInput("plane_from_coframe: blocks have mismatched shapes");
  const Matrix sym = cf.a * cf.b.adjoint() - cf.b * cf.a.adjoint();
  const double scale = spectral_norm(cf.a) * spectral_norm(cf.b) + 1.0;
  if (sym.norm() > 10.0 * tol.inertia_zero_tol * scale)
    throw InvalidInput("plane_from_coframe: A B* is not Hermitian");
  // ker(A | B) = span of the frame (B*; -A*).
  return LagrangianPlane::from_frame({cf.b.adjoint(), -cf.a.adjoint()}, tol);
}

CoFrame coframe_from_plane(const LagrangianPlane& l) {
  return CoFrame{l.y().adjoint(), -l.x().adjoint()};
}

LagrangianPlane plane_from_projector_theta(const ProjectorTheta& pt,
                                           const ToleranceConfig& tol) {
  const Matrix& p = pt.p;
  if (p.rows() != p.cols()) throw InvalidInput("plane_from_projector_theta: P not square");
  const int n = static_cast<int>(p.rows());
  const double ptol = 10.0 * tol.inertia_zero_tol * std::max(1.0, p.norm());
  if ((p * p - p).norm() > ptol || (p - p.adjoint()).norm() > ptol)
    throw InvalidInput("plane_from_projector_theta: P is not an orthogonal projector");
  if (pt.theta.rows() != n || pt.theta.cols() != n)
    throw InvalidInput("plane_from_projector_theta: Theta has wrong shape");
  const Matrix th = p * pt.theta * p;
  if ((th - pt.theta).norm() > 10.0 * tol.inertia_zero_tol * std::max(1.0, pt.theta.norm()))
    throw InvalidInput("plane_from_projector_theta: Theta must act on range(P)");
  if ((th - th.adjoint()).norm() > 10.0 * tol.inertia_zero_tol * std::max(1.0, th.norm()))
    throw InvalidInput("plane_from_projector_theta: Theta is not Hermitian");
  const Matrix id = Matrix::Identity(n, n);
  return LagrangianPlane::from_frame({p, th + p - id}, tol);
}

ProjectorTheta projector_theta_from_plane(const LagrangianPlane& l,
                                          const ToleranceConfig& tol) {
  const int n = l.n();
  const Matrix x = l.x();
  const Matrix y = l.y();
  const Matrix ur = orthonormal_range(x, tol);  // Robin directions
  const int r = static_cast<int>(ur.cols());
  Matrix p = ur * ur.adjoint();
  Matrix theta = Matrix::Zero(n, n);
  if (r > 0) {
    // Directions along which the X block is nondegenerate: top-r right
    // singular vectors of X. On them, Theta (P x c) = P y c.
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinV);
    const Matrix c = svd.matrixV().leftCols(r);
    const Matrix xr = ur.adjoint() * (x * c);  // r x r, invertible
    const Matrix yr = ur.adjoint() * (y * c);
    Matrix theta_r = yr * xr.inverse();
    theta_r = 0.5 * (theta_r + theta_r.adjoint());
    theta = ur * theta_r * ur.adjoint();
  }
  return ProjectorTheta{std::move(p), std::move(theta)};
}

Matrix unitary_param(const LagrangianPlane& l) {
  const Matrix x = l.x();
  const Matrix y = l.y();
  const Complex i(0.0, 1.0);
  return (x + i * y) * (x - i * y).inverse();
}

LagrangianPlane plane_from_unitary(const Matrix& u, const ToleranceConfig& tol) {
  if (u.rows() != u.cols()) throw InvalidInput("plane_from_unitary: U not square");
  const int n = static_cast<int>(u.rows());
  const Matrix id = Matrix::Identity(n, n);
  if ((u.adjoint() * u - id).norm() > 10.0 * tol.inertia_zero_tol * std::max(1.0, u.norm()))
    throw InvalidInput("plane_from_unitary: U is not unitary");
  const Complex i(0.0, 1.0);
  return LagrangianPlane::from_frame({id + u, i * (id - u)}, tol);
}

LagrangianPlane graph_plane(const Matrix& h, const ToleranceConfig& tol) {
  if (h.rows() != h.cols()) throw InvalidInput("graph_plane: matrix not square");
  const int n = static_cast<int>(h.rows());
  return LagrangianPlane::from_frame({Matrix::Identity(n, n), h}, tol);
}

LagrangianPlane horizontal_plane(int n) {
  return LagrangianPlane::from_frame({Matrix::Identity(n, n), Matrix::Zero(n, n)});
}

LagrangianPlane vertical_plane(int n) {
  return LagrangianPlane::from_frame({Matrix::Zero(n, n), Matrix::Identity(n, n)});
}

Matrix graph_operator(const LagrangianPlane& l, const ToleranceConfig& tol) {
  const Matrix x = l.x();
  if (rank_with_tol(x, tol) != l.n())
    throw MultivaluedRelation("graph_operator: plane meets the vertical plane");
  Matrix t = l.y() * x.inverse();
  return 0.5 * (t + t.adjoint());
}

Matrix graph_operator(const LinearRelation& rel, const ToleranceConfig& tol) {
  const int n = rel.boundary_dim();
  if (rel.dim() != n)
    throw MultivaluedRelation("graph_operator: relation dimension is not n");
  const Matrix u = rel.top();
  if (rank_with_tol(u, tol) != n)
    throw MultivaluedRelation("graph_operator: relation has a multivalued part");
  Matrix t = rel.bottom() * u.inverse();
  return 0.5 * (t + t.adjoint());
}

// -- relation arithmetic ---------------------------------------------------------

LinearRelation relation_difference(const LinearRelation& l, const LinearRelation& m,
                                   const ToleranceConfig& tol) {
  if (l.boundary_dim() != m.boundary_dim())
    throw InvalidInput("relation_difference: boundary dimensions differ");
  const int n = l.boundary_dim();
  const int p = l.dim();
  const int q = m.dim();
  if (p == 0 || q == 0) {
    // No compatible pairs unless one side contains (0, v); with an empty
    // operand the difference is empty.
    return LinearRelation{Matrix(2 * n, 0)};
  }
  // Compatible pairs: first components agree. Solve [Xl  -Xm] (a; b) = 0.
  Matrix top(n, p + q);
  top << l.top(), -m.top();
  const Matrix null = nullspace(top, tol);
  if (null.cols() == 0) return LinearRelation{Matrix(2 * n, 0)};
  const Matrix a = null.topRows(p);
  const Matrix b = null.bottomRows(q);
  Matrix span(2 * n, null.cols());
  span.topRows(n) = l.top() * a;
  span.bottomRows(n) = l.bottom() * a - m.bottom() * b;
  return LinearRelation::from_span(span, tol);
}

LinearRelation relation_difference(const LagrangianPlane& l, const LagrangianPlane& m,
                                   const ToleranceConfig& tol) {
  return relation_difference(LinearRelation{l.stacked()}, LinearRelation{m.stacked()}, tol);
}

LinearRelation relation_inverse(const LinearRelation& l) {
  const int n = l.boundary_dim();
  Matrix swapped(2 * n, l.dim());
  swapped.topRows(n) = l.bottom();
  swapped.bottomRows(n) = l.top();
  return LinearRelation{std::move(swapped)};  // row swap preserves orthonormality
}

LinearRelation relation_inverse(const LagrangianPlane& l) {
  return relation_inverse(LinearRelation{l.stacked()});
}

Matrix relation_kernel(const LinearRelation& l, const ToleranceConfig& tol) {
  const Matrix c = nullspace(l.bottom(), tol);
  return orthonormal_range(l.top() * c, tol);
}

Matrix relation_mul(const LinearRelation& l, const ToleranceConfig& tol) {
  const Matrix c = nullspace(l.top(), tol);
  return orthonormal_range(l.bottom() * c, tol);
}

bool relation_is_lagrangian(const LinearRelation& l, const ToleranceConfig& tol) {
  const int n = l.boundary_dim();
  if (l.dim() != n) return false;
  const Matrix form = l.basis.adjoint() * standard_j(n) * l.basis;
  return form.norm() <= 10.0 * tol.inertia_zero_tol * std::max(1.0, static_cast<double>(n));
}

// -- group action and random draws ----------------------------------------------

bool is_symplectic(const Matrix& g, const ToleranceConfig& tol) {
  if (g.rows() != g.cols() || g.rows() % 2 != 0) return false;
  const int n = static_cast<int>(g.rows()) / 2;
  const Matrix j = standard_j(n);
  const double scale = spectral_norm(g);
  return (g.adjoint() * j * g - j).norm() <=
         10.0 * tol.inertia_zero_tol * std::max(1.0, scale * scale);
}

LagrangianPlane symplectic_apply(const Matrix& g, const LagrangianPlane& l,
                                 const ToleranceConfig& tol) {
  if (!is_symplectic(g, tol))
    throw NotSymplectic("symplectic_apply: matrix does not preserve omega");
  return LagrangianPlane::from_stacked(g * l.stacked(), tol);
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = q.adjoint() * a;
  // Fix the phase ambiguity so the distribution is Haar.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (a + a.adjoint());
}

Matrix random_symplectic(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Matrix id = Matrix::Identity(n, n);
  // (block-diagonal) * (shear), optionally composed with J. The generators are
  // kept mildly conditioned: consumers probe integer identities at parameter
  // offsets ~1e-3 and a badly conditioned map would shrink that regime.
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.25 * Complex(gauss(rng), gauss(rng));
  a += id;
  Matrix diag = Matrix::Zero(2 * n, 2 * n);
  diag.topLeftCorner(n, n) = a;
  diag.bottomRightCorner(n, n) = a.adjoint().inverse();
  Matrix shear = Matrix::Identity(2 * n, 2 * n);
  shear.topRightCorner(n, n) = 0.25 * random_hermitian(n, rng);
  Matrix g = diag * shear;
  if (rng() % 2 == 0) g = standard_j(n) * g;
  return g;
}

LagrangianPlane random_lagrangian(int n, std::mt19937_64& rng) {
  return plane_from_unitary(random_unitary(n, rng));
}

LagrangianPlane random_lagrangian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_lagrangian(n, rng);
}

LagrangianPlane random_plane_with_intersection(const LagrangianPlane& base, int k,
                                               std::mt19937_64& rng,
                                               const ToleranceConfig& tol) {
  const int n = base.n();
  if (k < 0 || k > n)
    throw InvalidInput("random_plane_with_intersection: k out of range");
  const Matrix u0 = unitary_param(base);
  const Matrix w = random_unitary(n, rng);
  std::uniform_real_distribution<double> phase(0.35, 2.0 * std::numbers::pi - 0.35);
  Vector d(n);
  for (int j = 0; j < k; ++j) d(j) = 1.0;
  for (int j = k; j < n; ++j) d(j) = std::exp(Complex(0.0, phase(rng)));
  const Matrix v = w * d.asDiagonal() * w.adjoint();
  LagrangianPlane result = plane_from_unitary(u0 * v, tol);
  if (dim_intersection(base, result, tol) != k)
    throw InternalInconsistency(
        "random_plane_with_intersection: constructed intersection has wrong dimension");
  return result;
}

}  // namespace interlace
