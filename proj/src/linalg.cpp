#include "interlace/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace interlace {

Inertia hermitian_inertia(const Matrix& a, const ToleranceConfig& tol) {
  tol.validate();
  if (a.rows() != a.cols()) throw InvalidInput("hermitian_inertia: matrix not square");
  if (a.rows() == 0) return {};

  const Matrix h = 0.5 * (a + a.adjoint());
  // Hermiticity guard: symmetrization must be a small perturbation.
  const double dev = (a - h).norm();
  const double scale = std::max(1.0, h.norm());
  if (dev > 10.0 * tol.inertia_zero_tol * scale)
    throw InvalidInput("hermitian_inertia: input is not Hermitian within tolerance");

  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("hermitian_inertia: eigensolver failed");
  const RealVector ev = es.eigenvalues();
  const double norm2 = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const double tau = tol.inertia_zero_tol * std::max(1.0, norm2);

  Inertia result;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tau)
      ++result.n_minus;
    else if (ev(i) > tau)
      ++result.n_plus;
    else
      ++result.n_zero;
  }
  return result;
}

int rank_with_tol(const Matrix& a, const ToleranceConfig& tol) {
  tol.validate();
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double cut = tol.rank_rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

Matrix nullspace(const Matrix& a, const ToleranceConfig& tol) {
  tol.validate();
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol.rank_rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix orthonormal_range(const Matrix& a, const ToleranceConfig& tol) {
  tol.validate();
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = tol.rank_rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

int subspace_intersection_dim(const Matrix& za, const Matrix& zb,
                              const ToleranceConfig& tol) {
  tol.validate();
  if (za.rows() != zb.rows())
    throw InvalidInput("subspace_intersection_dim: ambient dimensions differ");
  if (rank_with_tol(za, tol) != za.cols() || rank_with_tol(zb, tol) != zb.cols())
    throw InvalidInput("subspace_intersection_dim: basis matrix is rank-deficient");
  if (za.cols() == 0 || zb.cols() == 0) return 0;
  Matrix joint(za.rows(), za.cols() + zb.cols());
  joint << za, zb;
  return static_cast<int>(za.cols() + zb.cols()) - rank_with_tol(joint, tol);
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace interlace
