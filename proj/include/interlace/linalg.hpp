#pragma once

// Dense complex linear algebra with an explicit tolerance policy: signature
// counts, rank decisions, nullspaces and subspace intersections. Everything
// downstream (Robin-map signatures, crossing multiplicities, plane equality)
// reduces to these four decisions, so their tolerance semantics live here.

#include "interlace/common.hpp"

namespace interlace {

/// Eigenvalue signature of a Hermitian matrix. The input is symmetrized
/// before the solve; a deviation ||A - A*|| beyond ~10x the zero band throws.
/// Zero band: tau = inertia_zero_tol * max(1, ||A||_2).
Inertia hermitian_inertia(const Matrix& a, const ToleranceConfig& tol = {});

/// Number of singular values above rank_rel_tol * sigma_max. Empty matrices
/// have rank 0.
int rank_with_tol(const Matrix& a, const ToleranceConfig& tol = {});

/// Orthonormal basis (columns) of the kernel; may have zero columns.
Matrix nullspace(const Matrix& a, const ToleranceConfig& tol = {});

/// Orthonormal basis (columns) of the column space, truncated at the rank cut.
Matrix orthonormal_range(const Matrix& a, const ToleranceConfig& tol = {});

/// dim(span(za) ∩ span(zb)) = cols(za) + cols(zb) - rank([za zb]).
/// Both inputs must have full column rank.
int subspace_intersection_dim(const Matrix& za, const Matrix& zb,
                              const ToleranceConfig& tol = {});

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& a);

/// Smallest singular value (0 for empty input).
double smallest_singular_value(const Matrix& a);

}  // namespace interlace
