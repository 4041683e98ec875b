#pragma once

// Maslov index of a path of Lagrangian planes against a fixed reference.
// Crossings t0 (nontrivial intersection of path and reference) are located by
// scanning sigma_min([Z(t) | Z_ref]) on a grid and refining local minima by
// golden-section search; at a crossing the Hermitian crossing form
//
//     q(kappa) = <kappa, (X* Y' - Y* X')(t0) kappa>,      v = Z(t0) kappa,
//
// restricted to the intersection decides the contribution. For regular
// crossings the index over [a, b] is
//
//     Mas = n_+(m_a) + sum over interior crossings (n_+ - n_-) - n_-(m_b),
//
// which collapses to  sum over [a,b) of dim(path(t) ∩ ref)  for nondecreasing
// paths, and to  -(sum over (a,b]) with the roles of path and reference
// swapped. The triple-index difference law
//
//     Mas(L2, path) - Mas(L1, path) = i(L1, L2, path(b)) - i(L1, L2, path(a))
//
// is exposed as hormander_check.

#include <functional>
#include <iosfwd>
#include <vector>

#include "interlace/common.hpp"
#include "interlace/duistermaat.hpp"
#include "interlace/symplectic.hpp"

namespace interlace {

/// A path of Lagrangian planes. frame_at must return frames that vary
/// smoothly with t (no per-t canonicalization) and be evaluable on a
/// neighborhood of [a, b]; derivative_at may be empty, in which case central
/// finite differences with step 1e-6 (1 + |t|) are used. Paths that are not
/// C^1 near their crossings are not supported.
struct PlanePath {
  double a = 0.0;
  double b = 1.0;
  std::function<Frame(double)> frame_at;
  std::function<Frame(double)> derivative_at;  // optional
  bool nondecreasing_hint = false;
};

struct Crossing {
  double t = 0.0;
  int multiplicity = 0;
};

struct CrossingReport {
  double t = 0.0;
  int multiplicity = 0;
  Inertia form;  // inertia of the restricted crossing form
};

struct ScanOptions {
  int grid_points = 2000;
  bool parallel = true;
};

/// The plane at a path parameter (canonicalized).
LagrangianPlane plane_at(const PlanePath& path, double t, const ToleranceConfig& tol = {});

/// Full-plane crossing form matrix (n x n, Hermitian) in the coordinates of
/// the raw frame at t0.
Matrix crossing_form(const PlanePath& path, double t0, const ToleranceConfig& tol = {});

/// Crossing form compressed to an orthonormal basis of path(t0) ∩ ref
/// (r x r, Hermitian). Throws EmptyIntersection when the planes are
/// transversal at t0.
Matrix restricted_crossing_form(const PlanePath& path, const LagrangianPlane& ref,
                                double t0, const ToleranceConfig& tol = {});

/// Locates all crossings in [a, b] with their intersection dimensions.
/// Throws UnresolvedCrossing if a refined local minimum lands in the
/// ambiguous sigma band or if the intersection fails to be isolated.
std::vector<Crossing> find_crossings(const PlanePath& path, const LagrangianPlane& ref,
                                     const ToleranceConfig& tol = {},
                                     const ScanOptions& options = {});

/// Crossings annotated with restricted-form inertia.
std::vector<CrossingReport> crossing_reports(const PlanePath& path,
                                             const LagrangianPlane& ref,
                                             const ToleranceConfig& tol = {},
                                             const ScanOptions& options = {});

/// CSV: t,intersection_dim,n_minus,n_zero,n_plus (one row per crossing).
void write_crossing_csv(std::ostream& os, const std::vector<CrossingReport>& reports);

/// Maslov index of a nondecreasing path: sum of dim(path(t) ∩ ref) over
/// crossings in [a, b). Every restricted crossing form must be positive
/// definite (MonotonicityViolated otherwise).
int maslov_increasing(const PlanePath& path, const LagrangianPlane& ref,
                      const ToleranceConfig& tol = {}, const ScanOptions& options = {});

/// Reference-first convention for nondecreasing paths:
/// Mas(ref, path) = - sum over crossings in (a, b].
int maslov_reference_first(const PlanePath& path, const LagrangianPlane& ref,
                           const ToleranceConfig& tol = {},
                           const ScanOptions& options = {});

/// Regular-crossing evaluation (path-first convention); throws
/// DegenerateCrossing if any restricted form has a zero eigenvalue.
int maslov_regular(const PlanePath& path, const LagrangianPlane& ref,
                   const ToleranceConfig& tol = {}, const ScanOptions& options = {});

struct HormanderReport {
  int mas_ref_first_l2 = 0;
  int mas_ref_first_l1 = 0;
  int index_at_b = 0;
  int index_at_a = 0;

  int lhs() const { return mas_ref_first_l2 - mas_ref_first_l1; }
  int rhs() const { return index_at_b - index_at_a; }
  bool pass() const { return lhs() == rhs(); }
};

/// Checks Mas(L2, path) - Mas(L1, path) = i(L1, L2, path(b)) - i(L1, L2,
/// path(a)), with the reference-first Maslov indices obtained from the
/// regular-crossing evaluation and the endpoint intersection dimensions.
HormanderReport hormander_check(const PlanePath& path, const LagrangianPlane& l1,
                                const LagrangianPlane& l2,
                                const ToleranceConfig& tol = {},
                                const ScanOptions& options = {});

/// Property suite for the difference identity over random increasing paths
/// g (graph(M0 + t D)), D positive definite, against reference planes that
/// are random, equal to an interior path plane, or equal to an endpoint
/// plane. Trials run serially; the crossing scans inside use `parallel`.
VerificationReport verify_hormander(int n, std::uint64_t trials, std::uint64_t seed,
                                    const ToleranceConfig& tol = {},
                                    bool parallel = true);

}  // namespace interlace
