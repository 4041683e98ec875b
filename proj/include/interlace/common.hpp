#pragma once

// Shared scalar/matrix aliases, tolerance policy, inertia record and the error
// taxonomy used across the library.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace interlace {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Every numerical decision (rank cut, inertia zero band, root localization)
/// flows through one of these; no hidden constants elsewhere.
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;      // singular-value cut relative to sigma_max
  double inertia_zero_tol = 1e-9;   // eigenvalue zero band relative to spectral norm
  double root_tol = 1e-10;          // 1-d root/minimum localization, scaled by 1+|t|

  void validate() const {
    if (!(rank_rel_tol > 0) || !(inertia_zero_tol > 0) || !(root_tol > 0))
      throw std::invalid_argument("ToleranceConfig: all tolerances must be positive");
  }
};

/// Signature counts of a Hermitian matrix: eigenvalues below -tau / within
/// [-tau,tau] / above tau.
struct Inertia {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;

  int dimension() const { return n_minus + n_zero + n_plus; }
  bool operator==(const Inertia&) const = default;
};

// ---------------------------------------------------------------------------
// Error taxonomy. Everything thrown on purpose derives from Error so callers
// (and the CLI exit-code mapping) can discriminate.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input fails a structural precondition (non-Hermitian, rank-deficient frame,
/// not Lagrangian, malformed config...).
struct InvalidInput : Error {
  using Error::Error;
};

/// The dyadic epsilon ladder found no admissible value for a plane family.
struct NoAdmissibleEpsilon : Error {
  using Error::Error;
};

/// Requested Robin-map evaluation at an epsilon inside the exception set.
struct EpsilonInExceptionSet : Error {
  using Error::Error;
};

/// Two evaluations that must agree (two admissible epsilons, two routes)
/// disagreed: a tolerance failure, not a math failure.
struct InternalInconsistency : Error {
  using Error::Error;
};

/// Random search for an auxiliary transversal plane exhausted its attempts.
struct TransversalSearchFailed : Error {
  using Error::Error;
};

/// A transversality precondition does not hold for the given planes.
struct NotTransversal : Error {
  using Error::Error;
};

/// A linear relation expected to be an operator graph has a nonzero
/// multivalued part.
struct MultivaluedRelation : Error {
  using Error::Error;
};

struct NotSymplectic : Error {
  using Error::Error;
};

/// A path declared nondecreasing produced a crossing form that is not
/// positive definite.
struct MonotonicityViolated : Error {
  using Error::Error;
};

/// Endpoint/interior crossing form has a zero eigenvalue where a regular
/// crossing is required.
struct DegenerateCrossing : Error {
  using Error::Error;
};

/// sigma_min at a refined local minimum landed in the ambiguous band, or the
/// path is not transversal in isolated points (non-isolated intersection).
struct UnresolvedCrossing : Error {
  using Error::Error;
};

struct EmptyIntersection : Error {
  using Error::Error;
};

/// ODE integration failed (step-size underflow, Wronskian drift...).
struct IntegrationFailure : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Deterministic seeding helpers. Verification suites derive one sub-seed per
// trial from the master seed so results are independent of execution order
// (and therefore of the thread count).
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master ^ splitmix64(trial + 1));
}

}  // namespace interlace
