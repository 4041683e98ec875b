#pragma once

// 1-d Schrödinger problems -f'' + q f = lambda f on (0, l) with boundary
// traces
//
//     G0 f = (f(0), f(l)),     G1 f = (f'(0), -f'(l)),
//
// so that <f, S*g> - <S*f, g> = omega(G f, G g) (Green's identity). Boundary
// conditions are Lagrangian planes in C^2 ⊕ C^2; the Cauchy-data planes
//
//     M(lambda) = { G f : -f'' + q f = lambda f }
//
// form a nondecreasing analytic path whose crossings with a boundary plane L
// are exactly the eigenvalues of the corresponding extension H_L, with
// multiplicity equal to the intersection dimension. This module provides the
// catalog of classical boundary conditions, spectral scans in the
// signed-square variable u (lambda = u |u|), counting functions, spectral
// shifts (measured vs predicted by the triple index), interlacing reports,
// two routes to the Morse index, a sharpness construction attaining the
// shift bounds, and a rank-one model without unique continuation where the
// naive crossing count undercounts the spectrum.

#include <cmath>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interlace/common.hpp"
#include "interlace/maslov.hpp"
#include "interlace/symplectic.hpp"

namespace interlace {

struct Potential {
  enum class Kind { kZero, kConstant, kSampled };
  Kind kind = Kind::kZero;
  double constant = 0.0;
  std::vector<std::pair<double, double>> samples;  // (x, q(x)), x increasing

  static Potential zero() { return {}; }
  static Potential constant_q(double c) { return {Kind::kConstant, c, {}}; }
  static Potential sampled(std::vector<std::pair<double, double>> pts);

  /// Piecewise-linear evaluation (clamped to the sample range).
  double operator()(double x) const;
  double min_value() const;
  bool closed_form() const { return kind != Kind::kSampled; }
};

/// "x,q" CSV with header; decimal points, no locale.
Potential parse_potential_csv(std::istream& is);

struct IntervalProblem {
  double length = 1.0;
  Potential q;

  void validate() const;
};

/// Values of the fundamental system at x = length: c(0) = 1, c'(0) = 0,
/// s(0) = 0, s'(0) = 1. Closed forms for zero/constant potentials; adaptive
/// Dormand-Prince 5(4) otherwise (relative tolerance 1e-10, Wronskian drift
/// guarded at 1e-8).
struct FundamentalValues {
  Complex c, cp, s, sp;
};

FundamentalValues fundamental_solutions(const IntervalProblem& p, Complex lambda);

/// Frame of M(lambda): columns are the traces of c and s, rescaled smoothly
/// (per-column 2-norm; stable hyperbolic ratios deep in the negative
/// half-axis for closed-form potentials, usable down to lambda ~ -1e6 where
/// the plane approaches 0 ⊕ C^2).
Frame cauchy_data_frame(const IntervalProblem& p, double lambda);

/// Shared evaluator with a lambda-keyed cache (worthwhile for sampled
/// potentials, where each evaluation is an ODE solve).
class CauchyEvaluator {
 public:
  explicit CauchyEvaluator(IntervalProblem p);
  const IntervalProblem& problem() const { return p_; }
  FundamentalValues values(double lambda) const;
  Frame frame(double lambda) const;

 private:
  IntervalProblem p_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Path lambda -> M(lambda) on [la, lb].
PlanePath cauchy_path(const CauchyEvaluator& ev, double la, double lb);
/// Same path in the signed-square variable u (lambda = u |u|), which keeps
/// the crossing spacing roughly uniform for lambda ~ k^2.
PlanePath cauchy_path_u(const CauchyEvaluator& ev, double ua, double ub);

inline double u_of_lambda(double lambda) {
  return (lambda < 0 ? -1.0 : 1.0) * std::sqrt(std::abs(lambda));
}
inline double lambda_of_u(double u) { return u * std::abs(u); }

// -- boundary conditions -------------------------------------------------------

/// Catalog: "dirichlet", "neumann", "periodic", "antiperiodic", "delta"
/// (coupling s), "delta_prime" (coupling s). The coupling parameter is
/// ignored by the first four.
LagrangianPlane bc_catalog(const std::string& name, double s = 0.0,
                           const ToleranceConfig& tol = {});
std::vector<std::string> bc_names();

struct Extension {
  IntervalProblem problem;
  LagrangianPlane plane;
};

// -- spectra ---------------------------------------------------------------------

struct SpectrumSlice {
  double window_a = 0.0;
  double window_b = 0.0;
  std::vector<std::pair<double, int>> eigenvalues;  // (lambda, multiplicity)

  int total_multiplicity() const;
  /// Eigenvalues repeated by multiplicity, ascending.
  std::vector<double> expanded() const;
};

/// Eigenvalues of H_L in [a, b] located as crossings of the u-parametrized
/// Cauchy-data path with the boundary plane.
SpectrumSlice eigenvalues_in_window(const Extension& e, double a, double b,
                                    const ToleranceConfig& tol = {},
                                    const ScanOptions& options = {});

/// True iff the lambda-space crossing form is positive definite on every
/// eigenvalue in the slice (the monotonicity that makes eigenvalue counting
/// by crossings valid).
bool crossing_forms_positive(const Extension& e, const SpectrumSlice& slice,
                             const ToleranceConfig& tol = {});

/// N(H; (a, b]), counting multiplicity, with endpoint membership decided at
/// 1e-9 (1 + |endpoint|).
int counting_function(const Extension& e, double a, double b,
                      const ToleranceConfig& tol = {}, const ScanOptions& options = {});

/// N(H; (-inf, lambda]): lower bracket from the quadratic-form bound of the
/// extension, confirmed by one downward doubling (and further doublings until
/// two successive windows agree).
int counting_below(const Extension& e, double lambda, const ToleranceConfig& tol = {},
                   const ScanOptions& options = {});

/// First k eigenvalues (with multiplicity), ascending.
std::vector<double> first_eigenvalues(const Extension& e, int k,
                                      const ToleranceConfig& tol = {},
                                      const ScanOptions& options = {});

// -- spectral shift and interlacing ---------------------------------------------

/// sigma(H1, H2; lambda) = N(H1; (-inf, lambda]) - N(H2; (-inf, lambda]),
/// measured by counting.
int spectral_shift_direct(const Extension& e1, const Extension& e2, double lambda,
                          const ToleranceConfig& tol = {},
                          const ScanOptions& options = {});

/// Prediction i(L1, L2, M(lambda)) - i(L1, L2, 0 ⊕ K) from the triple index.
int spectral_shift_predicted(const Extension& e1, const Extension& e2, double lambda,
                             const ToleranceConfig& tol = {});

/// Prediction of N(H1; (a,b]) - N(H2; (a,b]) = i(L1, L2, M(b)) - i(L1, L2, M(a)).
int predicted_count_difference(const Extension& e1, const Extension& e2, double a,
                               double b, const ToleranceConfig& tol = {});

struct InterlacingReport {
  int sigma_minus = 0;
  int sigma_plus = 0;
  int dim_intersection = 0;
  std::vector<double> spectrum_1;
  std::vector<double> spectrum_2;
  bool inequalities_hold = false;
  bool rank_identity_holds = false;  // sigma_- + sigma_+ = n - dim(L1 ∩ L2)
};

/// lambda_{k - sigma_-}(H1) <= lambda_k(H2) <= lambda_{k + sigma_+}(H1) for
/// the first k_max eigenvalues, with slack 1e-6 (1 + |lambda|) for exact
/// coincidences.
InterlacingReport interlacing_check(const Extension& e1, const Extension& e2, int k_max,
                                    const ToleranceConfig& tol = {},
                                    const ScanOptions& options = {});

// -- Morse index ------------------------------------------------------------------

struct MorseReport {
  int negative_count = 0;                 // route A: eigenvalue scan
  std::optional<int> signature_route;     // route B: n_+(P M0 P - Theta) on ran P
  std::optional<int> triple_route;        // route C: i(M(0), L, 0 ⊕ K), for q >= 0
  Matrix limiting_map;                    // M(0-) extrapolated through -1e-4, -1e-6
  std::string note;
};

/// Routes to n_-(H): route B is absent when M(0-) is multivalued; route C
/// (an endpoint-data triple-index formula) applies when the minimal operator
/// is nonnegative, i.e. q >= 0.
MorseReport morse_index(const Extension& e, const ToleranceConfig& tol = {},
                        const ScanOptions& options = {});

/// M(0-) Richardson-extrapolated from lambda = -1e-4, -1e-6; throws
/// MultivaluedRelation if the plane meets the vertical plane there.
Matrix limiting_boundary_map(const IntervalProblem& p, const ToleranceConfig& tol = {});

// -- theorem demonstrations --------------------------------------------------------

struct SharpnessReport {
  double lambda0 = 0.0;
  int sigma_minus = 0;
  int sigma_plus = 0;
  int shift_left = 0;   // sigma(H1, H2; lambda0 - delta), should be -sigma_minus
  int shift_right = 0;  // sigma(H1, H2; lambda0 + delta), should be +sigma_plus

  bool pass() const { return shift_left == -sigma_minus && shift_right == sigma_plus; }
};

/// L1 = M(lambda0) = graph(M0), L2 = graph(M0 - P_- + P_+) with orthogonal
/// projectors of ranks sm, sp: the one-sided shifts at lambda0 attain both
/// bounds of the interlacing theorem.
SharpnessReport sharpness_demo(const IntervalProblem& p, int sm, int sp,
                               const ToleranceConfig& tol = {},
                               const ScanOptions& options = {});

// -- rank-one model without unique continuation ------------------------------------

/// Boundary data of the two-interval model on (0, 2pi) reduced by symmetry to
/// a rank-one boundary space: M(z) = span{ (sin(pi sqrt z)/sqrt z,
/// -2 cos(pi sqrt z)) }. Interior solutions invisible to the boundary appear
/// at z = k^2, k = 1, 2, ...
struct NoUcpData {
  Frame frame;                 // 1x1 frame of M(z)
  int inner_solution_dim = 0;  // dim ker(S - z)
};

NoUcpData no_ucp_model(double z, const ToleranceConfig& tol = {});

/// Spectrum of the extension with boundary plane l (subspace of C ⊕ C) on a
/// window: crossings of M(z), plus the interior solutions when
/// include_inner_solutions is set (that is the difference between the naive
/// crossing count and the true counting function).
SpectrumSlice no_ucp_spectrum(const LagrangianPlane& l, double a, double b,
                              bool include_inner_solutions,
                              const ToleranceConfig& tol = {},
                              const ScanOptions& options = {});

/// i(L1, LF, M(b)) - i(L1, LF, M(a)) for the rank-one model.
int no_ucp_predicted_difference(const LagrangianPlane& l1, const LagrangianPlane& lf,
                                double a, double b, const ToleranceConfig& tol = {});

// -- consistency checks --------------------------------------------------------------

/// max over fundamental-system pairs of |(l2 - l1) <f, g> - omega(G f, G g)|.
double greens_identity_residual(const IntervalProblem& p, double lambda1, double lambda2);

struct DerivativeCheckPoint {
  double s = 0.0;
  int branch = 0;  // 1-based eigenvalue index
  double lambda = 0.0;
  double fd = 0.0;       // finite-difference d lambda / d s
  double formula = 0.0;  // -|f'(0)|^2 for the normalized eigenfunction
  double rel_err = 0.0;
  bool skipped = false;  // multiple eigenvalue: branch not differentiable-safe
};

/// d lambda / d s along delta_prime(s) eigenvalue branches vs the boundary
/// formula; rel_err is |fd - formula| / max(1, |formula|).
std::vector<DerivativeCheckPoint> eigenvalue_derivative_check(
    const IntervalProblem& p, const std::vector<double>& s_values,
    const std::vector<int>& branches, const ToleranceConfig& tol = {},
    const ScanOptions& options = {});

// -- parameter sweeps -----------------------------------------------------------------

struct SweepResult {
  std::string family;
  std::vector<double> s_values;
  std::vector<std::vector<double>> spectra;  // per s, first k eigenvalues
  bool squeeze_ok = true;  // lambda_{k-1}(aper) <= lambda_k(delta') <= lambda_k(aper)
  bool pinned_ok = true;   // even branches pinned where the aper pair is degenerate
};

/// family: "delta" or "delta_prime"; checks the antiperiodic squeeze for the
/// delta_prime family.
SweepResult family_sweep(const IntervalProblem& p, const std::string& family,
                         double s_lo, double s_hi, int steps, int k_max,
                         const ToleranceConfig& tol = {},
                         const ScanOptions& options = {});

/// CSV: s,lambda_1,...,lambda_k rows.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

// -- randomized model suite -------------------------------------------------------

/// Random catalog boundary pairs, couplings, potentials and spectral windows:
/// measured vs predicted spectral shift, interval counts vs the endpoint
/// index difference, Green's identity residual, and crossing-form positivity.
/// Trials run serially; the scans inside use `parallel`.
VerificationReport verify_models(std::uint64_t trials, std::uint64_t seed,
                                 const ToleranceConfig& tol = {},
                                 bool parallel = true);

}  // namespace interlace
