#include "interlace/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "interlace/duistermaat.hpp"
#include "interlace/linalg.hpp"

namespace interlace {

namespace {

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with FSAL and PI-free step control. State is a real
// vector; all model systems below are written out in real components.
// ---------------------------------------------------------------------------

using RealVec = Eigen::VectorXd;
using OdeRhs = std::function<void(double, const RealVec&, RealVec&)>;

RealVec integrate_dp54(const OdeRhs& rhs, RealVec y, double x0, double x1,
                       double rtol, double atol) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - bhat: coefficients of the embedded error estimate.
  static const double d1 = 71.0 / 57600, d3 = -71.0 / 16695, d4 = 71.0 / 1920,
                      d5 = -17253.0 / 339200, d6 = 22.0 / 525, d7 = -1.0 / 40;

  if (!(x1 > x0)) throw InvalidInput("integrate_dp54: need x1 > x0");
  const auto m = y.size();
  RealVec k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ytmp(m), ynew(m);
  double x = x0;
  double h = (x1 - x0) / 100.0;
  const double hmin = (x1 - x0) * 1e-12;
  rhs(x, y, k1);
  for (int step = 0; step < 200000; ++step) {
    if (x >= x1) return y;
    if (h < hmin) throw IntegrationFailure("integrate_dp54: step size underflow");
    if (x + h > x1) h = x1 - x;

    ytmp = y + h * (a21 * k1);
    rhs(x + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(x + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(x + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(x + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(x + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(x + h, ynew, k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double e = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                            d6 * k6[i] + d7 * k7[i]);
      const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(m));

    if (err <= 1.0) {
      x += h;
      y = ynew;
      k1 = k7;  // FSAL
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  throw IntegrationFailure("integrate_dp54: step budget exhausted");
}

constexpr double kOdeRtol = 1e-10;
constexpr double kOdeAtol = 1e-14;

// k l beyond which the cosh/sinh trace columns are replaced by the
// exponential basis. At the seam the cosh/sinh columns still differ by
// exp(-2 k l) ~ 1e-7, three decades above the integration noise, so the
// plane is continuous across the switch.
constexpr double kDeepKL = 8.0;

double edge_tol(double x) { return 1e-9 * (1.0 + std::abs(x)); }

// ---------------------------------------------------------------------------
// potentials
// ---------------------------------------------------------------------------

double potential_max(const Potential& q) {
  switch (q.kind) {
    case Potential::Kind::kZero:
      return 0.0;
    case Potential::Kind::kConstant:
      return q.constant;
    case Potential::Kind::kSampled: {
      double m = q.samples.front().second;
      for (const auto& [x, v] : q.samples) m = std::max(m, v);
      return m;
    }
  }
  return 0.0;
}

}  // namespace

Potential Potential::sampled(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) throw InvalidInput("sampled potential needs at least two points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(pts[i].first) || !std::isfinite(pts[i].second))
      throw InvalidInput("sampled potential: non-finite entry");
    if (i > 0 && !(pts[i].first > pts[i - 1].first))
      throw InvalidInput("sampled potential: x must be strictly increasing");
  }
  Potential p;
  p.kind = Kind::kSampled;
  p.samples = std::move(pts);
  return p;
}

double Potential::operator()(double x) const {
  switch (kind) {
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return constant;
    case Kind::kSampled: {
      if (x <= samples.front().first) return samples.front().second;
      if (x >= samples.back().first) return samples.back().second;
      auto it = std::upper_bound(samples.begin(), samples.end(), x,
                                 [](double v, const auto& s) { return v < s.first; });
      const auto& [x1, q1] = *it;
      const auto& [x0, q0] = *(it - 1);
      const double w = (x - x0) / (x1 - x0);
      return (1.0 - w) * q0 + w * q1;
    }
  }
  return 0.0;
}

double Potential::min_value() const {
  switch (kind) {
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return constant;
    case Kind::kSampled: {
      double m = samples.front().second;
      for (const auto& [x, v] : samples) m = std::min(m, v);
      return m;
    }
  }
  return 0.0;
}

Potential parse_potential_csv(std::istream& is) {
  std::vector<std::pair<double, double>> pts;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    double x = 0.0, q = 0.0;
    if (std::sscanf(line.c_str(), " %lf , %lf", &x, &q) == 2) {
      pts.emplace_back(x, q);
    } else if (first) {
      // header row
    } else {
      throw InvalidInput("potential CSV: unparsable row '" + line + "'");
    }
    first = false;
  }
  return Potential::sampled(std::move(pts));
}

void IntervalProblem::validate() const {
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidInput("interval length must be positive and finite");
  if (q.kind == Potential::Kind::kSampled) {
    if (q.samples.front().first > 1e-9 || q.samples.back().first < length - 1e-9)
      throw InvalidInput("sampled potential must cover [0, length]");
  }
}

// ---------------------------------------------------------------------------
// fundamental solutions
// ---------------------------------------------------------------------------

FundamentalValues fundamental_solutions(const IntervalProblem& p, Complex lambda) {
  p.validate();
  const double l = p.length;

  if (p.q.closed_form()) {
    const Complex mu = lambda - Complex(p.q.constant, 0.0);
    const Complex z2 = mu * l * l;  // (w l)^2
    FundamentalValues fv;
    if (std::abs(z2) < 1e-8) {
      // series in (w l)^2, accurate to ~1e-32 at this cutoff
      const Complex cser = 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0;
      const Complex sser = 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
      fv.c = cser;
      fv.s = l * sser;
      fv.cp = -mu * l * sser;
      fv.sp = cser;
    } else {
      const Complex w = std::sqrt(mu);
      const Complex zl = w * l;
      fv.c = std::cos(zl);
      fv.s = std::sin(zl) / w;
      fv.cp = -w * std::sin(zl);
      fv.sp = std::cos(zl);
    }
    return fv;
  }

  // Growth guard for the numerical branch: solutions scale like exp(k l).
  const double k2 = std::max(0.0, potential_max(p.q) - lambda.real());
  if (std::sqrt(k2) * l > 300.0)
    throw IntegrationFailure("fundamental_solutions: solution growth exceeds range");

  const Potential& q = p.q;
  const double lr = lambda.real(), li = lambda.imag();
  // y = (Re c, Im c, Re c', Im c', Re s, Im s, Re s', Im s')
  OdeRhs rhs = [&q, lr, li](double x, const RealVec& y, RealVec& dy) {
    const double qq = q(x);
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = (qq - lr) * y[0] + li * y[1];
    dy[3] = (qq - lr) * y[1] - li * y[0];
    dy[4] = y[6];
    dy[5] = y[7];
    dy[6] = (qq - lr) * y[4] + li * y[5];
    dy[7] = (qq - lr) * y[5] - li * y[4];
  };
  RealVec y0 = RealVec::Zero(8);
  y0[0] = 1.0;  // c(0) = 1
  y0[6] = 1.0;  // s'(0) = 1
  const RealVec yl = integrate_dp54(rhs, y0, 0.0, l, kOdeRtol, kOdeAtol);
  FundamentalValues fv;
  fv.c = Complex(yl[0], yl[1]);
  fv.cp = Complex(yl[2], yl[3]);
  fv.s = Complex(yl[4], yl[5]);
  fv.sp = Complex(yl[6], yl[7]);

  const Complex wr = fv.c * fv.sp - fv.cp * fv.s;
  const double wscale =
      1.0 + std::abs(fv.c) * std::abs(fv.sp) + std::abs(fv.cp) * std::abs(fv.s);
  if (std::abs(wr - 1.0) > 1e-8 * wscale)
    throw IntegrationFailure("fundamental_solutions: Wronskian drift");
  return fv;
}

namespace {

Frame frame_from_values(const FundamentalValues& fv) {
  // columns (1, c, 0, -c') and (0, s, 1, -s'), each scaled to unit length
  const double n1 = std::sqrt(1.0 + std::norm(fv.c) + std::norm(fv.cp));
  const double n2 = std::sqrt(1.0 + std::norm(fv.s) + std::norm(fv.sp));
  Matrix x(2, 2), y(2, 2);
  x << Complex(1.0 / n1), Complex(0.0),  //
      fv.c / n1, fv.s / n2;
  y << Complex(0.0), Complex(1.0 / n2),  //
      -fv.cp / n1, -fv.sp / n2;
  return {x, y};
}

Frame deep_negative_frame(double k, double l) {
  // The cosh/sinh columns are both dominated by the growing mode exp(kx) and
  // turn numerically parallel once exp(-2kl) drops below the integration
  // noise. Use the exponential basis instead: traces of exp(k(x-l)) and
  // exp(-kx) stay uniformly independent all the way to the stiff limit,
  //   (f(0), f(l), f'(0), -f'(l)) = (e, 1, ke, -k) and (1, e, -k, ke)
  // with e = exp(-kl). Same plane, well-conditioned frame.
  const double e = std::exp(-k * l);
  const double n = std::sqrt((1.0 + e * e) * (1.0 + k * k));
  Matrix x(2, 2), y(2, 2);
  x << Complex(e / n), Complex(1.0 / n),  //
      Complex(1.0 / n), Complex(e / n);
  y << Complex(k * e / n), Complex(-k / n),  //
      Complex(-k / n), Complex(k * e / n);
  return {x, y};
}

Frame frame_for(const IntervalProblem& p, double lambda) {
  if (p.q.closed_form()) {
    const double mu = lambda - p.q.constant;
    if (mu < 0.0) {
      const double k = std::sqrt(-mu);
      if (k * p.length >= kDeepKL) return deep_negative_frame(k, p.length);
    }
  }
  return frame_from_values(fundamental_solutions(p, Complex(lambda, 0.0)));
}

std::uint64_t key_of(double lambda) {
  std::uint64_t k = 0;
  std::memcpy(&k, &lambda, sizeof(k));
  return k;
}

}  // namespace

Frame cauchy_data_frame(const IntervalProblem& p, double lambda) {
  return frame_for(p, lambda);
}

struct CauchyEvaluator::Cache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, FundamentalValues> map;
};

CauchyEvaluator::CauchyEvaluator(IntervalProblem p)
    : p_(std::move(p)), cache_(std::make_shared<Cache>()) {
  p_.validate();
}

FundamentalValues CauchyEvaluator::values(double lambda) const {
  if (p_.q.closed_form()) return fundamental_solutions(p_, Complex(lambda, 0.0));
  const std::uint64_t key = key_of(lambda);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;
  }
  FundamentalValues fv = fundamental_solutions(p_, Complex(lambda, 0.0));
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->map.emplace(key, fv);
  return fv;
}

Frame CauchyEvaluator::frame(double lambda) const {
  if (p_.q.closed_form()) return frame_for(p_, lambda);
  return frame_from_values(values(lambda));
}

PlanePath cauchy_path(const CauchyEvaluator& ev, double la, double lb) {
  PlanePath path;
  path.a = la;
  path.b = lb;
  path.frame_at = [ev](double lambda) { return ev.frame(lambda); };
  path.nondecreasing_hint = true;
  return path;
}

PlanePath cauchy_path_u(const CauchyEvaluator& ev, double ua, double ub) {
  PlanePath path;
  path.a = ua;
  path.b = ub;
  path.frame_at = [ev](double u) { return ev.frame(lambda_of_u(u)); };
  path.nondecreasing_hint = true;
  return path;
}

// ---------------------------------------------------------------------------
// boundary-condition catalog
// ---------------------------------------------------------------------------

LagrangianPlane bc_catalog(const std::string& name, double s,
                           const ToleranceConfig& tol) {
  Matrix x(2, 2), y(2, 2);
  if (name == "dirichlet") {
    x.setZero();
    y.setIdentity();
  } else if (name == "neumann") {
    x.setIdentity();
    y.setZero();
  } else if (name == "periodic") {
    x << 1, 0, 1, 0;
    y << 0, 1, 0, -1;
  } else if (name == "antiperiodic") {
    x << 1, 0, -1, 0;
    y << 0, 1, 0, 1;
  } else if (name == "delta") {
    // f(0) = f(l), f'(0) - f'(l) = s f(0)
    x << 1, 0, 1, 0;
    y << s, 1, 0, -1;
  } else if (name == "delta_prime") {
    // f'(0) + f'(l) = 0, f(0) + f(l) = s f'(0); s -> 0 gives antiperiodic
    x << 1, s, -1, 0;
    y << 0, 1, 0, 1;
  } else {
    throw InvalidInput("unknown boundary condition '" + name + "'");
  }
  return LagrangianPlane::from_frame({x, y}, tol);
}

std::vector<std::string> bc_names() {
  return {"dirichlet", "neumann", "periodic", "antiperiodic", "delta", "delta_prime"};
}

// ---------------------------------------------------------------------------
// spectra
// ---------------------------------------------------------------------------

int SpectrumSlice::total_multiplicity() const {
  int total = 0;
  for (const auto& [lambda, mult] : eigenvalues) total += mult;
  return total;
}

std::vector<double> SpectrumSlice::expanded() const {
  std::vector<double> out;
  for (const auto& [lambda, mult] : eigenvalues)
    for (int j = 0; j < mult; ++j) out.push_back(lambda);
  return out;
}

namespace {

// Net passages of the eigenangles of U_path(u) U_plane^* through 1, tracked
// branch-continuously on the scan grid. For the monotone boundary-data paths
// this equals the total crossing multiplicity in the window. Unlike the
// sigma_min landscape it has no narrow features: a weakly split eigenvalue
// pair makes two sigma_min dips of width ~|s| riding on a low background,
// easily straddled by the grid, while the winding still advances by 4 pi.
// Returns nullopt when the grid is too coarse to track the branches.
std::optional<int> winding_count(const std::function<Frame(double)>& frame_at,
                                 const LagrangianPlane& plane, double ua, double ub,
                                 int grid) {
  const Matrix zr = plane.stacked();
  const int n = static_cast<int>(zr.cols());
  if (n > 4) return std::nullopt;
  const Complex iu(0.0, 1.0);
  const Matrix uref_adj = ((zr.topRows(n) + iu * zr.bottomRows(n)) *
                           (zr.topRows(n) - iu * zr.bottomRows(n)).inverse())
                              .adjoint();
  const double dt = (ub - ua) / grid;

  std::vector<double> theta(n);
  std::vector<double> start(n);
  std::vector<int> order(n);
  for (int i = 0; i <= grid; ++i) {
    const Frame f = frame_at(ua + dt * i);
    const Matrix w = (f.x + iu * f.y) * (f.x - iu * f.y).inverse() * uref_adj;
    Eigen::ComplexEigenSolver<Matrix> es(w, false);
    if (es.info() != Eigen::Success) return std::nullopt;
    std::vector<double> alpha(n);
    for (int j = 0; j < n; ++j) alpha[j] = std::arg(es.eigenvalues()(j));
    if (i == 0) {
      for (int j = 0; j < n; ++j) {
        // nudge angles off the branch cut of the floor-counting below
        if (std::abs(std::remainder(alpha[j], 2.0 * M_PI)) < 1e-9) alpha[j] += 1e-9;
        theta[j] = start[j] = alpha[j];
      }
      continue;
    }
    // assign the new angles to branches: minimal total angular motion
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> best = order;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (int j = 0; j < n; ++j)
        cost += std::abs(std::remainder(alpha[order[j]] - theta[j], 2.0 * M_PI));
      if (cost < best_cost) {
        best_cost = cost;
        best = order;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    for (int j = 0; j < n; ++j) {
      const double step = std::remainder(alpha[best[j]] - theta[j], 2.0 * M_PI);
      if (std::abs(step) > 1.2) return std::nullopt;  // branches not trackable
      theta[j] += step;
    }
  }
  long long net = 0;
  for (int j = 0; j < n; ++j) {
    // An eigenvalue exactly at the window end leaves the final angle within
    // noise of the branch cut; push it just below so the passage at b is not
    // counted. Together with the start nudge this makes the certificate count
    // passages in the open interior, deterministically.
    const double r = std::remainder(theta[j], 2.0 * M_PI);
    if (std::abs(r) < 1e-7) theta[j] -= r + 1e-9;
    net += static_cast<long long>(std::floor(theta[j] / (2.0 * M_PI))) -
           static_cast<long long>(std::floor(start[j] / (2.0 * M_PI)));
  }
  return static_cast<int>(std::llabs(net));
}

// find_crossings + winding certificate; rescans finer until they agree.
std::vector<Crossing> certified_crossings(const PlanePath& path,
                                          const LagrangianPlane& plane,
                                          const ToleranceConfig& tol,
                                          const ScanOptions& options) {
  ScanOptions local = options;
  for (int attempt = 0;; ++attempt) {
    std::vector<Crossing> crossings = find_crossings(path, plane, tol, local);
    // The certificate counts passages in the open interior, so compare against
    // the located crossings away from the endpoints; ones sitting exactly on
    // a or b stay in the returned list for the half-open window logic.
    int found = 0;
    for (const Crossing& c : crossings) {
      const bool at_edge =
          std::abs(c.t - path.a) <= 100.0 * tol.root_tol * (1.0 + std::abs(path.a)) ||
          std::abs(c.t - path.b) <= 100.0 * tol.root_tol * (1.0 + std::abs(path.b));
      if (!at_edge) found += c.multiplicity;
    }
    const std::optional<int> cert =
        winding_count(path.frame_at, plane, path.a, path.b, local.grid_points);
    if (cert.has_value() && *cert == found) return crossings;
    if (attempt == 3)
      throw UnresolvedCrossing(
          "scan_window: located crossings disagree with the winding count");
    local.grid_points *= 4;
  }
}

SpectrumSlice scan_window(const CauchyEvaluator& ev, const LagrangianPlane& plane,
                          double a, double b, const ToleranceConfig& tol,
                          const ScanOptions& options) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidInput("spectral window must satisfy a < b");
  PlanePath path = cauchy_path_u(ev, u_of_lambda(a), u_of_lambda(b));
  SpectrumSlice slice;
  slice.window_a = a;
  slice.window_b = b;
  for (const Crossing& c : certified_crossings(path, plane, tol, options))
    slice.eigenvalues.emplace_back(lambda_of_u(c.t), c.multiplicity);
  return slice;
}

int count_in(const SpectrumSlice& slice, double a, double b) {
  int total = 0;
  for (const auto& [lambda, mult] : slice.eigenvalues)
    if (lambda > a + edge_tol(a) && lambda <= b + edge_tol(b)) total += mult;
  return total;
}

// Quadratic-form lower bound for the extension: with q >= qmin and
// <Theta u0, u0> >= -theta |u0|^2, trace interpolation gives
// H >= qmin - theta (2/l + 2) - 2 theta^2, padded by 5.
double form_lower_bound(const Extension& e, const ToleranceConfig& tol) {
  const ProjectorTheta pt = projector_theta_from_plane(e.plane, tol);
  const double theta = spectral_norm(pt.theta);
  const double qmin = e.problem.q.min_value();
  return 2.0 * theta * theta + theta * (2.0 / e.problem.length + 2.0) +
         std::max(0.0, -qmin) + 5.0;
}

int stable_count_below(const CauchyEvaluator& ev, const Extension& e, double lambda,
                       const ToleranceConfig& tol, const ScanOptions& options) {
  double a = std::min(lambda - 4.0, -form_lower_bound(e, tol));
  int count = count_in(scan_window(ev, e.plane, a, lambda, tol, options), a, lambda);
  for (int j = 0; j < 25; ++j) {
    a = lambda - 2.0 * (lambda - a);
    const int next = count_in(scan_window(ev, e.plane, a, lambda, tol, options), a, lambda);
    if (next == count) return count;
    count = next;
  }
  throw InternalInconsistency("counting window failed to stabilize");
}

}  // namespace

SpectrumSlice eigenvalues_in_window(const Extension& e, double a, double b,
                                    const ToleranceConfig& tol,
                                    const ScanOptions& options) {
  CauchyEvaluator ev(e.problem);
  return scan_window(ev, e.plane, a, b, tol, options);
}

bool crossing_forms_positive(const Extension& e, const SpectrumSlice& slice,
                             const ToleranceConfig& tol) {
  if (slice.eigenvalues.empty()) return true;
  CauchyEvaluator ev(e.problem);
  PlanePath path = cauchy_path(ev, slice.eigenvalues.front().first - 1.0,
                               slice.eigenvalues.back().first + 1.0);
  for (const auto& [lambda, mult] : slice.eigenvalues) {
    const Matrix form = restricted_crossing_form(path, e.plane, lambda, tol);
    const Inertia in = hermitian_inertia(form, tol);
    if (in.n_plus != static_cast<int>(form.rows()) || in.n_minus > 0 || in.n_zero > 0)
      return false;
  }
  return true;
}

int counting_function(const Extension& e, double a, double b, const ToleranceConfig& tol,
                      const ScanOptions& options) {
  CauchyEvaluator ev(e.problem);
  return count_in(scan_window(ev, e.plane, a, b, tol, options), a, b);
}

int counting_below(const Extension& e, double lambda, const ToleranceConfig& tol,
                   const ScanOptions& options) {
  CauchyEvaluator ev(e.problem);
  return stable_count_below(ev, e, lambda, tol, options);
}

std::vector<double> first_eigenvalues(const Extension& e, int k,
                                      const ToleranceConfig& tol,
                                      const ScanOptions& options) {
  if (k <= 0) return {};
  CauchyEvaluator ev(e.problem);
  const double a = -form_lower_bound(e, tol) - 1.0;
  double b = std::max(a + 10.0, 4.0);
  for (int j = 0; j < 30; ++j) {
    SpectrumSlice slice = scan_window(ev, e.plane, a, b, tol, options);
    if (slice.total_multiplicity() >= k) {
      std::vector<double> out = slice.expanded();
      out.resize(static_cast<std::size_t>(k));
      return out;
    }
    // grow the top end on its own scale; widening by the full window span
    // would blow up the grid spacing when the lower bound is very deep
    b = 2.0 * b + 10.0;
  }
  throw InternalInconsistency("first_eigenvalues: window growth exhausted");
}

// ---------------------------------------------------------------------------
// spectral shift and interlacing
// ---------------------------------------------------------------------------

int spectral_shift_direct(const Extension& e1, const Extension& e2, double lambda,
                          const ToleranceConfig& tol, const ScanOptions& options) {
  return counting_below(e1, lambda, tol, options) -
         counting_below(e2, lambda, tol, options);
}

int spectral_shift_predicted(const Extension& e1, const Extension& e2, double lambda,
                             const ToleranceConfig& tol) {
  if (e1.problem.length != e2.problem.length)
    throw InvalidInput("spectral shift: extensions must share the interval");
  const LagrangianPlane m =
      LagrangianPlane::from_frame(cauchy_data_frame(e1.problem, lambda), tol);
  const LagrangianPlane f = vertical_plane(2);
  return duistermaat_index(e1.plane, e2.plane, m, tol) -
         duistermaat_index(e1.plane, e2.plane, f, tol);
}

int predicted_count_difference(const Extension& e1, const Extension& e2, double a,
                               double b, const ToleranceConfig& tol) {
  const LagrangianPlane ma =
      LagrangianPlane::from_frame(cauchy_data_frame(e1.problem, a), tol);
  const LagrangianPlane mb =
      LagrangianPlane::from_frame(cauchy_data_frame(e1.problem, b), tol);
  return duistermaat_index(e1.plane, e2.plane, mb, tol) -
         duistermaat_index(e1.plane, e2.plane, ma, tol);
}

InterlacingReport interlacing_check(const Extension& e1, const Extension& e2, int k_max,
                                    const ToleranceConfig& tol,
                                    const ScanOptions& options) {
  InterlacingReport report;
  const LagrangianPlane f = vertical_plane(2);
  report.sigma_minus = duistermaat_index(e1.plane, e2.plane, f, tol);
  report.sigma_plus = duistermaat_index(e2.plane, e1.plane, f, tol);
  report.dim_intersection = dim_intersection(e1.plane, e2.plane, tol);
  report.rank_identity_holds =
      report.sigma_minus + report.sigma_plus == 2 - report.dim_intersection;

  report.spectrum_1 = first_eigenvalues(e1, k_max + report.sigma_plus, tol, options);
  report.spectrum_2 = first_eigenvalues(e2, k_max, tol, options);

  report.inequalities_hold = true;
  for (int k = 1; k <= k_max; ++k) {
    const double l2k = report.spectrum_2[static_cast<std::size_t>(k - 1)];
    const double slack = 1e-6 * (1.0 + std::abs(l2k));
    if (k - report.sigma_minus >= 1) {
      const double lower = report.spectrum_1[static_cast<std::size_t>(k - report.sigma_minus - 1)];
      if (!(lower <= l2k + slack)) report.inequalities_hold = false;
    }
    const double upper = report.spectrum_1[static_cast<std::size_t>(k + report.sigma_plus - 1)];
    if (!(l2k <= upper + slack)) report.inequalities_hold = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Morse index
// ---------------------------------------------------------------------------

Matrix limiting_boundary_map(const IntervalProblem& p, const ToleranceConfig& tol) {
  const double d1 = 1e-4, d2 = 1e-6;
  const Matrix m1 = graph_operator(
      LagrangianPlane::from_frame(cauchy_data_frame(p, -d1), tol), tol);
  const Matrix m2 = graph_operator(
      LagrangianPlane::from_frame(cauchy_data_frame(p, -d2), tol), tol);
  // A pole at 0 (zero in the pinned spectrum) makes the two probes diverge
  // like 1/delta instead of agreeing to O(delta); the graph limit then does
  // not exist even though each probe individually looks single-valued.
  const double drift = (m2 - m1).norm();
  if (drift > 0.25 * (1.0 + std::max(m1.norm(), m2.norm())))
    throw MultivaluedRelation("limiting boundary map: probes at 0- diverge");
  // Richardson step for a map linear in delta near 0-.
  Matrix m0 = (d1 * m2 - d2 * m1) / (d1 - d2);
  return Matrix(0.5 * (m0 + m0.adjoint()));
}

MorseReport morse_index(const Extension& e, const ToleranceConfig& tol,
                        const ScanOptions& options) {
  MorseReport report;
  // Route A: count eigenvalues in a bracket strictly below zero. The cutoff
  // excludes genuine zero modes; eigenvalues in (-1e-4, 0) would need a finer
  // window than this scan resolves.
  const double cutoff = -1e-4;
  CauchyEvaluator ev(e.problem);
  const double a = -form_lower_bound(e, tol) - 1.0;
  const int count =
      count_in(scan_window(ev, e.plane, a, cutoff, tol, options), a, cutoff);
  const double a2 = 2.0 * a - 10.0;
  const int confirm =
      count_in(scan_window(ev, e.plane, a2, cutoff, tol, options), a2, cutoff);
  if (count != confirm)
    throw InternalInconsistency("morse_index: negative count did not stabilize");
  report.negative_count = count;

  // Both closed-form routes assume the minimal operator is nonnegative, i.e.
  // the pinned (Dirichlet) problem has no spectrum below zero.
  bool minimal_nonneg = e.problem.q.min_value() >= 0.0;
  if (!minimal_nonneg) {
    const Extension pinned{e.problem, vertical_plane(2)};
    const double ap = -form_lower_bound(pinned, tol) - 1.0;
    minimal_nonneg =
        count_in(scan_window(ev, pinned.plane, ap, cutoff, tol, options), ap, cutoff) ==
        0;
  }

  if (!minimal_nonneg) {
    report.note = "pinned problem has negative spectrum: signature route unavailable";
  } else {
    try {
      const double d1 = 1e-4, d2 = 1e-6;
      const ProjectorTheta pt = projector_theta_from_plane(e.plane, tol);
      const Matrix g1 = graph_operator(
          LagrangianPlane::from_frame(cauchy_data_frame(e.problem, -d1), tol), tol);
      const Matrix g2 = graph_operator(
          LagrangianPlane::from_frame(cauchy_data_frame(e.problem, -d2), tol), tol);
      const Matrix m0 = limiting_boundary_map(e.problem, tol);
      const int b1 = bl_index(g1, pt, tol);
      const int b2 = bl_index(g2, pt, tol);
      const int b0 = bl_index(m0, pt, tol);
      if (b1 != b2 || b1 != b0)
        throw InternalInconsistency("morse_index: signature route disagrees across deltas");
      report.signature_route = b0;
      report.limiting_map = m0;
    } catch (const MultivaluedRelation&) {
      report.note = "M(0-) multivalued: signature route unavailable";
    }
  }

  if (minimal_nonneg) {
    const LagrangianPlane m0plane =
        LagrangianPlane::from_frame(cauchy_data_frame(e.problem, 0.0), tol);
    report.triple_route =
        duistermaat_index(m0plane, e.plane, vertical_plane(2), tol);
  }
  return report;
}

// ---------------------------------------------------------------------------
// sharpness of the shift bounds
// ---------------------------------------------------------------------------

SharpnessReport sharpness_demo(const IntervalProblem& p, int sm, int sp,
                               const ToleranceConfig& tol, const ScanOptions& options) {
  if (sm < 0 || sp < 0 || sm + sp > 2)
    throw InvalidInput("sharpness_demo: need sm, sp >= 0 with sm + sp <= 2");
  p.validate();

  double lambda0 = 0.37;
  Matrix m0;
  bool found = false;
  for (int attempt = 0; attempt < 20 && !found; ++attempt) {
    try {
      m0 = graph_operator(
          LagrangianPlane::from_frame(cauchy_data_frame(p, lambda0), tol), tol);
      found = true;
    } catch (const MultivaluedRelation&) {
      lambda0 += 0.1;
    }
  }
  if (!found) throw TransversalSearchFailed("sharpness_demo: no usable lambda0");

  Matrix d = Matrix::Zero(2, 2);
  for (int j = 0; j < sm; ++j) d(j, j) = -1.0;
  for (int j = sm; j < sm + sp; ++j) d(j, j) = 1.0;

  const LagrangianPlane l1 = graph_plane(m0, tol);
  const LagrangianPlane l2 = graph_plane(Matrix(m0 + d), tol);
  const LagrangianPlane f = vertical_plane(2);

  SharpnessReport report;
  report.lambda0 = lambda0;
  report.sigma_minus = duistermaat_index(l1, l2, f, tol);
  report.sigma_plus = duistermaat_index(l2, l1, f, tol);
  if (report.sigma_minus != sm || report.sigma_plus != sp)
    throw InternalInconsistency("sharpness_demo: constructed planes miss the target signs");

  const Extension e1{p, l1};
  const Extension e2{p, l2};
  const double delta = 1e-4;
  report.shift_left = spectral_shift_direct(e1, e2, lambda0 - delta, tol, options);
  report.shift_right = spectral_shift_direct(e1, e2, lambda0 + delta, tol, options);
  return report;
}

// ---------------------------------------------------------------------------
// rank-one model without unique continuation
// ---------------------------------------------------------------------------

NoUcpData no_ucp_model(double z, const ToleranceConfig& tol) {
  (void)tol;
  const IntervalProblem p{M_PI, Potential::zero()};
  NoUcpData data;
  Matrix x(1, 1), y(1, 1);
  if (z <= -100.0) {
    // ratio form: s_l / c_l = tanh(k pi) / k
    const double k = std::sqrt(-z);
    x(0, 0) = std::tanh(k * M_PI) / k;
    y(0, 0) = -2.0;
  } else {
    const FundamentalValues fv = fundamental_solutions(p, Complex(z, 0.0));
    x(0, 0) = fv.s;
    y(0, 0) = -2.0 * fv.c;
  }
  const double n = std::sqrt(std::norm(x(0, 0)) + std::norm(y(0, 0)));
  x /= n;
  y /= n;
  data.frame = {x, y};

  const auto k0 = static_cast<long long>(std::llround(std::sqrt(std::max(z, 0.0))));
  data.inner_solution_dim =
      (k0 >= 1 && std::abs(z - static_cast<double>(k0 * k0)) <= 1e-8 * (1.0 + std::abs(z)))
          ? 1
          : 0;
  return data;
}

SpectrumSlice no_ucp_spectrum(const LagrangianPlane& l, double a, double b,
                              bool include_inner_solutions, const ToleranceConfig& tol,
                              const ScanOptions& options) {
  if (!(a < b)) throw InvalidInput("no_ucp_spectrum: need a < b");
  PlanePath path;
  path.a = u_of_lambda(a);
  path.b = u_of_lambda(b);
  path.frame_at = [tol](double u) { return no_ucp_model(lambda_of_u(u), tol).frame; };
  path.nondecreasing_hint = true;

  SpectrumSlice slice;
  slice.window_a = a;
  slice.window_b = b;
  for (const Crossing& c : certified_crossings(path, l, tol, options))
    slice.eigenvalues.emplace_back(lambda_of_u(c.t), c.multiplicity);

  if (include_inner_solutions) {
    for (long long k = 1; static_cast<double>(k * k) <= b + edge_tol(b); ++k) {
      const double zk = static_cast<double>(k * k);
      if (zk < a - edge_tol(a)) continue;
      bool merged = false;
      for (auto& [lambda, mult] : slice.eigenvalues) {
        if (std::abs(lambda - zk) <= 1e-8 * (1.0 + zk)) {
          mult += 1;
          merged = true;
          break;
        }
      }
      if (!merged) slice.eigenvalues.emplace_back(zk, 1);
    }
    std::sort(slice.eigenvalues.begin(), slice.eigenvalues.end());
  }
  return slice;
}

int no_ucp_predicted_difference(const LagrangianPlane& l1, const LagrangianPlane& lf,
                                double a, double b, const ToleranceConfig& tol) {
  const LagrangianPlane ma = LagrangianPlane::from_frame(no_ucp_model(a, tol).frame, tol);
  const LagrangianPlane mb = LagrangianPlane::from_frame(no_ucp_model(b, tol).frame, tol);
  return duistermaat_index(l1, lf, mb, tol) - duistermaat_index(l1, lf, ma, tol);
}

// ---------------------------------------------------------------------------
// consistency checks
// ---------------------------------------------------------------------------

double greens_identity_residual(const IntervalProblem& p, double lambda1,
                                double lambda2) {
  p.validate();
  const Potential& q = p.q;
  // y = (c1, c1', s1, s1', c2, c2', s2, s2', Icc, Ics, Isc, Iss)
  OdeRhs rhs = [&q, lambda1, lambda2](double x, const RealVec& y, RealVec& dy) {
    const double qq = q(x);
    dy[0] = y[1];
    dy[1] = (qq - lambda1) * y[0];
    dy[2] = y[3];
    dy[3] = (qq - lambda1) * y[2];
    dy[4] = y[5];
    dy[5] = (qq - lambda2) * y[4];
    dy[6] = y[7];
    dy[7] = (qq - lambda2) * y[6];
    dy[8] = y[0] * y[4];
    dy[9] = y[0] * y[6];
    dy[10] = y[2] * y[4];
    dy[11] = y[2] * y[6];
  };
  RealVec y0 = RealVec::Zero(12);
  y0[0] = 1.0;
  y0[3] = 1.0;
  y0[4] = 1.0;
  y0[7] = 1.0;
  const RealVec yl = integrate_dp54(rhs, y0, 0.0, p.length, kOdeRtol, kOdeAtol);

  // boundary traces (f(0), f(l), f'(0), -f'(l))
  const double g1c[4] = {1.0, yl[0], 0.0, -yl[1]};
  const double g1s[4] = {0.0, yl[2], 1.0, -yl[3]};
  const double g2c[4] = {1.0, yl[4], 0.0, -yl[5]};
  const double g2s[4] = {0.0, yl[6], 1.0, -yl[7]};
  const auto om = [](const double* u, const double* v) {
    return u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1];
  };
  const double dl = lambda2 - lambda1;
  double res = 0.0;
  res = std::max(res, std::abs(dl * yl[8] - om(g1c, g2c)));
  res = std::max(res, std::abs(dl * yl[9] - om(g1c, g2s)));
  res = std::max(res, std::abs(dl * yl[10] - om(g1s, g2c)));
  res = std::max(res, std::abs(dl * yl[11] - om(g1s, g2s)));
  return res;
}

namespace {

// L2 pairing integrals of the fundamental system at a single real lambda.
void norm_integrals(const IntervalProblem& p, double lambda, double& icc, double& ics,
                    double& iss) {
  const Potential& q = p.q;
  OdeRhs rhs = [&q, lambda](double x, const RealVec& y, RealVec& dy) {
    const double qq = q(x);
    dy[0] = y[1];
    dy[1] = (qq - lambda) * y[0];
    dy[2] = y[3];
    dy[3] = (qq - lambda) * y[2];
    dy[4] = y[0] * y[0];
    dy[5] = y[0] * y[2];
    dy[6] = y[2] * y[2];
  };
  RealVec y0 = RealVec::Zero(7);
  y0[0] = 1.0;
  y0[3] = 1.0;
  const RealVec yl = integrate_dp54(rhs, y0, 0.0, p.length, kOdeRtol, kOdeAtol);
  icc = yl[4];
  ics = yl[5];
  iss = yl[6];
}

}  // namespace

std::vector<DerivativeCheckPoint> eigenvalue_derivative_check(
    const IntervalProblem& p, const std::vector<double>& s_values,
    const std::vector<int>& branches, const ToleranceConfig& tol,
    const ScanOptions& options) {
  std::vector<DerivativeCheckPoint> out;
  for (const double s : s_values) {
    for (const int branch : branches) {
      if (branch < 1) throw InvalidInput("eigenvalue branches are 1-based");
      DerivativeCheckPoint pt;
      pt.s = s;
      pt.branch = branch;

      const auto lambda_at = [&](double sv) {
        const Extension e{p, bc_catalog("delta_prime", sv, tol)};
        return first_eigenvalues(e, branch + 1, tol, options);
      };
      const std::vector<double> here = lambda_at(s);
      pt.lambda = here[static_cast<std::size_t>(branch - 1)];

      // Skip branches that collide with a neighbor: the index is not a
      // differentiable label through a multiple eigenvalue.
      const double coll = 1e-6 * (1.0 + std::abs(pt.lambda));
      const bool low = branch >= 2 &&
                       std::abs(pt.lambda - here[static_cast<std::size_t>(branch - 2)]) < coll;
      const bool high =
          std::abs(here[static_cast<std::size_t>(branch)] - pt.lambda) < coll;
      if (low || high) {
        pt.skipped = true;
        out.push_back(pt);
        continue;
      }

      const LagrangianPlane m =
          LagrangianPlane::from_frame(cauchy_data_frame(p, pt.lambda), tol);
      const Matrix basis =
          intersection_basis(m, bc_catalog("delta_prime", s, tol), tol);
      if (basis.cols() != 1) {
        pt.skipped = true;
        out.push_back(pt);
        continue;
      }
      const Complex kappa1 = basis(0, 0);  // f(0)
      const Complex kappa2 = basis(2, 0);  // f'(0)
      double icc = 0, ics = 0, iss = 0;
      norm_integrals(p, pt.lambda, icc, ics, iss);
      const double normsq = std::norm(kappa1) * icc +
                            2.0 * (std::conj(kappa1) * kappa2).real() * ics +
                            std::norm(kappa2) * iss;
      pt.formula = -std::norm(kappa2) / normsq;

      const double h = 1e-4 * (1.0 + std::abs(s));
      const double lp = lambda_at(s + h)[static_cast<std::size_t>(branch - 1)];
      const double lm = lambda_at(s - h)[static_cast<std::size_t>(branch - 1)];
      pt.fd = (lp - lm) / (2.0 * h);
      pt.rel_err = std::abs(pt.fd - pt.formula) / std::max(1.0, std::abs(pt.formula));
      out.push_back(pt);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// parameter sweeps
// ---------------------------------------------------------------------------

SweepResult family_sweep(const IntervalProblem& p, const std::string& family,
                         double s_lo, double s_hi, int steps, int k_max,
                         const ToleranceConfig& tol, const ScanOptions& options) {
  if (steps < 2) throw InvalidInput("family_sweep: need at least two steps");
  if (family != "delta" && family != "delta_prime")
    throw InvalidInput("family_sweep: family must be 'delta' or 'delta_prime'");
  SweepResult sweep;
  sweep.family = family;

  const std::string ref_name = family == "delta" ? "periodic" : "antiperiodic";
  const Extension ref{p, bc_catalog(ref_name, 0.0, tol)};
  const std::vector<double> ref_spec = first_eigenvalues(ref, k_max + 1, tol, options);

  // reference eigenvalues of multiplicity two (candidates for pinning)
  std::vector<double> pinned_values;
  for (std::size_t j = 0; j + 1 < ref_spec.size(); ++j)
    if (std::abs(ref_spec[j + 1] - ref_spec[j]) <= 1e-6 * (1.0 + std::abs(ref_spec[j])))
      pinned_values.push_back(0.5 * (ref_spec[j] + ref_spec[j + 1]));

  for (int i = 0; i < steps; ++i) {
    const double s =
        s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    const Extension e{p, bc_catalog(family, s, tol)};
    const std::vector<double> spec = first_eigenvalues(e, k_max, tol, options);
    sweep.s_values.push_back(s);
    sweep.spectra.push_back(spec);

    for (int k = 1; k <= k_max; ++k) {
      const double lk = spec[static_cast<std::size_t>(k - 1)];
      const double slack = 1e-6 * (1.0 + std::abs(lk));
      int lo_shift = -1, hi_shift = 0;  // default: lambda_{k-1}(ref) <= lk <= lambda_k(ref)
      if (family == "delta") {
        lo_shift = s > 0 ? 0 : -1;
        hi_shift = s > 0 ? 1 : 0;
      }
      const int lo_idx = k + lo_shift;
      const int hi_idx = k + hi_shift;
      if (lo_idx >= 1 &&
          !(ref_spec[static_cast<std::size_t>(lo_idx - 1)] <= lk + slack))
        sweep.squeeze_ok = false;
      if (hi_idx <= k_max + 1 &&
          !(lk <= ref_spec[static_cast<std::size_t>(hi_idx - 1)] + slack))
        sweep.squeeze_ok = false;
    }

    for (const double v : pinned_values) {
      if (v > spec.back() + 1e-6 * (1.0 + std::abs(v))) continue;  // outside window
      bool hit = false;
      for (const double lk : spec)
        if (std::abs(lk - v) <= 1e-6 * (1.0 + std::abs(v))) hit = true;
      if (!hit) sweep.pinned_ok = false;
    }
  }
  return sweep;
}

VerificationReport verify_models(std::uint64_t trials, std::uint64_t seed,
                                 const ToleranceConfig& tol, bool parallel) {
  VerificationReport report;
  ScanOptions options;
  options.parallel = parallel;
  const std::vector<std::string> names = bc_names();

  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t tseed = trial_seed(seed, t);
    std::mt19937_64 rng(tseed);
    const auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    const auto record = [&](const char* name, const std::function<bool()>& fn) {
      bool ok = false;
      try {
        ok = fn();
      } catch (const Error&) {
        ok = false;
      }
      auto& entry = report.checks[name];
      ++entry.trials;
      if (!ok) entry.failures.push_back(tseed);
    };

    IntervalProblem p;
    const double lengths[3] = {1.0, 1.5707963267948966, 1.7};
    p.length = lengths[rng() % 3];
    switch (rng() % 3) {
      case 1:
        p.q = Potential::constant_q(-3.0 + 6.0 * u01());
        break;
      case 2: {
        const double a0 = -1.0 + 2.0 * u01();
        const double a1 = -1.5 + 3.0 * u01();
        const double a2 = -1.5 + 3.0 * u01();
        std::vector<std::pair<double, double>> pts;
        const int m = 320;
        for (int i = 0; i <= m; ++i) {
          const double x = p.length * static_cast<double>(i) / m;
          pts.emplace_back(x, a0 + a1 * std::sin(2.0 * M_PI * x / p.length) +
                                  a2 * std::cos(4.0 * M_PI * x / p.length));
        }
        p.q = Potential::sampled(std::move(pts));
        break;
      }
      default:
        break;
    }

    const auto draw_s = [&]() {
      const double v = 0.3 + 1.7 * u01();
      return rng() % 2 == 0 ? v : -v;
    };
    const std::size_t i1 = rng() % names.size();
    const std::size_t i2 = (i1 + 1 + rng() % (names.size() - 1)) % names.size();
    const Extension e1{p, bc_catalog(names[i1], draw_s(), tol)};
    const Extension e2{p, bc_catalog(names[i2], draw_s(), tol)};

    record("shift_agree", [&] {
      double lq = -2.0 + 27.0 * u01();
      for (int k = 0; k < 6; ++k) {
        try {
          return spectral_shift_direct(e1, e2, lq, tol, options) ==
                 spectral_shift_predicted(e1, e2, lq, tol);
        } catch (const UnresolvedCrossing&) {
          lq += 0.0371;  // probe too close to an eigenvalue: nudge it clear
        }
      }
      throw UnresolvedCrossing("verify_models: shift probe could not be nudged clear");
    });

    record("window_agree", [&] {
      double a = -2.0 + 20.0 * u01();
      double b = a + 0.5 + 9.0 * u01();
      for (int k = 0; k < 6; ++k) {
        try {
          const int direct = counting_function(e1, a, b, tol, options) -
                             counting_function(e2, a, b, tol, options);
          return direct == predicted_count_difference(e1, e2, a, b, tol);
        } catch (const UnresolvedCrossing&) {
          a -= 0.0173;
          b += 0.0191;
        }
      }
      throw UnresolvedCrossing("verify_models: window could not be nudged clear");
    });

    record("greens_identity", [&] {
      const double la = -5.0 + 30.0 * u01();
      const double lb = -5.0 + 30.0 * u01();
      return greens_identity_residual(p, la, lb) <= 1e-6;
    });

    record("forms_positive", [&] {
      double a = -1.0 + 10.0 * u01();
      double b = a + 1.0 + 10.0 * u01();
      for (int k = 0; k < 6; ++k) {
        try {
          return crossing_forms_positive(
              e1, eigenvalues_in_window(e1, a, b, tol, options), tol);
        } catch (const UnresolvedCrossing&) {
          a -= 0.0173;
          b += 0.0191;
        }
      }
      throw UnresolvedCrossing("verify_models: window could not be nudged clear");
    });
  }
  return report;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  const std::size_t k = sweep.spectra.empty() ? 0 : sweep.spectra.front().size();
  os << "s";
  for (std::size_t j = 1; j <= k; ++j) os << ",lambda_" << j;
  os << "\n";
  char buf[64];
  for (std::size_t i = 0; i < sweep.s_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", sweep.s_values[i]);
    os << buf;
    for (const double v : sweep.spectra[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace interlace
