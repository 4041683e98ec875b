// Benchmark of the OpenMP-parallel kernels against their serial reference
// paths: the sigma_min crossing-scan grid and the randomized trial batches.
// Both paths must produce identical results (same seeds, order-independent
// accumulation), so each row also reports a match check; any mismatch makes
// the exit status nonzero.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "interlace/duistermaat.hpp"
#include "interlace/maslov.hpp"
#include "interlace/models.hpp"

namespace {

using namespace interlace;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool crossings_equal(const std::vector<Crossing>& a, const std::vector<Crossing>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].t != b[i].t || a[i].multiplicity != b[i].multiplicity) return false;
  return true;
}

bool reports_equal(const VerificationReport& a, const VerificationReport& b) {
  if (a.checks.size() != b.checks.size()) return false;
  for (const auto& [name, entry] : a.checks) {
    const auto it = b.checks.find(name);
    if (it == b.checks.end()) return false;
    if (entry.trials != it->second.trials) return false;
    if (entry.failures != it->second.failures) return false;
  }
  return true;
}

void print_row(const char* kernel, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-36s %11.1f %12.1f %8.2fx   %s\n", kernel, serial_ms, parallel_ms,
              serial_ms / parallel_ms, match ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int grid = quick ? 4000 : 20000;
  const std::uint64_t batch = quick ? 100 : 400;
  int status = 0;

  std::printf("%-36s %11s %12s %9s   %s\n", "kernel", "serial_ms", "parallel_ms",
              "speedup", "match");

  {
    IntervalProblem p;
    p.length = 3.14159265358979323846;
    const CauchyEvaluator ev(p);
    const PlanePath path = cauchy_path_u(ev, u_of_lambda(0.5), u_of_lambda(420.0));
    const LagrangianPlane ref = bc_catalog("dirichlet");
    const ScanOptions serial{grid, false};
    const ScanOptions parallel{grid, true};

    auto t0 = Clock::now();
    const auto cs = find_crossings(path, ref, {}, serial);
    const double ts = ms_since(t0);
    t0 = Clock::now();
    const auto cp = find_crossings(path, ref, {}, parallel);
    const double tp = ms_since(t0);

    const bool match = crossings_equal(cs, cp);
    char label[64];
    std::snprintf(label, sizeof(label), "crossing_scan(grid=%d)", grid);
    print_row(label, ts, tp, match);
    if (!match || cs.size() < 15) status = 1;
  }

  {
    auto t0 = Clock::now();
    const auto rs = verify_identities(4, batch, 20240817ULL, {}, false);
    const double ts = ms_since(t0);
    t0 = Clock::now();
    const auto rp = verify_identities(4, batch, 20240817ULL, {}, true);
    const double tp = ms_since(t0);

    const bool match = reports_equal(rs, rp);
    char label[64];
    std::snprintf(label, sizeof(label), "identity_trials(n=4,%llu)",
                  static_cast<unsigned long long>(batch));
    print_row(label, ts, tp, match);
    if (!match) status = 1;
  }

  {
    auto t0 = Clock::now();
    const auto rs = verify_krein(5, batch, 771177ULL, {}, false);
    const double ts = ms_since(t0);
    t0 = Clock::now();
    const auto rp = verify_krein(5, batch, 771177ULL, {}, true);
    const double tp = ms_since(t0);

    const bool match = reports_equal(rs, rp);
    char label[64];
    std::snprintf(label, sizeof(label), "krein_trials(n=5,%llu)",
                  static_cast<unsigned long long>(batch));
    print_row(label, ts, tp, match);
    if (!match) status = 1;
  }

  return status;
}
