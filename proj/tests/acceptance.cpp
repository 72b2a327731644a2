// Acceptance gate: one line per criterion, exit code = number of failures.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "rde/io.hpp"
#include "rde/rng.hpp"
#include "rde/sweep.hpp"
#include "rde/verify.hpp"

namespace {

int failures = 0;

void report(const char* id, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s — %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  if (!pass) ++failures;
}

void from_verify(const char* id, const char* title, const rde::VerifyResult& r) {
  report(id, title, r.pass, r.evidence);
}

// C6: analytic Jacobian vs central finite differences, 200 randomized
// (A, m, equilibrium) cases including the A = 1 family.
void jacobian_agreement() {
  rde::CounterRng rng(0xacce97ull);
  double worst = 0.0;
  int cases = 0;
  bool pass = true;
  std::string detail;
  for (int t = 0; t < 200 && pass; ++t) {
    const int m = 1 + static_cast<int>(rng.next_unit() * 6.0);
    const bool family = t % 4 == 0;
    const double A = family ? 1.0 : (rng.next_unit() < 0.5 ? rng.next(1.05, 10.0)
                                                           : rng.next(0.05, 0.95));
    const rde::Equilibrium eq = family
                                    ? rde::family_equilibrium(rng.next(1.2, 20.0))
                                    : rde::isolated_equilibrium(A);
    const auto dense = oracle::to_dense(rde::build_jacobian(eq, m));
    const auto fd = oracle::fd_jacobian(eq, A, m);
    ++cases;
    for (std::size_t i = 0; i < fd.size() && pass; ++i)
      for (std::size_t j = 0; j < fd.size(); ++j) {
        const double rel = std::fabs(dense[i][j] - fd[i][j]) /
                           std::max(1.0, std::fabs(dense[i][j]));
        worst = std::max(worst, rel);
        if (rel > 1e-7) {
          std::ostringstream why;
          why << "mismatch " << rel << " at (" << i << "," << j << "), A=" << A
              << " m=" << m;
          detail = why.str();
          pass = false;
          break;
        }
      }
  }
  if (pass) {
    std::ostringstream ev;
    ev << cases << " randomized cases (incl. A=1 family), max relative gap "
       << worst << " (tol 1e-7)";
    detail = ev.str();
  }
  report("C6", "Jacobian matches finite differences", pass, detail);
}

// C8: byte-identical sweep CSV across thread counts 1, 4, and auto.
void sweep_determinism() {
  rde::SweepGrid g;
  g.A_values = {0.5, 1.0, 2.0};
  g.m_values = {1, 2};
  g.trials_per_cell = 8;
  g.seed = 0xd5;
  g.horizon = 3000;
  const std::string c1 = rde::sweep_csv(rde::run_sweep(g, 1));
  const std::string c4 = rde::sweep_csv(rde::run_sweep(g, 4));
  const std::string ca = rde::sweep_csv(rde::run_sweep(g, 0));
  const bool pass = c1 == c4 && c1 == ca;
  std::ostringstream ev;
  ev << c1.size() << "-byte CSV " << (pass ? "identical" : "DIFFERS")
     << " across thread counts 1, 4, auto";
  report("C8", "Sweep output is deterministic", pass, ev.str());
}

}  // namespace

int main() {
  from_verify("C1", "Equilibria satisfy the fixed-point equations", rde::verify::t1());
  from_verify("C2", "Global attraction for A > 1", rde::verify::t8());
  from_verify("C3", "Boundedness and persistence at A = 1", rde::verify::t3());
  {
    const rde::VerifyResult a = rde::verify::t2i();
    const rde::VerifyResult b = rde::verify::t2ii();
    report("C4", "Parity divergence for 0 < A < 1, odd m", a.pass && b.pass,
           a.evidence + " | " + b.evidence);
  }
  from_verify("C5", "Scaled-norm certificate for A > 1", rde::verify::t7());
  jacobian_agreement();
  from_verify("C7", "Semicycle structure at A = 1", rde::verify::t4());
  sweep_determinism();
  return failures;
}
