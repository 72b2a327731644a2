#pragma once

// Desk-scale numerical verification bundles, one per theorem-style claim.
// The CLI's `verify-theorem` subcommand and the acceptance suite both run
// these, so CI and users exercise the same checks. All randomness is
// counter-based from fixed seeds; every run is bit-reproducible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rde/analyze.hpp"
#include "rde/core.hpp"
#include "rde/equilibria.hpp"
#include "rde/linearize.hpp"
#include "rde/rng.hpp"
#include "rde/sweep.hpp"

namespace rde {

struct UnknownTheorem : InputError {
  using InputError::InputError;
};

struct VerifyResult {
  std::string id;
  bool pass;
  std::string evidence;
};

namespace verify {

constexpr std::uint64_t kSeed = 0x5eedf00dull;

// Equilibrium exactness: closed forms satisfy the fixed-point equations to
// 1e-14 relative over random A in (0,1) u (1,10) and mu in (1,50].
inline VerifyResult t1() {
  CounterRng rng(mix64(kSeed + 1));
  double worst = 0.0;
  auto rel_residual = [](const Equilibrium& eq, double A) {
    const auto r = residual(eq, A);
    const double scale = std::max({1.0, eq.x, eq.y, eq.z});
    return std::max({std::fabs(r[0]), std::fabs(r[1]), std::fabs(r[2])}) / scale;
  };
  for (int i = 0; i < 1000; ++i) {
    const double A = rng.next_unit() < 0.5 ? rng.next(1e-3, 1.0 - 1e-3)
                                           : rng.next(1.0 + 1e-3, 10.0);
    worst = std::max(worst, rel_residual(isolated_equilibrium(A), A));
    const double mu = rng.next(1.0 + 1e-6, 50.0);
    worst = std::max(worst, rel_residual(family_equilibrium(mu), 1.0));
  }
  std::ostringstream ev;
  ev << "max relative residual " << worst << " over 1000 draws (tol 1e-14)";
  return {"T1", worst <= 1e-14, ev.str()};
}

namespace detail {

// Hypothesis-satisfying initial block for T2: the `small` parity in
// (0,1), the other above 1/(1-A) + 0.5.
inline InitBlock t2_block(double A, int m, T2Variant variant, CounterRng& rng) {
  const double thr = 1.0 / (1.0 - A) + 0.5;
  const int small_parity = variant == T2Variant::I ? 1 : 0;
  InitBlock init;
  for (auto* v : {&init.x, &init.y, &init.z}) {
    v->resize(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
      const int parity = (((i - m) % 2) + 2) % 2;
      (*v)[static_cast<std::size_t>(i)] = parity == small_parity
                                              ? rng.next(0.05, 0.95)
                                              : rng.next(thr, thr + 3.0);
    }
  }
  return init;
}

inline VerifyResult t2(T2Variant variant) {
  const std::string id = variant == T2Variant::I ? "T2i" : "T2ii";
  const Parity expect = variant == T2Variant::I ? Parity::Even : Parity::Odd;
  int runs = 0;
  double worst_limit_err = 0.0;
  for (double A : {0.25, 0.5, 0.75})
    for (int m : {1, 3, 5})
      for (int trial = 0; trial < 4; ++trial) {
        CounterRng rng = CounterRng::stream(kSeed + 2, static_cast<std::uint64_t>(runs), 0);
        const InitBlock init = t2_block(A, m, variant, rng);
        ++runs;
        if (!theorem2_hypothesis_check(init, A, m, variant))
          return {id, false, "constructed block fails its own hypothesis"};
        const auto [params, block] = validate_params(A, m, init);
        const Trajectory traj = iterate(params, block, 1000000, 1e100);
        const ParityEvidence ev = parity_limits(traj, A);
        std::ostringstream why;
        if (!ev.detected || !traj.overflow_at) {
          why << "no divergence detected at A=" << A << " m=" << m;
          return {id, false, why.str()};
        }
        if (ev.diverging != expect) {
          why << "wrong diverging parity at A=" << A << " m=" << m;
          return {id, false, why.str()};
        }
        if (!ev.growth_law_ok || ev.growth_points_checked == 0) {
          why << "growth law x(n) > 2A + x(n-2m-2) violated at A=" << A << " m=" << m;
          return {id, false, why.str()};
        }
        const double err = std::fabs(ev.finite_limit - A);
        worst_limit_err = std::max(worst_limit_err, err);
        if (err > 1e-6) {
          why << "finite parity tail " << ev.finite_limit << " vs A=" << A
              << " (err " << err << ")";
          return {id, false, why.str()};
        }
      }
  std::ostringstream ev;
  ev << runs << " runs diverged on the expected parity; growth law held; "
     << "max |finite tail - A| = " << worst_limit_err << " (tol 1e-6)";
  return {id, true, ev.str()};
}

}  // namespace detail

inline VerifyResult t2i() { return detail::t2(T2Variant::I); }
inline VerifyResult t2ii() { return detail::t2(T2Variant::II); }

// Boundedness and persistence at A = 1: no overflow, literal
// envelope containment 1.0, every post-initial sample strictly above 1.
inline VerifyResult t3() {
  double min_containment = 1.0;
  double min_sample = std::numeric_limits<double>::infinity();
  int runs = 0;
  for (int m = 1; m <= 6; ++m)
    for (int trial = 0; trial < 100; ++trial) {
      const InitBlock init = generate_initials(kSeed + 3, static_cast<std::uint64_t>(m),
                                               static_cast<std::uint64_t>(trial), m,
                                               0.1, 10.0);
      const auto [params, block] = validate_params(1.0, m, init);
      const Trajectory traj = iterate(params, block, 10000);
      ++runs;
      if (traj.overflow_at)
        return {"T3", false, "overflow in an A=1 run (m=" + std::to_string(m) + ")"};
      const Envelope env = boundedness_envelope(traj, 1.0);
      min_containment = std::min(min_containment, env.containment);
      const PersistenceResult pr = persistence_check(traj, 1.0);
      min_sample = std::min(min_sample, pr.min_tail);
      if (!pr.holds)
        return {"T3", false, "sample <= 1 in an A=1 run (m=" + std::to_string(m) + ")"};
    }
  std::ostringstream ev;
  ev << runs << " runs, zero overflow, min envelope containment "
     << min_containment << ", min sample " << min_sample << " > 1";
  return {"T3", min_containment == 1.0 && min_sample > 1.0, ev.str()};
}

// Semicycle structure at A = 1 relative to the mu-hat reference: runs tile
// and alternate by construction (asserted anyway), interior runs after the
// transient have at most m+1 terms; whether the strict bound m held is
// part of the evidence.
inline VerifyResult t4() {
  std::size_t worst_interior = 0;
  bool strict_m = true;
  int runs = 0;
  for (int m : {1, 2, 3})
    for (int trial = 0; trial < 50; ++trial) {
      const InitBlock init = generate_initials(kSeed + 4, static_cast<std::uint64_t>(m),
                                               static_cast<std::uint64_t>(trial), m,
                                               0.1, 10.0);
      const auto [params, block] = validate_params(1.0, m, init);
      const long long horizon = 10000;
      const Trajectory traj = iterate(params, block, horizon);
      if (traj.overflow_at) return {"T4", false, "unexpected overflow at A=1"};
      const MuEstimate mu = estimate_mu(traj);
      if (!(mu.mu_hat > 1.0)) return {"T4", false, "mu-hat estimate <= 1"};
      const SemicycleReport rep =
          semicycle_report(traj, family_equilibrium(mu.mu_hat), horizon / 2);
      ++runs;
      const std::size_t series_len =
          static_cast<std::size_t>(traj.last_n() - horizon / 2 + 1);
      for (const auto* rr : {&rep.runs_x, &rep.runs_y, &rep.runs_z}) {
        const auto& runs_c = *rr;
        std::size_t covered = 0;
        for (std::size_t i = 0; i < runs_c.size(); ++i) {
          covered += runs_c[i].length;
          if (i > 0 && runs_c[i].positive == runs_c[i - 1].positive)
            return {"T4", false, "adjacent semicycles with equal sign"};
          // First and last runs are censored by the analysis window.
          if (i > 0 && i + 1 < runs_c.size()) {
            worst_interior = std::max(worst_interior, runs_c[i].length);
            if (runs_c[i].length > static_cast<std::size_t>(m)) strict_m = false;
            if (runs_c[i].length > static_cast<std::size_t>(m) + 1) {
              std::ostringstream why;
              why << "interior semicycle of length " << runs_c[i].length
                  << " > m+1 = " << m + 1;
              return {"T4", false, why.str()};
            }
          }
        }
        if (covered != series_len)
          return {"T4", false, "semicycle runs do not tile the analyzed range"};
      }
    }
  std::ostringstream ev;
  ev << runs << " runs; max interior semicycle length " << worst_interior
     << " (soft bound m+1 held; strict bound m "
     << (strict_m ? "held" : "exceeded, see m+1 outcome") << ")";
  return {"T4", true, ev.str()};
}

// Boundedness and persistence at A > 1. Wide random initial data can make
// the literal envelope degenerate (M <= A); those runs are counted
// and still checked for persistence, all others must have containment 1.
inline VerifyResult t5() {
  int runs = 0, degenerate = 0, live = 0;
  double min_containment = 1.0;
  // Wide initial data: persistence everywhere; the literal envelope floor
  // M = min{alpha, beta/(beta-1)} usually degenerates (for A >= 2 it
  // always does, since beta > A forces beta/(beta-1) < 2 <= A). Narrow
  // initial data at A < 2 keeps M > A so containment is exercised too.
  struct Band {
    double lo_off, hi_off;  // init range = [A + lo_off, A + hi_off]
    bool narrow;
  };
  for (const Band& band : {Band{-1e9, 0.0, false}, Band{0.3, 0.8, true}})
    for (double A : band.narrow ? std::vector<double>{1.2, 1.5}
                                : std::vector<double>{1.5, 2.0, 5.0})
      for (int m : {1, 2, 3})
        for (int trial = 0; trial < 30; ++trial) {
          const double lo = band.narrow ? A + band.lo_off : 0.1;
          const double hi = band.narrow ? A + band.hi_off : 10.0;
          const InitBlock init = generate_initials(
              kSeed + 5,
              static_cast<std::uint64_t>(m * 100) + static_cast<std::uint64_t>(A * 4) +
                  (band.narrow ? 100000u : 0u),
              static_cast<std::uint64_t>(trial), m, lo, hi);
          const auto [params, block] = validate_params(A, m, init);
          const Trajectory traj = iterate(params, block, 10000);
          ++runs;
          if (traj.overflow_at) return {"T5", false, "overflow in an A>1 run"};
          if (!persistence_check(traj, A).holds)
            return {"T5", false, "persistence x_n > A violated"};
          try {
            const Envelope env = boundedness_envelope(traj, A);
            ++live;
            min_containment = std::min(min_containment, env.containment);
          } catch (const DegenerateEnvelope&) {
            if (band.narrow)
              return {"T5", false, "narrow-init envelope unexpectedly degenerate"};
            ++degenerate;
          }
        }
  std::ostringstream ev;
  ev << runs << " runs persisted; envelope containment " << min_containment
     << " on " << live << " non-degenerate envelopes (" << degenerate
     << " degenerate under wide initial data)";
  return {"T5", live > 0 && min_containment == 1.0, ev.str()};
}

// The A = 1 certificate claim: ||D B D^{-1}||_inf < 1 on the
// admissible epsilon window. Evaluated faithfully (absolute row sums) for
// both the analytic z-row coupling and the -1/(mu (mu-1)^2) variant. The
// family equilibrium has eigenvalue exactly 1 along the family tangent,
// so the spectral radius is 1 and no norm can certify it; this check
// reports the honest outcome.
inline VerifyResult t6() {
  double min_norm = std::numeric_limits<double>::infinity();
  double min_norm_printed = std::numeric_limits<double>::infinity();
  double max_rho = 0.0;
  for (double mu : {1.5, 2.0, 3.0, 5.0})
    for (int m : {1, 2, 3}) {
      const Equilibrium eq = family_equilibrium(mu);
      const JacobianSpec jac = build_jacobian(eq, m);
      JacobianSpec printed = jac;  // alternate (z-row, y_n) entry variant
      for (JacobianEntry& e : printed.entries)
        if (e.row == 2 * m + 2 && e.col == m + 1)
          e.value = -1.0 / (mu * (mu - 1.0) * (mu - 1.0));
      const double U = epsilon_bound(eq, 1.0, m);
      for (double f : {0.25, 0.5, 0.75}) {
        const ScalingSpec scal = scaling_matrix(m, f * U);
        min_norm = std::min(min_norm, norm_certificate(jac, scal));
        min_norm_printed = std::min(min_norm_printed, norm_certificate(printed, scal));
      }
      const SpectralEstimate se = spectral_radius(jac);
      if (se.converged) max_rho = std::max(max_rho, se.rho);
    }
  const bool pass = min_norm < 1.0;
  std::ostringstream ev;
  ev << "min scaled norm " << min_norm << " (printed-entry variant "
     << min_norm_printed << "); certificate requires < 1. max rho estimate "
     << max_rho << " (family tangent carries eigenvalue 1, equilibrium is "
     << "nonhyperbolic)";
  return {"T6", pass, ev.str()};
}

// A > 1 certificate: scaled infinity norm < 1 throughout the admissible
// epsilon window, and the power-iteration estimate never exceeds it.
inline VerifyResult t7() {
  double max_norm = 0.0;
  double max_excess = -std::numeric_limits<double>::infinity();
  for (double A : {1.1, 1.5, 2.0, 5.0, 10.0})
    for (int m = 1; m <= 8; ++m) {
      const Equilibrium eq = isolated_equilibrium(A);
      const JacobianSpec jac = build_jacobian(eq, m);
      const double U = epsilon_bound(eq, A, m);
      const SpectralEstimate se = spectral_radius(jac);
      if (!se.converged)
        return {"T7", false, "power iteration failed to converge"};
      for (double f : {0.25, 0.5, 0.75}) {
        const double nrm = norm_certificate(jac, scaling_matrix(m, f * U));
        max_norm = std::max(max_norm, nrm);
        max_excess = std::max(max_excess, se.rho - nrm);
        if (!(nrm < 1.0)) {
          std::ostringstream why;
          why << "scaled norm " << nrm << " >= 1 at A=" << A << " m=" << m;
          return {"T7", false, why.str()};
        }
        if (se.rho > nrm + 1e-9) {
          std::ostringstream why;
          why << "rho " << se.rho << " exceeds norm " << nrm << " at A=" << A
              << " m=" << m;
          return {"T7", false, why.str()};
        }
      }
    }
  std::ostringstream ev;
  ev << "120 (A, m, eps) cases: max scaled norm " << max_norm
     << " < 1; max rho - norm = " << max_excess << " <= 1e-9";
  return {"T7", true, ev.str()};
}

// Global attraction for A > 1: every random run converges to
// (A+1, A+1, A+1) within 1e-6 by n = 1e4.
inline VerifyResult t8() {
  double worst = 0.0;
  int runs = 0;
  std::size_t cell = 0;
  for (double A : {1.1, 1.5, 2.0, 5.0})
    for (int m : {1, 2, 3, 6}) {
      ++cell;
      for (int trial = 0; trial < 50; ++trial) {
        const InitBlock init =
            generate_initials(kSeed + 8, cell, static_cast<std::uint64_t>(trial), m,
                              0.1, 10.0);
        const auto [params, block] = validate_params(A, m, init);
        const Trajectory traj = iterate(params, block, 10000);
        ++runs;
        std::ostringstream why;
        if (traj.overflow_at) {
          why << "overflow at A=" << A << " m=" << m;
          return {"T8", false, why.str()};
        }
        const RegimeReport rep = classify_regime(traj, params);
        if (rep.label != RegimeLabel::Converged) {
          why << "run not classified Converged at A=" << A << " m=" << m;
          return {"T8", false, why.str()};
        }
        const Sample& last = traj.samples.back();
        const double err = std::max(
            {std::fabs(rep.point[0] - (A + 1.0)), std::fabs(rep.point[1] - (A + 1.0)),
             std::fabs(rep.point[2] - (A + 1.0)), std::fabs(last.x - (A + 1.0)),
             std::fabs(last.y - (A + 1.0)), std::fabs(last.z - (A + 1.0))});
        worst = std::max(worst, err);
        if (err > 1e-6) {
          why << "distance to (A+1,...) = " << err << " at A=" << A << " m=" << m;
          return {"T8", false, why.str()};
        }
      }
    }
  std::ostringstream ev;
  ev << runs << " runs all converged; max distance to (A+1,A+1,A+1) = " << worst
     << " (tol 1e-6)";
  return {"T8", true, ev.str()};
}

}  // namespace verify

inline VerifyResult verify_theorem(const std::string& id) {
  if (id == "T1") return verify::t1();
  if (id == "T2i") return verify::t2i();
  if (id == "T2ii") return verify::t2ii();
  if (id == "T3") return verify::t3();
  if (id == "T4") return verify::t4();
  if (id == "T5") return verify::t5();
  if (id == "T6") return verify::t6();
  if (id == "T7") return verify::t7();
  if (id == "T8") return verify::t8();
  throw UnknownTheorem("unknown theorem id '" + id +
                       "' (expected T1, T2i, T2ii, T3, T4, T5, T6, T7, T8)");
}

}  // namespace rde
