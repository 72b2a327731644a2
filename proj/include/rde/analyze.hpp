#pragma once

// Trajectory classifiers: persistence, boundedness envelopes, semicycle
// segmentation, parity-subsequence limits, limsup/liminf estimation,
// empirical local-stability probing, and regime labeling.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rde/core.hpp"
#include "rde/equilibria.hpp"
#include "rde/rng.hpp"

namespace rde {

struct DegenerateEnvelope : InputError {
  using InputError::InputError;
};
struct AOutOfRange : InputError {
  using InputError::InputError;
};
struct WindowTooLarge : InputError {
  using InputError::InputError;
};

// ---------------------------------------------------------------------------
// Persistence: every iterate with n >= 1 exceeds A (pre-overflow).

struct PersistenceResult {
  bool holds;
  double min_tail;  // minimum component over samples n >= 1
};

inline PersistenceResult persistence_check(const Trajectory& traj, double A) {
  double lo = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const Sample& s : traj.samples) {
    if (s.n < 1) continue;
    any = true;
    lo = std::min({lo, s.x, s.y, s.z});
  }
  if (!any) return {false, lo};
  return {lo > A, lo};
}

// ---------------------------------------------------------------------------
// Boundedness envelope [M, M/(M-A)] from the first m+1 post-initial triples.
//
// The literal bound uses M = min{alpha, beta/(beta-1)} for both A = 1 and
// A > 1, but the induction behind it suggests an A-dependent constant, so
// we compute both the literal envelope and the alternative
// M' = min{alpha, beta/(beta-A)} and report both containments.

struct Envelope {
  double M;
  double upper;  // M / (M - A)
  double alpha;
  double beta;
  double containment;      // fraction of samples n >= 1 inside [M, upper]
  double alt_M;            // min{alpha, beta/(beta-A)}
  double alt_upper;        // NaN when the alternative is degenerate
  double alt_containment;  // NaN when the alternative is degenerate
};

namespace detail {
inline double containment_fraction(const Trajectory& traj, double lo, double hi) {
  // Small relative slack absorbs roundoff at the interval ends.
  const double slack = 1e-12 * std::max(1.0, hi);
  long long in = 0, total = 0;
  for (const Sample& s : traj.samples) {
    if (s.n < 1) continue;
    ++total;
    const double mn = std::min({s.x, s.y, s.z});
    const double mx = std::max({s.x, s.y, s.z});
    if (mn >= lo - slack && mx <= hi + slack) ++in;
  }
  return total == 0 ? 0.0 : static_cast<double>(in) / static_cast<double>(total);
}
}  // namespace detail

inline Envelope boundedness_envelope(const Trajectory& traj, double A) {
  if (!(A >= 1.0))
    throw AOutOfRange("envelope is defined for A >= 1");
  const int m = traj.params.m;
  if (traj.last_n() < m + 1)
    throw InputError("need at least m+1 post-initial samples");
  double alpha = std::numeric_limits<double>::infinity();
  double beta = 0.0;
  for (long long i = 1; i <= m + 1; ++i) {
    const Sample& s = traj.at(i);
    alpha = std::min({alpha, s.x, s.y, s.z});
    beta = std::max({beta, s.x, s.y, s.z});
  }
  Envelope env{};
  env.alpha = alpha;
  env.beta = beta;
  env.M = std::min(alpha, beta / (beta - 1.0));
  env.alt_M = std::min(alpha, beta / (beta - A));
  if (env.alt_M > A) {
    env.alt_upper = env.alt_M / (env.alt_M - A);
    env.alt_containment = detail::containment_fraction(traj, env.alt_M, env.alt_upper);
  } else {
    env.alt_upper = std::numeric_limits<double>::quiet_NaN();
    env.alt_containment = std::numeric_limits<double>::quiet_NaN();
  }
  if (!(env.M > A))
    throw DegenerateEnvelope("envelope floor M = " + std::to_string(env.M) +
                             " does not exceed A = " + std::to_string(A));
  env.upper = env.M / (env.M - A);
  env.containment = detail::containment_fraction(traj, env.M, env.upper);
  return env;
}

// ---------------------------------------------------------------------------
// Semicycles: maximal runs of consecutive terms >= reference (positive) or
// < reference (negative). Equality counts as positive, matching the
// boundary convention x_N < xbar <= x_{N+1}.

struct SemicycleRun {
  bool positive;
  std::size_t start;   // offset into the analyzed series
  std::size_t length;
};

inline std::vector<SemicycleRun> semicycles(std::span<const double> series,
                                            double reference) {
  std::vector<SemicycleRun> runs;
  if (series.empty()) return runs;
  bool sign = series[0] >= reference;
  std::size_t start = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const bool s = series[i] >= reference;
    if (s != sign) {
      runs.push_back({sign, start, i - start});
      sign = s;
      start = i;
    }
  }
  runs.push_back({sign, start, series.size() - start});
  return runs;
}

struct SemicycleReport {
  std::vector<SemicycleRun> runs_x, runs_y, runs_z;
  std::size_t max_len;
  Equilibrium reference;
};

inline SemicycleReport semicycle_report(const Trajectory& traj,
                                        const Equilibrium& reference,
                                        long long from_n = 1) {
  std::vector<double> sx, sy, sz;
  for (const Sample& s : traj.samples) {
    if (s.n < from_n) continue;
    sx.push_back(s.x);
    sy.push_back(s.y);
    sz.push_back(s.z);
  }
  SemicycleReport rep{semicycles(sx, reference.x), semicycles(sy, reference.y),
                      semicycles(sz, reference.z), 0, reference};
  for (const auto* runs : {&rep.runs_x, &rep.runs_y, &rep.runs_z})
    for (const SemicycleRun& r : *runs) rep.max_len = std::max(rep.max_len, r.length);
  return rep;
}

// ---------------------------------------------------------------------------
// Hypothesis check for the parity-divergence claims (verify ids T2i/T2ii):
// 0 < A < 1, odd m, one parity of the initial block in (0,1), the other
// above 1/(1-A).

enum class T2Variant { I, II };

inline bool theorem2_hypothesis_check(const InitBlock& init, double A, int m,
                                      T2Variant variant) {
  if (!(A > 0.0) || !(A < 1.0))
    throw AOutOfRange("hypothesis check requires 0 < A < 1");
  if (m % 2 == 0) return false;  // the divergence claim covers odd m only
  const double thr = 1.0 / (1.0 - A);
  // Variant I: odd-indexed initials small, even-indexed large; II swaps.
  const int small_parity = variant == T2Variant::I ? 1 : 0;
  for (int i = 0; i <= m; ++i) {
    const int n = i - m;
    const int parity = ((n % 2) + 2) % 2;
    for (double v : {init.x[static_cast<std::size_t>(i)],
                     init.y[static_cast<std::size_t>(i)],
                     init.z[static_cast<std::size_t>(i)]}) {
      if (parity == small_parity) {
        if (!(v > 0.0 && v < 1.0)) return false;
      } else {
        if (!(v > thr)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parity limits for 0 < A < 1: detect the diverging parity subsequence,
// verify the growth law v(n) > 2A + v(n - (2m+2)) along it, and estimate
// the other parity's finite limit from its tail.

struct ParityEvidence {
  bool detected;
  Parity diverging;
  double finite_limit;
  bool growth_law_ok;
  long long growth_points_checked;
};

inline ParityEvidence parity_limits(const Trajectory& traj, double A) {
  if (!(A > 0.0) || !(A < 1.0))
    throw AOutOfRange("parity analysis applies to 0 < A < 1");
  ParityEvidence ev{false, Parity::Even, std::numeric_limits<double>::quiet_NaN(),
                    false, 0};
  if (!traj.overflow_at) return ev;  // NoDivergenceDetected
  const long long ov = *traj.overflow_at;
  const int p = static_cast<int>(((ov % 2) + 2) % 2);
  ev.diverging = p == 0 ? Parity::Even : Parity::Odd;

  // Growth along the stride-(2m+2) progressions for the final 20
  // same-parity samples, all components. Consecutive same-parity samples
  // belong to different interleaved progressions and need not be ordered,
  // so the comparison steps m+1 positions back (= 2m+2 in n).
  const int mm = traj.params.m;
  const std::size_t stride = static_cast<std::size_t>(mm) + 1;
  std::vector<const Sample*> div;
  for (const Sample& s : traj.samples)
    if (s.n >= 1 && ((s.n % 2) + 2) % 2 == p) div.push_back(&s);
  if (div.size() < 20 + stride) return ev;
  for (std::size_t i = div.size() - 20; i < div.size(); ++i) {
    if (!(div[i]->x > div[i - stride]->x && div[i]->y > div[i - stride]->y &&
          div[i]->z > div[i - stride]->z))
      return ev;
  }
  ev.detected = true;

  const int m = mm;
  ev.growth_law_ok = true;
  for (const Sample* s : div) {
    const long long j = s->n;
    if (j < m + 3 || j - (2 * m + 2) < -m) continue;
    const Sample& back = traj.at(j - (2 * m + 2));
    ++ev.growth_points_checked;
    if (!(s->x > 2 * A + back.x && s->y > 2 * A + back.y && s->z > 2 * A + back.z)) {
      ev.growth_law_ok = false;
      break;
    }
  }

  // Finite parity limit from the last few samples of the other parity.
  std::vector<double> tail;
  for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it) {
    if (it->n < 1) break;
    if (((it->n % 2) + 2) % 2 == p) continue;
    tail.push_back((it->x + it->y + it->z) / 3.0);
    if (tail.size() == 5) break;
  }
  if (!tail.empty()) {
    double s = 0;
    for (double v : tail) s += v;
    ev.finite_limit = s / static_cast<double>(tail.size());
  }
  return ev;
}

// ---------------------------------------------------------------------------
// limsup/liminf over the final window samples.

inline std::pair<double, double> limsup_liminf(std::span<const double> series,
                                               std::size_t window) {
  if (series.size() < 2 * window)
    throw WindowTooLarge("series length " + std::to_string(series.size()) +
                         " < 2 * window " + std::to_string(window));
  double L = -std::numeric_limits<double>::infinity();
  double l = std::numeric_limits<double>::infinity();
  for (std::size_t i = series.size() - window; i < series.size(); ++i) {
    L = std::max(L, series[i]);
    l = std::min(l, series[i]);
  }
  return {L, l};
}

// ---------------------------------------------------------------------------
// Empirical local-stability probe: fraction of randomly perturbed starts
// (per-component L1 distance < delta) whose orbit stays within eps of the
// equilibrium for a fixed horizon.

inline double probe_local_stability(const Equilibrium& eq, const Params& params,
                                    double delta, double eps, int trials,
                                    std::uint64_t seed,
                                    long long horizon = 2000) {
  if (!(delta >= 0.0) || !(eps > 0.0)) throw InputError("delta, eps must be >= 0, > 0");
  if (trials < 1) throw InputError("trials must be >= 1");
  const int m = params.m;
  int stable = 0;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng::stream(seed, 0, static_cast<std::uint64_t>(t));
    InitBlock init;
    const double scale = 0.999 * delta / static_cast<double>(m + 1);
    auto fill = [&](std::vector<double>& v, double center) {
      v.resize(static_cast<std::size_t>(m) + 1);
      for (double& e : v)
        e = std::max(center + scale * (2.0 * rng.next_unit() - 1.0), 1e-300);
    };
    fill(init.x, eq.x);
    fill(init.y, eq.y);
    fill(init.z, eq.z);
    const Trajectory traj = iterate(params, init, horizon);
    bool ok = !traj.overflow_at;
    if (ok) {
      for (const Sample& s : traj.samples) {
        if (s.n < 1) continue;
        if (std::fabs(s.x - eq.x) >= eps || std::fabs(s.y - eq.y) >= eps ||
            std::fabs(s.z - eq.z) >= eps) {
          ok = false;
          break;
        }
      }
    }
    if (ok) ++stable;
  }
  return static_cast<double>(stable) / static_cast<double>(trials);
}

// ---------------------------------------------------------------------------
// Regime classification.

enum class RegimeLabel {
  Converged,
  ParityUnbounded,
  BoundedOscillatory,
  NumericOverflow,
  Undetermined
};

inline const char* label_name(RegimeLabel l) {
  switch (l) {
    case RegimeLabel::Converged: return "converged";
    case RegimeLabel::ParityUnbounded: return "parity-unbounded";
    case RegimeLabel::BoundedOscillatory: return "bounded-oscillatory";
    case RegimeLabel::NumericOverflow: return "numeric-overflow";
    default: return "undetermined";
  }
}

struct RegimeReport {
  RegimeLabel label = RegimeLabel::Undetermined;
  double point[3] = {0, 0, 0};  // meaningful when Converged
  double limsup[3] = {0, 0, 0};
  double liminf[3] = {0, 0, 0};
  std::size_t window = 0;
  std::optional<Envelope> envelope;
  std::optional<ParityEvidence> parity;
  std::string note;
};

inline RegimeReport classify_regime(const Trajectory& traj, const Params& params) {
  constexpr double kConvergedTol = 1e-6;
  RegimeReport rep;
  const int m = params.m;

  if (traj.overflow_at) {
    if (params.A < 1.0) {
      const ParityEvidence ev = parity_limits(traj, params.A);
      if (ev.detected) {
        rep.label = RegimeLabel::ParityUnbounded;
        rep.parity = ev;
        return rep;
      }
      rep.parity = ev;
    }
    rep.label = RegimeLabel::NumericOverflow;
    return rep;
  }

  // Delay-proportional tail window damps parity artifacts.
  const std::size_t window = static_cast<std::size_t>(10 * (m + 1));
  rep.window = window;
  std::vector<double> sx, sy, sz;
  for (const Sample& s : traj.samples) {
    if (s.n < 1) continue;
    sx.push_back(s.x);
    sy.push_back(s.y);
    sz.push_back(s.z);
  }
  if (sx.size() < 2 * window) {
    rep.note = "trajectory too short for tail analysis";
    return rep;
  }
  const std::span<const double> views[3] = {sx, sy, sz};
  bool converged = true;
  for (int c = 0; c < 3; ++c) {
    auto [L, l] = limsup_liminf(views[c], window);
    rep.limsup[c] = L;
    rep.liminf[c] = l;
    if (L - l >= kConvergedTol) converged = false;
    double sum = 0;
    for (std::size_t i = views[c].size() - window; i < views[c].size(); ++i)
      sum += views[c][i];
    rep.point[c] = sum / static_cast<double>(window);
  }
  if (converged) {
    rep.label = RegimeLabel::Converged;
    return rep;
  }
  if (params.A >= 1.0) {
    try {
      rep.envelope = boundedness_envelope(traj, params.A);
      if (rep.envelope->containment == 1.0) {
        rep.label = RegimeLabel::BoundedOscillatory;
        return rep;
      }
      rep.note = "envelope containment " + std::to_string(rep.envelope->containment);
    } catch (const DegenerateEnvelope& e) {
      rep.note = e.what();
    }
  } else {
    rep.note = "bounded non-converged run at A < 1; no label applies";
  }
  return rep;
}

}  // namespace rde
