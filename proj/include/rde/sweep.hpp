#pragma once

// Deterministic seeded Monte-Carlo over (A, m, initial blocks). Cells and
// trials are independent pure computations; rows are written into
// pre-assigned slots, so output is bit-identical regardless of how many
// worker threads execute them.

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "rde/analyze.hpp"
#include "rde/core.hpp"
#include "rde/rng.hpp"

namespace rde {

struct SweepGrid {
  std::vector<double> A_values;
  std::vector<int> m_values;
  int trials_per_cell = 50;
  double init_lo = 0.1;
  double init_hi = 10.0;
  std::uint64_t seed = 0;
  long long horizon = 10000;
  double cap = 1e100;
};

inline void validate_grid(const SweepGrid& g) {
  if (g.A_values.empty() || g.m_values.empty())
    throw InputError("sweep grid needs at least one A and one m");
  for (double A : g.A_values)
    if (!(A > 0.0)) throw NonPositiveA("grid A values must be positive");
  for (int m : g.m_values)
    if (m < 1) throw DelayLessThanOne("grid m values must be >= 1");
  if (g.trials_per_cell < 1) throw InputError("trials_per_cell must be >= 1");
  if (!(g.init_lo > 0.0) || !(g.init_hi >= g.init_lo))
    throw InputError("init range must satisfy 0 < lo <= hi");
  if (g.horizon < 1) throw InputError("horizon must be >= 1");
}

inline InitBlock generate_initials(std::uint64_t seed, std::uint64_t cell_index,
                                   std::uint64_t trial_index, int m, double lo,
                                   double hi) {
  CounterRng rng = CounterRng::stream(seed, cell_index, trial_index);
  InitBlock init;
  for (auto* v : {&init.x, &init.y, &init.z}) {
    v->resize(static_cast<std::size_t>(m) + 1);
    for (double& e : *v) e = rng.next(lo, hi);
  }
  return init;
}

struct SweepRow {
  double A;
  int m;
  int trial;
  std::uint64_t seed_used;
  RegimeLabel label;
  // Converged point (NaN when not converged).
  double px, py, pz;
  double limsup_gap;        // max componentwise limsup - liminf (NaN if n/a)
  long long overflow_at;    // -1 when none
  long long max_semicycle;  // vs the mu-hat reference; -1 when n/a (A != 1)
};

struct SweepResult {
  SweepGrid grid;
  std::vector<SweepRow> rows;  // canonical (A, m, trial) order
};

namespace detail {
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RDE_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline SweepRow run_one(const SweepGrid& g, std::size_t cell, int trial,
                        double A, int m) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SweepRow row{A, m, trial, CounterRng::stream_key(g.seed, cell, static_cast<std::uint64_t>(trial)),
               RegimeLabel::Undetermined, nan, nan, nan, nan, -1, -1};
  const InitBlock init =
      generate_initials(g.seed, cell, static_cast<std::uint64_t>(trial), m,
                        g.init_lo, g.init_hi);
  const Params params{A, m};
  const Trajectory traj = iterate(params, init, g.horizon, g.cap);
  const RegimeReport rep = classify_regime(traj, params);
  row.label = rep.label;
  if (traj.overflow_at) row.overflow_at = *traj.overflow_at;
  if (rep.window > 0) {
    double gap = 0;
    for (int c = 0; c < 3; ++c) gap = std::max(gap, rep.limsup[c] - rep.liminf[c]);
    row.limsup_gap = gap;
  }
  if (rep.label == RegimeLabel::Converged) {
    row.px = rep.point[0];
    row.py = rep.point[1];
    row.pz = rep.point[2];
  }
  if (A == 1.0 && !traj.overflow_at) {
    const MuEstimate mu = estimate_mu(traj);
    if (mu.mu_hat > 1.0) {
      const SemicycleReport sc =
          semicycle_report(traj, family_equilibrium(mu.mu_hat));
      row.max_semicycle = static_cast<long long>(sc.max_len);
    }
  }
  return row;
}
}  // namespace detail

// threads == 0: use RDE_LAB_THREADS if set, otherwise hardware concurrency.
inline SweepResult run_sweep(const SweepGrid& grid, unsigned threads = 0) {
  validate_grid(grid);
  SweepResult result{grid, {}};
  struct Task {
    std::size_t cell;
    int trial;
    double A;
    int m;
  };
  std::vector<Task> tasks;
  std::size_t cell = 0;
  for (double A : grid.A_values)
    for (int m : grid.m_values) {
      for (int t = 0; t < grid.trials_per_cell; ++t)
        tasks.push_back({cell, t, A, m});
      ++cell;
    }
  result.rows.resize(tasks.size());

  const unsigned nthreads =
      std::min<std::size_t>(detail::resolve_threads(threads), tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      result.rows[i] = detail::run_one(grid, t.cell, t.trial, t.A, t.m);
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return result;
}

struct CellSummary {
  double A;
  int m;
  // converged, parity-unbounded, bounded-oscillatory, overflow, undetermined
  std::array<int, 5> counts{};
  double mean_convergence_error;  // vs (A+1,A+1,A+1); NaN when A == 1 or none
  long long max_semicycle;        // -1 when n/a
};

inline std::vector<CellSummary> aggregate(const SweepResult& result) {
  if (result.rows.empty()) throw InputError("aggregate requires a nonempty result");
  std::vector<CellSummary> cells;
  for (double A : result.grid.A_values)
    for (int m : result.grid.m_values)
      cells.push_back({A, m, {}, std::numeric_limits<double>::quiet_NaN(), -1});
  const std::size_t per_cell = static_cast<std::size_t>(result.grid.trials_per_cell);
  std::vector<double> err_sum(cells.size(), 0.0);
  std::vector<int> err_n(cells.size(), 0);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    CellSummary& c = cells[i / per_cell];
    c.counts[static_cast<std::size_t>(row.label)]++;
    if (row.label == RegimeLabel::Converged && row.A != 1.0) {
      const double e = std::max({std::fabs(row.px - (row.A + 1.0)),
                                 std::fabs(row.py - (row.A + 1.0)),
                                 std::fabs(row.pz - (row.A + 1.0))});
      err_sum[i / per_cell] += e;
      err_n[i / per_cell]++;
    }
    if (row.max_semicycle >= 0)
      c.max_semicycle = std::max(c.max_semicycle, row.max_semicycle);
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (err_n[i] > 0) cells[i].mean_convergence_error = err_sum[i] / err_n[i];
  return cells;
}

}  // namespace rde
