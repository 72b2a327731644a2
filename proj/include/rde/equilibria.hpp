#pragma once

// Closed-form equilibria of the system: the isolated point
// (A+1, A+1, A+1) for A != 1, and for A = 1 the one-parameter family
// (mu, mu, mu/(mu-1)) on the hyperboloid y*z = y + z.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "rde/core.hpp"
#include "rde/errors.hpp"

namespace rde {

struct AEqualsOne : InputError {
  using InputError::InputError;
};
struct MuOutOfRange : InputError {
  using InputError::InputError;
};
struct NotUnityA : InputError {
  using InputError::InputError;
};
struct OverflowedTrajectory : InputError {
  using InputError::InputError;
};

enum class EquilibriumKind { Isolated, Family };

struct Equilibrium {
  double x;
  double y;
  double z;
  EquilibriumKind kind;
  double mu = 0.0;  // meaningful only for Family
};

inline Equilibrium isolated_equilibrium(double A) {
  if (!(A > 0.0)) throw NonPositiveA("A must be positive");
  if (A == 1.0)
    throw AEqualsOne("A = 1 has a family of equilibria; use family_equilibrium");
  return Equilibrium{A + 1.0, A + 1.0, A + 1.0, EquilibriumKind::Isolated};
}

inline Equilibrium family_equilibrium(double mu) {
  if (!(mu > 1.0))
    throw MuOutOfRange("mu must lie in (1, inf), got " + std::to_string(mu));
  return Equilibrium{mu, mu, mu / (mu - 1.0), EquilibriumKind::Family, mu};
}

// Signed defects of the three equilibrium equations at (x, y, z).
inline std::array<double, 3> residual(const Equilibrium& eq, double A) {
  return {eq.x - A - eq.x / eq.z, eq.y - A - eq.y / eq.z,
          eq.z - A - eq.z / eq.y};
}

struct MuEstimate {
  double mu_hat;
  double hyperboloid_residual;  // |y*z - y - z| over tail means
};

// Empirical family-member estimate for a bounded A = 1 run: arithmetic
// mean of the trailing 25% (at least 100 samples) of each component.
// A = 1 runs are bounded but need not converge, so this is a reference
// point, not a limit claim.
inline MuEstimate estimate_mu(const Trajectory& traj) {
  if (traj.params.A != 1.0)
    throw NotUnityA("estimate_mu requires A = 1");
  if (traj.overflow_at)
    throw OverflowedTrajectory("estimate_mu requires a bounded trajectory");
  std::size_t first = 0;
  while (first < traj.samples.size() && traj.samples[first].n < 1) ++first;
  const std::size_t total = traj.samples.size() - first;
  if (total == 0) throw InputError("trajectory has no samples with n >= 1");
  std::size_t tail = std::max<std::size_t>(total / 4, 100);
  tail = std::min(tail, total);
  double sx = 0, sy = 0, sz = 0;
  for (std::size_t i = traj.samples.size() - tail; i < traj.samples.size(); ++i) {
    sx += traj.samples[i].x;
    sy += traj.samples[i].y;
    sz += traj.samples[i].z;
  }
  const double n = static_cast<double>(tail);
  const double mx = sx / n, my = sy / n, mz = sz / n;
  return MuEstimate{mx, std::fabs(my * mz - my - mz)};
}

}  // namespace rde
