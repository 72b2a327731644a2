#pragma once

// Test-only oracles, independent of the library's computation paths:
//  - a 256-bit re-iteration of the system (boost cpp_bin_float),
//  - a central finite-difference Jacobian of the delay-embedded step map,
//  - a dense row-sum infinity norm for scaled matrices.

#include <array>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rde/core.hpp"
#include "rde/linearize.hpp"

namespace oracle {

using Big = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

struct BigTriple {
  Big x, y, z;
};

struct BigTrajectory {
  std::vector<BigTriple> samples;  // n = -m .. last
  long long overflow_at = -1;
};

inline BigTrajectory iterate_hp(double A, const rde::InitBlock& init,
                                long long steps, double cap = 1e100) {
  const int m = static_cast<int>(init.x.size()) - 1;
  BigTrajectory traj;
  for (int i = 0; i <= m; ++i)
    traj.samples.push_back({Big(init.x[static_cast<std::size_t>(i)]),
                            Big(init.y[static_cast<std::size_t>(i)]),
                            Big(init.z[static_cast<std::size_t>(i)])});
  const Big bigA(A);
  const Big bigCap(cap);
  for (long long n = 1; n <= steps; ++n) {
    const BigTriple& oldest = traj.samples[traj.samples.size() - static_cast<std::size_t>(m) - 1];
    const BigTriple& newest = traj.samples.back();
    BigTriple t{bigA + oldest.x / newest.z, bigA + oldest.y / newest.z,
                bigA + oldest.z / newest.y};
    traj.samples.push_back(t);
    if (t.x > bigCap || t.y > bigCap || t.z > bigCap) {
      traj.overflow_at = n;
      break;
    }
  }
  return traj;
}

// The delay-embedded step map F on (x_n..x_{n-m}, y_n..y_{n-m}, z_n..z_{n-m}).
inline std::vector<double> embedded_map(double A, int m,
                                        const std::vector<double>& s) {
  const std::size_t blk = static_cast<std::size_t>(m) + 1;
  std::vector<double> out(3 * blk);
  out[0] = A + s[blk - 1] / s[2 * blk];          // f = A + x_{n-m}/z_n
  out[blk] = A + s[2 * blk - 1] / s[2 * blk];    // g = A + y_{n-m}/z_n
  out[2 * blk] = A + s[3 * blk - 1] / s[blk];    // h = A + z_{n-m}/y_n
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t k = 1; k < blk; ++k) out[b * blk + k] = s[b * blk + k - 1];
  return out;
}

// Central finite differences, h = 1e-6, at the equilibrium state.
inline std::vector<std::vector<double>> fd_jacobian(const rde::Equilibrium& eq,
                                                    double A, int m,
                                                    double h = 1e-6) {
  const std::size_t blk = static_cast<std::size_t>(m) + 1;
  const std::size_t dim = 3 * blk;
  std::vector<double> base(dim);
  for (std::size_t k = 0; k < blk; ++k) {
    base[k] = eq.x;
    base[blk + k] = eq.y;
    base[2 * blk + k] = eq.z;
  }
  std::vector<std::vector<double>> jac(dim, std::vector<double>(dim, 0.0));
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<double> plus = base, minus = base;
    plus[j] += h;
    minus[j] -= h;
    const auto fp = embedded_map(A, m, plus);
    const auto fm = embedded_map(A, m, minus);
    for (std::size_t i = 0; i < dim; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

inline std::vector<std::vector<double>> to_dense(const rde::JacobianSpec& jac) {
  std::vector<std::vector<double>> dense(
      static_cast<std::size_t>(jac.dim),
      std::vector<double>(static_cast<std::size_t>(jac.dim), 0.0));
  for (const rde::JacobianEntry& e : jac.entries)
    dense[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] += e.value;
  return dense;
}

inline double dense_scaled_inf_norm(const std::vector<std::vector<double>>& a,
                                    const std::vector<double>& diag) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      sum += std::fabs(diag[i] * a[i][j] / diag[j]);
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace oracle
