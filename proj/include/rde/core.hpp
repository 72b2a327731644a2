#pragma once

// Forward iteration of the delayed rational system
//
//   x_{n+1} = A + x_{n-m} / z_n
//   y_{n+1} = A + y_{n-m} / z_n
//   z_{n+1} = A + z_{n-m} / y_n      n = 0, 1, ...
//
// with A > 0, delay m >= 1 and 3(m+1) positive initial values indexed
// n = -m..0. Every iterate with n >= 1 is strictly greater than A, so
// denominators stay positive and iteration never divides by zero;
// divergence is handled by a numeric cap, not by faulting.

#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rde/errors.hpp"

namespace rde {

struct NonPositiveA : InputError {
  using InputError::InputError;
};
struct DelayLessThanOne : InputError {
  using InputError::InputError;
};
struct NonPositiveInitial : InputError {
  NonPositiveInitial(char component, int index, const std::string& msg)
      : InputError(msg), component(component), index(index) {}
  char component;
  int index;  // the n it belongs to, in -m..0
};
struct WrongBlockLength : InputError {
  using InputError::InputError;
};

struct Params {
  double A;
  int m;
};

struct Triple {
  double x;
  double y;
  double z;
};

// Initial data; entry i of each list is the value at n = i - m.
struct InitBlock {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
};

struct Sample {
  long long n;
  double x;
  double y;
  double z;
};

struct Trajectory {
  Params params;
  InitBlock init;
  std::vector<Sample> samples;  // gap-free in n, starting at n = -m
  std::optional<long long> overflow_at;
  double cap;

  // Sample at index n (samples start at -m).
  const Sample& at(long long n) const {
    return samples[static_cast<std::size_t>(n + params.m)];
  }
  long long last_n() const { return samples.back().n; }
};

inline std::pair<Params, InitBlock> validate_params(double A, int m,
                                                    InitBlock init) {
  if (!(A > 0.0))
    throw NonPositiveA("A must be a positive real, got " + std::to_string(A));
  if (m < 1)
    throw DelayLessThanOne("delay m must be >= 1, got " + std::to_string(m));
  const std::size_t want = static_cast<std::size_t>(m) + 1;
  auto check = [&](const std::vector<double>& v, char name) {
    if (v.size() != want)
      throw WrongBlockLength(std::string(1, name) + " block has " +
                             std::to_string(v.size()) + " entries, expected " +
                             std::to_string(want));
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!(v[i] > 0.0))
        throw NonPositiveInitial(
            name, static_cast<int>(i) - m,
            std::string(1, name) + "[" + std::to_string(static_cast<int>(i) - m) +
                "] = " + std::to_string(v[i]) + " is not positive");
  };
  check(init.x, 'x');
  check(init.y, 'y');
  check(init.z, 'z');
  return {Params{A, m}, std::move(init)};
}

namespace detail {
// One application of the map given the oldest (n-m) and newest (n) triples.
inline Triple step_impl(double A, const Triple& oldest, const Triple& newest) {
  return Triple{A + oldest.x / newest.z, A + oldest.y / newest.z,
                A + oldest.z / newest.y};
}
}  // namespace detail

// window holds the last m+1 triples in chronological order:
// window.front() is (x_{n-m}, y_{n-m}, z_{n-m}), window.back() is step n.
inline Triple step(const Params& p, std::span<const Triple> window) {
  if (window.size() != static_cast<std::size_t>(p.m) + 1)
    std::abort();  // caller bug, not recoverable input
  return detail::step_impl(p.A, window.front(), window.back());
}

inline Trajectory iterate(const Params& p, const InitBlock& init,
                          long long steps, double cap = 1e100) {
  const int m = p.m;
  Trajectory traj{p, init, {}, std::nullopt, cap};
  traj.samples.reserve(static_cast<std::size_t>(m + 1) +
                       static_cast<std::size_t>(std::min<long long>(steps, 1 << 20)));

  // Ring buffer of the last m+1 triples; head points at the oldest.
  std::vector<Triple> ring(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    ring[static_cast<std::size_t>(i)] = Triple{init.x[i], init.y[i], init.z[i]};
    traj.samples.push_back(Sample{i - m, init.x[i], init.y[i], init.z[i]});
  }
  std::size_t head = 0;
  const std::size_t len = ring.size();
  for (long long n = 1; n <= steps; ++n) {
    const Triple& oldest = ring[head];
    const Triple& newest = ring[(head + len - 1) % len];
    const Triple t = detail::step_impl(p.A, oldest, newest);
    traj.samples.push_back(Sample{n, t.x, t.y, t.z});
    if (t.x > cap || t.y > cap || t.z > cap) {
      traj.overflow_at = n;
      break;
    }
    ring[head] = t;
    head = (head + 1) % len;
  }
  return traj;
}

enum class Parity { Even, Odd };
enum class Component { X, Y, Z };

inline double component_of(const Sample& s, Component c) {
  switch (c) {
    case Component::X: return s.x;
    case Component::Y: return s.y;
    default: return s.z;
  }
}

// The (n, value) pairs with n >= 1 of the requested parity.
inline std::vector<std::pair<long long, double>> subsequence(
    const Trajectory& traj, Parity parity, Component component) {
  std::vector<std::pair<long long, double>> out;
  const long long want = parity == Parity::Even ? 0 : 1;
  for (const Sample& s : traj.samples) {
    if (s.n < 1) continue;
    if (((s.n % 2) + 2) % 2 != want) continue;
    out.emplace_back(s.n, component_of(s, component));
  }
  return out;
}

}  // namespace rde
