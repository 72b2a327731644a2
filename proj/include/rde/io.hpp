#pragma once

// Run-configuration parsing and bit-exact CSV/JSON emission. Reals are
// printed as shortest round-trip decimals so that outputs are diff-stable
// across platforms and parse(emit(x)) == x bitwise.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rde/analyze.hpp"
#include "rde/core.hpp"
#include "rde/sweep.hpp"

namespace rde {

struct ParseError : InputError {
  ParseError(int line, const std::string& reason)
      : InputError("line " + std::to_string(line) + ": " + reason), line(line) {}
  int line;
};
struct IncompleteInitialBlock : InputError {
  using InputError::InputError;
};
struct ConflictingInitSources : InputError {
  using InputError::InputError;
};
struct SinkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config grammar: line-oriented `key = value`, `#` comments, later keys
// override earlier ones. Keys: A, m, steps, cap, seed, init_range, and
// indexed initials like `x[-3] = 0.5`.

struct RunConfig {
  std::optional<double> A;
  std::optional<int> m;
  long long steps = 10000;
  double cap = 1e100;
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<double, double>> init_range;
  std::map<std::pair<char, int>, double> init_entries;  // ('x', -3) -> value
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view s, int line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError(line, "cannot parse number '" + std::string(s) + "'");
  return v;
}
}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (value.empty()) throw ParseError(line_no, "empty value");

    if (key == "A") {
      cfg.A = detail::parse_number<double>(value, line_no);
    } else if (key == "m") {
      cfg.m = detail::parse_number<int>(value, line_no);
    } else if (key == "steps") {
      cfg.steps = detail::parse_number<long long>(value, line_no);
    } else if (key == "cap") {
      cfg.cap = detail::parse_number<double>(value, line_no);
    } else if (key == "seed") {
      cfg.seed = detail::parse_number<std::uint64_t>(value, line_no);
    } else if (key == "init_range") {
      const std::size_t comma = value.find(',');
      if (comma == std::string_view::npos)
        throw ParseError(line_no, "init_range wants 'lo,hi'");
      cfg.init_range = {
          detail::parse_number<double>(detail::trim(value.substr(0, comma)), line_no),
          detail::parse_number<double>(detail::trim(value.substr(comma + 1)), line_no)};
    } else if ((key[0] == 'x' || key[0] == 'y' || key[0] == 'z') &&
               key.size() >= 4 && key[1] == '[' && key.back() == ']') {
      const int idx =
          detail::parse_number<int>(detail::trim(key.substr(2, key.size() - 3)), line_no);
      if (idx > 0) throw ParseError(line_no, "initial index must be in -m..0");
      cfg.init_entries.insert_or_assign({key[0], idx},
                                        detail::parse_number<double>(value, line_no));
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

// Resolve a parsed config into validated (Params, InitBlock).
inline std::pair<Params, InitBlock> resolve_config(const RunConfig& cfg) {
  if (!cfg.A) throw IncompleteInitialBlock("config is missing A");
  if (!cfg.m) throw IncompleteInitialBlock("config is missing m");
  const int m = *cfg.m;
  if (m < 1) throw DelayLessThanOne("m must be >= 1");
  const bool has_entries = !cfg.init_entries.empty();
  const bool has_seeded = cfg.seed.has_value() || cfg.init_range.has_value();
  if (has_entries && has_seeded)
    throw ConflictingInitSources(
        "config mixes explicit initials with seed/init_range");
  InitBlock init;
  if (has_entries) {
    init.x.resize(static_cast<std::size_t>(m) + 1);
    init.y.resize(static_cast<std::size_t>(m) + 1);
    init.z.resize(static_cast<std::size_t>(m) + 1);
    for (char comp : {'x', 'y', 'z'}) {
      auto& dst = comp == 'x' ? init.x : comp == 'y' ? init.y : init.z;
      for (int n = -m; n <= 0; ++n) {
        const auto it = cfg.init_entries.find({comp, n});
        if (it == cfg.init_entries.end())
          throw IncompleteInitialBlock(std::string(1, comp) + "[" +
                                       std::to_string(n) + "] is missing");
        dst[static_cast<std::size_t>(n + m)] = it->second;
      }
    }
    if (cfg.init_entries.size() != 3 * (static_cast<std::size_t>(m) + 1))
      throw IncompleteInitialBlock("initial block has extra entries outside -m..0");
  } else {
    if (!cfg.seed || !cfg.init_range)
      throw IncompleteInitialBlock("seeded initials need both seed and init_range");
    init = generate_initials(*cfg.seed, 0, 0, m, cfg.init_range->first,
                             cfg.init_range->second);
  }
  return validate_params(*cfg.A, m, std::move(init));
}

// ---------------------------------------------------------------------------
// Trajectory emission.

enum class Format { Csv, Json };

inline std::size_t emit_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  std::string buf = "n,x,y,z\n";
  for (const Sample& s : traj.samples) {
    buf += std::to_string(s.n);
    buf += ',';
    buf += format_double(s.x);
    buf += ',';
    buf += format_double(s.y);
    buf += ',';
    buf += format_double(s.z);
    buf += '\n';
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SinkError("failed to write trajectory CSV");
  return buf.size();
}

inline nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json j;
  j["A"] = traj.params.A;
  j["m"] = traj.params.m;
  j["cap"] = traj.cap;
  j["overflow_at"] =
      traj.overflow_at ? nlohmann::json(*traj.overflow_at) : nlohmann::json(nullptr);
  nlohmann::json samples = nlohmann::json::array();
  for (const Sample& s : traj.samples)
    samples.push_back({s.n, s.x, s.y, s.z});
  j["samples"] = std::move(samples);
  return j;
}

inline std::size_t emit_trajectory(const Trajectory& traj, Format format,
                                   std::ostream& out) {
  if (format == Format::Csv) return emit_trajectory_csv(traj, out);
  const std::string text = trajectory_json(traj).dump() + "\n";
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw SinkError("failed to write trajectory JSON");
  return text.size();
}

inline std::vector<Sample> parse_trajectory_csv(std::string_view text) {
  std::vector<Sample> samples;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "n,x,y,z") throw ParseError(1, "expected header 'n,x,y,z'");
      continue;
    }
    Sample s{};
    std::string_view fields[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma = line.find(',', start);
      if (f < 3 && comma == std::string_view::npos)
        throw ParseError(line_no, "expected 4 comma-separated fields");
      fields[f] = line.substr(start, f < 3 ? comma - start : std::string_view::npos);
      start = comma + 1;
    }
    s.n = detail::parse_number<long long>(fields[0], line_no);
    s.x = detail::parse_number<double>(fields[1], line_no);
    s.y = detail::parse_number<double>(fields[2], line_no);
    s.z = detail::parse_number<double>(fields[3], line_no);
    samples.push_back(s);
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Sweep tables.

inline std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "A,m,trial,seed,label,conv_x,conv_y,conv_z,limsup_gap,overflow_at,max_semicycle\n";
  auto opt = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const SweepRow& r : result.rows) {
    out += format_double(r.A);
    out += ',';
    out += std::to_string(r.m);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed_used);
    out += ',';
    out += label_name(r.label);
    out += ',';
    out += opt(r.px);
    out += ',';
    out += opt(r.py);
    out += ',';
    out += opt(r.pz);
    out += ',';
    out += opt(r.limsup_gap);
    out += ',';
    out += r.overflow_at >= 0 ? std::to_string(r.overflow_at) : std::string();
    out += ',';
    out += r.max_semicycle >= 0 ? std::to_string(r.max_semicycle) : std::string();
    out += '\n';
  }
  return out;
}

inline std::string aggregate_csv(const std::vector<CellSummary>& cells) {
  std::string out =
      "A,m,converged,parity_unbounded,bounded_oscillatory,numeric_overflow,"
      "undetermined,mean_convergence_error,max_semicycle\n";
  for (const CellSummary& c : cells) {
    out += format_double(c.A);
    out += ',';
    out += std::to_string(c.m);
    for (int count : c.counts) {
      out += ',';
      out += std::to_string(count);
    }
    out += ',';
    out += std::isnan(c.mean_convergence_error)
               ? std::string()
               : format_double(c.mean_convergence_error);
    out += ',';
    out += c.max_semicycle >= 0 ? std::to_string(c.max_semicycle) : std::string();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report serialization used by the CLI.

inline nlohmann::json regime_report_json(const RegimeReport& rep) {
  nlohmann::json j;
  j["label"] = label_name(rep.label);
  if (rep.label == RegimeLabel::Converged)
    j["point"] = {rep.point[0], rep.point[1], rep.point[2]};
  if (rep.window > 0) {
    j["limsup"] = {rep.limsup[0], rep.limsup[1], rep.limsup[2]};
    j["liminf"] = {rep.liminf[0], rep.liminf[1], rep.liminf[2]};
    j["window"] = rep.window;
  }
  if (rep.envelope) {
    const Envelope& e = *rep.envelope;
    j["envelope"] = {{"M", e.M},
                     {"upper", e.upper},
                     {"alpha", e.alpha},
                     {"beta", e.beta},
                     {"containment", e.containment}};
    if (!std::isnan(e.alt_M) && !std::isnan(e.alt_containment)) {
      j["envelope"]["alt_M"] = e.alt_M;
      j["envelope"]["alt_upper"] = e.alt_upper;
      j["envelope"]["alt_containment"] = e.alt_containment;
    }
  }
  if (rep.parity) {
    j["parity"] = {{"detected", rep.parity->detected},
                   {"diverging", rep.parity->diverging == Parity::Even ? "even" : "odd"},
                   {"growth_law_ok", rep.parity->growth_law_ok},
                   {"growth_points_checked", rep.parity->growth_points_checked}};
    if (!std::isnan(rep.parity->finite_limit))
      j["parity"]["finite_limit"] = rep.parity->finite_limit;
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

}  // namespace rde
