// rde-lab: simulate the delayed rational difference system and check its
// equilibria, stability certificates, and long-run regimes.
//
// Exit codes: 0 success / PASS, 1 input error, 2 verification FAIL,
// 3 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rde/analyze.hpp"
#include "rde/core.hpp"
#include "rde/equilibria.hpp"
#include "rde/io.hpp"
#include "rde/linearize.hpp"
#include "rde/sweep.hpp"
#include "rde/verify.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rde::InputError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw rde::SinkError("cannot open output file '" + out_path + "'");
  out << data;
  if (!out) throw rde::SinkError("failed to write '" + out_path + "'");
}

rde::Equilibrium pick_equilibrium(double A, std::optional<double> mu) {
  if (A == 1.0) {
    if (!mu) throw rde::InputError("A = 1 has a family of equilibria; pass --mu");
    return rde::family_equilibrium(*mu);
  }
  if (mu) throw rde::InputError("--mu is only meaningful for A = 1");
  return rde::isolated_equilibrium(A);
}

int run(int argc, char** argv) {
  CLI::App app{"delayed rational difference system lab"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a config and emit the trajectory");
  std::string sim_config, sim_format = "csv", sim_out;
  sim->add_option("--config", sim_config, "config file ('-' for stdin)")->required();
  sim->add_option("--format", sim_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--out", sim_out, "output file (default stdout)");

  // equilibria
  auto* eqc = app.add_subcommand("equilibria", "closed-form equilibrium point");
  double eq_A = 0.0;
  std::optional<double> eq_mu;
  eqc->add_option("--A", eq_A, "parameter A")->required();
  eqc->add_option("--mu", eq_mu, "family member for A = 1");

  // stability
  auto* stab = app.add_subcommand("stability", "norm/spectral stability certificate");
  double st_A = 0.0;
  int st_m = 1;
  std::optional<double> st_mu, st_eps;
  std::string st_method = "both";
  stab->add_option("--A", st_A, "parameter A")->required();
  stab->add_option("--m", st_m, "delay m")->required();
  stab->add_option("--mu", st_mu, "family member for A = 1");
  stab->add_option("--epsilon", st_eps, "scaling epsilon (default: grid search)");
  stab->add_option("--method", st_method, "norm, power, or both")
      ->check(CLI::IsMember({"norm", "power", "both"}));

  // classify
  auto* cls = app.add_subcommand("classify", "regime report for a config");
  std::string cls_config, cls_out;
  cls->add_option("--config", cls_config, "config file ('-' for stdin)")->required();
  cls->add_option("--out", cls_out, "output file (default stdout)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "seeded Monte-Carlo regime map");
  std::vector<double> sw_A{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 5.0};
  std::vector<int> sw_m{1, 2, 3, 4, 5, 6};
  int sw_trials = 50;
  std::vector<double> sw_range{0.1, 10.0};
  std::uint64_t sw_seed = 0;
  long long sw_horizon = 10000;
  double sw_cap = 1e100;
  bool sw_aggregate = false;
  std::string sw_out;
  swp->add_option("--A", sw_A, "A values")->delimiter(',');
  swp->add_option("--m", sw_m, "m values")->delimiter(',');
  swp->add_option("--trials", sw_trials, "trials per (A, m) cell");
  swp->add_option("--range", sw_range, "initial-value range lo hi")->expected(2);
  swp->add_option("--seed", sw_seed, "sweep seed");
  swp->add_option("--horizon", sw_horizon, "steps per trajectory");
  swp->add_option("--cap", sw_cap, "overflow guard");
  swp->add_flag("--aggregate", sw_aggregate, "emit per-cell summary instead of rows");
  swp->add_option("--out", sw_out, "output file (default stdout)");

  // verify-theorem
  auto* ver = app.add_subcommand("verify-theorem", "run a canned desk-scale check");
  std::string ver_id;
  ver->add_option("--id", ver_id, "T1, T2i, T2ii, T3, T4, T5, T6, T7, or T8")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    const rde::RunConfig cfg = rde::parse_config(read_input(sim_config));
    const auto [params, init] = rde::resolve_config(cfg);
    const rde::Trajectory traj = rde::iterate(params, init, cfg.steps, cfg.cap);
    std::ostringstream out;
    rde::emit_trajectory(traj, sim_format == "csv" ? rde::Format::Csv : rde::Format::Json,
                         out);
    write_output(sim_out, out.str());
    return 0;
  }

  if (eqc->parsed()) {
    const rde::Equilibrium eq = pick_equilibrium(eq_A, eq_mu);
    nlohmann::json j{{"x", eq.x},
                     {"y", eq.y},
                     {"z", eq.z},
                     {"kind", eq.kind == rde::EquilibriumKind::Isolated ? "isolated"
                                                                        : "family"}};
    if (eq.kind == rde::EquilibriumKind::Family) j["mu"] = eq.mu;
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (stab->parsed()) {
    const rde::Equilibrium eq = pick_equilibrium(st_A, st_mu);
    nlohmann::json j{{"A", st_A}, {"m", st_m}};
    if (st_method == "norm" || st_method == "both") {
      const rde::JacobianSpec jac = rde::build_jacobian(eq, st_m);
      const double U = rde::epsilon_bound(eq, st_A, st_m);
      double eps = st_eps.value_or(0.0);
      double nrm;
      if (st_eps) {
        nrm = rde::norm_certificate(jac, rde::scaling_matrix(st_m, eps));
      } else {
        const rde::StabilityCertificate cert = rde::certify(eq, st_A, st_m);
        nrm = cert.scaled_norm;
        eps = cert.epsilon_used;
      }
      j["scaled_norm"] = nrm;
      j["epsilon_used"] = eps;
      j["epsilon_bound"] = U;
    }
    double rho = 0.0;
    bool have_rho = false;
    if (st_method == "power" || st_method == "both") {
      const rde::SpectralEstimate se = rde::spectral_radius(rde::build_jacobian(eq, st_m));
      j["rho_estimate"] = se.rho;
      j["rho_converged"] = se.converged;
      rho = se.converged ? se.rho : 2.0;  // unknown: treat as not-LAS-by-rho
      have_rho = se.converged;
    }
    const double nrm = j.contains("scaled_norm") ? j["scaled_norm"].get<double>() : 2.0;
    j["verdict"] = rde::verdict_name(
        have_rho || j.contains("scaled_norm")
            ? rde::classify_stability(nrm, have_rho ? rho : 2.0, 1e-6)
            : rde::Verdict::Inconclusive);
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (cls->parsed()) {
    const rde::RunConfig cfg = rde::parse_config(read_input(cls_config));
    const auto [params, init] = rde::resolve_config(cfg);
    const rde::Trajectory traj = rde::iterate(params, init, cfg.steps, cfg.cap);
    const rde::RegimeReport rep = rde::classify_regime(traj, params);
    write_output(cls_out, rde::regime_report_json(rep).dump() + "\n");
    return 0;
  }

  if (swp->parsed()) {
    rde::SweepGrid grid;
    grid.A_values = sw_A;
    grid.m_values = sw_m;
    grid.trials_per_cell = sw_trials;
    grid.init_lo = sw_range[0];
    grid.init_hi = sw_range[1];
    grid.seed = sw_seed;
    grid.horizon = sw_horizon;
    grid.cap = sw_cap;
    const rde::SweepResult result = rde::run_sweep(grid);
    write_output(sw_out, sw_aggregate ? rde::aggregate_csv(rde::aggregate(result))
                                      : rde::sweep_csv(result));
    return 0;
  }

  if (ver->parsed()) {
    const rde::VerifyResult r = rde::verify_theorem(ver_id);
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << ": " << r.evidence << "\n";
    return r.pass ? 0 : 2;
  }

  return 3;  // unreachable: a subcommand is required
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rde::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
