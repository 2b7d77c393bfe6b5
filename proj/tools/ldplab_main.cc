// Copyright 2026 The ldplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ldplab command-line front end.
//
// Exit codes: 0 success, 2 usage / parse / unreadable input, 3 domain or
// capacity error. Results are JSON on standard output; diagnostics go to
// standard error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "json.hpp"
#include "ldplab/experiment_io.h"
#include "ldplab/mechanism_io.h"
#include "ldplab/mechanisms.h"
#include "ldplab/montecarlo.h"
#include "ldplab/theory.h"

namespace {

using ldplab::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

constexpr const char* kEpsilonHelp =
    "privacy level epsilon, in nats (natural-log units); 0 < epsilon <= 50";
constexpr const char* kKHelp = "input alphabet size k (symbols), k >= 2";

int Usage(const std::string& message) {
  std::cerr << "ldplab: " << message << "\n";
  return kExitUsage;
}

int Domain(const absl::Status& status) {
  std::cerr << "ldplab: " << status.message() << "\n";
  return kExitDomain;
}

void PrintJson(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

bool ReadFile(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

bool WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << contents;
  return static_cast<bool>(out);
}

// "auto" or an integer; nullopt in `d` means auto.
bool ParseSubsetSize(const std::string& text, std::optional<int>& d) {
  if (text == "auto") {
    d.reset();
    return true;
  }
  int value = 0;
  if (!absl::SimpleAtoi(text, &value)) return false;
  d = value;
  return true;
}

// Applies LDPLAB_SEED, if set. Returns false when it is not an integer.
bool ApplySeedOverride(uint64_t& seed) {
  const char* env = std::getenv("LDPLAB_SEED");
  if (env == nullptr) return true;
  uint64_t value = 0;
  if (!absl::SimpleAtoi(env, &value)) return false;
  seed = value;
  return true;
}

struct GuardOptions {
  double max_cells = 1e9;
  bool force = false;
};

void AddGuardOptions(CLI::App* cmd, GuardOptions& guard) {
  cmd->add_option("--max-cells", guard.max_cells,
                  "refuse runs needing more privatizations (count) than this "
                  "unless --force is given")
      ->capture_default_str();
  cmd->add_flag("--force", guard.force, "run even above --max-cells");
}

int CheckGuard(const GuardOptions& guard, double privatizations) {
  if (privatizations > guard.max_cells && !guard.force) {
    std::cerr << "ldplab: run needs " << privatizations
              << " privatizations, above --max-cells " << guard.max_cells
              << "; pass --force to run anyway\n";
    return kExitDomain;
  }
  return kExitOk;
}

struct BoundArgs {
  int k = 0;
  double epsilon = 0.0;
  double u = 0.0;
  int64_t n = 0;
};

int RunBound(const BoundArgs& args) {
  auto summary = ldplab::SummarizeBounds(args.k, args.epsilon, args.u, args.n);
  if (!summary.ok()) return Domain(summary.status());
  PrintJson(ldplab::BoundSummaryToJson(*summary));
  return kExitOk;
}

struct MechanismArgs {
  int k = 0;
  double epsilon = 0.0;
  std::string d = "auto";
};

int RunMechanism(const MechanismArgs& args) {
  std::optional<int> d;
  if (!ParseSubsetSize(args.d, d)) {
    return Usage("--d must be an integer or \"auto\"");
  }
  if (!d.has_value()) {
    auto d_star = ldplab::OptimalSubsetSize(args.k, args.epsilon);
    if (!d_star.ok()) return Domain(d_star.status());
    d = *d_star;
  }
  auto mechanism = ldplab::SubsetMechanism::Create(args.k, args.epsilon, *d);
  if (!mechanism.ok()) return Domain(mechanism.status());
  PrintJson(ldplab::SubsetMechanismToJson(*mechanism));
  return kExitOk;
}

struct SimulateArgs {
  std::string config_path;
  int k = 0;
  double epsilon = 0.0;
  std::string d = "auto";
  std::vector<double> u_values;
  std::vector<int64_t> n_values;
  int64_t trials = 0;
  uint64_t seed = 0;
  std::string distribution = "uniform";
  std::string estimator = "raw";
  std::string out_path;
  std::string csv_path;
  int workers = 1;
  GuardOptions guard;
};

int RunSimulate(const SimulateArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) {
    std::string text;
    if (!ReadFile(args.config_path, text)) {
      return Usage("cannot read config file " + args.config_path);
    }
    auto parsed = ldplab::ParseExperimentConfig(text);
    if (!parsed.ok()) {
      return Usage(args.config_path + ": " + std::string(parsed.status().message()));
    }
    config = *std::move(parsed);
  } else {
    if (args.u_values.empty() || args.n_values.empty() || args.trials == 0) {
      return Usage("simulate needs --config or all of --k --epsilon --u --n --trials");
    }
    if (args.trials < 1) return Usage("--trials must be at least 1");
    for (int64_t n : args.n_values) {
      if (n < 1) return Usage("--n values must be at least 1");
    }
    config.k = args.k;
    config.epsilon = args.epsilon;
    if (!ParseSubsetSize(args.d, config.d)) {
      return Usage("--d must be an integer or \"auto\"");
    }
    config.u_values = args.u_values;
    config.n_values = args.n_values;
    config.trials = args.trials;
    config.master_seed = args.seed;
    auto dist = ldplab::ParseDistribution(args.distribution);
    if (!dist.ok()) return Usage(std::string(dist.status().message()));
    config.distribution = *std::move(dist);
    if (args.estimator == "raw") {
      config.estimator = ldplab::EstimatorKind::kRaw;
    } else if (args.estimator == "projected") {
      config.estimator = ldplab::EstimatorKind::kProjected;
    } else {
      return Usage("--estimator must be raw or projected");
    }
  }
  if (!ApplySeedOverride(config.master_seed)) {
    return Usage("LDPLAB_SEED must be an unsigned 64-bit integer");
  }
  if (absl::Status s = ldplab::ValidateConfig(config); !s.ok()) {
    return Domain(s);
  }
  double privatizations = 0.0;
  for (int64_t n : config.n_values) {
    privatizations += static_cast<double>(n) * static_cast<double>(config.trials);
  }
  if (int rc = CheckGuard(args.guard, privatizations); rc != kExitOk) return rc;

  auto report = ldplab::RunExperiment(config, args.workers);
  if (!report.ok()) return Domain(report.status());

  const std::string json = ldplab::RiskReportToJson(*report).dump(2) + "\n";
  if (args.out_path.empty()) {
    std::cout << json;
  } else if (!WriteFile(args.out_path, json)) {
    return Usage("cannot write " + args.out_path);
  }
  if (!args.csv_path.empty() &&
      !WriteFile(args.csv_path, ldplab::RiskReportToCsv(*report))) {
    return Usage("cannot write " + args.csv_path);
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string mechanism_path;
  double epsilon = 0.0;
};

int RunVerify(const VerifyArgs& args) {
  std::string text;
  if (!ReadFile(args.mechanism_path, text)) {
    return Usage("cannot read mechanism file " + args.mechanism_path);
  }
  auto mechanism = ldplab::ParseMechanismCsv(text);
  if (!mechanism.ok()) {
    return Usage(args.mechanism_path + ": " +
                 std::string(mechanism.status().message()));
  }
  if (absl::Status s = ldplab::ValidatePrivacyParameter(args.epsilon); !s.ok()) {
    return Domain(s);
  }
  const ldplab::LdpVerification verification =
      ldplab::VerifyLdp(*mechanism, args.epsilon);
  auto extremal = ldplab::IsExtremal(*mechanism, args.epsilon);
  if (!extremal.ok()) return Domain(extremal.status());
  PrintJson(ldplab::VerificationToJson(*mechanism, args.epsilon, verification,
                                       *extremal));
  return kExitOk;
}

struct ScanArgs {
  int k = 0;
  double epsilon = 0.0;
  std::string d = "auto";
  int64_t n = 0;
  double u = 2.0;
  int num_distributions = 0;
  int64_t trials = 1000;
  uint64_t seed = 0;
  int workers = 1;
  GuardOptions guard;
};

int RunScan(const ScanArgs& args) {
  ldplab::ScanConfig config;
  config.k = args.k;
  config.epsilon = args.epsilon;
  if (!ParseSubsetSize(args.d, config.d)) {
    return Usage("--d must be an integer or \"auto\"");
  }
  if (args.num_distributions < 0) {
    return Usage("--num-distributions must be nonnegative");
  }
  if (args.trials < 1) return Usage("--trials must be at least 1");
  if (args.n < 1) return Usage("--n must be at least 1");
  config.n = args.n;
  config.u = args.u;
  config.num_distributions = args.num_distributions;
  config.trials = args.trials;
  config.master_seed = args.seed;
  if (!ApplySeedOverride(config.master_seed)) {
    return Usage("LDPLAB_SEED must be an unsigned 64-bit integer");
  }
  if (config.u != 2.0) {
    const double inputs = 1.0 + args.k + args.num_distributions;
    const double privatizations =
        inputs * static_cast<double>(args.n) * static_cast<double>(args.trials);
    if (int rc = CheckGuard(args.guard, privatizations); rc != kExitOk) {
      return rc;
    }
  }
  auto report = ldplab::WorstCaseScan(config, args.workers);
  if (!report.ok()) return Domain(report.status());
  PrintJson(ldplab::ScanReportToJson(*report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ldplab: subset-selection local privacy mechanism, estimator, risk "
      "bounds and Monte Carlo verification"};
  app.require_subcommand(1, 1);

  BoundArgs bound;
  CLI::App* bound_cmd = app.add_subcommand(
      "bound", "print d*, M(k, epsilon), C_u and the minimax lower bound");
  bound_cmd->add_option("--k", bound.k, kKHelp)->required();
  bound_cmd->add_option("--epsilon", bound.epsilon, kEpsilonHelp)->required();
  bound_cmd->add_option("--u", bound.u,
                        "loss exponent u (dimensionless), u >= 1")
      ->required();
  bound_cmd->add_option("--n", bound.n, "number of samples n (count), n >= 1")
      ->required();

  MechanismArgs mech;
  CLI::App* mech_cmd = app.add_subcommand(
      "mechanism", "describe the subset-selection scheme Q_{k,epsilon,d}");
  mech_cmd->add_option("--k", mech.k, kKHelp)->required();
  mech_cmd->add_option("--epsilon", mech.epsilon, kEpsilonHelp)->required();
  mech_cmd->add_option("--d", mech.d,
                       "subset size d (symbols), 1 <= d <= k-1, or \"auto\" "
                       "for the optimal d*")
      ->capture_default_str();

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "run a Monte Carlo risk experiment and write its report");
  CLI::Option* config_opt = sim_cmd->add_option(
      "--config", sim.config_path,
      "experiment config file (flat key = value text; see README)");
  std::vector<CLI::Option*> inline_opts = {
      sim_cmd->add_option("--k", sim.k, kKHelp),
      sim_cmd->add_option("--epsilon", sim.epsilon, kEpsilonHelp),
      sim_cmd->add_option("--d", sim.d,
                          "subset size d (symbols) or \"auto\" for d*"),
      sim_cmd->add_option("--u", sim.u_values,
                          "comma list of loss exponents u (dimensionless), "
                          "each in (0, 2]")
          ->delimiter(','),
      sim_cmd->add_option("--n", sim.n_values,
                          "comma list of sample counts n (count), each >= 1")
          ->delimiter(','),
      sim_cmd->add_option("--trials", sim.trials,
                          "independent trials per (n, u) cell (count), >= 1"),
      sim_cmd->add_option("--seed", sim.seed,
                          "master seed (unsigned 64-bit integer); "
                          "LDPLAB_SEED overrides it"),
      sim_cmd->add_option("--distribution", sim.distribution,
                          "input distribution: uniform | point_mass:<i> | "
                          "dirichlet:<alpha> | explicit:<p0>,<p1>,... "
                          "(probabilities)"),
      sim_cmd->add_option("--estimator", sim.estimator, "raw | projected"),
  };
  for (CLI::Option* opt : inline_opts) config_opt->excludes(opt);
  sim_cmd->add_option("--out", sim.out_path,
                      "write the JSON report here instead of standard output");
  sim_cmd->add_option("--csv", sim.csv_path,
                      "also write per-cell CSV rows "
                      "(n,u,empirical_risk,std_error,asymptote,lower_bound,"
                      "ratio) here");
  sim_cmd->add_option("--workers", sim.workers,
                      "worker threads (count); results do not depend on it")
      ->capture_default_str();
  AddGuardOptions(sim_cmd, sim.guard);

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check epsilon-LDP and extremality of a mechanism CSV file");
  verify_cmd->add_option("--mechanism", verify.mechanism_path,
                         "mechanism CSV: header \"L,k\" then L rows of k "
                         "probabilities Q(j|v)")
      ->required();
  verify_cmd->add_option("--epsilon", verify.epsilon, kEpsilonHelp)->required();

  ScanArgs scan;
  CLI::App* scan_cmd = app.add_subcommand(
      "scan", "compare the risk at uniform, point-mass and random inputs");
  scan_cmd->add_option("--k", scan.k, kKHelp)->required();
  scan_cmd->add_option("--epsilon", scan.epsilon, kEpsilonHelp)->required();
  scan_cmd->add_option("--d", scan.d,
                       "subset size d (symbols) or \"auto\" for d*")
      ->capture_default_str();
  scan_cmd->add_option("--n", scan.n, "number of samples n (count), n >= 1")
      ->required();
  scan_cmd->add_option("--u", scan.u,
                       "loss exponent u (dimensionless) in (0, 2]; u = 2 uses "
                       "the exact risk formula")
      ->capture_default_str();
  scan_cmd->add_option("--num-distributions", scan.num_distributions,
                       "random Dirichlet(1,...,1) inputs to add (count), >= 0")
      ->capture_default_str();
  scan_cmd->add_option("--trials", scan.trials,
                       "trials per input when u != 2 (count), >= 1")
      ->capture_default_str();
  scan_cmd->add_option("--seed", scan.seed,
                       "master seed (unsigned 64-bit integer); LDPLAB_SEED "
                       "overrides it");
  scan_cmd->add_option("--workers", scan.workers,
                       "worker threads (count); results do not depend on it")
      ->capture_default_str();
  AddGuardOptions(scan_cmd, scan.guard);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*bound_cmd) return RunBound(bound);
  if (*mech_cmd) return RunMechanism(mech);
  if (*sim_cmd) return RunSimulate(sim);
  if (*verify_cmd) return RunVerify(verify);
  if (*scan_cmd) return RunScan(scan);
  return kExitUsage;
}
