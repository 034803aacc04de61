// Copyright 2026 the photonloop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "photonloop/photonloop.hpp"

// photonloop command line front end.
//
// Exit codes: 0 on success, 1 for configuration and usage problems,
// 2 for numerical failures (inadequate cutoff, non-finite results).

namespace {

using photonloop::DensityOperator;
using photonloop::DetectorModel;
using photonloop::FockVector;
using photonloop::StateSpec;

struct SubtractArgs {
  std::string state;
  double t = 0.9;
  double eta = 1.0;
  int steps = 1;
  Eigen::Index cutoff = 40;
  std::optional<std::string> fidelity_target;
};

struct DistillArgs {
  std::string state;
  double t = 0.9;
  double eta = 1.0;
  int steps = 1;
  Eigen::Index cutoff = 22;
};

void print_metric(const std::string& name, double value) {
  std::cout << name << " = " << photonloop::format_number(value) << '\n';
}

int run_subtract(const SubtractArgs& args) {
  const StateSpec spec = photonloop::parse_state_spec(args.state);
  if (spec.modes() != 1) {
    throw photonloop::validation_error("state",
                                       "subtract needs a one-mode state");
  }
  const DensityOperator<double> input = photonloop::build_state(
      spec, args.cutoff, photonloop::kSweepTailTolerance);
  std::optional<FockVector<double>> target;
  if (args.fidelity_target) {
    const StateSpec tspec = photonloop::parse_state_spec(*args.fidelity_target);
    if (tspec.modes() != 1 || !tspec.pure()) {
      throw photonloop::validation_error("fidelity_target",
                                         "must be a pure one-mode state");
    }
    target = photonloop::build_pure_state(tspec, args.cutoff,
                                          photonloop::kSweepTailTolerance);
  }

  const auto result = photonloop::adaptive_subtraction(
      input, args.t, DetectorModel<double>{args.eta}, args.steps);
  print_metric("p_success", result.p_success);
  if (!result.rho_out) {
    std::cout << "degenerate = true\n";
    return 0;
  }
  print_metric("wigner_origin", photonloop::wigner_origin(*result.rho_out));
  print_metric("purity", photonloop::purity(*result.rho_out));
  if (target) {
    print_metric("fidelity", photonloop::fidelity(*result.rho_out, *target));
  }
  return 0;
}

int run_distill(const DistillArgs& args) {
  const StateSpec spec = photonloop::parse_state_spec(args.state);
  if (spec.modes() != 2) {
    throw photonloop::validation_error(
        "state", "distill needs a two-mode state such as tmsv:SDB");
  }
  const DensityOperator<double> input = photonloop::build_state(
      spec, args.cutoff, photonloop::kSweepTailTolerance);

  const auto result = photonloop::distill(
      input, args.t, DetectorModel<double>{args.eta}, args.steps);
  print_metric("p_success", result.p_success);
  print_metric("log_negativity_in", result.log_negativity_in);
  if (!result.rho_out) {
    std::cout << "degenerate = true\n";
    return 0;
  }
  print_metric("log_negativity_out", result.log_negativity_out);
  print_metric("purity", photonloop::purity(*result.rho_out));
  return 0;
}

int run_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw photonloop::validation_error("config",
                                       "cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();

  const photonloop::SweepConfig config =
      photonloop::parse_config(text.str());
  const std::vector<photonloop::SweepRecord> records =
      photonloop::run_sweep(config);

  // Binary mode keeps the line endings LF everywhere.
  std::ofstream out(config.output, std::ios::binary);
  if (!out) {
    throw photonloop::validation_error(
        "output", "cannot open '" + config.output + "' for writing");
  }
  photonloop::write_csv(records, out);
  out.flush();
  if (!out) {
    throw photonloop::validation_error(
        "output", "failed while writing '" + config.output + "'");
  }
  std::cout << "wrote " << records.size() << " records to " << config.output
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loop-based single photon subtraction simulator"};
  app.set_version_flag("--version",
                       std::string("photonloop ") + PHOTONLOOP_VERSION);
  app.require_subcommand(0, 1);

  SubtractArgs subtract;
  CLI::App* sub = app.add_subcommand(
      "subtract", "adaptive single-mode subtraction at one operating point");
  sub->add_option("--state", subtract.state,
                  "input state (vacuum, coherent:RE[,IM], cat+:A, cat-:A, "
                  "sqz:SDB[,ADB])")
      ->required();
  sub->add_option("--t", subtract.t, "tap transmissivity in [0, 1)")
      ->required();
  sub->add_option("--eta", subtract.eta, "detector efficiency in (0, 1]")
      ->capture_default_str();
  sub->add_option("--steps", subtract.steps, "round trip budget N >= 1")
      ->capture_default_str();
  sub->add_option("--cutoff", subtract.cutoff, "Fock cutoff dimension")
      ->capture_default_str();
  sub->add_option("--fidelity-target", subtract.fidelity_target,
                  "pure state to compare the output against");

  DistillArgs distill;
  CLI::App* dis = app.add_subcommand(
      "distill", "two-arm subtraction on a two-mode squeezed pair");
  dis->add_option("--state", distill.state, "input state (tmsv:SDB)")
      ->required();
  dis->add_option("--t", distill.t, "tap transmissivity in [0, 1)")
      ->required();
  dis->add_option("--eta", distill.eta, "detector efficiency in (0, 1]")
      ->capture_default_str();
  dis->add_option("--steps", distill.steps, "round trip budget per arm, N >= 1")
      ->capture_default_str();
  dis->add_option("--cutoff", distill.cutoff, "Fock cutoff dimension")
      ->capture_default_str();

  std::string config_path;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "evaluate a parameter grid from a config file");
  sweep->add_option("--config", config_path, "path to a key = value config")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (sub->parsed()) {
      return run_subtract(subtract);
    }
    if (dis->parsed()) {
      return run_distill(distill);
    }
    if (sweep->parsed()) {
      return run_sweep_file(config_path);
    }
    std::cout << app.help();
    return 1;
  } catch (const photonloop::parse_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const photonloop::validation_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const photonloop::truncation_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  }
}
