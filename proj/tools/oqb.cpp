// Copyright 2026 The oqb Authors
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

// oqb run <preset|config> | oqb sweep <config> | oqb --list-presets

#include "oqb/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
};

oqb::RunConfig load(const std::string& target) {
  if (oqb::find_preset(target) || !std::filesystem::exists(target)) {
    oqb::RunConfig cfg;
    oqb::set_config_key(cfg, "model", target);
    cfg.output = "out/" + target;
    return cfg;
  }
  return oqb::parse_config_file(target);
}

void apply_flags(oqb::RunConfig& cfg, const Flags& f) {
  if (f.dt) cfg.overrides.emplace_back("dt", oqb::format_number(*f.dt));
  if (f.t_max) cfg.overrides.emplace_back("t_max", oqb::format_number(*f.t_max));
  if (f.out) cfg.output = *f.out;
  if (f.workers) cfg.workers = std::max(1u, *f.workers);
  if (f.seed) cfg.seed = *f.seed;
}

void print_summary(const std::vector<oqb::ScenarioResult>& results) {
  std::cout << oqb::kSummaryHeader << '\n';
  for (const auto& r : results) oqb::write_summary_row(std::cout, r.summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open quantum battery charging: stored work, power and speed-limit bounds"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-presets", list, "List preset names and exit");

  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dt", flags.dt, "Integration step (units of 1/omega0)");
    sub->add_option("--tmax", flags.t_max, "Final time (units of 1/omega0)");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--workers", flags.workers, "Concurrent trajectories");
    sub->add_option("--seed", flags.seed, "Seed for random initial states");
  };

  std::string target;
  auto* run_cmd = app.add_subcommand("run", "Run a preset or a config file");
  run_cmd->add_option("target", target, "Preset name or config path")->required();
  add_common(run_cmd);

  std::string sweep_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the sweep grid of a config file");
  sweep_cmd->add_option("config", sweep_path, "Config path with sweep.<key> entries")->required()->check(CLI::ExistingFile);
  add_common(sweep_cmd);

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& p : oqb::presets()) std::cout << p.name << "\t" << p.description << '\n';
    return 0;
  }
  try {
    if (run_cmd->parsed()) {
      oqb::RunConfig cfg = load(target);
      apply_flags(cfg, flags);
      const oqb::RunOutput out = oqb::run(cfg);
      print_summary(out.results);
      std::cerr << "wrote " << out.files.size() << " files to " << cfg.output << '\n';
      return 0;
    }
    if (sweep_cmd->parsed()) {
      oqb::RunConfig cfg = oqb::parse_config_file(sweep_path);
      apply_flags(cfg, flags);
      const oqb::SweepOutput out = oqb::sweep(cfg);
      print_summary(out.results);
      std::cerr << "wrote " << out.files.size() << " files to " << cfg.output << '\n';
      return 0;
    }
    std::cout << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
