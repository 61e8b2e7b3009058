// grasq — experiment driver.
//
//   grasq run <config...> [--out DIR] [--format csv,json,svg] [--jobs N]
//   grasq validate <config>
//   grasq list-kinds
//
// Exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
// 3 internal error.
#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grasq/cli/report.hpp"

namespace {

std::vector<std::string> split_formats(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct RunOutcome {
  int exit_code = 0;   // worst severity seen
  std::string log;
};

RunOutcome run_one(const std::string& config, const std::string& out_dir,
                   const std::vector<std::string>& formats) {
  RunOutcome oc;
  std::ostringstream log;
  try {
    const grasq::ExperimentDescriptor desc = grasq::config_load(config);
    const grasq::RunReport report = grasq::run_experiment(desc);
    const auto written = grasq::emit_report(report, out_dir, formats);
    for (const auto& c : report.checks)
      log << (c.pass ? "pass" : "FAIL") << "  " << desc.name << "/" << c.name
          << "  value=" << c.value << "  bound=" << c.bound << "\n";
    for (const auto& p : written) log << "wrote " << p << "\n";
    if (!report.all_pass()) oc.exit_code = 1;
  } catch (const grasq::config_error& e) {
    log << "configuration error: " << e.what() << "\n";
    oc.exit_code = 2;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    oc.exit_code = 3;
  }
  oc.log = log.str();
  return oc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grasq: Grassmann stochastic analysis experiment driver"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out_dir = ".";
  std::string format_csv = "csv,json";
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "run experiment configs");
  run->add_option("config", configs, "experiment config files")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--format", format_csv, "comma list of csv,json,svg");
  run->add_option("--jobs", jobs, "parallel experiments")->check(CLI::PositiveNumber);

  std::string val_config;
  CLI::App* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", val_config, "experiment config file")->required();

  CLI::App* list = app.add_subcommand("list-kinds", "list experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& k : grasq::cli_detail::kind_table())
      std::printf("%-18s %s\n", k.kind, k.doc);
    return 0;
  }

  if (validate->parsed()) {
    try {
      const grasq::ExperimentDescriptor desc = grasq::config_load(val_config);
      grasq::validate_descriptor(desc);
      std::printf("valid: %s (kind %s)\n", val_config.c_str(), desc.kind.c_str());
      return 0;
    } catch (const grasq::config_error& e) {
      std::fprintf(stderr, "configuration error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "internal error: %s\n", e.what());
      return 3;
    }
  }

  // run
  const std::vector<std::string> formats = split_formats(format_csv);
  std::vector<RunOutcome> outcomes(configs.size());
  if (jobs <= 1 || configs.size() <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i)
      outcomes[i] = run_one(configs[i], out_dir, formats);
  } else {
    // bounded pool of async workers; report assembly stays serialized below
    std::vector<std::future<RunOutcome>> futs(configs.size());
    std::size_t next = 0, active_base = 0;
    while (active_base < configs.size()) {
      const std::size_t batch_end =
          std::min(configs.size(), active_base + static_cast<std::size_t>(jobs));
      for (next = active_base; next < batch_end; ++next)
        futs[next] = std::async(std::launch::async, run_one, configs[next], out_dir,
                                formats);
      for (std::size_t i = active_base; i < batch_end; ++i)
        outcomes[i] = futs[i].get();
      active_base = batch_end;
    }
  }
  int rc = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::fputs(outcomes[i].log.c_str(), stdout);
    rc = std::max(rc, outcomes[i].exit_code);
  }
  return rc;
}
