#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parframe/report.hpp"

namespace {

struct RunOutcome {
  std::string stem;
  int exit_code = 0;
  std::string message;
  parframe::RunReport report;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunOutcome execute(const std::string& config_path, const std::string& out_dir,
                   const std::string& pairs_override, bool write_csv,
                   bool write_json) {
  RunOutcome outcome;
  outcome.stem = std::filesystem::path(config_path).stem().string();
  try {
    parframe::RunConfig config = parframe::parse_config(read_file(config_path));
    if (!pairs_override.empty()) config.pairs = pairs_override;

    parframe::OutputOptions options;
    options.out_dir = out_dir;
    options.stem = outcome.stem;
    options.write_csv = write_csv;
    options.write_json = write_json;

    outcome.report = parframe::run(config, options);
    if (!outcome.report.invariants.all_pass()) {
      outcome.exit_code = 1;
      outcome.message =
          "invariant failed: " + outcome.report.invariants.first_failure();
    }
  } catch (const parframe::ConfigError& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("config error: ") + e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("error: ") + e.what();
  }
  return outcome;
}

void print_outcome(const RunOutcome& o) {
  const std::string tag = "[" + o.stem + "] ";
  if (o.exit_code == 2) {
    std::cerr << tag << o.message << "\n";
    return;
  }
  const parframe::RunReport& r = o.report;
  std::printf("%sscenario=%s grid_points=%ld dt_effective=%.17g\n", tag.c_str(),
              r.scenario_name.c_str(), r.grid_points, r.dt_effective);
  std::printf(
      "%sinvariants: unitarity=%.3e horizontality=%.3e orthogonality=%.3e "
      "convergence_ratio=%.3f error_estimate=%.3e -> %s\n",
      tag.c_str(), r.invariants.unitarity_max,
      r.invariants.horizontal_residual_max,
      r.invariants.frame_orthogonality_max, r.invariants.convergence_ratio,
      r.invariants.convergence_error_estimate,
      r.invariants.all_pass() ? "PASS" : "FAIL");
  for (const auto& row : r.defects)
    std::printf("%spair (%d,%d)%s: max|defect_commutator|=%.6e "
                "max|defect_fd|=%.6e\n",
                tag.c_str(), row.a + 1, row.b + 1,
                row.cartan ? (row.trivial ? " [cartan, trivial]" : " [cartan]")
                           : "",
                row.max_commutator, row.max_fd);
  if (r.has_holonomy) {
    std::printf("%sholonomy phases:", tag.c_str());
    for (Eigen::Index k = 0; k < r.holonomy.phases.size(); ++k)
      std::printf(" %.12g", r.holonomy.phases[k]);
    std::printf("  off_diagonal_leak=%.3e\n", r.holonomy.off_diagonal_leak);
  }
  if (r.has_nonlinearity)
    std::printf("%snonlinearity_defect=%.6e\n", tag.c_str(),
                r.nonlinearity_value);
  if (o.exit_code != 0) std::printf("%s%s\n", tag.c_str(), o.message.c_str());
  std::printf("%swall=%.3fs\n", tag.c_str(), r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parframe: parallel transport of unitary frames and their "
               "adjoint frame vectors"};
  app.require_subcommand(1);

  auto* run_cmd =
      app.add_subcommand("run", "execute a scenario from a config file");
  std::vector<std::string> config_files;
  std::string out_dir = ".";
  std::string pairs_override;
  std::string format = "csv,json";
  bool batch = false;
  run_cmd->add_option("config", config_files, "key=value config file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "output directory (default: .)");
  run_cmd->add_option("--pairs", pairs_override,
                      "pair selection: cartan | non-cartan | all | a,b;c,d");
  run_cmd->add_option("--format", format,
                      "comma list of outputs to write: csv,json");
  run_cmd->add_flag("--batch", batch,
                    "accept several configs and run them concurrently");

  CLI11_PARSE(app, argc, argv);

  const bool write_csv = format.find("csv") != std::string::npos;
  const bool write_json = format.find("json") != std::string::npos;
  if (!write_csv && !write_json) {
    std::cerr << "error: --format must mention csv and/or json\n";
    return 2;
  }
  if (config_files.size() > 1 && !batch) {
    std::cerr << "error: several config files require --batch\n";
    return 2;
  }

  std::vector<RunOutcome> outcomes;
  if (batch && config_files.size() > 1) {
    std::vector<std::future<RunOutcome>> futures;
    for (const auto& path : config_files)
      futures.push_back(std::async(std::launch::async, execute, path, out_dir,
                                   pairs_override, write_csv, write_json));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (const auto& path : config_files)
      outcomes.push_back(
          execute(path, out_dir, pairs_override, write_csv, write_json));
  }

  int exit_code = 0;
  for (const RunOutcome& o : outcomes) {
    print_outcome(o);
    exit_code = std::max(exit_code, o.exit_code);
  }
  return exit_code;
}
