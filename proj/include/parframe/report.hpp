#pragma once

#include <string>
#include <vector>

#include "parframe/config.hpp"
#include "parframe/frame.hpp"
#include "parframe/scenarios.hpp"

namespace parframe {

struct PairDefectSummary {
  int a = 0;  // 0-based
  int b = 0;
  bool cartan = false;
  bool trivial = false;
  double max_commutator = 0.0;
  double max_fd = 0.0;
  double max_discrepancy = 0.0;
};

/// Runtime invariant checks of one run. The convergence check compares the
/// endpoint against dt/2 and dt/4 refinements: the Richardson ratio must sit
/// in the order-2 window [3.5, 4.5] and the error estimate
/// |U_dt(T) - U_dt/2(T)|/3 must stay below 1e-3.
struct InvariantSummary {
  double unitarity_max = 0.0;
  double horizontal_residual_max = 0.0;
  double frame_orthogonality_max = 0.0;
  double convergence_ratio = 0.0;
  double convergence_error_estimate = 0.0;
  bool unitarity_pass = false;
  bool horizontality_pass = false;
  bool orthogonality_pass = false;
  bool convergence_pass = false;

  bool all_pass() const {
    return unitarity_pass && horizontality_pass && orthogonality_pass &&
           convergence_pass;
  }
  std::string first_failure() const;
};

struct RunReport {
  RunConfig config;
  std::string scenario_name;
  double dt_effective = 0.0;
  long grid_points = 0;
  std::vector<PairDefectSummary> defects;
  bool has_holonomy = false;
  HolonomyResult holonomy;
  bool has_nonlinearity = false;
  double nonlinearity_value = 0.0;
  InvariantSummary invariants;
  double wall_seconds = 0.0;  // reported on stdout only, never in files
};

struct OutputOptions {
  std::string out_dir = ".";
  std::string stem = "run";
  bool write_csv = true;
  bool write_json = true;
};

/// Execute the configured pipeline (scenario -> transport -> frames/defects ->
/// holonomy) and emit the frame CSV, defect CSV and summary document.
/// Outputs are byte-identical across repeated runs of the same config.
RunReport run(const RunConfig& config, const OutputOptions& options);

/// Serialize the report to the summary JSON document text.
std::string summary_document(const RunReport& report);

}  // namespace parframe
