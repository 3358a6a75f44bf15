#include "parframe/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

namespace parframe {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

void write_frame_csv(const std::filesystem::path& path,
                     const std::vector<TransportState>& states,
                     const std::vector<std::vector<FrameVector>>& frames,
                     int d) {
  auto out = open_output(path);
  out << "t,a";
  for (int j = 1; j <= d; ++j) out << ",e_" << j;
  out << "\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (const FrameVector& v : frames[k]) {
      out << fmt17(states[k].t) << ',' << (v.a + 1);
      for (int j = 0; j < d; ++j) out << ',' << fmt17(v.e[j]);
      out << "\n";
    }
  }
}

void write_defect_csv(const std::filesystem::path& path,
                      const std::vector<DefectSeries>& series) {
  auto out = open_output(path);
  out << "t,a,b,defect_commutator,defect_fd\n";
  for (const DefectSeries& s : series) {
    for (Eigen::Index k = 0; k < s.times.size(); ++k) {
      out << fmt17(s.times[k]) << ',' << (s.a + 1) << ',' << (s.b + 1) << ','
          << fmt17(s.defect_commutator[k]) << ',' << fmt17(s.defect_fd[k])
          << "\n";
    }
  }
}

double endpoint_difference(const Scenario& scenario, double dt_a, double dt_b) {
  IntegratorConfig ca = scenario.integrator;
  ca.dt = dt_a;
  IntegratorConfig cb = scenario.integrator;
  cb.dt = dt_b;
  const auto ra = evolve(scenario.initial_frame, scenario.path, ca);
  const auto rb = evolve(scenario.initial_frame, scenario.path, cb);
  return (ra.back().U - rb.back().U).cwiseAbs().maxCoeff();
}

}  // namespace

std::string InvariantSummary::first_failure() const {
  if (!unitarity_pass) return "unitarity";
  if (!horizontality_pass) return "horizontality";
  if (!orthogonality_pass) return "frame_orthogonality";
  if (!convergence_pass) return "convergence";
  return "";
}

RunReport run(const RunConfig& config, const OutputOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();

  const Scenario scenario = make_scenario(config);
  const GeneratorBasis& basis = scenario.basis;
  const int d = basis.dim();

  const auto states =
      evolve(scenario.initial_frame, scenario.path, scenario.integrator);

  RunReport report;
  report.config = config;
  report.scenario_name = scenario.name;
  report.dt_effective = scenario.integrator.dt;
  report.grid_points = static_cast<long>(states.size());

  // Per-state diagnostics and the full adjoint frame.
  std::vector<std::vector<FrameVector>> frames;
  frames.reserve(states.size());
  double unit_max = 0.0, horiz_max = 0.0, orth_max = 0.0;
  for (const TransportState& s : states) {
    unit_max = std::max(unit_max, s.unitarity_defect);
    horiz_max = std::max(horiz_max, s.horizontal_residual);
    frames.push_back(adjoint_frame(basis, s.U, s.t));
    RMatrix R(d, d);
    for (int a = 0; a < d; ++a) R.row(a) = frames.back()[a].e;
    orth_max = std::max(
        orth_max,
        (R * R.transpose() - RMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  report.invariants.unitarity_max = unit_max;
  report.invariants.horizontal_residual_max = horiz_max;
  report.invariants.frame_orthogonality_max = orth_max;
  report.invariants.unitarity_pass = unit_max <= 1e-10;
  report.invariants.horizontality_pass = horiz_max <= 1e-12;
  report.invariants.orthogonality_pass = orth_max <= 1e-10;

  // Convergence: dt vs dt/2 vs dt/4 endpoint comparison.
  const double dt = scenario.integrator.dt;
  const double diff_coarse = endpoint_difference(scenario, dt, dt / 2.0);
  const double diff_fine = endpoint_difference(scenario, dt / 2.0, dt / 4.0);
  report.invariants.convergence_error_estimate = diff_coarse / 3.0;
  if (diff_coarse <= 1e-12 && diff_fine <= 1e-12) {
    report.invariants.convergence_ratio = 4.0;  // at the roundoff floor
    report.invariants.convergence_pass = true;
  } else {
    const double ratio = diff_coarse / diff_fine;
    report.invariants.convergence_ratio = ratio;
    report.invariants.convergence_pass =
        ratio >= 3.5 && ratio <= 4.5 &&
        report.invariants.convergence_error_estimate <= 1e-3;
  }

  // Defect table for the selected pairs.
  const auto cartan = cartan_pairs(basis);
  std::set<std::pair<int, int>> cartan_set;
  std::set<std::pair<int, int>> trivial_set;
  for (const CartanPair& p : cartan) {
    cartan_set.insert({p.a, p.b});
    if (p.trivial) trivial_set.insert({p.a, p.b});
  }
  std::vector<DefectSeries> all_series;
  for (const auto& [a, b] : select_pairs(config.pairs, basis)) {
    DefectSeries s = defect_series(basis, states, scenario.path, a, b);
    PairDefectSummary row;
    row.a = a;
    row.b = b;
    row.cartan = cartan_set.count({a, b}) > 0;
    row.trivial = trivial_set.count({a, b}) > 0;
    row.max_commutator = s.max_abs_commutator;
    row.max_fd = s.max_abs_fd;
    row.max_discrepancy = s.max_abs_discrepancy;
    report.defects.push_back(row);
    all_series.push_back(std::move(s));
  }

  if (scenario.loop_flag) {
    report.has_holonomy = true;
    report.holonomy = holonomy(scenario, states);
  }
  if (!config.u_mix.empty()) {
    report.has_nonlinearity = true;
    const CMatrix mixer = make_mixer(config.u_mix, basis.n);
    report.nonlinearity_value =
        nonlinearity_defect(states, scenario.path, mixer);
  }

  // Emit outputs.
  const std::filesystem::path dir(options.out_dir);
  std::filesystem::create_directories(dir);
  if (options.write_csv) {
    write_frame_csv(dir / (options.stem + "_frames.csv"), states, frames, d);
    write_defect_csv(dir / (options.stem + "_defects.csv"), all_series);
  }
  if (options.write_json) {
    auto out = open_output(dir / (options.stem + "_summary.json"));
    out << summary_document(report);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

std::string summary_document(const RunReport& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json cfg;
  for (const auto& [key, value] : report.config.echo()) cfg[key] = value;
  doc["config"] = cfg;
  doc["scenario"] = report.scenario_name;
  doc["dt_effective"] = report.dt_effective;
  doc["grid_points"] = report.grid_points;

  nlohmann::ordered_json defects = nlohmann::ordered_json::array();
  for (const PairDefectSummary& row : report.defects) {
    nlohmann::ordered_json item;
    item["a"] = row.a + 1;
    item["b"] = row.b + 1;
    item["cartan"] = row.cartan;
    item["trivial"] = row.trivial;
    item["max_defect_commutator"] = row.max_commutator;
    item["max_defect_fd"] = row.max_fd;
    item["max_discrepancy"] = row.max_discrepancy;
    defects.push_back(item);
  }
  doc["defects"] = defects;

  if (report.has_holonomy) {
    nlohmann::ordered_json h;
    h["phases"] = std::vector<double>(
        report.holonomy.phases.data(),
        report.holonomy.phases.data() + report.holonomy.phases.size());
    h["off_diagonal_leak"] = report.holonomy.off_diagonal_leak;
    doc["holonomy"] = h;
  }
  if (report.has_nonlinearity)
    doc["nonlinearity_defect"] = report.nonlinearity_value;

  nlohmann::ordered_json inv;
  inv["unitarity_max"] = report.invariants.unitarity_max;
  inv["unitarity_pass"] = report.invariants.unitarity_pass;
  inv["horizontal_residual_max"] = report.invariants.horizontal_residual_max;
  inv["horizontality_pass"] = report.invariants.horizontality_pass;
  inv["frame_orthogonality_max"] = report.invariants.frame_orthogonality_max;
  inv["frame_orthogonality_pass"] = report.invariants.orthogonality_pass;
  inv["convergence_ratio"] = report.invariants.convergence_ratio;
  inv["convergence_error_estimate"] =
      report.invariants.convergence_error_estimate;
  inv["convergence_pass"] = report.invariants.convergence_pass;
  inv["all_pass"] = report.invariants.all_pass();
  doc["invariants"] = inv;

  return doc.dump(2) + "\n";
}

}  // namespace parframe
