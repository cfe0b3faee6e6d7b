#pragma once

// Subcommand dispatch and CSV emission for the collideq command-line tool.
// Every CSV starts with a `# config_hash=<hex> seed=<u64>` comment line, then a
// header row; numbers use 12 significant digits; lines end in LF.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "collideq/collider.hpp"
#include "collideq/config.hpp"
#include "collideq/expharness.hpp"
#include "collideq/thermoprobe.hpp"

namespace collideq {

inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvTable {
 public:
  CsvTable(std::vector<std::string> columns, std::vector<std::string> comments)
      : columns_(std::move(columns)), comments_(std::move(comments)) {}

  template <class... T>
  void row(const T&... cells) {
    std::vector<std::string> r;
    (r.push_back(cell(cells)), ...);
    require(r.size() == columns_.size(), "CsvTable: row width does not match header");
    rows_.push_back(std::move(r));
  }

  std::string str() const {
    std::string out;
    for (const auto& c : comments_) out += "# " + c + "\n";
    out += join(columns_);
    for (const auto& r : rows_) out += join(r);
    return out;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), "cannot open " + path.string() + " for writing");
    f << str();
    require(static_cast<bool>(f), "failed writing " + path.string());
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

  static std::string join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    return s + "\n";
  }

  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string provenance(const RunConfig& cfg) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "config_hash=%016" PRIx64 " seed=%" PRIu64, config_hash(cfg), cfg.env.seed);
  return buf;
}

inline CsvTable trajectory_table(const Trajectory& traj, const RunConfig& cfg) {
  CsvTable t({"n", "delta_U", "delta_Q", "work", "entropy_S", "delta_S", "landauer_gap", "cum_gap", "mutual_info",
              "blochx", "blochy", "blochz"},
             {provenance(cfg)});
  const LandauerSeries ls = landauer_series(traj, traj.spec.model.beta);
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const StepRecord& r = traj.records[k];
    t.row(r.n, r.delta_U, r.delta_Q, r.work, r.entropy_S, r.delta_S, r.landauer_gap, ls.cumulative[k], r.mutual_info_pre,
          r.bloch[0], r.bloch[1], r.bloch[2]);
  }
  return t;
}

inline CsvTable pairs_table(const BLPResult& blp, const RunConfig& cfg, std::vector<std::string> extra = {}) {
  extra.insert(extra.begin(), provenance(cfg));
  CsvTable t({"n", "trace_distance", "sigma_n"}, std::move(extra));
  for (std::size_t n = 0; n < blp.distances.size(); ++n)
    t.row(n, blp.distances[n], n == 0 ? 0.0 : blp.increments[n - 1]);
  return t;
}

inline CsvTable sweep_table(const SweepResult& sweep, const RunConfig& cfg) {
  CsvTable t({"axis", "replica", "sigma_r", "mean_D"}, {provenance(cfg), "axis=sigma_beta"});
  for (const SweepRow& r : sweep.rows) t.row(r.axis, r.replica, r.sigma_r, r.mean_D);
  return t;
}

inline CsvTable jee_table(const JeeSeries& s, const RunConfig& cfg) {
  CsvTable t({"n", "trace_distance", "sigma_n", "landauer_gap", "cum_gap", "neg_landauer_gap", "mutual_info",
              "delta_mutual_info"},
             {provenance(cfg), "j_ee=" + format_number(s.j_ee)});
  t.row(std::size_t{0}, s.distances[0], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
  for (std::size_t k = 0; k < s.sigma.size(); ++k)
    t.row(k + 1, s.distances[k + 1], s.sigma[k], s.gaps[k], s.cumulative_gaps[k], -s.gaps[k], s.mutual_info[k],
          s.delta_mutual_info[k]);
  return t;
}

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"markov", "cell", "homogenize", "noise-sweep", "jee-sweep", "blp", "synchrony"};
  return names;
}

inline std::size_t default_steps(std::string_view subcommand) {
  if (subcommand == "jee-sweep" || subcommand == "blp" || subcommand == "synchrony") return 100;
  return 300;
}

/// Runs one subcommand, writing CSVs under cfg.output_dir and a one-line
/// summary to `summary`. Returns the process exit status.
inline int dispatch(std::string_view subcommand, const RunConfig& cfg, std::ostream& summary,
                    std::size_t workers = default_worker_count()) {
  namespace fs = std::filesystem;
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const std::size_t steps = cfg.n_steps.value_or(default_steps(subcommand));
  std::ostringstream line;
  line << subcommand << ":";

  if (subcommand == "markov" || subcommand == "cell") {
    const Trajectory traj = run_trajectory(cfg.run_spec(subcommand == "markov" ? Engine::markov : Engine::cell), steps);
    trajectory_table(traj, cfg).write(out / "trajectory.csv");
    const LandauerSeries ls = landauer_series(traj, cfg.model.beta);
    line << " steps=" << steps << " final_entropy=" << format_number(traj.records.back().entropy_S)
         << " violations=" << ls.violations.size() << " cumulative_violations=" << ls.cumulative_violations.size();
  } else if (subcommand == "homogenize") {
    const HomogenizationSeries h = homogenization_experiment(cfg.run_spec(cfg.engine), steps);
    trajectory_table(h.trajectory, cfg).write(out / "trajectory.csv");
    CsvTable t({"n", "trace_distance", "fidelity"}, {provenance(cfg), "fidelity=squared Uhlmann"});
    bool monotone = true;
    for (std::size_t n = 0; n < h.distances.size(); ++n) {
      t.row(n, h.distances[n], h.fidelities[n]);
      if (n > 0 && h.distances[n] > h.distances[n - 1] + tol::spectral) monotone = false;
    }
    t.write(out / "homogenization.csv");
    line << " steps=" << steps << " final_D=" << format_number(h.distances.back())
         << " final_F=" << format_number(h.fidelities.back()) << " monotone=" << (monotone ? "yes" : "no");
  } else if (subcommand == "noise-sweep") {
    const NoiseSweepOptions opt{steps, cfg.tail_fraction, workers};
    const RunSpec base = cfg.run_spec(cfg.engine);
    const SweepResult sweep = noise_sweep(base, cfg.sigma_beta_grid, cfg.replicas, opt);
    sweep_table(sweep, cfg).write(out / "sweep.csv");

    std::vector<SpreadRow> spread;
    if (cfg.omega_s_grid.empty()) {
      const auto cloud = sweep.cloud();
      const double cs = cfg.cell_size > 0.0 ? cfg.cell_size : default_cell_size(cloud);
      spread.push_back({cfg.model.omega_s, cfg.model.omega_e, cloud_area(cloud, cs)});
    } else {
      spread = spread_sweep(base, cfg.omega_s_grid, cfg.omega_e_grid, cfg.sigma_beta_grid, cfg.replicas, cfg.cell_size, opt);
    }
    CsvTable area({"omega_s", "omega_e", "area"}, {provenance(cfg)});
    for (const SpreadRow& r : spread) area.row(r.omega_s, r.omega_e, r.area);
    area.write(out / "area.csv");

    const auto means = sweep.mean_sigma_r();
    for (std::size_t p = 0; p < means.size(); ++p)
      line << " sigma_beta=" << format_number(sweep.axis[p]) << ":mean_sigma_r=" << format_number(means[p]);
    if (cfg.omega_s_grid.empty()) line << " area=" << format_number(spread.front().area);
  } else if (subcommand == "jee-sweep") {
    const auto series = jee_sweep(cfg.run_spec(Engine::cell), cfg.jee_values, steps, workers);
    CsvTable summary_table({"j_ee", "blp_measure", "violations", "min_cum_gap"}, {provenance(cfg)});
    for (std::size_t k = 0; k < series.size(); ++k) {
      const JeeSeries& s = series[k];
      jee_table(s, cfg).write(out / ("jee_" + std::to_string(k) + ".csv"));
      const double min_cum = *std::min_element(s.cumulative_gaps.begin(), s.cumulative_gaps.end());
      summary_table.row(s.j_ee, s.blp, s.violations, min_cum);
      line << " j_ee=" << format_number(s.j_ee) << ":blp=" << format_number(s.blp) << ",violations=" << s.violations;
    }
    summary_table.write(out / "jee_summary.csv");
  } else if (subcommand == "blp") {
    const BLPSearch search = blp_maximize(cfg.run_spec(Engine::cell), steps, cfg.grid_azimuth, cfg.grid_polar, workers);
    CsvTable grid({"theta", "phi", "measure"}, {provenance(cfg)});
    for (const BLPGridPoint& g : search.grid) grid.row(g.state.theta, g.state.phi, g.measure);
    grid.write(out / "blp_grid.csv");
    pairs_table(search.result, cfg,
                {"pair=bloch(" + format_number(search.best.state.theta) + "," + format_number(search.best.state.phi) +
                 ") vs antipode"})
        .write(out / "pairs.csv");
    line << " measure=" << format_number(search.result.measure) << " pair=bloch("
         << format_number(search.best.state.theta) << "," << format_number(search.best.state.phi) << ")/antipode"
         << " j_ee=" << format_number(cfg.model.j_ee);
  } else if (subcommand == "synchrony") {
    const double jee[] = {cfg.model.j_ee};
    const JeeSeries s = jee_sweep(cfg.run_spec(Engine::cell), jee, steps, workers).front();
    const SynchronyReport rep = synchrony_report(s);
    pairs_table(blp_from_distances(s.distances), cfg).write(out / "pairs.csv");
    CsvTable t({"n", "sigma_n", "neg_landauer_gap", "delta_mutual_info", "co_occurrence"}, {provenance(cfg)});
    std::size_t c = 0;
    for (std::size_t k = 0; k < s.sigma.size(); ++k) {
      const bool co = c < rep.co_occurrences.size() && rep.co_occurrences[c] == k + 1;
      if (co) ++c;
      t.row(k + 1, s.sigma[k], -s.gaps[k], s.delta_mutual_info[k], co ? 1 : 0);
    }
    t.write(out / "synchrony.csv");
    auto corr = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("undefined"); };
    line << " corr(sigma,-g)=" << corr(rep.sigma_vs_reversed_gap) << " corr(sigma,dI)=" << corr(rep.sigma_vs_delta_mi)
         << " corr(-g,dI)=" << corr(rep.reversed_gap_vs_delta_mi) << " co_occurrences=" << rep.co_occurrences.size()
         << " violations=" << rep.genuine_violations.size() << " unexplained=" << rep.unexplained_violations.size();
  } else {
    throw precondition_error("unknown subcommand '" + std::string(subcommand) + "'");
  }
  summary << line.str() << "\n";
  return 0;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot read config file " + path.string());
  std::ostringstream text;
  text << f.rdbuf();
  return parse_config(text.str());
}

}  // namespace collideq
