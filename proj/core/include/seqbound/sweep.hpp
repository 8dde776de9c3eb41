#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqbound {

enum class SweepMode { symmetric, general, both };

// Configuration of a full bound sweep over mean photon numbers.
struct SweepConfig {
  double nbar_min = 0.1;
  double nbar_max = 2.0;
  double nbar_step = 0.1;
  int planes_per_edge = 141;  // prior lattice resolution per simplex edge
  SweepMode mode = SweepMode::symmetric;
  bool primal = false;        // also run the explicit-strategy lower bound
  long seed = 0;              // recorded for reproducibility; the pipeline is
                              // deterministic and currently ignores it
  std::string output_path = "sweep.csv";
  std::optional<std::string> cache_dir;
  int workers = 1;

  void validate() const;  // throws std::invalid_argument
};

// One sweep point. dual_upper_success is the certified dual bound (trace
// plus violation inflation), so every derived error quantity stays valid
// even for rows whose status records a solver problem.
struct BoundRecord {
  double mean_photon = 0;
  double p_mem_success = 0;        // quantum limit on success probability
  double dual_upper_success = 0;   // certified bound for sequential strategies
  double error_lower = 0;          // 1 - dual_upper_success
  double quantum_limit_error = 0;  // 1 - p_mem_success
  double ratio = 0;                // error_lower / quantum_limit_error
  std::optional<double> primal_lower_success;
  int n_halfspaces = 0;
  int n_vertices = 0;
  int solver_iterations = 0;
  std::string status = "ok";       // "ok" or "+"-joined flags
  double wall_time_ms = 0;
};

// Full pipeline for one mean photon number: ensemble, supporting planes
// (cached when cfg.cache_dir is set), vertex enumeration, dual solve in
// cfg.mode, quantum limit, optional primal bound. Solver failures are
// recorded in the status field, never thrown.
BoundRecord run_point(const SweepConfig& cfg, double nbar);

// run_point over the nbar grid, rows ordered by mean_photon; writes CSV to
// cfg.output_path unless it is empty.
std::vector<BoundRecord> run_sweep(const SweepConfig& cfg);

// Fixed-width table plus summary lines (max ratio, the nbar range where the
// certified bound sits more than 1e-5 below the quantum limit).
std::string report(std::span<const BoundRecord> records);

// CSV with the stable column set; all reals carry 12 significant digits so
// parsing a written file reproduces the records exactly.
void write_csv(const std::filesystem::path& path,
               std::span<const BoundRecord> records);
std::vector<BoundRecord> read_csv(const std::filesystem::path& path);

// 12-significant-digit shortest decimal form used everywhere in the CSV.
std::string format_real(double v);

}  // namespace seqbound
