#include "seqbound/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seqbound/dpsolver.hpp"
#include "seqbound/ensembles.hpp"
#include "seqbound/mem.hpp"
#include "seqbound/primal.hpp"
#include "seqbound/qregion.hpp"
#include "seqbound/vertexenum.hpp"

namespace seqbound {

namespace {

constexpr std::array<double, 3> kEqualPriors = {1.0 / 3, 1.0 / 3, 1.0 / 3};

// Library resolution for the primal bound: an 11-per-edge prior lattice
// (66 measurements) plus the guessing strategies.
constexpr int kPrimalLibraryPriors = 66;

void append_flag(std::string& status, const char* flag) {
  if (status == "ok") {
    status = flag;
  } else {
    status += "+";
    status += flag;
  }
}

std::vector<Halfspace3> planes_for_point(const SweepConfig& cfg,
                                         const CoherentEnsemble& e, double nbar,
                                         std::string& status) {
  std::optional<std::filesystem::path> cache_file;
  if (cfg.cache_dir) {
    cache_file = std::filesystem::path(*cfg.cache_dir) /
                 halfspace_cache_name(nbar, "grid", cfg.planes_per_edge);
    if (auto cached = load_halfspaces(*cache_file)) return std::move(*cached);
  }
  auto priors = sample_priors(cfg.planes_per_edge, SampleScheme::grid);
  // The exact center is on the lattice only when the edge denominator is
  // divisible by 3; append it always so the plane sum(q)/3 <= offset is
  // present (it pins the degenerate-ensemble limit).
  priors.push_back(kEqualPriors);
  SupportingPlanes sp = supporting_halfspaces(e, priors, cfg.workers);
  if (sp.mem_failures > 0) append_flag(status, "mem-uncvg");
  if (cache_file) {
    std::filesystem::create_directories(cache_file->parent_path());
    save_halfspaces(*cache_file, sp.planes);
  }
  return std::move(sp.planes);
}

}  // namespace

void SweepConfig::validate() const {
  if (!(nbar_min >= 0) || !(nbar_max >= nbar_min)) {
    throw std::invalid_argument("sweep: need 0 <= nbar_min <= nbar_max");
  }
  if (!(nbar_step > 0)) throw std::invalid_argument("sweep: nbar_step must be > 0");
  if (planes_per_edge < 1) {
    throw std::invalid_argument("sweep: planes_per_edge must be >= 1");
  }
  if (workers < 0) throw std::invalid_argument("sweep: workers must be >= 0");
}

BoundRecord run_point(const SweepConfig& cfg, double nbar) {
  const auto start = std::chrono::steady_clock::now();
  BoundRecord rec;
  rec.mean_photon = nbar;

  const CoherentEnsemble e = build_ensemble(nbar, kEqualPriors);

  QPolytope poly = assemble_qpolytope(planes_for_point(cfg, e, nbar, rec.status));
  rec.n_halfspaces = static_cast<int>(poly.halfspaces.size());
  const VertexSet verts = enumerate_vertices(poly);
  rec.n_vertices = static_cast<int>(verts.points.size());
  if (verts.dropped_infeasible > 0) append_flag(rec.status, "verts-dropped");

  DpOptions dp_opts;
  dp_opts.workers = cfg.workers;
  const auto solve_mode = [&](DpMode mode) {
    try {
      return solve_dp_prime(e, verts, mode, dp_opts);
    } catch (const DpStallError& err) {
      append_flag(rec.status, "dp-stall");
      return err.best;
    }
  };
  DualSolution dual = solve_mode(
      cfg.mode == SweepMode::general ? DpMode::general : DpMode::symmetric);
  if (cfg.mode == SweepMode::both) {
    const DualSolution gen = solve_mode(DpMode::general);
    if (std::abs(gen.trace_value - dual.trace_value) > tol::mode_agreement) {
      append_flag(rec.status, "mode-diff");
    }
  }
  rec.dual_upper_success = dual.certified();
  rec.solver_iterations = dual.iterations;

  // Quantum limit: the optimal joint measurement on the undivided states.
  // Splitting doubles the exponent in every overlap, so the full-amplitude
  // values are those of the split ensemble at twice the photon number.
  rec.p_mem_success = srm_value(build_ensemble(2.0 * nbar, kEqualPriors));

  rec.error_lower = 1.0 - rec.dual_upper_success;
  rec.quantum_limit_error = 1.0 - rec.p_mem_success;
  rec.ratio =
      rec.quantum_limit_error > 0 ? rec.error_lower / rec.quantum_limit_error : 0.0;

  if (cfg.primal) {
    const BobLibrary lib = default_library(e, kPrimalLibraryPriors, cfg.workers);
    OptimizeAliceOptions al_opts;
    al_opts.workers = cfg.workers;
    try {
      rec.primal_lower_success = optimize_alice(e, lib, al_opts).success_value;
    } catch (const AliceConvergenceError& err) {
      append_flag(rec.status, "alice-uncvg");
      rec.primal_lower_success = err.best().success_value;
    }
  }

  rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rec;
}

std::vector<BoundRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<BoundRecord> records;
  for (int i = 0;; ++i) {
    const double nbar = cfg.nbar_min + i * cfg.nbar_step;
    if (nbar > cfg.nbar_max + 0.5 * cfg.nbar_step) break;
    records.push_back(run_point(cfg, std::min(nbar, cfg.nbar_max)));
  }
  if (!cfg.output_path.empty()) write_csv(cfg.output_path, records);
  return records;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string report(std::span<const BoundRecord> records) {
  if (records.empty()) throw std::invalid_argument("report: no records");
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-14s %-14s %-9s %-8s %-14s %-12s %s\n",
                "nbar", "quantum_limit", "dual_upper", "below_ql", "ratio",
                "primal_lower", "status", "wall_ms");
  out << line;
  double max_ratio = 0;
  double max_ratio_nbar = 0;
  double strict_lo = 0, strict_hi = 0;
  bool any_strict = false;
  for (const BoundRecord& r : records) {
    const bool below = r.dual_upper_success < r.p_mem_success;
    const std::string primal_text =
        r.primal_lower_success ? format_real(*r.primal_lower_success)
                               : "\xE2\x80\x94";  // em dash marks a column not run
    std::snprintf(line, sizeof line, "%-8.4g %-14.10f %-14.10f %-9s %-8.4f %-14s %-12s %.0f\n",
                  r.mean_photon, r.p_mem_success, r.dual_upper_success,
                  below ? "yes" : "no", r.ratio, primal_text.c_str(),
                  r.status.c_str(), r.wall_time_ms);
    out << line;
    if (r.ratio > max_ratio) {
      max_ratio = r.ratio;
      max_ratio_nbar = r.mean_photon;
    }
    if (r.p_mem_success - r.dual_upper_success > 1e-5) {
      if (!any_strict) strict_lo = r.mean_photon;
      strict_hi = r.mean_photon;
      any_strict = true;
    }
  }
  std::snprintf(line, sizeof line, "max ratio %.6f at nbar %.4g\n", max_ratio,
                max_ratio_nbar);
  out << line;
  if (any_strict) {
    std::snprintf(line, sizeof line,
                  "strict gap (dual more than 1e-5 below quantum limit) for "
                  "nbar in [%.4g, %.4g]\n",
                  strict_lo, strict_hi);
    out << line;
  } else {
    out << "no strict gap detected\n";
  }
  return out.str();
}

void write_csv(const std::filesystem::path& path,
               std::span<const BoundRecord> records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path.string());
  f << "mean_photon,p_mem_success,dual_upper_success,error_lower,"
       "quantum_limit_error,ratio,primal_lower_success,n_halfspaces,"
       "n_vertices,solver_iterations,status,wall_time_ms\n";
  for (const BoundRecord& r : records) {
    f << format_real(r.mean_photon) << ',' << format_real(r.p_mem_success) << ','
      << format_real(r.dual_upper_success) << ',' << format_real(r.error_lower)
      << ',' << format_real(r.quantum_limit_error) << ',' << format_real(r.ratio)
      << ','
      << (r.primal_lower_success ? format_real(*r.primal_lower_success) : "")
      << ',' << r.n_halfspaces << ',' << r.n_vertices << ','
      << r.solver_iterations << ',' << r.status << ','
      << format_real(r.wall_time_ms) << '\n';
  }
  if (!f.flush()) throw std::runtime_error("write_csv: write failed");
}

std::vector<BoundRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("read_csv: empty file");
  std::vector<BoundRecord> records;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 12) {
      throw std::runtime_error("read_csv: malformed row: " + line);
    }
    BoundRecord r;
    r.mean_photon = std::stod(cells[0]);
    r.p_mem_success = std::stod(cells[1]);
    r.dual_upper_success = std::stod(cells[2]);
    r.error_lower = std::stod(cells[3]);
    r.quantum_limit_error = std::stod(cells[4]);
    r.ratio = std::stod(cells[5]);
    if (!cells[6].empty()) r.primal_lower_success = std::stod(cells[6]);
    r.n_halfspaces = std::stoi(cells[7]);
    r.n_vertices = std::stoi(cells[8]);
    r.solver_iterations = std::stoi(cells[9]);
    r.status = cells[10];
    r.wall_time_ms = std::stod(cells[11]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace seqbound
