#pragma once

// Experiment harness behind the `ruinkit` command line tool: reproduces the
// phase, bound-quality, comparison and bound-matching studies as CSV.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ruinkit/distributions.hpp"
#include "ruinkit/oracle.hpp"

namespace ruinkit {

enum class ExperimentKind {
  phases_impact,      // fixed rho, several k, psi~ against the reference
  bound_quality,      // certified bound vs measured max error, per (rho, k)
  approx_comparison,  // spectral, heavy tail, heavy traffic at a fixed delta
  bound_matching,     // k* where the spectral and heavy-traffic bounds meet
  single_query,       // one-shot values at explicit u
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view name);

enum class GridPolicy {
  automatic,      // log-spaced plus linear points up to the delta-crossing
  explicit_list,  // the u values given
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::phases_impact;
  ClaimModel model = ClaimModel::abate_whitt(2.0);
  std::vector<double> rhos;
  std::vector<int> ks;
  std::optional<double> delta;
  GridPolicy grid = GridPolicy::automatic;
  std::vector<double> u;
  std::size_t grid_points = 500;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = McConfig{}.seed;
  int digits = 6;
};

/// Fills per-kind defaults (rho lists, k lists, delta) and validates the result.
ExperimentSpec resolve(ExperimentSpec spec);

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct ResultRow {
  std::vector<Cell> cells;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header = {}) : header_(std::move(header)) {}

  void add(ResultRow row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<ResultRow>& rows() const { return rows_; }
  /// Column index by name; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;

  /// Header row, '.' decimals, `digits` significant digits, "n/a" for
  /// empty cells.
  void write(std::ostream& out, int digits) const;

 private:
  std::vector<std::string> header_;
  std::vector<ResultRow> rows_;
};

struct ExperimentResult {
  CsvTable table;
  std::vector<std::string> summary;  // human-readable lines for stdout
  std::vector<std::string> notes;    // infeasible-column notes for stderr
};

/// Ruin probability to compare against: the exact formula for Abate-Whitt,
/// otherwise a Monte Carlo estimate.
class Reference {
 public:
  Reference(const ClaimModel& model, double rho, std::uint64_t samples, std::uint64_t seed);

  bool exact() const { return !simulation_; }
  double operator()(double u) const;
  std::optional<double> half_width(double u) const;

 private:
  ClaimModel model_;
  double rho_;
  std::shared_ptr<const SimulatedMaximum> simulation_;
};

/// `points` grid values on [0, end]: half linear, half log-spaced over
/// [end * 1e-6, end], merged, sorted and deduplicated; starts at 0.
std::vector<double> auto_grid(double end, std::size_t points);

/// Smallest u (by doubling then bisection) with psi(u) <= level; psi must be
/// nonincreasing. Returns 1 when psi(0) is already below the level.
double level_crossing(const std::function<double(double)>& psi, double level);

struct ErrorMeasurement {
  double max_error = 0.0;
  double argmax_u = 0.0;
  double grid_end = 0.0;
};

/// sup_u |reference - approx| on an auto grid. The grid starts at the
/// level-crossing of the reference and is stretched (x4) until
/// reference(end) + approx(end) is below the measured maximum, so no point
/// beyond the grid can exceed it (both functions are nonincreasing and >= 0).
ErrorMeasurement measure_max_error(const std::function<double(double)>& reference,
                                   const std::function<double(double)>& approx, double level,
                                   std::size_t points = 500);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Series for plotting: u, psi_ref, psi_spectral, psi_heavy_tail,
/// psi_heavy_traffic, delta. Automatic grids stop where psi_ref drops to delta.
ExperimentResult emit_figure_data(const ExperimentSpec& spec);

}  // namespace ruinkit
