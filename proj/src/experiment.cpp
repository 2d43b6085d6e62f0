#include "ruinkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ruinkit/bisection.hpp"
#include "ruinkit/classic.hpp"
#include "ruinkit/error.hpp"
#include "ruinkit/parallel.hpp"
#include "ruinkit/pk.hpp"
#include "ruinkit/spectral.hpp"

namespace ruinkit {
namespace {

std::string format_number(double value, int digits) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

std::string format_cell(const Cell& cell, int digits) {
  struct Visitor {
    int digits;
    std::string operator()(std::monostate) const { return "n/a"; }
    std::string operator()(double v) const { return format_number(v, digits); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{digits}, cell);
}

Cell optional_cell(const std::optional<double>& value) {
  if (value) return *value;
  return std::monostate{};
}

std::string fmt(double value, int digits = 6) { return format_number(value, digits); }

void require_unique_rho(const ExperimentSpec& spec, const char* what) {
  if (spec.rhos.size() != 1) {
    throw DomainError(std::string(what) + " takes exactly one rho value");
  }
}

// Spectral approximation for one (rho, k) cell.
struct SpectralCell {
  int k = 0;
  RuinSolution solution;
  double operator()(double u) const { return ruin_spectral(solution, u); }
};

SpectralCell spectral_cell(const SpectralCdf& spectral, double rho, int k) {
  return {k, solve_ruin(fit_hyperexp(spectral, k), rho)};
}

bool has_second_moment(const ClaimModel& model) { return moments(model).m2.has_value(); }

std::string heavy_traffic_note(const ClaimModel& model) {
  return "note: heavy traffic approximation is n/a for " + model.describe() +
         " (the second moment is infinite)";
}

std::vector<double> grid_for(const ExperimentSpec& spec, const Reference& ref, double level) {
  if (spec.grid == GridPolicy::explicit_list) return spec.u;
  const double end = level_crossing([&](double u) { return ref(u); }, level);
  return auto_grid(end, spec.grid_points);
}

int phases_for(const ExperimentSpec& spec, double rho) {
  if (!spec.ks.empty()) return spec.ks.front();
  return phases_for_bound(*spec.delta, rho);
}

ExperimentResult run_phases_impact(const ExperimentSpec& spec) {
  std::vector<std::string> header{"rho", "u", "psi_ref", "ref_half_width"};
  for (const int k : spec.ks) {
    header.push_back("psi_sa_k" + std::to_string(k));
    header.push_back("err_sa_k" + std::to_string(k));
  }
  ExperimentResult result{CsvTable(std::move(header)), {}, {}};
  const SpectralCdf spectral(spec.model);
  for (const double rho : spec.rhos) {
    const Reference ref(spec.model, rho, spec.samples, spec.seed);
    std::vector<SpectralCell> cells(spec.ks.size());
    parallel_for(cells.size(), [&](std::size_t i) { cells[i] = spectral_cell(spectral, rho, spec.ks[i]); });
    double smallest_delta = 1.0;
    for (const auto& cell : cells) smallest_delta = std::min(smallest_delta, cell.solution.delta);
    for (const double u : grid_for(spec, ref, smallest_delta)) {
      const double reference = ref(u);
      ResultRow row{{rho, u, reference, optional_cell(ref.half_width(u))}};
      for (const auto& cell : cells) {
        const double approx = cell(u);
        row.cells.emplace_back(approx);
        row.cells.emplace_back(std::fabs(reference - approx));
      }
      result.table.add(std::move(row));
    }
    for (const auto& cell : cells) {
      const auto m = measure_max_error([&](double u) { return ref(u); }, cell, cell.solution.delta);
      result.summary.push_back("rho=" + fmt(rho) + " k=" + std::to_string(cell.k) +
                               " bound=" + fmt(cell.solution.delta, spec.digits) +
                               " max_error=" + fmt(m.max_error, spec.digits) +
                               " ratio=" + fmt(cell.solution.delta / m.max_error, 4) +
                               " argmax_u=" + fmt(m.argmax_u, spec.digits));
    }
  }
  return result;
}

ExperimentResult run_bound_quality(const ExperimentSpec& spec) {
  ExperimentResult result{
      CsvTable({"rho", "k", "epsilon", "bound", "max_error", "ratio", "argmax_u"}), {}, {}};
  const SpectralCdf spectral(spec.model);
  for (const double rho : spec.rhos) {
    const Reference ref(spec.model, rho, spec.samples, spec.seed);
    std::vector<int> ks = spec.ks;
    if (ks.empty()) ks.push_back(phases_for_bound(*spec.delta, rho));
    std::vector<ErrorMeasurement> errors(ks.size());
    std::vector<SpectralCell> cells(ks.size());
    auto work = [&](std::size_t i) {
      cells[i] = spectral_cell(spectral, rho, ks[i]);
      errors[i] = measure_max_error([&](double u) { return ref(u); }, cells[i], cells[i].solution.delta);
    };
    if (ref.exact()) {
      parallel_for(ks.size(), work);
    } else {
      for (std::size_t i = 0; i < ks.size(); ++i) work(i);
    }
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double bound = cells[i].solution.delta;
      const double ratio = bound / errors[i].max_error;
      result.table.add({{rho, static_cast<long long>(ks[i]), cells[i].solution.epsilon, bound,
                         errors[i].max_error, ratio, errors[i].argmax_u}});
      result.summary.push_back("rho=" + fmt(rho) + " k=" + std::to_string(ks[i]) +
                               " bound=" + fmt(bound, spec.digits) +
                               " max_error=" + fmt(errors[i].max_error, spec.digits) +
                               " ratio=" + fmt(ratio, 4));
    }
  }
  return result;
}

ExperimentResult run_approx_comparison(const ExperimentSpec& spec) {
  ExperimentResult result{CsvTable({"rho", "k", "u", "psi_ref", "ref_half_width", "psi_spectral",
                                    "psi_heavy_tail", "psi_heavy_traffic", "err_spectral",
                                    "err_heavy_tail", "err_heavy_traffic", "delta"}),
                          {},
                          {}};
  const SpectralCdf spectral(spec.model);
  const bool traffic = has_second_moment(spec.model);
  if (!traffic) result.notes.push_back(heavy_traffic_note(spec.model));
  for (const double rho : spec.rhos) {
    const Reference ref(spec.model, rho, spec.samples, spec.seed);
    const SpectralCell cell = spectral_cell(spectral, rho, phases_for(spec, rho));
    const double delta = spec.delta.value_or(cell.solution.delta);
    double max_sp = 0.0;
    double max_tail = 0.0;
    double max_traffic = 0.0;
    for (const double u : grid_for(spec, ref, delta)) {
      const double reference = ref(u);
      const double sp = cell(u);
      const double tail = heavy_tail(spec.model, rho, u);
      std::optional<double> ht;
      if (traffic) ht = heavy_traffic(spec.model, rho, u);
      max_sp = std::max(max_sp, std::fabs(reference - sp));
      max_tail = std::max(max_tail, std::fabs(reference - tail));
      if (ht) max_traffic = std::max(max_traffic, std::fabs(reference - *ht));
      result.table.add({{rho, static_cast<long long>(cell.k), u, reference,
                         optional_cell(ref.half_width(u)), sp, tail, optional_cell(ht),
                         std::fabs(reference - sp), std::fabs(reference - tail),
                         ht ? Cell{std::fabs(reference - *ht)} : Cell{}, delta}});
    }
    result.summary.push_back(
        "rho=" + fmt(rho) + " k=" + std::to_string(cell.k) + " delta=" + fmt(delta, spec.digits) +
        " max_err_spectral=" + fmt(max_sp, spec.digits) + " max_err_heavy_tail=" +
        fmt(max_tail, spec.digits) + " max_err_heavy_traffic=" +
        (traffic ? fmt(max_traffic, spec.digits) : std::string("n/a")));
  }
  return result;
}

ExperimentResult run_bound_matching(const ExperimentSpec& spec) {
  ExperimentResult result{CsvTable({"rho", "ht_bound", "k_star", "sp_bound", "max_ht_error",
                                    "max_sp_error"}),
                          {},
                          {}};
  std::optional<SpectralCdf> spectral;
  for (const double rho : spec.rhos) {
    double ht_bound = 0.0;
    try {
      ht_bound = extended_bound(spec.model, rho);
    } catch (const DomainError& e) {
      result.notes.push_back("note: rho=" + fmt(rho) + ": " + e.what());
      result.table.add({{rho, {}, {}, {}, {}, {}}});
      continue;
    }
    if (!spectral) spectral.emplace(spec.model);
    const int k_star = phases_for_bound(ht_bound, rho);
    const SpectralCell cell = spectral_cell(*spectral, rho, k_star);
    const Reference ref(spec.model, rho, spec.samples, spec.seed);
    const auto reference = [&](double u) { return ref(u); };
    const auto traffic = [&](double u) { return heavy_traffic(spec.model, rho, u); };
    const auto ht = measure_max_error(reference, traffic, cell.solution.delta);
    const auto sp = measure_max_error(reference, cell, cell.solution.delta);
    result.table.add({{rho, ht_bound, static_cast<long long>(k_star), cell.solution.delta,
                       ht.max_error, sp.max_error}});
    result.summary.push_back("rho=" + fmt(rho) + " ht_bound=" + fmt(ht_bound, spec.digits) +
                             " k*=" + std::to_string(k_star) +
                             " sp_bound=" + fmt(cell.solution.delta, spec.digits) +
                             " max_ht_error=" + fmt(ht.max_error, spec.digits) +
                             " max_sp_error=" + fmt(sp.max_error, spec.digits));
  }
  return result;
}

ExperimentResult run_single_query(const ExperimentSpec& spec) {
  ExperimentResult result{CsvTable({"u", "psi_spectral", "k", "delta", "psi_heavy_tail",
                                    "psi_heavy_traffic", "psi_exact"}),
                          {},
                          {}};
  const double rho = spec.rhos.front();
  const SpectralCell cell = spectral_cell(SpectralCdf(spec.model), rho, phases_for(spec, rho));
  const bool traffic = has_second_moment(spec.model);
  if (!traffic) result.notes.push_back(heavy_traffic_note(spec.model));
  const bool exact = spec.model.family() == Family::abate_whitt;
  for (const double u : spec.u) {
    std::optional<double> ht;
    if (traffic) ht = heavy_traffic(spec.model, rho, u);
    std::optional<double> ex;
    if (exact) ex = exact_ruin_abate_whitt(spec.model.mu(), rho, u);
    const double sp = cell(u);
    const double tail = heavy_tail(spec.model, rho, u);
    result.table.add({{u, sp, static_cast<long long>(cell.k), cell.solution.delta, tail,
                       optional_cell(ht), optional_cell(ex)}});
    result.summary.push_back("u=" + fmt(u, spec.digits) + " psi_spectral=" + fmt(sp, spec.digits) +
                             " (k=" + std::to_string(cell.k) +
                             ", delta=" + fmt(cell.solution.delta, spec.digits) + ")" +
                             " psi_heavy_tail=" + fmt(tail, spec.digits) + " psi_heavy_traffic=" +
                             (ht ? fmt(*ht, spec.digits) : std::string("n/a")) +
                             (ex ? " psi_exact=" + fmt(*ex, spec.digits) : std::string()));
  }
  return result;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::phases_impact:
      return "phases-impact";
    case ExperimentKind::bound_quality:
      return "bound-quality";
    case ExperimentKind::approx_comparison:
      return "approx-comparison";
    case ExperimentKind::bound_matching:
      return "bound-matching";
    case ExperimentKind::single_query:
      return "single-query";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
  for (const auto kind : {ExperimentKind::phases_impact, ExperimentKind::bound_quality,
                          ExperimentKind::approx_comparison, ExperimentKind::bound_matching,
                          ExperimentKind::single_query}) {
    if (name == to_string(kind)) return kind;
  }
  throw DomainError("unknown experiment kind '" + std::string(name) + "'");
}

ExperimentSpec resolve(ExperimentSpec spec) {
  for (const double rho : spec.rhos) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0,1) (got " + fmt(rho) + ")");
  }
  for (const int k : spec.ks) {
    if (k < 1) throw DomainError("k must be >= 1");
  }
  if (spec.delta && !(*spec.delta > 0.0)) throw DomainError("delta must be positive");
  if (spec.digits < 1 || spec.digits > 17) throw DomainError("digits must be between 1 and 17");
  if (spec.samples < 1) throw DomainError("samples must be >= 1");
  if (spec.grid_points < 4) throw DomainError("grid needs at least 4 points");
  for (std::size_t i = 0; i < spec.u.size(); ++i) {
    if (!(spec.u[i] >= 0.0)) throw DomainError("u values must be >= 0");
    if (i > 0 && !(spec.u[i] > spec.u[i - 1])) throw DomainError("u values must be strictly increasing");
  }
  if (spec.grid == GridPolicy::explicit_list && spec.u.empty()) {
    throw DomainError("explicit grid requested but no u values given");
  }
  const bool has_k = !spec.ks.empty();
  const bool has_delta = spec.delta.has_value();
  switch (spec.kind) {
    case ExperimentKind::phases_impact:
      if (has_delta) throw DomainError("phases-impact takes k values, not delta");
      if (!has_k) spec.ks = {10, 20, 100};
      if (spec.rhos.empty()) spec.rhos = {0.7};
      break;
    case ExperimentKind::bound_quality:
      if (has_k && has_delta) throw DomainError("bound-quality takes either k or delta, not both");
      if (!has_k && !has_delta) spec.delta = 0.02;
      if (spec.rhos.empty()) {
        if (has_k) {
          spec.rhos = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        } else {
          spec.rhos = {0.1, 0.5, 0.9};
        }
      }
      break;
    case ExperimentKind::approx_comparison:
      if (has_k && has_delta) throw DomainError("approx-comparison takes either k or delta, not both");
      if (spec.ks.size() > 1) throw DomainError("approx-comparison takes a single k");
      if (!has_k && !has_delta) spec.delta = 0.02;
      if (spec.rhos.empty()) spec.rhos = {0.1, 0.5, 0.9};
      break;
    case ExperimentKind::bound_matching:
      if (has_k || has_delta) throw DomainError("bound-matching derives k*; do not pass k or delta");
      if (spec.rhos.empty()) spec.rhos = {0.82, 0.85, 0.88, 0.91, 0.94, 0.97};
      break;
    case ExperimentKind::single_query:
      if (has_k == has_delta) throw DomainError("single query needs exactly one of k or delta");
      if (spec.ks.size() > 1) throw DomainError("single query takes a single k");
      require_unique_rho(spec, "single query");
      if (spec.u.empty()) throw DomainError("single query needs u values");
      spec.grid = GridPolicy::explicit_list;
      break;
  }
  return spec;
}

void CsvTable::add(ResultRow row) {
  if (row.cells.size() != header_.size()) {
    throw std::logic_error("CsvTable: row width does not match header");
  }
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) throw std::out_of_range("no column " + std::string(name));
  return static_cast<std::size_t>(it - header_.begin());
}

void CsvTable::write(std::ostream& out, int digits) const {
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      out << (i ? "," : "") << format_cell(row.cells[i], digits);
    }
    out << '\n';
  }
}

Reference::Reference(const ClaimModel& model, double rho, std::uint64_t samples, std::uint64_t seed)
    : model_(model), rho_(rho) {
  if (model.family() != Family::abate_whitt) {
    simulation_ = std::make_shared<const SimulatedMaximum>(model, rho, samples, seed);
  }
}

double Reference::operator()(double u) const {
  if (simulation_) return simulation_->tail(u);
  return exact_ruin_abate_whitt(model_.mu(), rho_, u);
}

std::optional<double> Reference::half_width(double u) const {
  if (simulation_) return simulation_->half_width(u);
  return std::nullopt;
}

std::vector<double> auto_grid(double end, std::size_t points) {
  if (!(end > 0.0) || points < 4) throw DomainError("auto_grid: need end > 0 and >= 4 points");
  const std::size_t linear = points / 2;
  const std::size_t logarithmic = points - linear;
  std::vector<double> grid;
  grid.reserve(points + 1);
  for (std::size_t i = 0; i < linear; ++i) {
    grid.push_back(end * static_cast<double>(i) / static_cast<double>(linear - 1));
  }
  const double lo = std::log(end * 1e-6);
  const double hi = std::log(end);
  for (std::size_t i = 0; i < logarithmic; ++i) {
    grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(logarithmic - 1)));
  }
  grid.back() = end;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double level_crossing(const std::function<double(double)>& psi, double level) {
  if (psi(0.0) <= level) return 1.0;
  double hi = 1.0;
  for (int i = 0; psi(hi) > level; ++i) {
    hi *= 2.0;
    if (i > 400 || !std::isfinite(hi)) {
      throw NumericError("level_crossing: reference stays above " + fmt(level));
    }
  }
  return bisect([&](double u) { return psi(u) > level ? 1.0 : -1.0; }, 0.0, hi, 1e-9);
}

ErrorMeasurement measure_max_error(const std::function<double(double)>& reference,
                                   const std::function<double(double)>& approx, double level,
                                   std::size_t points) {
  ErrorMeasurement m;
  double end = level_crossing(reference, level);
  for (int round = 0; round < 64; ++round) {
    m = ErrorMeasurement{0.0, 0.0, end};
    for (const double u : auto_grid(end, points)) {
      const double err = std::fabs(reference(u) - approx(u));
      if (err > m.max_error) {
        m.max_error = err;
        m.argmax_u = u;
      }
    }
    if (reference(end) + approx(end) <= m.max_error) return m;
    end *= 4.0;
  }
  throw NumericError("measure_max_error: error grid failed to cover the tail");
}

ExperimentResult run_experiment(const ExperimentSpec& raw) {
  const ExperimentSpec spec = resolve(raw);
  switch (spec.kind) {
    case ExperimentKind::phases_impact:
      return run_phases_impact(spec);
    case ExperimentKind::bound_quality:
      return run_bound_quality(spec);
    case ExperimentKind::approx_comparison:
      return run_approx_comparison(spec);
    case ExperimentKind::bound_matching:
      return run_bound_matching(spec);
    case ExperimentKind::single_query:
      return run_single_query(spec);
  }
  throw DomainError("unknown experiment kind");
}

ExperimentResult emit_figure_data(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.kind = ExperimentKind::approx_comparison;
  spec = resolve(spec);
  require_unique_rho(spec, "figure");
  const double rho = spec.rhos.front();
  ExperimentResult result{CsvTable({"u", "psi_ref", "psi_spectral", "psi_heavy_tail",
                                    "psi_heavy_traffic", "delta"}),
                          {},
                          {}};
  const bool traffic = has_second_moment(spec.model);
  if (!traffic) result.notes.push_back(heavy_traffic_note(spec.model));
  const Reference ref(spec.model, rho, spec.samples, spec.seed);
  const SpectralCell cell = spectral_cell(SpectralCdf(spec.model), rho, phases_for(spec, rho));
  const double delta = spec.delta.value_or(cell.solution.delta);
  for (const double u : grid_for(spec, ref, delta)) {
    std::optional<double> ht;
    if (traffic) ht = heavy_traffic(spec.model, rho, u);
    result.table.add({{u, ref(u), cell(u), heavy_tail(spec.model, rho, u), optional_cell(ht), delta}});
  }
  result.summary.push_back(spec.model.describe() + " rho=" + fmt(rho) + " k=" +
                           std::to_string(cell.k) + " delta=" + fmt(delta, spec.digits) + " points=" +
                           std::to_string(result.table.rows().size()));
  return result;
}

}  // namespace ruinkit
