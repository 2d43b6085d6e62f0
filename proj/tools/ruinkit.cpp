// ruinkit: ruin probabilities for completely monotone heavy-tailed claims.
//
//   ruinkit ruin --model pareto --alpha 4 --b 3 --rho 0.5 --u 1 --k 100
//   ruinkit experiment --kind bound-quality --model abate-whitt --delta 0.02
//   ruinkit figure --model weibull-half --a 3 --rho 0.5 --delta 0.02 --out fig.csv
//
// Options may also come from a flat key=value file given with --config;
// command-line flags take precedence.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ruinkit/error.hpp"
#include "ruinkit/experiment.hpp"

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string model = "abate-whitt";
  double mu = 2.0;
  double a = 3.0;
  double alpha = 4.0;
  double b = 3.0;
  std::vector<double> rho;
  std::vector<int> k;
  std::optional<double> delta;
  std::vector<double> u;
  std::string grid = "auto";
  std::size_t grid_points = 500;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = ruinkit::McConfig{}.seed;
  std::string out;
  int digits = 6;
  std::string kind;
};

ruinkit::ClaimModel make_model(const Options& opt) {
  switch (ruinkit::parse_family(opt.model)) {
    case ruinkit::Family::abate_whitt:
      return ruinkit::ClaimModel::abate_whitt(opt.mu);
    case ruinkit::Family::weibull_half:
      return ruinkit::ClaimModel::weibull_half(opt.a);
    case ruinkit::Family::pareto:
      return ruinkit::ClaimModel::pareto(opt.alpha, opt.b);
  }
  throw ruinkit::DomainError("unknown model");
}

ruinkit::ExperimentSpec make_spec(const Options& opt, ruinkit::ExperimentKind kind, bool explicit_u) {
  ruinkit::ExperimentSpec spec;
  spec.kind = kind;
  spec.model = make_model(opt);
  spec.rhos = opt.rho;
  spec.ks = opt.k;
  spec.delta = opt.delta;
  spec.u = opt.u;
  if (opt.grid != "auto" && opt.grid != "explicit") {
    throw ruinkit::DomainError("--grid must be 'auto' or 'explicit'");
  }
  // Explicit u values imply the explicit grid.
  spec.grid = (opt.grid == "explicit" || explicit_u) ? ruinkit::GridPolicy::explicit_list
                                                     : ruinkit::GridPolicy::automatic;
  spec.grid_points = opt.grid_points;
  spec.samples = opt.samples;
  spec.seed = opt.seed;
  spec.digits = opt.digits;
  return spec;
}

void emit(const ruinkit::ExperimentResult& result, const Options& opt, bool summary_first) {
  for (const auto& note : result.notes) std::cerr << note << '\n';
  if (opt.out.empty()) {
    if (summary_first) {
      for (const auto& line : result.summary) std::cout << line << '\n';
    } else {
      for (const auto& line : result.summary) std::cerr << line << '\n';
      result.table.write(std::cout, opt.digits);
    }
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw ruinkit::DomainError("cannot open output file " + opt.out);
  result.table.write(file, opt.digits);
  for (const auto& line : result.summary) std::cout << line << '\n';
  std::cout << "wrote " << result.table.rows().size() << " rows to " << opt.out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruin probabilities in the compound Poisson model with completely monotone claims"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command-line flags override it");

  Options opt;
  app.add_option("--model", opt.model, "claim family")
      ->check(CLI::IsMember({"abate-whitt", "weibull-half", "pareto"}));
  app.add_option("--mu", opt.mu, "Abate-Whitt parameter (mean 1/mu)");
  app.add_option("--a", opt.a, "Weibull(1/2) scale");
  app.add_option("--alpha", opt.alpha, "Pareto shape");
  app.add_option("--b", opt.b, "Pareto scale");
  app.add_option("--rho", opt.rho, "load(s) in (0,1), comma separated")->delimiter(',');
  app.add_option("--k", opt.k, "number(s) of phases, comma separated")->delimiter(',');
  app.add_option("--delta", opt.delta, "target certified bound");
  auto* u_opt = app.add_option("--u", opt.u, "explicit u grid, comma separated")->delimiter(',');
  app.add_option("--grid", opt.grid, "grid policy: auto or explicit");
  app.add_option("--grid-points", opt.grid_points, "points in the automatic grid");
  app.add_option("--samples", opt.samples, "Monte Carlo replications");
  app.add_option("--seed", opt.seed, "Monte Carlo seed");
  app.add_option("--out", opt.out, "CSV output path (stdout when omitted)");
  app.add_option("--digits", opt.digits, "significant digits in CSV output");

  auto* ruin = app.add_subcommand("ruin", "one-shot ruin probability at the given u values");
  auto* experiment = app.add_subcommand("experiment", "run an experiment and write CSV");
  experiment->add_option("--kind", opt.kind, "phases-impact | bound-quality | approx-comparison | bound-matching | single-query")
      ->required();
  auto* figure = app.add_subcommand("figure", "series for plotting ruin curves");
  for (auto* sub : {ruin, experiment, figure}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitDomain;
  }

  try {
    const bool explicit_u = u_opt->count() > 0 || !opt.u.empty();
    if (ruin->parsed()) {
      const auto spec = make_spec(opt, ruinkit::ExperimentKind::single_query, explicit_u);
      emit(ruinkit::run_experiment(spec), opt, true);
    } else if (experiment->parsed()) {
      const auto spec = make_spec(opt, ruinkit::parse_kind(opt.kind), explicit_u);
      emit(ruinkit::run_experiment(spec), opt, false);
    } else if (figure->parsed()) {
      const auto spec = make_spec(opt, ruinkit::ExperimentKind::approx_comparison, explicit_u);
      emit(ruinkit::emit_figure_data(spec), opt, false);
    }
  } catch (const ruinkit::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ruinkit::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
