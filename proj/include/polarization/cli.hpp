#pragma once

// Command-line front end. parse_args() turns argv into a CommandSpec and
// run() executes it against caller-supplied streams, so the whole CLI can be
// driven in-process.
//
// Exit codes: 0 success, 1 domain/validation error, 2 I/O or parse error,
// 3 usage error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarization/comparative.hpp"
#include "polarization/core.hpp"
#include "polarization/dataio.hpp"
#include "polarization/errors.hpp"
#include "polarization/experiments.hpp"
#include "polarization/grouping.hpp"

namespace polar::cli {

enum ExitCode : int { ok = 0, domain_error = 1, io_error = 2, usage_error = 3 };

enum class Subcommand { compute, attach, aggregate, grid, limit, search, validate, table1 };

struct CommandSpec {
  Subcommand subcommand = Subcommand::compute;

  std::string input = "-";
  std::string output = "-";
  std::string format = "json";
  std::string metric = "all";

  // compute / validate
  bool modified = false;
  bool strict_bounds = false;
  bool rescale = false;
  double weight_tol = 1e-9;
  double coord_tol = 1e-9;
  double alpha = 1.0;
  double er_k = 1.0;
  double rq_k = reynal_querol_defaults.k;

  // attach / aggregate
  std::size_t neighbors = 3;
  std::size_t quorum = 2;
  double radius = std::numeric_limits<double>::infinity();
  bool residual_cluster = false;

  // grid / limit / search
  std::size_t dim = 2;
  std::size_t l_min = 2;
  std::size_t l_max = 30;
  std::size_t max_groups = default_max_groups;
  std::size_t samples = 1'000'000;
  std::size_t iterations = 20'000;
  std::uint64_t seed = default_seed;
};

/// Bad command line. Carries the text to print (help or diagnostic) and the
/// exit code: 0 for --help, 3 otherwise.
class UsageError : public std::runtime_error {
public:
  UsageError(std::string text, int code) : std::runtime_error(std::move(text)), code_(code) {}
  int code() const noexcept { return code_; }

private:
  int code_;
};

struct RunContext {
  bool color = false; // POLARIZATION_COLOR=1
};

namespace detail {

inline void add_io(CLI::App* sub, CommandSpec& spec, bool with_input = true) {
  if (with_input) sub->add_option("-i,--input", spec.input, "Input file, '-' for stdin");
  sub->add_option("-o,--output", spec.output, "Output file, '-' for stdout");
}

inline CLI::App& build(CLI::App& app, CommandSpec& spec, Subcommand& chosen) {
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  const std::vector<std::string> metrics{"euclidean", "manhattan", "chebyshev", "all"};

  auto* compute = app.add_subcommand("compute", "Polarization report for a society CSV");
  add_io(compute, spec);
  compute->add_option("--format", spec.format)->check(CLI::IsMember({"json", "csv"}));
  compute->add_option("--metric", spec.metric)->check(CLI::IsMember(metrics));
  compute->add_flag("--modified", spec.modified, "Include the P' family");
  compute->add_flag("--strict-bounds", spec.strict_bounds, "Fail when any P exceeds 1");
  compute->add_flag("--rescale", spec.rescale, "Min-max rescale each axis onto [0,1]");
  compute->add_option("--weight-tol", spec.weight_tol)->check(CLI::NonNegativeNumber);
  compute->add_option("--coord-tol", spec.coord_tol)->check(CLI::NonNegativeNumber);
  compute->add_option("--alpha", spec.alpha, "Esteban-Ray sensitivity (1-D input)")
      ->check(CLI::Range(0.0, ERParams::alpha_max));
  compute->add_option("--er-k", spec.er_k)->check(CLI::PositiveNumber);
  compute->add_option("--rq-k", spec.rq_k)->check(CLI::PositiveNumber);
  compute->callback([&chosen] { chosen = Subcommand::compute; });

  auto* attach = app.add_subcommand("attach", "Attach independents by nearest-neighbour quorum");
  add_io(attach, spec);
  attach->add_option("--neighbors", spec.neighbors)->check(CLI::PositiveNumber);
  attach->add_option("--quorum", spec.quorum)->check(CLI::PositiveNumber);
  attach->add_option("--radius", spec.radius)->check(CLI::PositiveNumber);
  attach->add_option("--metric", spec.metric, "Neighbour metric (default euclidean)")
      ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}));
  attach->callback([&chosen] { chosen = Subcommand::attach; });

  auto* aggregate = app.add_subcommand("aggregate", "Collapse a chamber CSV into a society CSV");
  add_io(aggregate, spec);
  aggregate->add_flag("--residual-cluster", spec.residual_cluster,
                      "Group remaining independents into one cluster");
  aggregate->callback([&chosen] { chosen = Subcommand::aggregate; });

  auto* grid = app.add_subcommand("grid", "Convergence series on uniform grids");
  add_io(grid, spec, false);
  grid->add_option("--dim", spec.dim)->check(CLI::PositiveNumber);
  grid->add_option("--l-min", spec.l_min)->check(CLI::Range(2, 1 << 20));
  grid->add_option("--l-max", spec.l_max)->check(CLI::Range(2, 1 << 20));
  grid->add_option("--max-groups", spec.max_groups)->check(CLI::PositiveNumber);
  grid->callback([&chosen] { chosen = Subcommand::grid; });

  auto* limit = app.add_subcommand("limit", "Monte Carlo estimate of the continuum limit");
  add_io(limit, spec, false);
  limit->add_option("--dim", spec.dim)->check(CLI::PositiveNumber);
  limit->add_option("--metric", spec.metric)->check(CLI::IsMember(metrics));
  limit->add_option("--samples", spec.samples)->check(CLI::PositiveNumber);
  limit->add_option("--seed", spec.seed);
  limit->add_option("--format", spec.format)->check(CLI::IsMember({"json", "csv"}));
  limit->callback([&chosen] { chosen = Subcommand::limit; });

  auto* search = app.add_subcommand("search", "Hill-climb for large Chebyshev index values");
  add_io(search, spec, false);
  search->add_option("--dim", spec.dim)->check(CLI::PositiveNumber);
  search->add_option("--iterations", spec.iterations)->check(CLI::PositiveNumber);
  search->add_option("--seed", spec.seed);
  search->callback([&chosen] { chosen = Subcommand::search; });

  auto* validate = app.add_subcommand("validate", "Check a society CSV");
  add_io(validate, spec);
  validate->add_option("--weight-tol", spec.weight_tol)->check(CLI::NonNegativeNumber);
  validate->add_option("--coord-tol", spec.coord_tol)->check(CLI::NonNegativeNumber);
  validate->callback([&chosen] { chosen = Subcommand::validate; });

  auto* table1 = app.add_subcommand("table1", "Print the bundled 1994-2003 reference table");
  add_io(table1, spec, false);
  table1->callback([&chosen] { chosen = Subcommand::table1; });

  return app;
}

inline std::string read_all(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::ios_base::failure("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

inline void write_all(const std::string& path, std::ostream& out, const std::string& text) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw std::ios_base::failure("write to '" + path + "' failed");
}

inline std::vector<Metric> selected_metrics(const std::string& name) {
  if (name == "all") return {all_metrics.begin(), all_metrics.end()};
  return {*parse_metric(name)};
}

inline std::string paint(const RunContext& ctx, std::string_view word, bool good) {
  if (!ctx.color) return std::string(word);
  return std::string(good ? "\x1b[32m" : "\x1b[31m") + std::string(word) + "\x1b[0m";
}

inline int do_compute(const CommandSpec& spec, std::istream& in, std::ostream& out,
                      std::ostream& err) {
  std::istringstream text(read_all(spec.input, in));
  ReadOptions opts;
  opts.validation = {spec.weight_tol, spec.coord_tol};
  opts.rescale = spec.rescale;
  const Society society = read_society(text, DatasetSchema::society(), opts);
  const PolarizationReport report = polarization_report(society, opts.validation);

  if (spec.strict_bounds) {
    const auto over = bounds_exceeded(report);
    if (!over.empty()) {
      for (Metric m : over) {
        err << "error: P_" << to_string(m) << " = " << format_real(report.values.at(m))
            << " exceeds 1\n";
      }
      return domain_error;
    }
  }

  ReportFields fields;
  fields.metrics = selected_metrics(spec.metric);
  fields.modified = spec.modified;
  if (society.dim == 1) {
    fields.comparative = comparative_values(society, ERParams{spec.alpha, spec.er_k},
                                            ERParams{spec.alpha, spec.rq_k});
  }
  write_all(spec.output, out,
            write_report(report, spec.format == "csv" ? ReportFormat::csv : ReportFormat::json,
                         fields));
  return ok;
}

inline AttachmentConfig attachment_config(const CommandSpec& spec) {
  AttachmentConfig config;
  config.neighbors = spec.neighbors;
  config.quorum = spec.quorum;
  config.radius = spec.radius;
  config.metric = spec.metric == "all" ? Metric::euclidean : *parse_metric(spec.metric);
  return config;
}

inline int do_attach(const CommandSpec& spec, std::istream& in, std::ostream& out) {
  std::istringstream text(read_all(spec.input, in));
  const Chamber attached = attach_independents(read_chamber(text), attachment_config(spec));
  std::ostringstream buf;
  write_chamber(buf, attached);
  write_all(spec.output, out, buf.str());
  return ok;
}

inline int do_aggregate(const CommandSpec& spec, std::istream& in, std::ostream& out) {
  std::istringstream text(read_all(spec.input, in));
  const Society society = aggregate(read_chamber(text), spec.residual_cluster);
  std::ostringstream buf;
  write_society(buf, society);
  write_all(spec.output, out, buf.str());
  return ok;
}

inline int do_grid(const CommandSpec& spec, std::ostream& out) {
  std::ostringstream buf;
  write_series(buf, convergence_series(spec.dim, spec.l_min, spec.l_max, spec.max_groups));
  write_all(spec.output, out, buf.str());
  return ok;
}

inline int do_limit(const CommandSpec& spec, std::ostream& out) {
  std::vector<std::pair<Metric, McEstimate>> estimates;
  for (Metric m : selected_metrics(spec.metric)) {
    estimates.emplace_back(m, continuum_limit_estimate(spec.dim, m, spec.samples, spec.seed));
  }
  std::string text;
  if (spec.format == "csv") {
    text = "metric,dim,value,std_error,samples,seed\n";
    for (const auto& [m, e] : estimates) {
      text += std::string(to_string(m)) + ',' + std::to_string(spec.dim) + ',' +
              format_real(e.value) + ',' + format_real(e.std_error) + ',' +
              std::to_string(e.samples) + ',' + std::to_string(e.seed) + '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["dim"] = spec.dim;
    j["samples"] = spec.samples;
    j["seed"] = spec.seed;
    j["estimates"] = nlohmann::ordered_json::object();
    for (const auto& [m, e] : estimates) {
      j["estimates"][std::string(to_string(m))] = {{"value", polar::detail::rounded(e.value)},
                                                   {"std_error", polar::detail::rounded(e.std_error)}};
    }
    text = j.dump() + "\n";
  }
  write_all(spec.output, out, text);
  return ok;
}

inline int do_search(const CommandSpec& spec, std::ostream& out) {
  const ExtremalResult best = extremal_search_chebyshev(spec.dim, spec.iterations, spec.seed);
  nlohmann::ordered_json j;
  j["dim"] = spec.dim;
  j["iterations"] = spec.iterations;
  j["seed"] = spec.seed;
  j["value"] = best.value;
  j["exceeds_one"] = best.value > 1.0 + 1e-12;
  j["groups"] = nlohmann::ordered_json::array();
  for (const Group& g : best.society.groups) {
    j["groups"].push_back({{"name", g.label}, {"weight", g.weight}, {"position", g.position.coords}});
  }
  write_all(spec.output, out, j.dump(2) + "\n");
  return ok;
}

inline int do_validate(const CommandSpec& spec, std::istream& in, std::ostream& out,
                       std::ostream& err, const RunContext& ctx) {
  std::istringstream text(read_all(spec.input, in));
  ReadOptions opts;
  opts.validate = false;
  const Society society = read_society(text, DatasetSchema::society(), opts);
  const auto violations = validate_society(society, spec.weight_tol, spec.coord_tol);
  if (!violations.empty()) {
    for (const Violation& v : violations) err << v.rule << ": " << v.message << '\n';
    return domain_error;
  }
  std::string report = paint(ctx, "ok", true) + ": " + std::to_string(society.groups.size()) +
                       " groups, dim " + std::to_string(society.dim) + "\n";
  for (std::size_t i : zero_weight_groups(society)) {
    report += "warning: group '" + society.groups[i].label + "' has zero weight\n";
  }
  write_all(spec.output, out, report);
  return ok;
}

inline int do_table1(const CommandSpec& spec, std::ostream& out, const RunContext& ctx) {
  const auto rows = load_reference_table();
  std::ostringstream buf;
  write_reference_table(buf, rows);
  bool pass = true;
  for (const auto& r : rows) pass = pass && table_row_ordered(r);
  buf << "# ordering p_cheb > p_euc > p_man: " << paint(ctx, pass ? "PASS" : "FAIL", pass)
      << '\n';
  write_all(spec.output, out, buf.str());
  return pass ? ok : domain_error;
}

} // namespace detail

/// Throws UsageError on bad input or --help.
inline CommandSpec parse_args(const std::vector<std::string>& argv) {
  CommandSpec spec;
  Subcommand chosen = Subcommand::compute;
  CLI::App app{"Multidimensional polarization indices", "polarization"};
  detail::build(app, spec, chosen);

  // CLI11 wants argv in reverse order when given a vector.
  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), ok);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), ok);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.\n", usage_error);
  }
  spec.subcommand = chosen;
  if (chosen == Subcommand::attach && spec.quorum > spec.neighbors) {
    throw UsageError("--quorum must not exceed --neighbors\n", usage_error);
  }
  if (chosen == Subcommand::grid && spec.l_min > spec.l_max) {
    throw UsageError("--l-min must not exceed --l-max\n", usage_error);
  }
  return spec;
}

inline int run(const CommandSpec& spec, std::istream& in, std::ostream& out, std::ostream& err,
               const RunContext& ctx = {}) {
  try {
    switch (spec.subcommand) {
    case Subcommand::compute:
      return detail::do_compute(spec, in, out, err);
    case Subcommand::attach:
      return detail::do_attach(spec, in, out);
    case Subcommand::aggregate:
      return detail::do_aggregate(spec, in, out);
    case Subcommand::grid:
      return detail::do_grid(spec, out);
    case Subcommand::limit:
      return detail::do_limit(spec, out);
    case Subcommand::search:
      return detail::do_search(spec, out);
    case Subcommand::validate:
      return detail::do_validate(spec, in, out, err, ctx);
    case Subcommand::table1:
      return detail::do_table1(spec, out, ctx);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return io_error;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return io_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return domain_error;
  }
  return usage_error;
}

/// parse_args + run, with usage errors reported on `err` (help on `out`).
inline int main(const std::vector<std::string>& argv, std::istream& in, std::ostream& out,
                std::ostream& err, const RunContext& ctx = {}) {
  CommandSpec spec;
  try {
    spec = parse_args(argv);
  } catch (const UsageError& e) {
    (e.code() == ok ? out : err) << e.what();
    return e.code();
  }
  return run(spec, in, out, err, ctx);
}

} // namespace polar::cli
