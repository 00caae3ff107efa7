#pragma once

// Delimited-text and JSON formats:
//
//   chamber CSV   id,x1,...,xm,group      (empty group or IND: independent)
//   society CSV   name,weight,x1,...,xm
//   series CSV    l,n,p_euc,p_man,p_cheb
//   report JSON   {"center":[...],"n":..,"dim":..,"values":{...},"modified":{...}}
//
// Comma separated, header first, '.' decimal point, no quoting. Parse errors
// carry the 1-based row number with the header counted as row 1.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "polarization/comparative.hpp"
#include "polarization/core.hpp"
#include "polarization/errors.hpp"
#include "polarization/experiments.hpp"
#include "polarization/grouping.hpp"

namespace polar {

enum class DatasetKind { chamber, society };

/// Column layout of a chamber or society file. `dim` of 0 means "take it
/// from the header". Column indices are filled in by bind_columns().
struct DatasetSchema {
  DatasetKind kind = DatasetKind::society;
  std::size_t dim = 0;

  std::size_t key_column = 0; // id (chamber) or name (society)
  std::optional<std::size_t> weight_column;
  std::optional<std::size_t> group_column;
  std::vector<std::size_t> coord_columns;
  std::size_t width = 0;

  static DatasetSchema chamber(std::size_t dim = 0) { DatasetSchema s; s.kind = DatasetKind::chamber; s.dim = dim; return s; }
  static DatasetSchema society(std::size_t dim = 0) { DatasetSchema s; s.kind = DatasetKind::society; s.dim = dim; return s; }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view text, std::size_t row, std::string_view column) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(row, "column '" + std::string(column) + "': not a number: '" +
                              std::string(text) + "'");
  }
  return value;
}

/// Reads lines, dropping blank ones, and tracks 1-based row numbers.
class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++row_;
      if (!trim(line).empty()) return true;
    }
    if (in_.bad()) throw ParseError(row_ + 1, "read failure");
    return false;
  }

  std::size_t row() const noexcept { return row_; }

private:
  std::istream& in_;
  std::size_t row_ = 0;
};

inline std::string shortest(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

} // namespace detail

/// Resolves column positions from a header row.
inline DatasetSchema bind_columns(DatasetSchema schema, std::string_view header) {
  const auto fields = detail::split_fields(header);
  std::map<std::string, std::size_t, std::less<>> names;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string name(detail::trim(fields[i]));
    if (!names.emplace(name, i).second) throw ParseError(1, "duplicate column '" + name + "'");
  }
  auto need = [&](std::string_view name) {
    auto it = names.find(name);
    if (it == names.end()) throw ParseError(1, "missing column '" + std::string(name) + "'");
    return it->second;
  };

  if (schema.kind == DatasetKind::chamber) {
    schema.key_column = need("id");
    schema.group_column = need("group");
  } else {
    schema.key_column = need("name");
    schema.weight_column = need("weight");
  }
  std::size_t dim = 0;
  while (names.count("x" + std::to_string(dim + 1)) != 0) ++dim;
  if (schema.dim == 0) schema.dim = dim;
  if (dim != schema.dim || dim == 0) {
    throw ParseError(1, "expected coordinate columns x1..x" + std::to_string(schema.dim) +
                            ", header has " + std::to_string(dim));
  }
  const std::size_t expected = dim + 2;
  if (fields.size() != expected) {
    throw ParseError(1, "unexpected columns in header (" + std::to_string(fields.size()) +
                            " found, " + std::to_string(expected) + " expected)");
  }
  schema.coord_columns.clear();
  for (std::size_t j = 1; j <= dim; ++j) schema.coord_columns.push_back(names.at("x" + std::to_string(j)));
  schema.width = fields.size();
  return schema;
}

inline bool is_independent_marker(std::string_view group) {
  group = detail::trim(group);
  return group.empty() || group == "IND";
}

inline Chamber read_chamber(std::istream& in, DatasetSchema schema = DatasetSchema::chamber()) {
  if (schema.kind != DatasetKind::chamber) throw ParameterError("schema is not a chamber schema");
  detail::LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header");
  if (reader.row() != 1) throw ParseError(reader.row(), "header must be the first row");
  schema = bind_columns(schema, line);

  Chamber chamber{schema.dim, {}};
  std::set<std::string> ids;
  while (reader.next(line)) {
    const std::size_t row = reader.row();
    const auto fields = detail::split_fields(line);
    if (fields.size() != schema.width) {
      throw ParseError(row, "expected " + std::to_string(schema.width) + " fields, found " +
                                std::to_string(fields.size()));
    }
    Individual ind;
    ind.id = std::string(detail::trim(fields[schema.key_column]));
    if (ind.id.empty()) throw ParseError(row, "empty id");
    if (!ids.insert(ind.id).second) throw ParseError(row, "duplicate id '" + ind.id + "'");
    for (std::size_t j = 0; j < schema.dim; ++j) {
      ind.position.coords.push_back(
          detail::parse_real(fields[schema.coord_columns[j]], row, "x" + std::to_string(j + 1)));
    }
    const auto group = fields[*schema.group_column];
    if (!is_independent_marker(group)) ind.affiliation = std::string(detail::trim(group));
    chamber.members.push_back(std::move(ind));
  }
  if (chamber.members.empty()) throw ParseError(reader.row() + 1, "no data rows");
  return chamber;
}

struct ReadOptions {
  ValidationOptions validation;
  bool rescale = false;  // per-axis min-max onto [0,1] before validation
  bool validate = true;  // false: return the rows as parsed
};

/// Parses, optionally rescales, validates and renormalizes.
inline Society read_society(std::istream& in, DatasetSchema schema = DatasetSchema::society(),
                            const ReadOptions& opts = {}) {
  if (schema.kind != DatasetKind::society) throw ParameterError("schema is not a society schema");
  detail::LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header");
  if (reader.row() != 1) throw ParseError(reader.row(), "header must be the first row");
  schema = bind_columns(schema, line);

  Society society{schema.dim, {}};
  while (reader.next(line)) {
    const std::size_t row = reader.row();
    const auto fields = detail::split_fields(line);
    if (fields.size() != schema.width) {
      throw ParseError(row, "expected " + std::to_string(schema.width) + " fields, found " +
                                std::to_string(fields.size()));
    }
    Group g;
    g.label = std::string(detail::trim(fields[schema.key_column]));
    g.weight = detail::parse_real(fields[*schema.weight_column], row, "weight");
    for (std::size_t j = 0; j < schema.dim; ++j) {
      g.position.coords.push_back(
          detail::parse_real(fields[schema.coord_columns[j]], row, "x" + std::to_string(j + 1)));
    }
    society.groups.push_back(std::move(g));
  }
  if (society.groups.empty()) throw ParseError(reader.row() + 1, "no data rows");
  if (opts.rescale) society = rescale_to_unit_cube(std::move(society));
  if (!opts.validate) return society;
  return normalized(society, opts.validation);
}

/// Reals in reports and series: rounded to 6 decimals, shortest form.
inline std::string format_real(double x) {
  double r = std::round(x * 1e6) / 1e6;
  if (r == 0.0) r = 0.0; // drop the sign of -0
  return detail::shortest(r);
}

/// Full precision, used where files must round-trip exactly.
inline std::string format_exact(double x) {
  if (x == 0.0) x = 0.0;
  return detail::shortest(x);
}

inline void write_society(std::ostream& out, const Society& society) {
  out << "name,weight";
  for (std::size_t j = 1; j <= society.dim; ++j) out << ",x" << j;
  out << '\n';
  for (const Group& g : society.groups) {
    out << g.label << ',' << format_exact(g.weight);
    for (double c : g.position) out << ',' << format_exact(c);
    out << '\n';
  }
}

inline void write_chamber(std::ostream& out, const Chamber& chamber) {
  out << "id";
  for (std::size_t j = 1; j <= chamber.dim; ++j) out << ",x" << j;
  out << ",group\n";
  for (const Individual& ind : chamber.members) {
    out << ind.id;
    for (double c : ind.position) out << ',' << format_exact(c);
    out << ',' << ind.affiliation.value_or("") << '\n';
  }
}

inline void write_series(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << "l,n,p_euc,p_man,p_cheb\n";
  for (const SeriesRow& r : rows) {
    out << r.l << ',' << r.n << ',' << format_real(r.p_euc) << ',' << format_real(r.p_man) << ','
        << format_real(r.p_cheb) << '\n';
  }
}

enum class ReportFormat { json, csv };

struct ReportFields {
  std::vector<Metric> metrics{all_metrics.begin(), all_metrics.end()};
  bool modified = true;
  std::optional<ComparativeValues> comparative; // one-dimensional inputs only
};

namespace detail {

// nlohmann serializes doubles in shortest round-trip form, which for values
// already rounded to 6 decimals matches format_real.
inline double rounded(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

} // namespace detail

inline std::string write_report(const PolarizationReport& report, ReportFormat format,
                                const ReportFields& fields = {}) {
  if (format == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["center"] = nlohmann::ordered_json::array();
    for (double c : report.center) j["center"].push_back(detail::rounded(c));
    j["n"] = report.n;
    j["dim"] = report.dim;
    auto block = [&](const std::map<Metric, double>& values) {
      nlohmann::ordered_json b = nlohmann::ordered_json::object();
      for (Metric m : fields.metrics) b[std::string(to_string(m))] = detail::rounded(values.at(m));
      return b;
    };
    j["values"] = block(report.values);
    if (fields.modified) j["modified"] = block(report.modified_values);
    if (fields.comparative) {
      j["comparative"] = {{"esteban_ray", detail::rounded(fields.comparative->esteban_ray)},
                          {"reynal_querol", detail::rounded(fields.comparative->reynal_querol)},
                          {"gini_er", detail::rounded(fields.comparative->gini_er)}};
    }
    return j.dump() + "\n";
  }

  std::ostringstream out;
  for (std::size_t j = 1; j <= report.center.size(); ++j) out << "center_" << j << ',';
  out << "n,dim";
  for (Metric m : fields.metrics) out << ',' << to_string(m);
  if (fields.modified) {
    for (Metric m : fields.metrics) out << ",modified_" << to_string(m);
  }
  if (fields.comparative) out << ",esteban_ray,reynal_querol,gini_er";
  out << '\n';
  for (double c : report.center) out << format_real(c) << ',';
  out << report.n << ',' << report.dim;
  for (Metric m : fields.metrics) out << ',' << format_real(report.values.at(m));
  if (fields.modified) {
    for (Metric m : fields.metrics) out << ',' << format_real(report.modified_values.at(m));
  }
  if (fields.comparative) {
    out << ',' << format_real(fields.comparative->esteban_ray) << ','
        << format_real(fields.comparative->reynal_querol) << ','
        << format_real(fields.comparative->gini_er);
  }
  out << '\n';
  return out.str();
}

/// Inverse of the JSON form of write_report. Missing metric keys stay absent.
inline PolarizationReport read_report_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  PolarizationReport report;
  for (double c : j.at("center")) report.center.coords.push_back(c);
  report.n = j.at("n").get<std::size_t>();
  report.dim = j.at("dim").get<std::size_t>();
  auto fill = [](const nlohmann::json& block, std::map<Metric, double>& into) {
    for (Metric m : all_metrics) {
      if (block.contains(to_string(m))) into[m] = block.at(std::string(to_string(m))).get<double>();
    }
  };
  fill(j.at("values"), report.values);
  if (j.contains("modified")) fill(j.at("modified"), report.modified_values);
  return report;
}

struct Table1Row {
  int year = 0;
  Position center;
  double p_euc = 0.0;
  double p_man = 0.0;
  double p_cheb = 0.0;
};

/// Published per-year values for the 1994-2003 State Duma (two-dimensional
/// political map, groups-points framework). The deputy coordinates behind
/// them are not available, so these are a fixture for invariants only.
inline std::vector<Table1Row> load_reference_table() {
  return {
      {1994, {0.6746, 0.5523}, 0.3479, 0.3136, 0.4487},
      {1995, {0.7668, 0.7231}, 0.2190, 0.1876, 0.2919},
      {1996, {0.7251, 0.5329}, 0.4154, 0.3780, 0.5334},
      {1997, {0.6430, 0.6181}, 0.4683, 0.3865, 0.6298},
      {1998, {0.7121, 0.5378}, 0.3563, 0.2920, 0.4821},
      {1999, {0.6922, 0.6160}, 0.3442, 0.2913, 0.4602},
      {2000, {0.4948, 0.5469}, 0.3722, 0.3175, 0.4949},
      {2001, {0.5110, 0.5890}, 0.3857, 0.3191, 0.5218},
      {2002, {0.4564, 0.6124}, 0.4805, 0.3818, 0.6561},
      {2003, {0.4530, 0.5169}, 0.4796, 0.3797, 0.6654},
  };
}

inline bool table_row_ordered(const Table1Row& row) {
  return row.p_cheb > row.p_euc && row.p_euc > row.p_man;
}

inline void write_reference_table(std::ostream& out, const std::vector<Table1Row>& rows) {
  out << "year,c1,c2,p_euc,p_man,p_cheb,ordered\n";
  for (const Table1Row& r : rows) {
    out << r.year << ',' << format_real(r.center[0]) << ',' << format_real(r.center[1]) << ','
        << format_real(r.p_euc) << ',' << format_real(r.p_man) << ',' << format_real(r.p_cheb)
        << ',' << (table_row_ordered(r) ? "yes" : "no") << '\n';
  }
}

} // namespace polar
