#pragma once

// Center of mass and the P / P' polarization index families for a society
// of weighted groups placed in the unit cube [0,1]^m.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarization/errors.hpp"

namespace polar {

/// A point in [0,1]^m.
struct Position {
  std::vector<double> coords;

  Position() = default;
  explicit Position(std::vector<double> c) : coords(std::move(c)) {}
  Position(std::initializer_list<double> c) : coords(c) {}

  std::size_t size() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
  auto begin() const noexcept { return coords.begin(); }
  auto end() const noexcept { return coords.end(); }
  std::span<const double> view() const noexcept { return coords; }

  friend bool operator==(const Position&, const Position&) = default;
};

struct Group {
  std::string label;
  double weight = 0.0;
  Position position;
};

struct Society {
  std::size_t dim = 0;
  std::vector<Group> groups;
};

enum class Metric { euclidean, manhattan, chebyshev };

inline constexpr std::array<Metric, 3> all_metrics{Metric::euclidean, Metric::manhattan,
                                                   Metric::chebyshev};

constexpr std::string_view to_string(Metric metric) {
  switch (metric) {
  case Metric::euclidean:
    return "euclidean";
  case Metric::manhattan:
    return "manhattan";
  case Metric::chebyshev:
    return "chebyshev";
  }
  return "unknown";
}

inline std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : all_metrics) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

/// Coefficient k of P: 2/sqrt(m), 2/m and 2 for the three metrics. It caps
/// the Euclidean and Manhattan variants at 1. The Chebyshev value of 2 does
/// not cap P_cheb at 1 once m >= 2; it is kept as printed in the original
/// definition (see bounds_exceeded).
inline double normalizing_coefficient(Metric metric, std::size_t dim) {
  if (dim == 0) throw DimensionError("dimension must be positive");
  const auto m = static_cast<double>(dim);
  switch (metric) {
  case Metric::euclidean:
    return 2.0 / std::sqrt(m);
  case Metric::manhattan:
    return 2.0 / m;
  case Metric::chebyshev:
    return 2.0;
  }
  return 0.0;
}

/// Coefficient of P' = (2/n) * k, i.e. 4/(n sqrt m), 4/(n m), 4/n.
inline double modified_coefficient(Metric metric, std::size_t dim, std::size_t n) {
  if (n == 0) throw ParameterError("group count must be positive");
  return 2.0 / static_cast<double>(n) * normalizing_coefficient(metric, dim);
}

inline double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (a.size() != b.size()) {
    throw DimensionError("distance between points of length " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  double acc = 0.0;
  switch (metric) {
  case Metric::euclidean:
    for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(acc);
  case Metric::manhattan:
    for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a[j] - b[j]);
    return acc;
  case Metric::chebyshev:
    for (std::size_t j = 0; j < a.size(); ++j) acc = std::max(acc, std::abs(a[j] - b[j]));
    return acc;
  }
  return acc;
}

inline double distance(const Position& a, const Position& b, Metric metric) {
  return distance(a.view(), b.view(), metric);
}

struct ValidationOptions {
  double weight_tol = 1e-9;
  double coord_tol = 1e-9;
};

/// Lists every broken rule; an empty result means the society is usable.
/// Zero weights are allowed here (see zero_weight_groups).
inline std::vector<Violation> validate_society(const Society& society, double weight_tol = 1e-9,
                                               double coord_tol = 1e-9) {
  std::vector<Violation> out;
  if (society.dim == 0) {
    out.push_back({"dimension", Violation::npos, {}, "dimension must be at least 1"});
  }
  if (society.groups.empty()) {
    out.push_back({"empty", Violation::npos, {}, "society has no groups"});
    return out;
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < society.groups.size(); ++i) {
    const Group& g = society.groups[i];
    if (!(g.weight >= 0.0) || !std::isfinite(g.weight)) {
      out.push_back({"negative-weight", i, g.label,
                     "group '" + g.label + "' has weight " + std::to_string(g.weight)});
    }
    sum += g.weight;
    if (g.position.size() != society.dim) {
      out.push_back({"dimension", i, g.label,
                     "group '" + g.label + "' has " + std::to_string(g.position.size()) +
                         " coordinates, expected " + std::to_string(society.dim)});
      continue;
    }
    for (std::size_t j = 0; j < g.position.size(); ++j) {
      const double x = g.position[j];
      if (!(x >= -coord_tol && x <= 1.0 + coord_tol)) {
        out.push_back({"coordinate-range", i, g.label,
                       "group '" + g.label + "' coordinate " + std::to_string(j + 1) + " = " +
                           std::to_string(x) + " outside [0,1]"});
        break;
      }
    }
  }
  if (!(std::abs(sum - 1.0) <= weight_tol)) {
    out.push_back({"weight-sum", Violation::npos, {},
                   "weights sum to " + std::to_string(sum) + ", expected 1"});
  }
  return out;
}

/// Indices of groups with exactly zero weight. They are legal but the CLI
/// reports them as warnings.
inline std::vector<std::size_t> zero_weight_groups(const Society& society) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < society.groups.size(); ++i) {
    if (society.groups[i].weight == 0.0) out.push_back(i);
  }
  return out;
}

/// Validates and rescales weights by 1/sum. Throws ValidationError when
/// any rule is broken.
inline Society normalized(const Society& society, const ValidationOptions& opts = {}) {
  auto violations = validate_society(society, opts.weight_tol, opts.coord_tol);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  Society out = society;
  double sum = 0.0;
  for (const Group& g : out.groups) sum += g.weight;
  if (sum != 1.0) {
    for (Group& g : out.groups) g.weight /= sum;
  }
  return out;
}

/// Per-axis min-max map onto [0,1]. An axis where every group sits at the
/// same value maps to 0.5.
inline Society rescale_to_unit_cube(Society society) {
  for (std::size_t j = 0; j < society.dim; ++j) {
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const Group& g : society.groups) {
      if (g.position.size() != society.dim) throw DimensionError("group '" + g.label + "' has wrong dimension");
      const double x = g.position[j];
      lo = first ? x : std::min(lo, x);
      hi = first ? x : std::max(hi, x);
      first = false;
    }
    for (Group& g : society.groups) {
      g.position[j] = hi > lo ? (g.position[j] - lo) / (hi - lo) : 0.5;
    }
  }
  return society;
}

namespace detail {

// Assumes a normalized society.
inline Position center_unchecked(const Society& society) {
  Position c(std::vector<double>(society.dim, 0.0));
  for (const Group& g : society.groups) {
    for (std::size_t j = 0; j < society.dim; ++j) c[j] += g.weight * g.position[j];
  }
  return c;
}

inline double weighted_spread(const Society& society, const Position& center, Metric metric) {
  double acc = 0.0;
  for (const Group& g : society.groups) acc += g.weight * distance(g.position, center, metric);
  return acc;
}

inline double modified_from(double p, std::size_t n) {
  if (n == 1) return 0.0;
  return 2.0 / static_cast<double>(n) * p;
}

} // namespace detail

/// c = sum_i v_i p_i.
inline Position center_of_mass(const Society& society, const ValidationOptions& opts = {}) {
  return detail::center_unchecked(normalized(society, opts));
}

/// P = k(metric, m) * sum_i v_i d(p_i, c).
inline double polarization(const Society& society, Metric metric,
                           const ValidationOptions& opts = {}) {
  const Society s = normalized(society, opts);
  const Position c = detail::center_unchecked(s);
  return normalizing_coefficient(metric, s.dim) * detail::weighted_spread(s, c, metric);
}

/// P' = (2/n) P, defined as 0 for a single group.
inline double polarization_modified(const Society& society, Metric metric,
                                    const ValidationOptions& opts = {}) {
  return detail::modified_from(polarization(society, metric, opts), society.groups.size());
}

struct PolarizationReport {
  Position center;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::map<Metric, double> values;
  std::map<Metric, double> modified_values;
};

inline PolarizationReport polarization_report(const Society& society,
                                              const ValidationOptions& opts = {}) {
  const Society s = normalized(society, opts);
  PolarizationReport report;
  report.center = detail::center_unchecked(s);
  report.n = s.groups.size();
  report.dim = s.dim;
  for (Metric metric : all_metrics) {
    const double p =
        normalizing_coefficient(metric, s.dim) * detail::weighted_spread(s, report.center, metric);
    report.values[metric] = p;
    report.modified_values[metric] = detail::modified_from(p, report.n);
  }
  return report;
}

/// Metrics whose P value exceeds 1 by more than `tol`. Only Chebyshev can
/// appear here, and only for m >= 2.
inline std::vector<Metric> bounds_exceeded(const PolarizationReport& report, double tol = 1e-12) {
  std::vector<Metric> out;
  for (const auto& [metric, value] : report.values) {
    if (value > 1.0 + tol) out.push_back(metric);
  }
  return out;
}

} // namespace polar
