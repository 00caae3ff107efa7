#pragma once

// Grid-convergence studies, Monte Carlo limits, random societies and a
// hill-climbing probe for large Chebyshev index values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polarization/core.hpp"
#include "polarization/errors.hpp"

namespace polar {

inline constexpr std::uint64_t default_seed = 20160407;
inline constexpr std::size_t default_max_groups = 1'000'000;

/// mt19937_64 with doubles taken from the top 53 bits of each draw, so a
/// seed gives the same stream with any standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

private:
  std::mt19937_64 engine_;
};

/// l^dim, or SizeError when that exceeds max_groups.
inline std::size_t grid_size(std::size_t dim, std::size_t l,
                             std::size_t max_groups = default_max_groups) {
  if (dim == 0) throw ParameterError("dimension must be at least 1");
  if (l < 2) throw ParameterError("grid resolution l must be at least 2, got " + std::to_string(l));
  std::size_t n = 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (n > max_groups / l) {
      throw SizeError("grid " + std::to_string(l) + "^" + std::to_string(dim) + " exceeds " +
                      std::to_string(max_groups) + " groups");
    }
    n *= l;
  }
  return n;
}

/// l^m equal groups at the lattice points whose coordinates are (i-1)/(l-1).
/// The last axis varies fastest.
inline Society uniform_grid_society(std::size_t dim, std::size_t l,
                                    std::size_t max_groups = default_max_groups) {
  const std::size_t n = grid_size(dim, l, max_groups);

  Society society{dim, {}};
  society.groups.reserve(n);
  const double weight = 1.0 / static_cast<double>(n);
  const double step = static_cast<double>(l - 1);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t g = 0; g < n; ++g) {
    std::vector<double> coords(dim);
    std::string label = "g";
    for (std::size_t j = 0; j < dim; ++j) {
      coords[j] = static_cast<double>(idx[j]) / step;
      label += (j == 0 ? "" : "_") + std::to_string(idx[j] + 1);
    }
    society.groups.push_back({std::move(label), weight, Position(std::move(coords))});
    for (std::size_t j = dim; j-- > 0;) {
      if (++idx[j] < l) break;
      idx[j] = 0;
    }
  }
  return society;
}

struct SeriesRow {
  std::size_t l = 0;
  std::size_t n = 0;
  double p_euc = 0.0;
  double p_man = 0.0;
  double p_cheb = 0.0;
};

inline std::vector<SeriesRow> convergence_series(std::size_t dim, std::size_t l_min,
                                                 std::size_t l_max,
                                                 std::size_t max_groups = default_max_groups) {
  if (l_min < 2 || l_min > l_max) {
    throw ParameterError("need 2 <= l_min <= l_max, got " + std::to_string(l_min) + ".." +
                         std::to_string(l_max));
  }
  grid_size(dim, l_max, max_groups);
  std::vector<SeriesRow> rows;
  for (std::size_t l = l_min; l <= l_max; ++l) {
    const auto report = polarization_report(uniform_grid_society(dim, l, max_groups));
    rows.push_back({l, report.n, report.values.at(Metric::euclidean),
                    report.values.at(Metric::manhattan), report.values.at(Metric::chebyshev)});
  }
  return rows;
}

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// k(metric, m) * E d(X, c) for X uniform on [0,1]^m and c its center.
/// This is the value grid societies approach as l grows.
inline McEstimate continuum_limit_estimate(std::size_t dim, Metric metric, std::size_t samples,
                                           std::uint64_t seed = default_seed) {
  if (dim == 0) throw ParameterError("dimension must be at least 1");
  if (samples == 0) throw ParameterError("samples must be at least 1");
  Rng rng(seed);
  const std::vector<double> center(dim, 0.5);
  std::vector<double> x(dim);
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& xi : x) xi = rng.uniform();
    const double d = distance(x, center, metric);
    const double delta = d - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (d - mean);
  }
  const double k = normalizing_coefficient(metric, dim);
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {k * mean, k * std::sqrt(var / static_cast<double>(samples)), samples, seed};
}

/// n groups, positions uniform in the cube, weights uniform on (0,1] then
/// normalized.
inline Society random_society(std::size_t dim, std::size_t n, std::uint64_t seed) {
  if (dim == 0 || n == 0) throw ParameterError("dimension and group count must be positive");
  Rng rng(seed);
  Society society{dim, {}};
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> coords(dim);
    for (double& c : coords) c = rng.uniform();
    const double w = 1.0 - rng.uniform();
    total += w;
    society.groups.push_back({"r" + std::to_string(i + 1), w, Position(std::move(coords))});
  }
  for (Group& g : society.groups) g.weight /= total;
  return society;
}

/// Three groups with weights (1/2, 1/4, 1/4) at (0,0), (1,0), (1,1), padded
/// with zeros for m > 2. Its Chebyshev index is 1.125.
inline Society chebyshev_counterexample(std::size_t dim = 2) {
  if (dim < 2) throw ParameterError("the counterexample needs at least two dimensions");
  auto at = [dim](double x, double y) {
    std::vector<double> c(dim, 0.0);
    c[0] = x;
    c[1] = y;
    return Position(std::move(c));
  };
  return Society{dim, {{"A", 0.5, at(0, 0)}, {"B", 0.25, at(1, 0)}, {"C", 0.25, at(1, 1)}}};
}

struct ExtremalResult {
  Society society;
  double value = 0.0;
};

struct SearchOptions {
  std::size_t restart_every = 500;
  std::size_t max_groups = 6;
};

/// Random-restart hill climbing on P_cheb. Each restart starts from a random
/// society (the first one, for m >= 2, from chebyshev_counterexample), then
/// proposes single-group moves or weight rescalings and keeps strict
/// improvements. No global optimum is claimed.
inline ExtremalResult extremal_search_chebyshev(std::size_t dim, std::size_t iterations,
                                                std::uint64_t seed = default_seed,
                                                const SearchOptions& opts = {}) {
  if (dim == 0) throw ParameterError("dimension must be at least 1");
  if (iterations == 0) throw ParameterError("iterations must be at least 1");
  if (opts.restart_every == 0 || opts.max_groups < 2) throw ParameterError("bad search options");

  Rng rng(seed);
  auto score = [](const Society& s) { return polarization(s, Metric::chebyshev); };
  auto renormalize = [](Society& s) {
    double total = 0.0;
    for (const Group& g : s.groups) total += g.weight;
    for (Group& g : s.groups) g.weight /= total;
  };

  ExtremalResult best;
  best.value = -1.0;
  std::size_t done = 0;
  for (std::size_t restart = 0; done < iterations; ++restart) {
    Society current = restart == 0 && dim >= 2
                          ? chebyshev_counterexample(dim)
                          : random_society(dim, 2 + rng.index(opts.max_groups - 1),
                                           static_cast<std::uint64_t>(rng.uniform() * 0x1.0p53));
    double value = score(current);
    const std::size_t budget = std::min(opts.restart_every, iterations - done);
    for (std::size_t it = 0; it < budget; ++it) {
      // Step size anneals from 0.5 to 0.005 within a restart.
      const double t = static_cast<double>(it) / static_cast<double>(budget);
      const double step = 0.5 * std::pow(0.01, t);
      Society candidate = current;
      Group& g = candidate.groups[rng.index(candidate.groups.size())];
      if (rng.uniform() < 0.5) {
        for (double& c : g.position.coords) c = std::clamp(c + rng.uniform(-step, step), 0.0, 1.0);
      } else {
        g.weight *= std::exp(rng.uniform(-step, step) * 4.0);
        renormalize(candidate);
      }
      const double v = score(candidate);
      if (v > value) {
        value = v;
        current = std::move(candidate);
      }
    }
    done += budget;
    if (value > best.value) best = {std::move(current), value};
  }
  return best;
}

} // namespace polar
