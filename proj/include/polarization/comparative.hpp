#pragma once

// One-dimensional polarization indices from the income-polarization
// literature, kept for side-by-side comparison with P.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "polarization/core.hpp"
#include "polarization/errors.hpp"

namespace polar {

struct DiscreteDistribution1D {
  std::vector<double> shares;
  std::vector<double> levels;
};

struct ERParams {
  static constexpr double alpha_max = 1.6;

  double alpha = 1.0;
  double k = 1.0;
};

/// Defaults for the discrete-metric variant: k = 4 puts two equal groups at 1.
inline constexpr ERParams reynal_querol_defaults{1.0, 4.0};

namespace detail {

inline void check_params(const ERParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= ERParams::alpha_max)) {
    throw ParameterError("alpha = " + std::to_string(params.alpha) + " outside [0, 1.6]");
  }
  if (!(params.k > 0.0) || !std::isfinite(params.k)) {
    throw ParameterError("k must be positive, got " + std::to_string(params.k));
  }
}

inline void check_shares(const std::vector<double>& shares, double tol) {
  std::vector<Violation> violations;
  if (shares.empty()) violations.push_back({"empty", Violation::npos, {}, "no shares"});
  double sum = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!(shares[i] >= 0.0 && shares[i] <= 1.0)) {
      violations.push_back({"negative-weight", i, {},
                            "share " + std::to_string(i + 1) + " = " + std::to_string(shares[i])});
    }
    sum += shares[i];
  }
  if (!shares.empty() && !(std::abs(sum - 1.0) <= tol)) {
    violations.push_back({"weight-sum", Violation::npos, {},
                          "shares sum to " + std::to_string(sum) + ", expected 1"});
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

} // namespace detail

/// ER = k sum_i sum_j pi_i^(1+alpha) pi_j |y_i - y_j|.
inline double esteban_ray(const DiscreteDistribution1D& dist, const ERParams& params = {},
                          double share_tol = 1e-9) {
  detail::check_params(params);
  if (dist.levels.size() != dist.shares.size()) {
    throw DimensionError("shares and levels differ in length");
  }
  detail::check_shares(dist.shares, share_tol);
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.shares.size(); ++i) {
    const double wi = std::pow(dist.shares[i], 1.0 + params.alpha);
    for (std::size_t j = 0; j < dist.shares.size(); ++j) {
      acc += wi * dist.shares[j] * std::abs(dist.levels[i] - dist.levels[j]);
    }
  }
  return params.k * acc;
}

/// ER with the discrete metric: k sum_i pi_i^(1+alpha) sum_{j != i} pi_j.
inline double reynal_querol(const std::vector<double>& shares,
                            const ERParams& params = reynal_querol_defaults,
                            double share_tol = 1e-9) {
  detail::check_params(params);
  detail::check_shares(shares, share_tol);
  double total = 0.0;
  for (double s : shares) total += s;
  double acc = 0.0;
  for (double s : shares) acc += std::pow(s, 1.0 + params.alpha) * (total - s);
  return params.k * acc;
}

/// ER at alpha = 0, k = 1. This is the quantity the source identifies with
/// the Gini coefficient; note it equals sum_ij pi_i pi_j |y_i - y_j| with no
/// division by twice the mean, so it is the conventional Gini only when the
/// mean level is 1/2.
inline double gini_er(const DiscreteDistribution1D& dist) {
  return esteban_ray(dist, ERParams{0.0, 1.0});
}

struct ComparativeValues {
  double esteban_ray = 0.0;
  double reynal_querol = 0.0;
  double gini_er = 0.0;
};

/// Reads a one-dimensional society as a distribution: weights are the
/// shares, the single coordinate is the level.
inline DiscreteDistribution1D as_distribution(const Society& society) {
  if (society.dim != 1) {
    throw DimensionError("comparative indices need a one-dimensional society, got m = " +
                         std::to_string(society.dim));
  }
  DiscreteDistribution1D dist;
  for (const Group& g : society.groups) {
    dist.shares.push_back(g.weight);
    dist.levels.push_back(g.position[0]);
  }
  return dist;
}

inline ComparativeValues comparative_values(const Society& society, const ERParams& er = {},
                                            const ERParams& rq = reynal_querol_defaults) {
  const auto dist = as_distribution(society);
  return {esteban_ray(dist, er), reynal_querol(dist.shares, rq), gini_er(dist)};
}

} // namespace polar
