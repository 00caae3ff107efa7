#pragma once

// Test-only reference evaluations written directly from the closed forms,
// deliberately sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Pt {
  double w;
  std::vector<double> p;
};

struct Values {
  double euc, man, cheb;
};

inline Values polarization(const std::vector<Pt>& groups) {
  const std::size_t m = groups.front().p.size();
  std::vector<double> c(m, 0.0);
  double wsum = 0.0;
  for (const auto& g : groups) wsum += g.w;
  for (const auto& g : groups)
    for (std::size_t j = 0; j < m; ++j) c[j] += g.w / wsum * g.p[j];

  double euc = 0.0, man = 0.0, cheb = 0.0;
  for (const auto& g : groups) {
    double sq = 0.0, ab = 0.0, mx = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = g.p[j] - c[j];
      sq += d * d;
      ab += std::fabs(d);
      mx = std::max(mx, std::fabs(d));
    }
    euc += g.w / wsum * std::sqrt(sq);
    man += g.w / wsum * ab;
    cheb += g.w / wsum * mx;
  }
  const double md = static_cast<double>(m);
  return {2.0 / std::sqrt(md) * euc, 2.0 / md * man, 2.0 * cheb};
}

/// Literal double sum over all ordered pairs.
inline double esteban_ray(const std::vector<double>& pi, const std::vector<double>& y,
                          double alpha, double k) {
  double s = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (std::size_t j = 0; j < pi.size(); ++j)
      s += std::pow(pi[i], 1.0 + alpha) * pi[j] * std::fabs(y[i] - y[j]);
  return k * s;
}

/// Double loop with the discrete metric (0 on the diagonal, 1 elsewhere).
inline double reynal_querol(const std::vector<double>& pi, double alpha, double k) {
  double s = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (std::size_t j = 0; j < pi.size(); ++j)
      if (i != j) s += std::pow(pi[i], 1.0 + alpha) * pi[j];
  return k * s;
}

/// Every composition of `steps` units into `parts` nonnegative parts.
inline void compositions(std::size_t parts, std::size_t steps, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(steps);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t s = 0; s <= steps; ++s) {
    cur.push_back(s);
    compositions(parts, steps - s, cur, out);
    cur.pop_back();
  }
}

} // namespace oracle
