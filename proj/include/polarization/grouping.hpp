#pragma once

// Individual-level chambers: attaching independents to unions by a
// nearest-neighbour quorum, and collapsing a chamber into a Society.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarization/core.hpp"
#include "polarization/errors.hpp"

namespace polar {

inline constexpr std::string_view independent_label = "Independent";

struct Individual {
  std::string id;
  Position position;
  std::optional<std::string> affiliation; // nullopt: Independent

  bool independent() const noexcept { return !affiliation.has_value(); }

  friend bool operator==(const Individual&, const Individual&) = default;
};

struct Chamber {
  std::size_t dim = 0;
  std::vector<Individual> members;

  friend bool operator==(const Chamber&, const Chamber&) = default;
};

struct AttachmentConfig {
  std::size_t neighbors = 3;
  std::size_t quorum = 2;
  double radius = std::numeric_limits<double>::infinity(); // infinity: unbounded
  Metric metric = Metric::euclidean;
};

struct Neighbor {
  std::string id;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

inline void validate_chamber(const Chamber& chamber) {
  if (chamber.dim == 0) throw DimensionError("chamber dimension must be positive");
  if (chamber.members.empty()) throw ValidationError({{"empty", Violation::npos, {}, "chamber has no members"}});
  std::set<std::string_view> seen;
  for (const Individual& ind : chamber.members) {
    if (ind.position.size() != chamber.dim) {
      throw DimensionError("member '" + ind.id + "' has " + std::to_string(ind.position.size()) +
                           " coordinates, expected " + std::to_string(chamber.dim));
    }
    if (!seen.insert(ind.id).second) throw ValidationError({{"duplicate-id", Violation::npos, ind.id, "duplicate id '" + ind.id + "'"}});
  }
}

inline void validate_config(const AttachmentConfig& config) {
  if (config.neighbors == 0) throw ParameterError("neighbors must be positive");
  if (config.quorum == 0 || config.quorum > config.neighbors) {
    throw ParameterError("quorum must be in [1, neighbors]");
  }
  if (!(config.radius > 0.0)) throw ParameterError("radius must be positive");
}

namespace detail {

inline std::vector<std::pair<Neighbor, const Individual*>>
neighbors_of(const Chamber& chamber, const Individual& target, const AttachmentConfig& config) {
  std::vector<std::pair<Neighbor, const Individual*>> found;
  for (const Individual& other : chamber.members) {
    if (other.independent() || other.id == target.id) continue;
    const double d = distance(target.position, other.position, config.metric);
    if (d <= config.radius) found.push_back({{other.id, d}, &other});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.distance != b.first.distance) return a.first.distance < b.first.distance;
    return a.first.id < b.first.id;
  });
  if (found.size() > config.neighbors) found.resize(config.neighbors);
  return found;
}

inline const Individual& find_member(const Chamber& chamber, std::string_view id) {
  for (const Individual& ind : chamber.members) {
    if (ind.id == id) return ind;
  }
  throw LookupError("no member with id '" + std::string(id) + "'");
}

} // namespace detail

/// Up to `neighbors` affiliated members within `radius` of the target,
/// ordered by (distance, id). Independents are never candidates.
inline std::vector<Neighbor> nearest_neighbors(const Chamber& chamber, std::string_view target_id,
                                               const AttachmentConfig& config = {}) {
  validate_config(config);
  const Individual& target = detail::find_member(chamber, target_id);
  std::vector<Neighbor> out;
  for (auto& [n, _] : detail::neighbors_of(chamber, target, config)) out.push_back(std::move(n));
  return out;
}

/// The union an independent would join, if exactly one union holds at least
/// `quorum` of its nearest neighbours.
inline std::optional<std::string> attachment_for(const Chamber& chamber, const Individual& target,
                                                 const AttachmentConfig& config) {
  std::map<std::string, std::size_t> votes;
  for (const auto& [_, member] : detail::neighbors_of(chamber, target, config)) {
    ++votes[*member->affiliation];
  }
  std::optional<std::string> winner;
  for (const auto& [label, count] : votes) {
    if (count < config.quorum) continue;
    if (winner) return std::nullopt; // two unions at quorum
    winner = label;
  }
  return winner;
}

/// Single pass against the original affiliations: independents attached in
/// this call do not count as neighbours for other independents. A second
/// call on the result may therefore attach more members, but never fewer.
inline Chamber attach_independents(const Chamber& chamber, const AttachmentConfig& config = {}) {
  validate_chamber(chamber);
  validate_config(config);
  Chamber out = chamber;
  for (std::size_t i = 0; i < chamber.members.size(); ++i) {
    const Individual& member = chamber.members[i];
    if (!member.independent()) continue;
    out.members[i].affiliation = attachment_for(chamber, member, config);
  }
  return out;
}

/// One group per union: position is the plain mean of member positions,
/// weight is the seat share. Groups come out sorted by label; remaining
/// independents form a trailing "Independent" group when `residual_cluster`
/// is set and are an error otherwise.
inline Society aggregate(const Chamber& chamber, bool residual_cluster = false) {
  validate_chamber(chamber);

  struct Acc {
    std::vector<double> sum;
    std::size_t count = 0;
  };
  std::map<std::string, Acc> unions;
  Acc residual{std::vector<double>(chamber.dim, 0.0), 0};

  // Sum in id order so the result does not depend on member order.
  std::vector<const Individual*> order;
  for (const Individual& ind : chamber.members) order.push_back(&ind);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

  for (const Individual* ptr : order) {
    const Individual& ind = *ptr;
    Acc* acc = &residual;
    if (!ind.independent()) {
      auto [it, inserted] = unions.try_emplace(*ind.affiliation);
      if (inserted) it->second.sum.assign(chamber.dim, 0.0);
      acc = &it->second;
    }
    for (std::size_t j = 0; j < chamber.dim; ++j) acc->sum[j] += ind.position[j];
    ++acc->count;
  }
  if (residual.count > 0 && !residual_cluster) {
    throw AggregationError(std::to_string(residual.count) +
                           " independent member(s) remain; attach them or enable the residual cluster");
  }

  const auto total = static_cast<double>(chamber.members.size());
  Society society{chamber.dim, {}};
  auto emit = [&](std::string label, const Acc& acc) {
    const auto count = static_cast<double>(acc.count);
    std::vector<double> mean(acc.sum);
    for (double& x : mean) x /= count;
    society.groups.push_back({std::move(label), count / total, Position(std::move(mean))});
  };
  for (const auto& [label, acc] : unions) emit(label, acc);
  if (residual.count > 0) emit(std::string(independent_label), residual);
  return society;
}

} // namespace polar
