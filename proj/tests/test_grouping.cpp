#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "polarization/dataio.hpp"
#include "polarization/grouping.hpp"

using namespace polar;

namespace {

Individual member(std::string id, Position p, std::optional<std::string> g = std::nullopt) {
  return {std::move(id), std::move(p), std::move(g)};
}

Chamber small_chamber() {
  return {2,
          {member("t", {0.5, 0.5}), member("x1", {0.4, 0.5}, "X"), member("x2", {0.5, 0.4}, "X"),
           member("y1", {0.6, 0.5}, "Y"), member("z1", {0.9, 0.9}, "Z")}};
}

Chamber fixture() {
  std::ifstream in(POLARIZATION_DATA_DIR "/synthetic_chamber.csv");
  return read_chamber(in);
}

std::optional<std::string> affiliation_of(const Chamber& c, const std::string& id) {
  for (const auto& m : c.members)
    if (m.id == id) return m.affiliation;
  throw std::runtime_error("missing " + id);
}

} // namespace

TEST(NearestNeighbors, ThreeClosestAffiliated) {
  const auto nn = nearest_neighbors(small_chamber(), "t");
  ASSERT_EQ(nn.size(), 3u);
  std::vector<std::string> ids;
  for (const auto& n : nn) {
    ids.push_back(n.id);
    EXPECT_NEAR(n.distance, 0.1, 1e-12);
  }
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<std::string>{"x1", "x2", "y1"}));
}

TEST(NearestNeighbors, RadiusExcludesEverything) {
  AttachmentConfig config;
  config.radius = 0.05;
  EXPECT_TRUE(nearest_neighbors(small_chamber(), "t", config).empty());
}

TEST(NearestNeighbors, EquidistantOrderedById) {
  const Chamber c{1,
                  {member("t", {0.5}), member("b", {0.6}, "X"), member("a", {0.4}, "Y"),
                   member("c", {0.9}, "Z")}};
  AttachmentConfig config;
  config.metric = Metric::manhattan;
  const auto nn = nearest_neighbors(c, "t", config);
  ASSERT_EQ(nn.size(), 3u);
  // 0.5 - 0.4 and 0.6 - 0.5 differ in the last bit; compare with exact ties.
  const Chamber exact{1, {member("t", {0.5}), member("b", {0.75}, "X"), member("a", {0.25}, "Y")}};
  const auto tie = nearest_neighbors(exact, "t", config);
  ASSERT_EQ(tie.size(), 2u);
  EXPECT_EQ(tie[0].id, "a");
  EXPECT_EQ(tie[1].id, "b");
  EXPECT_EQ(tie[0].distance, tie[1].distance);
}

TEST(NearestNeighbors, ExcludesSelfAndIndependents) {
  Chamber c = small_chamber();
  c.members.push_back(member("other", {0.5, 0.5}));
  const auto nn = nearest_neighbors(c, "t");
  for (const auto& n : nn) {
    EXPECT_NE(n.id, "t");
    EXPECT_NE(n.id, "other");
  }
}

TEST(NearestNeighbors, UnknownIdThrows) {
  EXPECT_THROW(nearest_neighbors(small_chamber(), "nobody"), LookupError);
}

TEST(Attach, QuorumMet) {
  const Chamber out = attach_independents(small_chamber());
  EXPECT_EQ(affiliation_of(out, "t"), "X");
}

TEST(Attach, ThreeDistinctUnionsStayIndependent) {
  const Chamber c{2,
                  {member("t", {0.5, 0.5}), member("x", {0.4, 0.5}, "X"),
                   member("y", {0.6, 0.5}, "Y"), member("z", {0.5, 0.6}, "Z")}};
  EXPECT_FALSE(affiliation_of(attach_independents(c), "t").has_value());
}

TEST(Attach, NoIndependentsIsIdentity) {
  const Chamber c{2, {member("x", {0.4, 0.5}, "X"), member("y", {0.6, 0.5}, "Y")}};
  EXPECT_EQ(attach_independents(c), c);
}

TEST(Attach, TwoUnionsAtQuorumStayIndependent) {
  const Chamber c{1,
                  {member("t", {0.5}), member("x1", {0.45}, "X"), member("x2", {0.55}, "X"),
                   member("y1", {0.46}, "Y"), member("y2", {0.54}, "Y")}};
  AttachmentConfig config;
  config.neighbors = 4;
  config.quorum = 2;
  EXPECT_FALSE(affiliation_of(attach_independents(c, config), "t").has_value());
}

TEST(Attach, SinglePassUsesOriginalAffiliations) {
  // Within the radius i2 sees one X member plus i1. i1 joins X, but that
  // does not count towards i2 in the same pass.
  const Chamber c{1,
                  {member("x1", {0.0}, "X"), member("x2", {0.02}, "X"), member("x3", {0.1}, "X"),
                   member("i1", {0.05}), member("i2", {0.5})}};
  AttachmentConfig config;
  config.radius = 0.47;
  const Chamber once = attach_independents(c, config);
  EXPECT_EQ(affiliation_of(once, "i1"), "X");
  EXPECT_FALSE(affiliation_of(once, "i2").has_value());

  // A second pass can attach more members and never un-attaches anyone.
  const Chamber twice = attach_independents(once, config);
  for (std::size_t i = 0; i < once.members.size(); ++i) {
    if (once.members[i].affiliation) {
      EXPECT_EQ(twice.members[i].affiliation, once.members[i].affiliation);
    }
  }
  EXPECT_EQ(affiliation_of(twice, "i2"), "X");
}

TEST(Attach, FixtureHandCheckedExpectations) {
  const Chamber out = attach_independents(fixture());
  EXPECT_EQ(affiliation_of(out, "i1"), "A");
  EXPECT_EQ(affiliation_of(out, "i2"), "B");
  EXPECT_EQ(affiliation_of(out, "i6"), "C");
  EXPECT_FALSE(affiliation_of(out, "i3").has_value());
  EXPECT_FALSE(affiliation_of(out, "i4").has_value());
  EXPECT_FALSE(affiliation_of(out, "i5").has_value());
  for (std::size_t i = 0; i < out.members.size(); ++i) {
    EXPECT_EQ(out.members[i].id, fixture().members[i].id);
    EXPECT_EQ(out.members[i].position, fixture().members[i].position);
  }
}

TEST(Attach, IndependentOfMemberOrder) {
  const Chamber base = fixture();
  const Chamber expected = attach_independents(base);
  std::mt19937 gen(11);
  for (int t = 0; t < 20; ++t) {
    Chamber shuffled = base;
    std::shuffle(shuffled.members.begin(), shuffled.members.end(), gen);
    const Chamber out = attach_independents(shuffled);
    for (const auto& m : expected.members) EXPECT_EQ(affiliation_of(out, m.id), m.affiliation);
    EXPECT_EQ(aggregate(out, true).groups.size(), aggregate(expected, true).groups.size());
  }
}

TEST(Attach, RejectsBadConfigAndChamber) {
  AttachmentConfig config;
  config.quorum = 4;
  EXPECT_THROW(attach_independents(small_chamber(), config), ParameterError);
  Chamber dup = small_chamber();
  dup.members.push_back(dup.members.front());
  EXPECT_THROW(attach_independents(dup), ValidationError);
}

TEST(Aggregate, FiveMembers) {
  const Chamber c{2,
                  {member("1", {0.4, 0.5}, "X"), member("2", {0.5, 0.4}, "X"),
                   member("3", {0.6, 0.5}, "Y"), member("4", {0.8, 0.7}, "Y"),
                   member("5", {0.9, 0.9}, "Z")}};
  const Society s = aggregate(c);
  ASSERT_EQ(s.groups.size(), 3u);
  EXPECT_EQ(s.groups[0].label, "X");
  EXPECT_DOUBLE_EQ(s.groups[0].weight, 0.4);
  EXPECT_NEAR(s.groups[0].position[0], 0.45, 1e-15);
  EXPECT_NEAR(s.groups[0].position[1], 0.45, 1e-15);
  EXPECT_EQ(s.groups[1].label, "Y");
  EXPECT_DOUBLE_EQ(s.groups[1].weight, 0.4);
  EXPECT_NEAR(s.groups[1].position[0], 0.7, 1e-15);
  EXPECT_NEAR(s.groups[1].position[1], 0.6, 1e-15);
  EXPECT_EQ(s.groups[2].label, "Z");
  EXPECT_DOUBLE_EQ(s.groups[2].weight, 0.2);
  EXPECT_EQ(s.groups[2].position, (Position{0.9, 0.9}));
}

TEST(Aggregate, SingleUnion) {
  const Chamber c{2, {member("1", {0.2, 0.4}, "X"), member("2", {0.4, 0.8}, "X")}};
  const Society s = aggregate(c);
  ASSERT_EQ(s.groups.size(), 1u);
  EXPECT_EQ(s.groups[0].weight, 1.0);
  EXPECT_NEAR(s.groups[0].position[0], 0.3, 1e-15);
  EXPECT_NEAR(s.groups[0].position[1], 0.6, 1e-15);
}

TEST(Aggregate, ResidualCluster) {
  Chamber c{1, {}};
  for (int i = 0; i < 4; ++i) c.members.push_back(member("x" + std::to_string(i), {0.1 * i}, "X"));
  c.members.push_back(member("ind", {0.9}));
  EXPECT_THROW(aggregate(c, false), AggregationError);
  const Society s = aggregate(c, true);
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.groups[0].label, "X");
  EXPECT_DOUBLE_EQ(s.groups[0].weight, 0.8);
  EXPECT_EQ(s.groups[1].label, "Independent");
  EXPECT_DOUBLE_EQ(s.groups[1].weight, 0.2);
}

TEST(Aggregate, WeightsSumToOneAndPositionsInHull) {
  const Chamber attached = attach_independents(fixture());
  const Society s = aggregate(attached, true);
  double sum = 0.0;
  for (const auto& g : s.groups) sum += g.weight;
  EXPECT_NEAR(sum, 1.0, 1e-12);

  for (const auto& g : s.groups) {
    for (std::size_t j = 0; j < s.dim; ++j) {
      double lo = 1e9, hi = -1e9;
      for (const auto& m : attached.members) {
        const std::string label = m.affiliation.value_or(std::string(independent_label));
        if (label != g.label) continue;
        lo = std::min(lo, m.position[j]);
        hi = std::max(hi, m.position[j]);
      }
      EXPECT_GE(g.position[j], lo - 1e-15);
      EXPECT_LE(g.position[j], hi + 1e-15);
    }
  }
  // Member count behind the weights is unchanged by attachment.
  const Society before = aggregate(fixture(), true);
  EXPECT_EQ(before.groups.back().label, "Independent");
  EXPECT_NEAR(before.groups.back().weight * 18, 6.0, 1e-12);
  EXPECT_NEAR(s.groups.back().weight * 18, 3.0, 1e-12);
}
