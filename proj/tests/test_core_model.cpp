#include <gtest/gtest.h>

#include "or_graph_kit/core_model.hpp"

using namespace orgk;

namespace {

SceneGraph three_nodes() {
  SceneGraph g;
  g.nodes = {{1, "human", 1u}, {2, "instrument", 2u}, {3, "operating_table", 3u}};
  return g;
}

}  // namespace

TEST(RelationClass, FourteenNamesRoundTrip) {
  EXPECT_EQ(kNumRelations, 14u);
  for (auto r : kAllRelations) {
    auto back = parse_relation(to_string(r));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, r);
  }
  EXPECT_FALSE(parse_relation("saw"));
  EXPECT_FALSE(parse_relation("None"));
  EXPECT_EQ(to_string(kAllRelations.front()), "Assist");
  EXPECT_EQ(to_string(kAllRelations.back()), "Touch");
}

TEST(EntityVocabulary, InstrumentIsTheOnlyVirtualClass) {
  EntityVocabulary v;
  for (const auto& c : v.classes()) EXPECT_EQ(c.is_virtual, c.name == "instrument") << c.name;
  EXPECT_TRUE(v.contains("patient"));
  EXPECT_FALSE(v.contains("c_arm"));
  v.add("c_arm");
  EXPECT_TRUE(v.contains("c_arm"));
  EXPECT_FALSE(v.is_virtual("c_arm"));
  EXPECT_THROW(v.add(""), Error);
}

TEST(ValidateGraph, EmptyGraphHasNoViolations) { EXPECT_TRUE(validate_graph(SceneGraph{}).empty()); }

TEST(ValidateGraph, DanglingEndpointNamesTheMissingNode) {
  SceneGraph g = three_nodes();
  g.edges.push_back({1, RelationClass::Hold, 7});
  const auto v = validate_graph(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].describe(), "dangling-endpoint(7)");
}

TEST(ValidateGraph, DuplicateTriple) {
  SceneGraph g = three_nodes();
  g.edges.push_back({1, RelationClass::Hold, 2});
  g.edges.push_back({1, RelationClass::Hold, 2});
  const auto v = validate_graph(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].describe(), "duplicate-triple");
}

TEST(ValidateGraph, SelfLoopAndDuplicateNode) {
  SceneGraph g = three_nodes();
  g.nodes.push_back({2, "human", std::nullopt});
  g.edges.push_back({3, RelationClass::Touch, 3});
  std::vector<std::string> got;
  for (const auto& x : validate_graph(g)) got.push_back(x.describe());
  EXPECT_NE(std::find(got.begin(), got.end(), "duplicate-node(2)"), got.end());
  EXPECT_NE(std::find(got.begin(), got.end(), "self-loop(3)"), got.end());
}

TEST(SceneGraph, CloseToIsStoredWithLowerIdFirst) {
  SceneGraph g = three_nodes();
  EXPECT_TRUE(g.add_edge({3, RelationClass::CloseTo, 1}));
  EXPECT_FALSE(g.add_edge({1, RelationClass::CloseTo, 3}));
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].sub, 1);
  EXPECT_TRUE(g.add_edge({3, RelationClass::Touch, 1}));
  EXPECT_EQ(g.edges[1].sub, 3);
  EXPECT_TRUE(validate_graph(g).empty());
}

TEST(GraphEdgeDiff, IdenticalGraphsAreAllTruePositives) {
  SceneGraph g = three_nodes();
  g.edges = {{1, RelationClass::Hold, 2}, {1, RelationClass::CloseTo, 3}};
  const auto d = graph_edge_diff(g, g, identity_correspondence(g));
  EXPECT_EQ(d.tp.size(), 2u);
  EXPECT_TRUE(d.fp.empty());
  EXPECT_TRUE(d.fn.empty());
}

TEST(GraphEdgeDiff, EdgeWithUnmappedEndpointIsFalsePositive) {
  SceneGraph gt = three_nodes(), pred = three_nodes();
  pred.edges = {{1, RelationClass::Cut, 3}};
  NodeCorrespondence c = {{2, 2}, {3, 3}};
  const auto d = graph_edge_diff(gt, pred, c);
  EXPECT_TRUE(d.tp.empty());
  ASSERT_EQ(d.fp.size(), 1u);
  EXPECT_EQ(d.fp[0], (Edge{1, RelationClass::Cut, 3}));
}

TEST(GraphEdgeDiff, WrongPredicateIsOneFalsePositiveAndOneFalseNegative) {
  SceneGraph gt = three_nodes(), pred = three_nodes();
  gt.edges = {{1, RelationClass::Drill, 2}};
  pred.edges = {{1, RelationClass::Saw, 2}};
  const auto d = graph_edge_diff(gt, pred, identity_correspondence(pred));
  EXPECT_TRUE(d.tp.empty());
  EXPECT_EQ(d.fp, (std::vector<Edge>{{1, RelationClass::Saw, 2}}));
  EXPECT_EQ(d.fn, (std::vector<Edge>{{1, RelationClass::Drill, 2}}));
}

TEST(GraphEdgeDiff, TwoPredNodesOnOneGtNodeIsAmbiguous) {
  SceneGraph g = three_nodes();
  NodeCorrespondence c = {{1, 1}, {2, 1}};
  try {
    graph_edge_diff(g, g, c);
    FAIL() << "expected ambiguous-correspondence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ambiguous_correspondence);
  }
}

TEST(GraphEdgeDiff, RelabeledNodesMatchThroughCorrespondence) {
  SceneGraph gt = three_nodes();
  gt.edges = {{1, RelationClass::CloseTo, 3}};
  SceneGraph pred;
  pred.nodes = {{10, "human", std::nullopt}, {30, "operating_table", std::nullopt}};
  pred.edges = {{10, RelationClass::CloseTo, 30}};
  const auto d = graph_edge_diff(gt, pred, {{10, 3}, {30, 1}});
  EXPECT_EQ(d.tp.size(), 1u);
  EXPECT_TRUE(d.fn.empty());
}

TEST(Take, OneHertzTimestamps) {
  Take t;
  for (int i = 0; i < 5; ++i) t.frames.push_back({i, 10.0 + i, {}});
  EXPECT_TRUE(frames_at_one_hz(t));
  t.frames[3].timestamp += 0.5;
  EXPECT_FALSE(frames_at_one_hz(t));
}

TEST(SplitTag, ParseAndPrint) {
  for (auto s : {SplitTag::train, SplitTag::val, SplitTag::test}) EXPECT_EQ(parse_split(to_string(s)), s);
  EXPECT_FALSE(parse_split("validation"));
}

TEST(Error, WhatCarriesTheKebabCaseCode) {
  const Error e(Errc::bad_logits, "detail");
  EXPECT_STREQ(e.what(), "bad-logits: detail");
  EXPECT_EQ(e.code(), Errc::bad_logits);
}
