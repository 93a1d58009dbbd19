#include <gtest/gtest.h>

#include <limits>

#include "or_graph_kit/instance_labeling.hpp"
#include "or_graph_kit/random.hpp"

using namespace orgk;

namespace {

OrientedBox3 box(const char* cls, Vec3 c, Vec3 half) { return {cls, c, half, 0, 1}; }

HumanPose standing(double x, double y) {
  HumanPose p;
  const double z[] = {1.7, 1.5, 1.45, 1.45, 1.15, 1.15, 0.95, 0.95, 0.95, 0.95, 0.5, 0.5, 0.1, 0.1};
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const double side = (i >= 2 && i % 2 == 0) ? 0.15 : (i >= 2 ? -0.15 : 0.0);
    p.joints[i] = {x, y + side, z[i]};
  }
  return p;
}

PointCloud filled(const Vec3& c, double half, std::size_t n, Rng& rng) {
  PointCloud out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(make_point(c + Vec3(rng.uniform(-half, half), rng.uniform(-half, half), rng.uniform(-half, half))));
  return out;
}

LabelingParams no_demotion() {
  LabelingParams p;
  p.min_points_per_instance = 0;
  return p;
}

}  // namespace

TEST(ComputeInstanceLabels, EmptyCloudGivesEmptyMap) {
  const auto m = compute_instance_labels({}, {box("operating_table", {0, 0, 0}, {1, 1, 1})}, {});
  EXPECT_TRUE(m.labels.empty());
}

TEST(ComputeInstanceLabels, NanIsInvalidPoints) {
  PointCloud c = {make_point({0, 0, 0})};
  c[0].y = std::numeric_limits<float>::quiet_NaN();
  try {
    compute_instance_labels(c, {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_points);
  }
}

TEST(ComputeInstanceLabels, UniqueContainment) {
  const std::vector<OrientedBox3> boxes = {box("operating_table", {0, 0, 0}, {1, 1, 1}),
                                           box("instrument_table", {5, 0, 0}, {1, 1, 1})};
  const auto m = compute_instance_labels({make_point({5.2, 0.1, 0})}, boxes, {}, no_demotion());
  EXPECT_EQ(m.labels, std::vector<InstanceId>{m.box_instance(1)});
  EXPECT_EQ(m.instances.at(2).cls, "instrument_table");
}

TEST(ComputeInstanceLabels, OverlapGoesToTheNearerSurface) {
  // A spans x in [-1, 1]; B spans x in [0.4, 2.4]. At x = 0.9 the point is
  // 0.1 inside A's face and 0.5 inside B's (the y/z faces are farther).
  const std::vector<OrientedBox3> boxes = {box("operating_table", {0, 0, 0}, {1, 1, 1}),
                                           box("secondary_table", {1.4, 0, 0}, {1, 1, 1})};
  const Vec3 p(0.9, 0, 0);
  EXPECT_NEAR(boxes[0].depth_inside(p), 0.1, 1e-12);
  EXPECT_NEAR(boxes[1].depth_inside(p), 0.5, 1e-12);
  const auto m = compute_instance_labels({make_point(p)}, boxes, {}, no_demotion());
  EXPECT_EQ(m.labels[0], m.box_instance(0));

  // Mirror: deeper in A than in B goes to B.
  const auto m2 = compute_instance_labels({make_point({0.5, 0, 0})}, boxes, {}, no_demotion());
  EXPECT_EQ(m2.labels[0], m2.box_instance(1));
}

TEST(ComputeInstanceLabels, FarPointIsBackground) {
  const auto m = compute_instance_labels({make_point({5, 5, 5})}, {box("operating_table", {0, 0, 0}, {1, 1, 1})},
                                         {standing(-2, 0)}, no_demotion());
  EXPECT_EQ(m.labels[0], 0u);
}

TEST(ComputeInstanceLabels, PositionalIdsAndHumanCapsules) {
  const std::vector<OrientedBox3> boxes = {box("operating_table", {0, 0, 0.5}, {1, 0.5, 0.5})};
  const std::vector<HumanPose> poses = {standing(3, 0), standing(-3, 0)};
  const auto m = compute_instance_labels({make_point({-3, 0, 1.3})}, boxes, poses, no_demotion());
  EXPECT_EQ(m.pose_instance(1), 3u);
  EXPECT_EQ(m.labels[0], 3u);
  EXPECT_EQ(m.instrument_instance(0), 4u);
  EXPECT_EQ(m.instances.at(3).source_index, 1u);
  EXPECT_FALSE(m.instances.contains(2));
}

TEST(ComputeInstanceLabels, SmallInstancesAreDemoted) {
  Rng rng(1);
  PointCloud c = filled({0, 0, 0}, 0.3, 50, rng);
  for (auto& p : filled({5, 0, 0}, 0.3, 5, rng)) c.push_back(p);
  const std::vector<OrientedBox3> boxes = {box("operating_table", {0, 0, 0}, Vec3::Constant(0.4)),
                                           box("instrument_table", {5, 0, 0}, Vec3::Constant(0.4))};
  const auto m = compute_instance_labels(c, boxes, {});
  EXPECT_EQ(m.count(1), 50u);
  EXPECT_EQ(m.count(2), 0u);
  EXPECT_FALSE(m.instances.contains(2));
  EXPECT_EQ(m.count(0), 5u);
}

TEST(InstrumentRegion, BallMembership) {
  const std::vector<HumanPose> poses = {standing(0, 0)};
  const Vec3 wrist = poses[0][Joint::right_wrist];
  PointCloud c = {make_point(wrist + Vec3(0.1, 0, 0)), make_point(wrist + Vec3(0.3, 0, 0)),
                  make_point(wrist + Vec3(0, 0.24, 0))};
  auto m = compute_instance_labels(c, {}, poses, no_demotion());
  // the capsule claims nothing 0.1 m in front of the wrist along x? it may; force background
  m.labels.assign(c.size(), 0);
  m = instrument_region(c, m, poses, no_demotion());
  const InstanceId inst = m.instrument_instance(0);
  EXPECT_EQ(m.labels[0], inst);
  EXPECT_EQ(m.labels[1], 0u);
  EXPECT_EQ(m.labels[2], inst);
  EXPECT_EQ(m.instances.at(inst).cls, "instrument");
  EXPECT_EQ(m.instances.at(inst).source, InstanceSourceKind::virtual_instrument);
}

TEST(InstrumentRegion, LabeledPointsAreNotRelabeled) {
  const std::vector<HumanPose> poses = {standing(0, 0)};
  const Vec3 near = poses[0][Joint::left_wrist] + Vec3(0.05, 0, 0);
  const std::vector<OrientedBox3> boxes = {box("operating_table", near, Vec3::Constant(0.2))};
  LabelingParams p = no_demotion();
  p.human_capsule_radius = 0.01;
  auto m = compute_instance_labels({make_point(near)}, boxes, poses, p);
  ASSERT_EQ(m.labels[0], m.box_instance(0));
  EXPECT_EQ(instrument_region({make_point(near)}, m, poses, p).labels[0], m.box_instance(0));
}

TEST(InstrumentRegion, NoPosesLeavesMapUnchanged) {
  const PointCloud c = {make_point({0, 0, 0}), make_point({1, 1, 1})};
  const auto m = compute_instance_labels(c, {}, {}, no_demotion());
  EXPECT_EQ(instrument_region(c, m, {}), m);
}

TEST(InstrumentRegion, NearestWristWins) {
  const std::vector<HumanPose> poses = {standing(0, 0), standing(0.4, 0)};
  const Vec3 p = poses[1][Joint::right_wrist] + Vec3(0.05, 0, 0);
  InstanceLabelMap m;
  m.num_poses = 2;
  m.labels = {0};
  m = instrument_region({make_point(p)}, m, poses, no_demotion());
  EXPECT_EQ(m.labels[0], m.instrument_instance(1));
}

namespace {

struct Scene {
  PointCloud cloud;
  InstanceLabelMap labels;
};

Scene two_instances(std::size_t na, std::size_t nb) {
  Rng rng(2);
  Scene s;
  s.cloud = filled({0, 0, 0}, 0.3, na, rng);
  for (auto& p : filled({5, 0, 0}, 0.3, nb, rng)) s.cloud.push_back(p);
  s.labels = compute_instance_labels(s.cloud,
                                     {box("operating_table", {0, 0, 0}, Vec3::Constant(0.4)),
                                      box("instrument_table", {5, 0, 0}, Vec3::Constant(0.4))},
                                     {});
  return s;
}

}  // namespace

TEST(ExtractObjectPoints, UnderBudgetReturnsEverything) {
  const auto s = two_instances(100, 30);
  const auto pts = extract_object_points(s.cloud, s.labels, 1, 4000);
  EXPECT_EQ(pts, PointCloud(s.cloud.begin(), s.cloud.begin() + 100));
}

TEST(ExtractObjectPoints, OverBudgetIsSeededAndRepeatable) {
  const auto s = two_instances(10000, 30);
  const auto a = extract_object_points(s.cloud, s.labels, 1, 4000, 9);
  EXPECT_EQ(a.size(), 4000u);
  EXPECT_EQ(a, extract_object_points(s.cloud, s.labels, 1, 4000, 9));
  EXPECT_NE(a, extract_object_points(s.cloud, s.labels, 1, 4000, 10));
}

TEST(ExtractObjectPoints, ExactlyAtBudget) {
  const auto s = two_instances(4000, 30);
  EXPECT_EQ(extract_object_points(s.cloud, s.labels, 1, 4000, 3), PointCloud(s.cloud.begin(), s.cloud.begin() + 4000));
}

TEST(ExtractObjectPoints, UnknownInstance) {
  const auto s = two_instances(100, 30);
  try {
    extract_object_points(s.cloud, s.labels, 99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_such_instance);
  }
}

TEST(ExtractRelationPoints, UnderBudgetKeepsProvenanceCounts) {
  const auto s = two_instances(100, 200);
  const auto r = extract_relation_points(s.cloud, s.labels, 1, 2, 8000);
  EXPECT_EQ(r.cloud.size(), 300u);
  EXPECT_EQ(r.count(0), 100u);
  EXPECT_EQ(r.count(1), 200u);
}

TEST(ExtractRelationPoints, OverBudgetSubsamplesBothSides) {
  const auto s = two_instances(6000, 6000);
  const auto r = extract_relation_points(s.cloud, s.labels, 1, 2, 8000, 4);
  EXPECT_EQ(r.cloud.size(), 8000u);
  EXPECT_GT(r.count(0), 0u);
  EXPECT_GT(r.count(1), 0u);
  EXPECT_EQ(r.count(0) + r.count(1), 8000u);
}

TEST(ExtractRelationPoints, SelfPairAndDemotedPartner) {
  const auto s = two_instances(100, 5);
  try {
    extract_relation_points(s.cloud, s.labels, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::self_pair);
  }
  try {
    extract_relation_points(s.cloud, s.labels, 1, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_such_instance);
  }
}
