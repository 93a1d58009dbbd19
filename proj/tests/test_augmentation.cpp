#include <gtest/gtest.h>

#include "or_graph_kit/augmentation.hpp"
#include "support/oracles.hpp"

using namespace orgk;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i)
    c.push_back(make_point({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 2)},
                           static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                           static_cast<std::uint8_t>(rng.below(256))));
  return c;
}

HumanPose pose_with_wrists(const Vec3& l, const Vec3& r) {
  HumanPose p;
  for (auto& j : p.joints) j = Vec3(0, 0, 1);
  p.joints[index_of(Joint::left_wrist)] = l;
  p.joints[index_of(Joint::right_wrist)] = r;
  return p;
}

}  // namespace

TEST(AugmentCloud, IdentityParamsReturnInput) {
  const auto c = random_cloud(300, 1);
  EXPECT_EQ(augment_cloud(c, AugmentParams::identity(), 42), c);
}

TEST(AugmentCloud, SeededAndRepeatable) {
  const auto c = random_cloud(300, 2);
  const AugmentParams p;
  EXPECT_EQ(augment_cloud(c, p, 5), augment_cloud(c, p, 5));
  EXPECT_NE(augment_cloud(c, p, 5), augment_cloud(c, p, 6));
}

TEST(AugmentCloud, ScaleTwoDoublesPairwiseDistances) {
  auto p = AugmentParams::identity();
  p.scale = {2, 2};
  p.yaw = {-3, 3};
  p.translation = {-0.2, 0.2};
  const auto c = random_cloud(60, 3);
  const auto out = augment_cloud(c, p, 9);
  EXPECT_LT(oracle::max_pairwise_distance_error(c, out, 2.0), 1e-5);
}

TEST(AugmentCloud, BrightnessClampsAt255) {
  auto p = AugmentParams::identity();
  p.brightness = {300, 300};
  const auto out = augment_cloud(random_cloud(50, 4), p, 1);
  for (const auto& q : out) {
    EXPECT_EQ(q.r, 255);
    EXPECT_EQ(q.g, 255);
    EXPECT_EQ(q.b, 255);
  }
  p.brightness = {-300, -300};
  for (const auto& q : augment_cloud(random_cloud(50, 4), p, 1)) EXPECT_EQ(q.r + q.g + q.b, 0);
}

TEST(AugmentCloud, BadRangesAreBadConfig) {
  auto p = AugmentParams::identity();
  p.scale = {0, 1};
  EXPECT_THROW(augment_cloud({}, p, 0), Error);
  p = AugmentParams::identity();
  p.yaw = {1, -1};
  EXPECT_THROW(augment_cloud({}, p, 0), Error);
}

TEST(AugmentRelationPair, EachSideMovesRigidly) {
  RelationPoints pair;
  pair.cloud = random_cloud(80, 5);
  for (std::size_t i = 0; i < pair.cloud.size(); ++i) pair.provenance.push_back(i < 30 ? 0 : 1);
  AugmentParams p;
  p.scale = {1.5, 1.5};
  const auto out = augment_relation_pair(pair, p, 17);
  for (std::uint8_t side : {0, 1}) {
    PointCloud before, after;
    for (std::size_t i = 0; i < pair.cloud.size(); ++i)
      if (pair.provenance[i] == side) before.push_back(pair.cloud[i]), after.push_back(out.cloud[i]);
    EXPECT_LT(oracle::max_pairwise_distance_error(before, after, 1.5), 1e-5) << int(side);
  }
  // sides get independent draws, so cross distances are not preserved in general
  EXPECT_GT(oracle::max_pairwise_distance_error(pair.cloud, out.cloud, 1.5), 1e-3);
  EXPECT_EQ(out.provenance, pair.provenance);
}

TEST(AugmentRelationPair, EmptySecondSideMatchesAugmentCloud) {
  RelationPoints pair;
  pair.cloud = random_cloud(40, 6);
  pair.provenance.assign(pair.cloud.size(), 0);
  const AugmentParams p;
  EXPECT_EQ(augment_relation_pair(pair, p, 3).cloud, augment_cloud(pair.cloud, p, 3));
}

TEST(AugmentRelationPair, MissingProvenance) {
  RelationPoints pair;
  pair.cloud = random_cloud(4, 7);
  pair.provenance = {0, 1};
  try {
    augment_relation_pair(pair, AugmentParams{}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_provenance);
  }
}

TEST(CropToHands, ProbabilityZeroIsIdentity) {
  const auto c = random_cloud(100, 8);
  auto p = AugmentParams::identity();
  p.crop_to_hand_prob = 0;
  EXPECT_EQ(crop_to_hands(c, {}, p, 1), c);
}

TEST(CropToHands, FarCloudCropsToNothing) {
  PointCloud c;
  for (int i = 0; i < 20; ++i) c.push_back(make_point({10.0 + i, 0, 0}));
  auto p = AugmentParams::identity();
  p.crop_to_hand_prob = 1;
  EXPECT_TRUE(crop_to_hands(c, {pose_with_wrists({0, 0, 1}, {0.3, 0, 1})}, p, 1).empty());
}

TEST(CropToHands, EqualsBallFilter) {
  const auto c = random_cloud(2000, 9);
  const auto pose = pose_with_wrists({0.2, 0.1, 1}, {-0.4, 0.3, 0.8});
  auto p = AugmentParams::identity();
  p.crop_to_hand_prob = 1;
  p.crop_radius = 0.45;
  const auto got = crop_to_hands(c, {pose}, p, 11);
  EXPECT_EQ(got, oracle::ball_filter(c, pose, 0.45));
  EXPECT_FALSE(got.empty());
}

TEST(CropToHands, FiringWithoutPoseIsNoHands) {
  auto p = AugmentParams::identity();
  p.crop_to_hand_prob = 1;
  try {
    crop_to_hands(random_cloud(5, 1), {}, p, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_hands);
  }
}
