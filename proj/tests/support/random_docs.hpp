#pragma once

// Random well-formed documents for serializer round-trip checks.

#include <string>
#include <vector>

#include "or_graph_kit/io_formats.hpp"
#include "or_graph_kit/random.hpp"

namespace orgk::testdocs {

inline double any_double(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return rng.uniform(-5, 5);
    case 1: return static_cast<double>(rng.below(2001)) / 8.0 - 125.0;
    case 2: return rng.normal(0, 1e-7);
    default: return rng.uniform(-1e6, 1e6);
  }
}

inline Vec3 any_vec(Rng& rng) { return {any_double(rng), any_double(rng), any_double(rng)}; }

inline PointCloud cloud(Rng& rng, std::size_t max_n = 200) {
  PointCloud c(rng.below(max_n + 1));
  for (auto& p : c) {
    p.x = static_cast<float>(any_double(rng));
    p.y = static_cast<float>(any_double(rng));
    p.z = static_cast<float>(any_double(rng));
    p.r = static_cast<std::uint8_t>(rng.below(256));
    p.g = static_cast<std::uint8_t>(rng.below(256));
    p.b = static_cast<std::uint8_t>(rng.below(256));
  }
  return c;
}

inline std::string cls(Rng& rng) {
  static const std::vector<std::string> names = {"human", "patient", "anesthesia_machine", "operating_table",
                                                 "instrument_table", "secondary_table", "instrument"};
  return names[rng.below(names.size())];
}

inline std::vector<CameraCalibration> calibration(Rng& rng) {
  std::vector<CameraCalibration> cams(1 + rng.below(6));
  for (std::size_t i = 0; i < cams.size(); ++i) {
    auto& c = cams[i];
    c.camera_id = "cam" + std::to_string(i);
    c.fx = rng.uniform(100, 1000), c.fy = rng.uniform(100, 1000);
    c.cx = rng.uniform(0, 640), c.cy = rng.uniform(0, 480);
    c.extrinsics.topLeftCorner<3, 3>() =
        Eigen::AngleAxisd(rng.uniform(-3, 3), Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 1).normalized())
            .toRotationMatrix();
    c.extrinsics.topRightCorner<3, 1>() = any_vec(rng);
    c.depth_scale = rng.uniform(1e-4, 1e-2);
  }
  return cams;
}

inline HumanPose pose(Rng& rng) {
  HumanPose p;
  p.person_id = static_cast<std::int64_t>(rng.below(100));
  for (auto& j : p.joints) j = any_vec(rng);
  if (rng.bernoulli(0.5)) {
    std::array<double, kNumJoints> c{};
    for (auto& v : c) v = rng.uniform();
    p.confidence = c;
  }
  return p;
}

inline std::vector<io::FramePoseList> poses(Rng& rng) {
  std::vector<io::FramePoseList> out(rng.below(5));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f].frame_id = static_cast<std::int64_t>(f);
    out[f].poses.resize(rng.below(4));
    for (auto& p : out[f].poses) p = pose(rng);
  }
  return out;
}

inline OrientedBox3 box(Rng& rng) {
  static const std::vector<std::string> names = {"patient", "anesthesia_machine", "operating_table",
                                                 "instrument_table", "secondary_table"};
  return {names[rng.below(names.size())], any_vec(rng),
          {rng.uniform(0.01, 2), rng.uniform(0.01, 2), rng.uniform(0.01, 2)},
          normalize_yaw(rng.uniform(-3.14, 3.14)), rng.uniform()};
}

inline std::vector<io::FrameBoxList> boxes(Rng& rng) {
  std::vector<io::FrameBoxList> out(rng.below(5));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f].frame_id = static_cast<std::int64_t>(2 * f);
    out[f].boxes.resize(rng.below(4));
    for (auto& b : out[f].boxes) b = box(rng);
  }
  return out;
}

inline SceneGraph graph(Rng& rng, std::int64_t frame_id) {
  SceneGraph g;
  g.frame_id = frame_id;
  const std::size_t n = rng.below(6);
  for (std::size_t i = 0; i < n; ++i) {
    Node node{static_cast<NodeId>(i + 1), cls(rng), std::nullopt};
    if (rng.bernoulli(0.7)) node.instance_id = static_cast<InstanceId>(rng.below(50));
    g.nodes.push_back(node);
  }
  if (n >= 2)
    for (std::size_t k = rng.below(6); k > 0; --k) {
      const auto a = static_cast<NodeId>(1 + rng.below(n)), b = static_cast<NodeId>(1 + rng.below(n));
      if (a != b) g.add_edge({a, kAllRelations[rng.below(kNumRelations)], b});
    }
  return g;
}

inline Take take(Rng& rng) {
  Take t;
  t.take_id = "take" + std::to_string(rng.below(1000));
  t.split = std::array{SplitTag::train, SplitTag::val, SplitTag::test}[rng.below(3)];
  for (std::size_t f = rng.below(6); f > 0; --f) {
    const auto id = static_cast<std::int64_t>(t.frames.size());
    t.frames.push_back({id, 100.0 + static_cast<double>(id), graph(rng, id)});
  }
  return t;
}

inline InstanceLabelMap labels(Rng& rng) {
  InstanceLabelMap m;
  m.num_boxes = rng.below(4);
  m.num_poses = rng.below(3);
  for (std::size_t i = 0; i < m.num_boxes; ++i)
    if (rng.bernoulli(0.8)) m.instances[m.box_instance(i)] = {"operating_table", InstanceSourceKind::box, i};
  for (std::size_t j = 0; j < m.num_poses; ++j) {
    if (rng.bernoulli(0.8)) m.instances[m.pose_instance(j)] = {"human", InstanceSourceKind::pose, j};
    if (rng.bernoulli(0.5))
      m.instances[m.instrument_instance(j)] = {"instrument", InstanceSourceKind::virtual_instrument, j};
  }
  std::vector<InstanceId> ids = {0};
  for (const auto& [id, _] : m.instances) ids.push_back(id);
  m.labels.resize(rng.below(100));
  for (auto& l : m.labels) l = ids[rng.below(ids.size())];
  return m;
}

inline std::vector<PointSource> sources(Rng& rng) {
  std::vector<PointSource> s(rng.below(100));
  for (auto& p : s) p = {rng.below(6), rng.below(100000)};
  return s;
}

inline std::vector<Track> tracks(Rng& rng) {
  std::vector<Track> out(rng.below(4));
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t].track_id = static_cast<std::int64_t>(t);
    for (std::int64_t f = 0; f < 6; ++f)
      if (rng.bernoulli(0.6)) out[t].entries[f] = {pose(rng), static_cast<NodeId>(rng.below(10)), rng.below(5)};
  }
  return out;
}

inline std::vector<io::FrameLogits> logits(Rng& rng) {
  std::vector<io::FrameLogits> out(rng.below(4));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f].frame_id = static_cast<std::int64_t>(f);
    for (InstanceId a = 1; a <= 3; ++a)
      for (InstanceId b = 1; b <= 3; ++b) {
        if (a == b || rng.bernoulli(0.5)) continue;
        PairLogits p{a, b, std::vector<double>(kNumLogits)};
        for (auto& s : p.scores) s = any_double(rng);
        out[f].pairs.push_back(p);
      }
  }
  return out;
}

/// Rows are sixteenths so they sum to exactly one.
inline RoleScoreTable role_scores(Rng& rng) {
  RoleScoreTable t;
  for (std::size_t i = rng.below(7); i > 0; --i) {
    RoleVector r{};
    for (int k = 0; k < 16; ++k) r[rng.below(kNumRoles)] += 1.0 / 16.0;
    t.track_ids.push_back(static_cast<std::int64_t>(rng.below(1000)) * 7 + static_cast<std::int64_t>(i));
    t.rows.push_back(r);
  }
  return t;
}

inline RoleAssignment role_assignment(Rng& rng) {
  RoleAssignment a;
  for (std::size_t i = rng.below(7); i > 0; --i) {
    std::optional<RoleClass> r;
    if (rng.bernoulli(0.8)) r = kAllRoles[rng.below(kNumRoles)];
    a[static_cast<std::int64_t>(rng.below(100))] = r;
  }
  return a;
}

inline MacroReport macro(Rng& rng, bool roles) {
  std::vector<ClassPRF> cls;
  const std::size_t n = roles ? kNumRoles : kNumRelations;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string name(roles ? kRoleNames[k] : kRelationNames[k]);
    cls.push_back(class_prf(name, rng.below(20), rng.below(20), rng.below(20)));
  }
  return macro_report(std::move(cls), rng.bernoulli(0.5) ? MacroMode::mean_of_f1 : MacroMode::harmonic_of_macro_pr);
}

inline io::MetricsReport metrics(Rng& rng) {
  io::MetricsReport r;
  if (rng.bernoulli(0.7)) r.relations = macro(rng, false);
  if (rng.bernoulli(0.7)) r.roles = macro(rng, true);
  if (rng.bernoulli(0.7)) r.pcp3d = rng.uniform(0, 100);
  if (rng.bernoulli(0.7)) r.ap = {{"0.25", rng.uniform()}, {"0.50", rng.uniform()}};
  if (rng.bernoulli(0.7)) r.labeling_accuracy = rng.uniform();
  if (rng.bernoulli(0.7)) r.num_tracks = rng.below(10);
  return r;
}

inline io::Manifest manifest(Rng& rng) {
  io::Manifest m;
  m.take_id = "t" + std::to_string(rng.below(100));
  m.split = std::array{SplitTag::train, SplitTag::val, SplitTag::test}[rng.below(3)];
  std::int64_t f = 0;
  for (std::size_t i = rng.below(10); i > 0; --i) m.frames.push_back(f += static_cast<std::int64_t>(1 + rng.below(3)));
  m.num_cameras = 1 + rng.below(6);
  return m;
}

inline io::RunConfig run_config(Rng& rng) {
  io::RunConfig c;
  c.input = "in" + std::to_string(rng.below(10));
  c.take = "take" + std::to_string(rng.below(10));
  if (rng.bernoulli(0.5)) c.splits = {SplitTag::test};
  if (rng.bernoulli(0.5)) c.entities = {"c_arm"};
  c.fuse.dedup = rng.bernoulli(0.5);
  c.fuse.voxel_size = rng.uniform(0.001, 0.02);
  c.labeling.hand_radius = rng.uniform(0.1, 0.4);
  c.labeling.min_points_per_instance = rng.below(50);
  c.augment.scale = {rng.uniform(0.5, 1), rng.uniform(1, 1.5)};
  c.augment.crop_to_hand_prob = rng.uniform();
  c.baseline.close_to_threshold = rng.uniform(0.5, 3);
  c.use_model_logits = rng.bernoulli(0.5);
  c.decode.mode = rng.bernoulli(0.5) ? DecodeMode::argmax : DecodeMode::threshold;
  c.decode.threshold = rng.uniform();
  c.tracking.max_cost = rng.uniform(0.1, 1);
  c.tracking.max_gap = static_cast<int>(rng.below(5));
  c.roles.smoothing = rng.uniform(0.5, 2);
  c.roles.rules[0].weights[2] = rng.uniform();
  if (rng.bernoulli(0.5)) c.external_role_scores = "scores.json";
  c.metrics.macro_mode = rng.bernoulli(0.5) ? MacroMode::mean_of_f1 : MacroMode::harmonic_of_macro_pr;
  c.metrics.pcp_alpha = rng.uniform(0.1, 1);
  c.metrics.correspondence = rng.bernoulli(0.5) ? "geometric" : "node_id";
  c.synth.point_sigma = rng.uniform(0, 0.01);
  return c;
}

}  // namespace orgk::testdocs
