#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"
#include "or_graph_kit/instance_labeling.hpp"

namespace orgk {

inline constexpr std::size_t kNumLogits = kNumRelations + 1;  // 14 predicates + none
inline constexpr std::size_t kNoneLogit = kNumRelations;

/// Externally computed relation scores for one ordered instance pair.
struct PairLogits {
  InstanceId sub = 0;
  InstanceId obj = 0;
  std::vector<double> scores;

  friend bool operator==(const PairLogits&, const PairLogits&) = default;
};

enum class DecodeMode { argmax, threshold };

struct DecodeOptions {
  DecodeMode mode = DecodeMode::argmax;
  double threshold = 0.5;  // threshold mode only: every predicate scoring >= threshold

  friend bool operator==(const DecodeOptions&, const DecodeOptions&) = default;
};

/// One edge per ordered pair from the argmax over predicates and "none";
/// ties go to the earlier class in enumeration order. The returned set is
/// canonicalized and sorted.
inline std::vector<Edge> decode_logits(const std::vector<PairLogits>& pairs, const DecodeOptions& opts = {}) {
  std::set<std::pair<InstanceId, InstanceId>> seen;
  std::set<Edge> edges;
  for (const auto& p : pairs) {
    if (p.scores.size() != kNumLogits)
      throw Error(Errc::bad_logits, "expected " + std::to_string(kNumLogits) + " scores, got " +
                                        std::to_string(p.scores.size()));
    for (double s : p.scores)
      if (!std::isfinite(s)) throw Error(Errc::bad_logits, "non-finite score");
    if (p.sub == p.obj) throw Error(Errc::bad_logits, "self pair " + std::to_string(p.sub));
    if (!seen.emplace(p.sub, p.obj).second)
      throw Error(Errc::bad_logits, "duplicate pair (" + std::to_string(p.sub) + "," + std::to_string(p.obj) + ")");

    if (opts.mode == DecodeMode::argmax) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < kNumLogits; ++k)
        if (p.scores[k] > p.scores[best]) best = k;
      if (best != kNoneLogit) edges.insert(canonical({p.sub, kAllRelations[best], p.obj}));
    } else {
      for (std::size_t k = 0; k < kNumRelations; ++k)
        if (p.scores[k] >= opts.threshold) edges.insert(canonical({p.sub, kAllRelations[k], p.obj}));
    }
  }
  return {edges.begin(), edges.end()};
}

struct BaselineParams {
  double close_to_threshold = 1.5;  // meters
  double lying_on_max_tilt = 30;    // degrees from horizontal
  double lying_on_overlap_frac = 0.5;

  friend bool operator==(const BaselineParams&, const BaselineParams&) = default;
};

inline void check_params(const BaselineParams& p) {
  if (!(p.close_to_threshold > 0)) throw Error(Errc::bad_config, "close_to_threshold must be > 0");
  if (!(p.lying_on_max_tilt >= 0 && p.lying_on_max_tilt <= 90)) throw Error(Errc::bad_config, "bad lying_on_max_tilt");
  if (!(p.lying_on_overlap_frac >= 0 && p.lying_on_overlap_frac <= 1))
    throw Error(Errc::bad_config, "lying_on_overlap_frac outside [0,1]");
}

struct FrameGeometry {
  std::vector<HumanPose> poses;
  std::vector<OrientedBox3> boxes;
  InstanceLabelMap labels;
};

/// Tilt of the shoulder-mid to hip-mid axis above the ground plane, degrees.
inline double trunk_tilt_degrees(const HumanPose& p) {
  const Vec3 v = 0.5 * (p[Joint::left_shoulder] + p[Joint::right_shoulder]) -
                 0.5 * (p[Joint::left_hip] + p[Joint::right_hip]);
  const double n = v.norm();
  if (n == 0) return 90.0;
  return std::asin(std::min(1.0, std::abs(v.z()) / n)) * 180.0 / std::numbers::pi;
}

/// Emits only CloseTo (human-human and human-equipment) and LyingOn.
inline std::vector<Edge> predict_geometric(const FrameGeometry& frame, const BaselineParams& params = {}) {
  check_params(params);
  struct Anchor {
    InstanceId id;
    bool human;
    Vec3 at;
    std::size_t source;
  };
  std::vector<Anchor> anchors;
  for (const auto& [id, info] : frame.labels.instances) {
    if (info.source == InstanceSourceKind::pose && info.source_index < frame.poses.size())
      anchors.push_back({id, true, frame.poses[info.source_index].mean_joint(), info.source_index});
    else if (info.source == InstanceSourceKind::box && info.source_index < frame.boxes.size())
      anchors.push_back({id, false, frame.boxes[info.source_index].center, info.source_index});
  }

  std::set<Edge> edges;
  for (std::size_t i = 0; i < anchors.size(); ++i)
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      if (!anchors[i].human && !anchors[j].human) continue;
      if ((anchors[i].at - anchors[j].at).norm() < params.close_to_threshold)
        edges.insert(canonical({anchors[i].id, RelationClass::CloseTo, anchors[j].id}));
    }

  for (const auto& h : anchors) {
    if (!h.human) continue;
    const HumanPose& pose = frame.poses[h.source];
    if (trunk_tilt_degrees(pose) > params.lying_on_max_tilt) continue;
    std::optional<InstanceId> table;
    std::size_t best = 0;
    for (const auto& b : anchors) {
      if (b.human || frame.boxes[b.source].cls != entity::operating_table) continue;
      std::size_t inside = 0;
      for (const auto& j : pose.joints) inside += frame.boxes[b.source].footprint_contains(j) ? 1 : 0;
      if (static_cast<double>(inside) >= params.lying_on_overlap_frac * kNumJoints && (!table || inside > best))
        table = b.id, best = inside;
    }
    if (table) edges.insert({h.id, RelationClass::LyingOn, *table});
  }
  return {edges.begin(), edges.end()};
}

/// Scene graph whose nodes are the labeled instances (node id = instance id).
inline SceneGraph graph_from_labels(std::int64_t frame_id, const InstanceLabelMap& labels,
                                    const std::vector<Edge>& edges) {
  SceneGraph g;
  g.frame_id = frame_id;
  for (const auto& [id, info] : labels.instances) g.nodes.push_back({static_cast<NodeId>(id), info.cls, id});
  for (const auto& e : edges)
    if (g.find_node(e.sub) && g.find_node(e.obj)) g.add_edge(e);
  g.normalize();
  return g;
}

}  // namespace orgk
