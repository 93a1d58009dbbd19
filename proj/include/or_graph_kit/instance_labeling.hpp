#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"
#include "or_graph_kit/random.hpp"

namespace orgk {

enum class InstanceSourceKind { box, pose, virtual_instrument };

struct InstanceInfo {
  std::string cls;
  InstanceSourceKind source = InstanceSourceKind::box;
  std::size_t source_index = 0;  // box index, or owning pose index for humans and instruments

  friend bool operator==(const InstanceInfo&, const InstanceInfo&) = default;
};

/// Per-point instance ids (0 = background) plus the table describing each id.
///
/// Ids are stable and positional: box i gets i + 1, pose j gets
/// boxes + j + 1, and the instrument owned by pose j gets
/// boxes + poses + j + 1. Demoted instances keep their slot unused.
struct InstanceLabelMap {
  std::vector<InstanceId> labels;
  std::map<InstanceId, InstanceInfo> instances;
  std::size_t num_boxes = 0;
  std::size_t num_poses = 0;

  InstanceId box_instance(std::size_t i) const { return static_cast<InstanceId>(i + 1); }
  InstanceId pose_instance(std::size_t j) const { return static_cast<InstanceId>(num_boxes + j + 1); }
  InstanceId instrument_instance(std::size_t j) const {
    return static_cast<InstanceId>(num_boxes + num_poses + j + 1);
  }

  std::size_t count(InstanceId id) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), id));
  }

  friend bool operator==(const InstanceLabelMap&, const InstanceLabelMap&) = default;
};

struct LabelingParams {
  double human_capsule_radius = 0.12;
  double hand_radius = 0.25;
  std::size_t min_points_per_instance = 20;

  friend bool operator==(const LabelingParams&, const LabelingParams&) = default;
};

inline void check_params(const LabelingParams& p) {
  if (!(p.human_capsule_radius > 0) || !(p.hand_radius > 0))
    throw Error(Errc::bad_config, "labeling radii must be > 0");
}

namespace detail {

inline void check_cloud(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (!cloud[i].finite()) throw Error(Errc::invalid_points, "non-finite coordinate at point " + std::to_string(i));
}

inline double capsule_distance(const Vec3& p, const HumanPose& pose) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& part : default_parts())
    best = std::min(best, point_segment_distance(p, part.from.at(pose), part.to.at(pose)));
  return best;
}

inline void demote_small(InstanceLabelMap& m, std::size_t min_points) {
  std::map<InstanceId, std::size_t> counts;
  for (auto l : m.labels)
    if (l != 0) ++counts[l];
  for (auto it = m.instances.begin(); it != m.instances.end();) {
    auto c = counts.find(it->first);
    if (c == counts.end() || c->second < min_points)
      it = m.instances.erase(it);
    else
      ++it;
  }
  for (auto& l : m.labels)
    if (l != 0 && !m.instances.contains(l)) l = 0;
}

}  // namespace detail

/// Assigns each point to the box or human capsule that claims it. Among
/// several claimants the one whose surface is nearest to the point wins;
/// exact ties go to the lowest instance id.
inline InstanceLabelMap compute_instance_labels(const PointCloud& cloud, const std::vector<OrientedBox3>& boxes,
                                                const std::vector<HumanPose>& poses,
                                                const LabelingParams& params = {}) {
  check_params(params);
  detail::check_cloud(cloud);

  InstanceLabelMap m;
  m.num_boxes = boxes.size();
  m.num_poses = poses.size();
  m.labels.assign(cloud.size(), 0);
  for (std::size_t i = 0; i < boxes.size(); ++i)
    m.instances[m.box_instance(i)] = {boxes[i].cls, InstanceSourceKind::box, i};
  for (std::size_t j = 0; j < poses.size(); ++j)
    m.instances[m.pose_instance(j)] = {std::string(entity::human), InstanceSourceKind::pose, j};

  const double r = params.human_capsule_radius;
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const Vec3 p = cloud[k].pos();
    InstanceId best = 0;
    double best_depth = std::numeric_limits<double>::infinity();
    auto consider = [&](InstanceId id, double depth) {
      // Ids are visited in ascending order, so strict < keeps the lowest on ties.
      if (depth < best_depth) best = id, best_depth = depth;
    };
    for (std::size_t i = 0; i < boxes.size(); ++i)
      if (boxes[i].contains(p)) consider(m.box_instance(i), std::max(0.0, boxes[i].depth_inside(p)));
    for (std::size_t j = 0; j < poses.size(); ++j) {
      const double d = detail::capsule_distance(p, poses[j]);
      if (d <= r) consider(m.pose_instance(j), r - d);
    }
    m.labels[k] = best;
  }
  detail::demote_small(m, params.min_points_per_instance);
  return m;
}

/// Gives background points near a wrist to that human's virtual instrument.
/// Points within reach of several humans go to the nearest wrist.
inline InstanceLabelMap instrument_region(const PointCloud& cloud, InstanceLabelMap labels,
                                          const std::vector<HumanPose>& poses, const LabelingParams& params = {}) {
  check_params(params);
  if (labels.labels.size() != cloud.size())
    throw Error(Errc::invalid_points, "label count does not match point count");
  if (poses.empty()) return labels;
  if (poses.size() != labels.num_poses)
    throw Error(Errc::invalid_points, "pose list differs from the one used for labeling");

  bool any = false;
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    if (labels.labels[k] != 0) continue;
    const Vec3 p = cloud[k].pos();
    std::optional<std::size_t> owner;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < poses.size(); ++j) {
      for (Joint w : {Joint::left_wrist, Joint::right_wrist}) {
        const double d = (p - poses[j][w]).norm();
        if (d <= params.hand_radius && d < best) best = d, owner = j;
      }
    }
    if (owner) {
      labels.labels[k] = labels.instrument_instance(*owner);
      labels.instances[labels.instrument_instance(*owner)] = {std::string(entity::instrument),
                                                               InstanceSourceKind::virtual_instrument, *owner};
      any = true;
    }
  }
  if (any) detail::demote_small(labels, params.min_points_per_instance);
  return labels;
}

inline std::vector<std::size_t> instance_indices(const InstanceLabelMap& labels, InstanceId id) {
  if (id == 0 || !labels.instances.contains(id))
    throw Error(Errc::no_such_instance, "instance " + std::to_string(id));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < labels.labels.size(); ++k)
    if (labels.labels[k] == id) idx.push_back(k);
  if (idx.empty()) throw Error(Errc::no_such_instance, "instance " + std::to_string(id) + " has no points");
  return idx;
}

/// All points of an instance, or a seeded uniform subsample of exactly `budget`.
inline PointCloud extract_object_points(const PointCloud& cloud, const InstanceLabelMap& labels, InstanceId id,
                                        std::size_t budget = 4000, std::uint64_t seed = 0) {
  const auto idx = instance_indices(labels, id);
  Rng rng(seed);
  PointCloud out;
  for (auto k : rng.sample_indices(idx.size(), budget)) out.push_back(cloud[idx[k]]);
  return out;
}

/// Union of two instances' points with per-point provenance (0 = first, 1 = second).
struct RelationPoints {
  PointCloud cloud;
  std::vector<std::uint8_t> provenance;

  std::size_t count(std::uint8_t side) const {
    return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), side));
  }
};

inline RelationPoints extract_relation_points(const PointCloud& cloud, const InstanceLabelMap& labels,
                                              InstanceId a, InstanceId b, std::size_t budget = 8000,
                                              std::uint64_t seed = 0) {
  if (a == b) throw Error(Errc::self_pair, "instance " + std::to_string(a));
  const auto ia = instance_indices(labels, a);
  const auto ib = instance_indices(labels, b);
  std::vector<std::pair<std::size_t, std::uint8_t>> all;
  all.reserve(ia.size() + ib.size());
  for (auto k : ia) all.emplace_back(k, 0);
  for (auto k : ib) all.emplace_back(k, 1);

  Rng rng(seed);
  RelationPoints out;
  for (auto k : rng.sample_indices(all.size(), budget)) {
    out.cloud.push_back(cloud[all[k].first]);
    out.provenance.push_back(all[k].second);
  }
  return out;
}

}  // namespace orgk
