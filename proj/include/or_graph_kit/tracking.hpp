#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "or_graph_kit/assignment.hpp"
#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"

namespace orgk {

struct TrackEntry {
  HumanPose pose;
  NodeId node = 0;              // human node of this track in the frame's graph
  std::size_t detection = 0;    // index into the frame's pose list

  friend bool operator==(const TrackEntry&, const TrackEntry&) = default;
};

struct Track {
  std::int64_t track_id = 0;
  std::map<std::int64_t, TrackEntry> entries;  // frame id -> entry

  std::size_t length() const { return entries.size(); }

  friend bool operator==(const Track&, const Track&) = default;
};

/// Detections of one frame. `nodes[i]` is the graph node of poses[i]; when
/// empty the pose index is used.
struct FramePoses {
  std::int64_t frame_id = 0;
  std::vector<HumanPose> poses;
  std::vector<NodeId> nodes;
};

struct TrackingParams {
  double max_cost = 0.5;  // meters, mean joint distance
  int max_gap = 3;        // frames a track may go unmatched before closing

  friend bool operator==(const TrackingParams&, const TrackingParams&) = default;
};

inline std::vector<Track> associate_tracks(const std::vector<FramePoses>& frames, const TrackingParams& params = {}) {
  if (!(params.max_cost > 0) || params.max_gap < 0) throw Error(Errc::bad_config, "bad tracking gates");
  std::vector<Track> tracks;
  std::vector<std::size_t> live;  // indices into tracks

  std::optional<std::int64_t> prev;
  for (const auto& f : frames) {
    if (prev && f.frame_id <= *prev) throw Error(Errc::misaligned_takes, "frames must be strictly increasing");
    prev = f.frame_id;
    if (!f.nodes.empty() && f.nodes.size() != f.poses.size())
      throw Error(Errc::bad_schema, "node list length differs from pose list");

    std::erase_if(live, [&](std::size_t t) {
      const std::int64_t last = tracks[t].entries.rbegin()->first;
      return f.frame_id - last - 1 > params.max_gap;
    });

    std::vector<bool> claimed(f.poses.size(), false);
    auto node_of = [&](std::size_t d) { return f.nodes.empty() ? static_cast<NodeId>(d) : f.nodes[d]; };

    if (!live.empty() && !f.poses.empty()) {
      AssignmentProblem p{CostMatrix(live.size(), f.poses.size()), Objective::minimize};
      for (std::size_t i = 0; i < live.size(); ++i)
        for (std::size_t d = 0; d < f.poses.size(); ++d)
          p.cost(i, d) = pose_distance(tracks[live[i]].entries.rbegin()->second.pose, f.poses[d]);
      for (auto [i, d] : solve_assignment(p).pairs) {
        if (p.cost(i, d) > params.max_cost) continue;
        tracks[live[i]].entries[f.frame_id] = {f.poses[d], node_of(d), d};
        claimed[d] = true;
      }
    }
    for (std::size_t d = 0; d < f.poses.size(); ++d) {
      if (claimed[d]) continue;
      Track t;
      t.track_id = static_cast<std::int64_t>(tracks.size());
      t.entries[f.frame_id] = {f.poses[d], node_of(d), d};
      tracks.push_back(std::move(t));
      live.push_back(tracks.size() - 1);
    }
  }
  return tracks;
}

}  // namespace orgk
