#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "or_graph_kit/io_formats.hpp"

namespace orgk::pipeline {

namespace fs = std::filesystem;
using io::json;

// ---------------------------------------------------------------------------
// Logging (OR_GRAPH_KIT_LOG = error | info | debug)

enum class LogLevel { error = 0, info = 1, debug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* v = std::getenv("OR_GRAPH_KIT_LOG");
    if (!v) return LogLevel::error;
    const std::string s(v);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  static std::mutex m;
  if (level > log_level()) return;
  static constexpr const char* names[] = {"error", "info", "debug"};
  std::lock_guard lock(m);
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// Frame-level parallelism. Results are written by index, so the merge order
// never depends on scheduling. The first failure by index is rethrown.

template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Output transaction: files are staged next to their final path and only
// renamed into place on commit. Anything staged is removed otherwise.

class OutputTransaction {
 public:
  explicit OutputTransaction(fs::path root) : root_(std::move(root)) {}
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;

  ~OutputTransaction() {
    if (!committed_) rollback();
  }

  const fs::path& root() const { return root_; }

  /// Path to write `rel` to within this transaction.
  fs::path stage(const fs::path& rel) {
    const fs::path final_path = root_ / rel;
    fs::path tmp = final_path;
    tmp += ".partial";
    std::lock_guard lock(mutex_);
    make_dirs(final_path.parent_path());
    staged_[final_path] = tmp;
    return tmp;
  }

  /// Where to read `rel` from: the staged copy if this transaction wrote it.
  fs::path resolve(const fs::path& rel) const {
    const fs::path final_path = root_ / rel;
    std::lock_guard lock(mutex_);
    auto it = staged_.find(final_path);
    return it == staged_.end() ? final_path : it->second;
  }

  bool exists(const fs::path& rel) const { return fs::exists(resolve(rel)); }

  void commit() {
    std::lock_guard lock(mutex_);
    for (const auto& [final_path, tmp] : staged_) fs::rename(tmp, final_path);
    staged_.clear();
    committed_ = true;
  }

  void rollback() noexcept {
    std::lock_guard lock(mutex_);
    std::error_code ec;
    for (const auto& [_, tmp] : staged_) fs::remove(tmp, ec);
    staged_.clear();
    for (auto it = created_.rbegin(); it != created_.rend(); ++it)
      if (fs::is_empty(*it, ec)) fs::remove(*it, ec);
    created_.clear();
  }

 private:
  void make_dirs(const fs::path& dir) {
    std::vector<fs::path> missing;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      missing.push_back(p);
      if (p == p.parent_path()) break;
    }
    fs::create_directories(dir);
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) created_.push_back(*it);
  }

  fs::path root_;
  mutable std::mutex mutex_;
  std::map<fs::path, fs::path> staged_;
  std::vector<fs::path> created_;
  bool committed_ = false;
};

// ---------------------------------------------------------------------------
// Layout

inline std::string frame_name(std::int64_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "f%06lld", static_cast<long long>(frame));
  return buf;
}

namespace layout {
inline fs::path manifest() { return "manifest.json"; }
inline fs::path camera_cloud(std::int64_t f, std::size_t cam) {
  return fs::path("clouds") / (frame_name(f) + "_cam" + std::to_string(cam) + ".ply");
}
inline fs::path det_poses() { return "detections/poses.json"; }
inline fs::path det_boxes() { return "detections/boxes.json"; }
inline fs::path model_logits() { return "model/logits.json"; }
inline fs::path gt_take() { return "gt/take.json"; }
inline fs::path gt_poses() { return "gt/poses.json"; }
inline fs::path gt_boxes() { return "gt/boxes.json"; }
inline fs::path gt_roles() { return "gt/roles.json"; }
inline fs::path gt_tracks() { return "gt/tracks.json"; }
inline fs::path gt_labels(std::int64_t f, std::size_t cam) {
  return fs::path("gt/labels") / (frame_name(f) + "_cam" + std::to_string(cam) + ".json");
}

inline fs::path fused_cloud(std::int64_t f) { return fs::path("fused") / (frame_name(f) + ".ply"); }
inline fs::path fused_sources(std::int64_t f) { return fs::path("fused") / (frame_name(f) + ".sources.json"); }
inline fs::path labels(std::int64_t f) { return fs::path("labels") / (frame_name(f) + ".json"); }
inline fs::path pred_take() { return "graphs/take.json"; }
inline fs::path tracks() { return "tracks/tracks.json"; }
inline fs::path role_scores() { return "roles/scores.json"; }
inline fs::path role_assignment() { return "roles/assignment.json"; }
inline fs::path metrics() { return "eval/metrics.json"; }
inline fs::path metrics_text() { return "eval/metrics.txt"; }
inline fs::path dot() { return "dot/graphs.dot"; }
}  // namespace layout

// ---------------------------------------------------------------------------
// Context shared by the stages of one invocation

struct Context {
  io::RunConfig config;
  fs::path config_dir;  // relative paths in the config resolve against this
  fs::path input;       // <input>/<take>
  OutputTransaction* out = nullptr;
  int jobs = 1;
  std::uint64_t seed = 0;

  fs::path in(const fs::path& rel) const { return input / rel; }
  fs::path read_out(const fs::path& rel) const { return out->resolve(rel); }
  fs::path write_out(const fs::path& rel) const { return out->stage(rel); }

  fs::path config_path(const std::string& p) const {
    const fs::path q(p);
    return q.is_absolute() ? q : config_dir / q;
  }
};

inline io::json read_doc(const fs::path& p) {
  if (!fs::exists(p)) throw Error(Errc::io_error, "missing input " + p.string());
  return io::read_json(p);
}

inline io::Manifest load_manifest(const Context& ctx) {
  auto m = io::manifest_from_json(read_doc(ctx.in(layout::manifest())));
  if (std::find(ctx.config.splits.begin(), ctx.config.splits.end(), m.split) == ctx.config.splits.end())
    throw Error(Errc::bad_config, "take '" + m.take_id + "' is in split '" + std::string(to_string(m.split)) +
                                      "', which the config does not select");
  return m;
}

template <class List>
auto by_frame(const std::vector<List>& frames) {
  std::map<std::int64_t, List> out;
  for (const auto& f : frames)
    if (!out.emplace(f.frame_id, f).second)
      throw Error(Errc::bad_schema, "frame " + std::to_string(f.frame_id) + " listed twice");
  return out;
}

template <class T>
const T& frame_entry(const std::map<std::int64_t, T>& m, std::int64_t frame, std::string_view what) {
  auto it = m.find(frame);
  if (it == m.end()) throw Error(Errc::bad_schema, std::string(what) + " has no frame " + std::to_string(frame));
  return it->second;
}

struct Detections {
  std::map<std::int64_t, io::FramePoseList> poses;
  std::map<std::int64_t, io::FrameBoxList> boxes;
};

inline Detections load_detections(const Context& ctx) {
  Detections d;
  d.poses = by_frame(io::poses_from_json(read_doc(ctx.in(layout::det_poses()))));
  d.boxes = by_frame(io::boxes_from_json(read_doc(ctx.in(layout::det_boxes()))));
  EntityVocabulary vocab;
  for (const auto& e : ctx.config.entities) vocab.add(e);
  for (const auto& [_, f] : d.boxes)
    for (const auto& b : f.boxes)
      if (!vocab.contains(b.cls) || vocab.is_virtual(b.cls))
        throw Error(Errc::bad_schema, "box class '" + b.cls + "' is not a physical entity class");
  return d;
}

// ---------------------------------------------------------------------------
// Stages

inline void run_fuse(const Context& ctx) {
  const auto m = load_manifest(ctx);
  log(LogLevel::info, "fuse: " + std::to_string(m.frames.size()) + " frames");
  parallel_for(m.frames.size(), ctx.jobs, [&](std::size_t i) {
    const auto f = m.frames[i];
    std::vector<PointCloud> clouds;
    for (std::size_t c = 0; c < m.num_cameras; ++c) clouds.push_back(io::read_ply(ctx.in(layout::camera_cloud(f, c))));
    const auto fused = fuse_with_sources(clouds, ctx.config.fuse);
    io::write_ply(ctx.write_out(layout::fused_cloud(f)), fused.cloud);
    io::write_json(ctx.write_out(layout::fused_sources(f)), io::sources_to_json(f, fused.sources));
  });
}

inline void run_label(const Context& ctx) {
  const auto m = load_manifest(ctx);
  const auto det = load_detections(ctx);
  log(LogLevel::info, "label: " + std::to_string(m.frames.size()) + " frames");
  parallel_for(m.frames.size(), ctx.jobs, [&](std::size_t i) {
    const auto f = m.frames[i];
    const auto cloud = io::read_ply(ctx.read_out(layout::fused_cloud(f)));
    const auto& poses = frame_entry(det.poses, f, "pose detections").poses;
    const auto& boxes = frame_entry(det.boxes, f, "box detections").boxes;
    auto labels = compute_instance_labels(cloud, boxes, poses, ctx.config.labeling);
    labels = instrument_region(cloud, std::move(labels), poses, ctx.config.labeling);
    io::write_json(ctx.write_out(layout::labels(f)), io::labels_to_json(f, labels));
  });
}

inline InstanceLabelMap load_labels(const Context& ctx, std::int64_t f) {
  auto [frame, labels] = io::labels_from_json(read_doc(ctx.read_out(layout::labels(f))));
  if (frame != f) throw Error(Errc::bad_schema, "labels file for frame " + std::to_string(f) + " names another frame");
  return labels;
}

inline void run_predict(const Context& ctx) {
  const auto m = load_manifest(ctx);
  const auto det = load_detections(ctx);
  std::map<std::int64_t, io::FrameLogits> logits;
  if (ctx.config.use_model_logits && fs::exists(ctx.in(layout::model_logits())))
    logits = by_frame(io::logits_from_json(read_doc(ctx.in(layout::model_logits()))));

  Take take;
  take.take_id = m.take_id;
  take.split = m.split;
  take.frames.resize(m.frames.size());
  parallel_for(m.frames.size(), ctx.jobs, [&](std::size_t i) {
    const auto f = m.frames[i];
    FrameGeometry geo{frame_entry(det.poses, f, "pose detections").poses,
                      frame_entry(det.boxes, f, "box detections").boxes, load_labels(ctx, f)};
    if (geo.labels.num_boxes != geo.boxes.size() || geo.labels.num_poses != geo.poses.size())
      throw Error(Errc::bad_schema, "labels for frame " + std::to_string(f) + " were made from other detections");
    auto edges = predict_geometric(geo, ctx.config.baseline);
    if (auto it = logits.find(f); it != logits.end())
      for (const auto& e : decode_logits(it->second.pairs, ctx.config.decode)) edges.push_back(e);
    take.frames[i] = {f, static_cast<double>(f), graph_from_labels(f, geo.labels, edges)};
  });
  log(LogLevel::info, "predict: " + std::to_string(take.frames.size()) + " graphs");
  io::write_json(ctx.write_out(layout::pred_take()), io::take_to_json(take));
}

inline void run_track(const Context& ctx) {
  const auto m = load_manifest(ctx);
  const auto det = load_detections(ctx);
  std::vector<FramePoses> frames;
  for (auto f : m.frames) {
    FramePoses fp{f, frame_entry(det.poses, f, "pose detections").poses, {}};
    const auto num_boxes = frame_entry(det.boxes, f, "box detections").boxes.size();
    for (std::size_t j = 0; j < fp.poses.size(); ++j) fp.nodes.push_back(static_cast<NodeId>(num_boxes + j + 1));
    frames.push_back(std::move(fp));
  }
  const auto tracks = associate_tracks(frames, ctx.config.tracking);
  log(LogLevel::info, "track: " + std::to_string(tracks.size()) + " tracks");
  io::write_json(ctx.write_out(layout::tracks()), io::tracks_to_json(tracks));
}

inline std::map<std::int64_t, SceneGraph> graphs_by_frame(const Take& t) {
  std::map<std::int64_t, SceneGraph> out;
  for (const auto& f : t.frames) out[f.frame_id] = f.graph;
  return out;
}

inline void run_roles(const Context& ctx) {
  const auto tracks = io::tracks_from_json(read_doc(ctx.read_out(layout::tracks())));
  RoleScoreTable table;
  if (ctx.config.external_role_scores) {
    table = io::role_scores_from_json(read_doc(ctx.config_path(*ctx.config.external_role_scores)));
    std::set<std::int64_t> known;
    for (const auto& t : tracks) known.insert(t.track_id);
    for (auto id : table.track_ids)
      if (!known.contains(id)) throw Error(Errc::bad_scores, "scores for unknown track " + std::to_string(id));
  } else {
    const auto take = io::take_from_json(read_doc(ctx.read_out(layout::pred_take())));
    table = score_tracks(tracks, graphs_by_frame(take), ctx.config.roles);
  }
  const auto assignment = assign_roles_unique(table);
  io::write_json(ctx.write_out(layout::role_scores()), io::role_scores_to_json(table));
  io::write_json(ctx.write_out(layout::role_assignment()), io::role_assignment_to_json(assignment));
}

// Evaluation ------------------------------------------------------------------

/// Pred instance id -> gt instance id for one frame. Humans are matched by
/// pose distance, objects by class and IoU, instruments follow their owner.
inline std::map<InstanceId, InstanceId> geometric_instance_map(const std::vector<HumanPose>& gt_poses,
                                                               const std::vector<OrientedBox3>& gt_boxes,
                                                               const std::vector<HumanPose>& pred_poses,
                                                               const std::vector<OrientedBox3>& pred_boxes) {
  std::map<InstanceId, InstanceId> out;
  const auto human = match_poses(gt_poses, pred_poses);
  for (std::size_t i = 0; i < human.size(); ++i) {
    if (!human[i]) continue;
    const auto j = *human[i];
    out[static_cast<InstanceId>(pred_boxes.size() + j + 1)] = static_cast<InstanceId>(gt_boxes.size() + i + 1);
    out[static_cast<InstanceId>(pred_boxes.size() + pred_poses.size() + j + 1)] =
        static_cast<InstanceId>(gt_boxes.size() + gt_poses.size() + i + 1);
  }
  if (!gt_boxes.empty() && !pred_boxes.empty()) {
    AssignmentProblem p{CostMatrix(gt_boxes.size(), pred_boxes.size()), Objective::maximize};
    for (std::size_t i = 0; i < gt_boxes.size(); ++i)
      for (std::size_t j = 0; j < pred_boxes.size(); ++j)
        p.cost(i, j) = gt_boxes[i].cls == pred_boxes[j].cls ? box_iou(gt_boxes[i], pred_boxes[j]) : 0.0;
    for (auto [i, j] : solve_assignment(p).pairs)
      if (p.cost(i, j) > 0) out[static_cast<InstanceId>(j + 1)] = static_cast<InstanceId>(i + 1);
  }
  return out;
}

inline std::string threshold_key(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

inline io::MetricsReport run_eval(const Context& ctx) {
  const auto m = load_manifest(ctx);
  const auto& mc = ctx.config.metrics;
  io::MetricsReport report;

  const bool have_gt_geo = fs::exists(ctx.in(layout::gt_poses())) && fs::exists(ctx.in(layout::gt_boxes()));
  const bool have_det = fs::exists(ctx.in(layout::det_poses())) && fs::exists(ctx.in(layout::det_boxes()));
  std::map<std::int64_t, io::FramePoseList> gt_poses;
  std::map<std::int64_t, io::FrameBoxList> gt_boxes;
  Detections det;
  if (have_gt_geo) {
    gt_poses = by_frame(io::poses_from_json(read_doc(ctx.in(layout::gt_poses()))));
    gt_boxes = by_frame(io::boxes_from_json(read_doc(ctx.in(layout::gt_boxes()))));
  }
  if (have_det) det = load_detections(ctx);

  // Per-frame instance correspondence.
  std::map<std::int64_t, std::map<InstanceId, InstanceId>> inst;
  if (mc.correspondence == "geometric") {
    if (!have_gt_geo || !have_det)
      throw Error(Errc::io_error, "geometric correspondence needs gt and detected poses and boxes");
    for (auto f : m.frames)
      inst[f] = geometric_instance_map(frame_entry(gt_poses, f, "gt poses").poses,
                                       frame_entry(gt_boxes, f, "gt boxes").boxes,
                                       frame_entry(det.poses, f, "pose detections").poses,
                                       frame_entry(det.boxes, f, "box detections").boxes);
  }
  auto map_instance = [&](std::int64_t f, InstanceId id) -> std::optional<InstanceId> {
    if (mc.correspondence == "node_id") return id;
    const auto& mp = inst.at(f);
    auto it = mp.find(id);
    if (it == mp.end()) return std::nullopt;
    return it->second;
  };

  // Relations.
  if (fs::exists(ctx.in(layout::gt_take())) && ctx.out->exists(layout::pred_take())) {
    const auto gt = io::take_from_json(read_doc(ctx.in(layout::gt_take())));
    const auto pred = io::take_from_json(read_doc(ctx.read_out(layout::pred_take())));
    std::vector<SceneGraph> g, p;
    for (const auto& fr : gt.frames) g.push_back(fr.graph);
    for (const auto& fr : pred.frames) p.push_back(fr.graph);
    CorrespondencePolicy policy = [&](const SceneGraph& gg, const SceneGraph& pg) {
      NodeCorrespondence c;
      for (const auto& n : pg.nodes) {
        auto to = map_instance(gg.frame_id, static_cast<InstanceId>(n.id));
        if (to && gg.find_node(static_cast<NodeId>(*to))) c[n.id] = static_cast<NodeId>(*to);
      }
      return c;
    };
    report.relations = relation_prf(g, p, policy, mc.macro_mode);
  }

  // Instance labels over the fused points.
  bool have_labels = fs::exists(ctx.in(layout::gt_labels(m.frames.empty() ? 0 : m.frames.front(), 0)));
  for (auto f : m.frames)
    have_labels = have_labels && ctx.out->exists(layout::labels(f)) && ctx.out->exists(layout::fused_sources(f));
  if (have_labels && !m.frames.empty()) {
    std::vector<std::vector<InstanceId>> gt_all(m.frames.size()), pred_all(m.frames.size());
    parallel_for(m.frames.size(), ctx.jobs, [&](std::size_t i) {
      const auto f = m.frames[i];
      std::vector<std::vector<InstanceId>> cams;
      for (std::size_t c = 0; c < m.num_cameras; ++c)
        cams.push_back(io::labels_from_json(read_doc(ctx.in(layout::gt_labels(f, c)))).second.labels);
      const auto sources = io::sources_from_json(read_doc(ctx.read_out(layout::fused_sources(f))));
      const auto pred = load_labels(ctx, f);
      if (pred.labels.size() != sources.size())
        throw Error(Errc::bad_schema, "labels and fused points differ in frame " + std::to_string(f));
      for (std::size_t k = 0; k < sources.size(); ++k) {
        const auto& s = sources[k];
        if (s.cloud >= cams.size() || s.index >= cams[s.cloud].size())
          throw Error(Errc::bad_schema, "fusion source out of range in frame " + std::to_string(f));
        gt_all[i].push_back(cams[s.cloud][s.index]);
        InstanceId mapped = 0;
        if (pred.labels[k] != 0) mapped = map_instance(f, pred.labels[k]).value_or(static_cast<InstanceId>(-1));
        pred_all[i].push_back(mapped);
      }
    });
    std::vector<InstanceId> g, p;
    for (std::size_t i = 0; i < m.frames.size(); ++i) {
      g.insert(g.end(), gt_all[i].begin(), gt_all[i].end());
      p.insert(p.end(), pred_all[i].begin(), pred_all[i].end());
    }
    report.labeling_accuracy = labeling_accuracy(g, p);
  }

  // Poses and boxes.
  if (have_gt_geo && have_det) {
    std::vector<std::vector<HumanPose>> gp, pp;
    std::vector<std::vector<OrientedBox3>> gb, pb;
    for (auto f : m.frames) {
      gp.push_back(frame_entry(gt_poses, f, "gt poses").poses);
      pp.push_back(frame_entry(det.poses, f, "pose detections").poses);
      gb.push_back(frame_entry(gt_boxes, f, "gt boxes").boxes);
      pb.push_back(frame_entry(det.boxes, f, "box detections").boxes);
    }
    report.pcp3d = pcp3d(gp, pp, mc.pcp_alpha);
    for (double t : mc.iou_thresholds) report.ap[threshold_key(t)] = ap_at_iou(gb, pb, t);
  }

  // Tracks and roles.
  if (ctx.out->exists(layout::tracks())) {
    const auto tracks = io::tracks_from_json(read_doc(ctx.read_out(layout::tracks())));
    report.num_tracks = tracks.size();
    if (have_gt_geo && have_det && fs::exists(ctx.in(layout::gt_roles())) && ctx.out->exists(layout::role_assignment())) {
      const auto gt_roles = io::role_assignment_from_json(read_doc(ctx.in(layout::gt_roles())));
      const auto assigned = io::role_assignment_from_json(read_doc(ctx.read_out(layout::role_assignment())));
      std::map<std::pair<std::int64_t, std::size_t>, std::int64_t> track_of;
      for (const auto& t : tracks)
        for (const auto& [f, e] : t.entries) track_of[{f, e.detection}] = t.track_id;
      auto pred_role = [&](std::int64_t f, std::size_t d) -> std::optional<RoleClass> {
        auto t = track_of.find({f, d});
        if (t == track_of.end()) return std::nullopt;
        auto r = assigned.find(t->second);
        return r == assigned.end() ? std::nullopt : r->second;
      };
      std::vector<RoleObservation> obs;
      for (auto f : m.frames) {
        const auto& g = frame_entry(gt_poses, f, "gt poses").poses;
        const auto& p = frame_entry(det.poses, f, "pose detections").poses;
        const auto match = match_poses(g, p);
        std::vector<bool> used(p.size(), false);
        for (std::size_t i = 0; i < g.size(); ++i) {
          auto r = gt_roles.find(g[i].person_id);
          const std::optional<RoleClass> truth = r == gt_roles.end() ? std::nullopt : r->second;
          std::optional<RoleClass> guess;
          if (match[i]) guess = pred_role(f, *match[i]), used[*match[i]] = true;
          obs.push_back({truth, guess});
        }
        for (std::size_t d = 0; d < p.size(); ++d)
          if (!used[d]) obs.push_back({std::nullopt, pred_role(f, d)});
      }
      report.roles = role_prf(obs, mc.macro_mode);
    }
  }

  io::write_json(ctx.write_out(layout::metrics()), io::metrics_to_json(report));
  io::write_text(ctx.write_out(layout::metrics_text()), io::format_metrics(report));
  return report;
}

inline void run_export_dot(const Context& ctx) {
  const auto take = io::take_from_json(read_doc(ctx.read_out(layout::pred_take())));
  std::map<std::pair<std::int64_t, NodeId>, RoleClass> roles;
  if (ctx.out->exists(layout::tracks()) && ctx.out->exists(layout::role_assignment())) {
    const auto tracks = io::tracks_from_json(read_doc(ctx.read_out(layout::tracks())));
    const auto assigned = io::role_assignment_from_json(read_doc(ctx.read_out(layout::role_assignment())));
    for (const auto& t : tracks) {
      auto r = assigned.find(t.track_id);
      if (r == assigned.end() || !r->second) continue;
      for (const auto& [f, e] : t.entries) roles[{f, e.node}] = *r->second;
    }
  }
  std::vector<SceneGraph> graphs;
  for (const auto& f : take.frames) graphs.push_back(f.graph);
  io::write_text(ctx.write_out(layout::dot()), io::export_dot(graphs, roles));
}

/// Writes a synthetic take directory (the layout every other stage reads)
/// under the transaction root, in <take_id>/.
inline void run_synth(const Context& ctx) {
  ScenarioConfig sc = ctx.config.synth;
  sc.seed = ctx.seed;
  const auto t = generate_take(sc);
  const fs::path root = sc.take_id;

  io::Manifest m{sc.take_id, sc.split, {}, static_cast<std::size_t>(sc.num_cameras)};
  std::vector<io::FramePoseList> gp, dp;
  std::vector<io::FrameBoxList> gb, db;
  std::vector<io::FrameLogits> lg;
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    const auto f = t.take.frames[i].frame_id;
    m.frames.push_back(f);
    gp.push_back({f, t.frames[i].poses});
    gb.push_back({f, t.frames[i].boxes});
    dp.push_back({f, t.predictions[i].poses});
    db.push_back({f, t.predictions[i].boxes});
    lg.push_back({f, t.predictions[i].logits});
  }
  RoleAssignment gt_roles;
  for (std::size_t a = 0; a < t.actor_roles.size(); ++a) gt_roles[static_cast<std::int64_t>(a)] = t.actor_roles[a];

  io::write_json(ctx.write_out(root / layout::manifest()), io::manifest_to_json(m));
  io::write_json(ctx.write_out(root / layout::det_poses()), io::poses_to_json(dp));
  io::write_json(ctx.write_out(root / layout::det_boxes()), io::boxes_to_json(db));
  io::write_json(ctx.write_out(root / layout::model_logits()), io::logits_to_json(lg));
  io::write_json(ctx.write_out(root / layout::gt_take()), io::take_to_json(t.take));
  io::write_json(ctx.write_out(root / layout::gt_poses()), io::poses_to_json(gp));
  io::write_json(ctx.write_out(root / layout::gt_boxes()), io::boxes_to_json(gb));
  io::write_json(ctx.write_out(root / layout::gt_roles()), io::role_assignment_to_json(gt_roles));
  io::write_json(ctx.write_out(root / layout::gt_tracks()), io::tracks_to_json(t.tracks));

  // Stage every path up front so workers never touch the path table.
  struct FrameFiles {
    std::vector<fs::path> clouds, labels;
  };
  std::vector<FrameFiles> files(t.frames.size());
  for (std::size_t i = 0; i < t.frames.size(); ++i)
    for (std::size_t c = 0; c < m.num_cameras; ++c) {
      files[i].clouds.push_back(ctx.write_out(root / layout::camera_cloud(m.frames[i], c)));
      files[i].labels.push_back(ctx.write_out(root / layout::gt_labels(m.frames[i], c)));
    }
  parallel_for(t.frames.size(), ctx.jobs, [&](std::size_t i) {
    const auto& fr = t.frames[i];
    InstanceLabelMap ids;
    ids.num_boxes = fr.boxes.size();
    ids.num_poses = fr.poses.size();
    ids.instances = fr.instances;
    for (std::size_t c = 0; c < m.num_cameras; ++c) {
      io::write_ply(files[i].clouds[c], fr.camera_clouds[c]);
      ids.labels = fr.camera_labels[c];
      io::write_json(files[i].labels[c], io::labels_to_json(m.frames[i], ids));
    }
  });
  log(LogLevel::info, "synth: wrote " + std::to_string(t.frames.size()) + " frames to " +
                          (ctx.out->root() / root).string());
}

inline io::MetricsReport run_all(const Context& ctx) {
  run_fuse(ctx);
  run_label(ctx);
  run_predict(ctx);
  run_track(ctx);
  run_roles(ctx);
  return run_eval(ctx);
}

}  // namespace orgk::pipeline
