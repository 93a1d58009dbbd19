#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"
#include "or_graph_kit/instance_labeling.hpp"
#include "or_graph_kit/random.hpp"
#include "or_graph_kit/relation_baseline.hpp"
#include "or_graph_kit/role_inference.hpp"
#include "or_graph_kit/tracking.hpp"

namespace orgk {

inline constexpr std::array<std::string_view, 9> kPhaseNames = {"prepare", "anaesthesia", "cut",    "drill", "saw",
                                                                "hammer",  "cement",      "suture", "clean"};

struct Phase {
  std::string name;
  int duration = 0;  // frames

  friend bool operator==(const Phase&, const Phase&) = default;
};

struct ScenarioConfig {
  std::string take_id = "synth";
  SplitTag split = SplitTag::test;
  int n_frames = 60;
  std::vector<Phase> script = {{"prepare", 5}, {"anaesthesia", 5}, {"cut", 5},     {"drill", 5}, {"saw", 10},
                               {"hammer", 5},  {"cement", 10},     {"suture", 10}, {"clean", 5}};
  double point_sigma = 0.0;     // meters, Gaussian noise on sampled points
  double pose_jitter_sigma = 0.0;  // meters, on detected poses
  double dropout_prob = 0.0;    // per detected pose
  double surface_density = 500.0;  // points per square meter
  int num_cameras = 6;
  std::uint64_t seed = 0;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline void check_scenario(const ScenarioConfig& c) {
  if (c.n_frames <= 0) throw Error(Errc::bad_script, "n_frames must be positive");
  int sum = 0;
  for (const auto& p : c.script) {
    if (std::find(kPhaseNames.begin(), kPhaseNames.end(), p.name) == kPhaseNames.end())
      throw Error(Errc::bad_script, "unknown phase '" + p.name + "'");
    if (p.duration <= 0) throw Error(Errc::bad_script, "phase '" + p.name + "' has non-positive duration");
    sum += p.duration;
  }
  if (sum != c.n_frames)
    throw Error(Errc::bad_script, "phase durations sum to " + std::to_string(sum) + ", expected " +
                                      std::to_string(c.n_frames));
  if (!(c.point_sigma >= 0) || !(c.pose_jitter_sigma >= 0)) throw Error(Errc::bad_script, "noise sigma must be >= 0");
  if (!(c.dropout_prob >= 0 && c.dropout_prob <= 1)) throw Error(Errc::bad_script, "dropout_prob outside [0,1]");
  if (!(c.surface_density > 0)) throw Error(Errc::bad_script, "surface_density must be > 0");
  if (c.num_cameras <= 0) throw Error(Errc::bad_script, "num_cameras must be positive");
}

/// Upstream predictions for one frame: detector outputs plus model scores.
struct FramePrediction {
  std::vector<HumanPose> poses;
  std::vector<OrientedBox3> boxes;
  std::vector<PairLogits> logits;
  SceneGraph graph;  // edge-level prediction used for metric calibration

  friend bool operator==(const FramePrediction&, const FramePrediction&) = default;
};

struct SynthFrame {
  std::vector<HumanPose> poses;        // one per actor, actor order
  std::vector<OrientedBox3> boxes;
  std::vector<PointCloud> camera_clouds;
  std::vector<std::vector<InstanceId>> camera_labels;  // true instance of every camera point
  std::map<InstanceId, InstanceInfo> instances;

  friend bool operator==(const SynthFrame&, const SynthFrame&) = default;
};

struct SynthTake {
  ScenarioConfig config;
  Take take;  // ground-truth graphs
  std::vector<SynthFrame> frames;
  std::vector<FramePrediction> predictions;
  std::vector<std::optional<RoleClass>> actor_roles;  // by actor (= gt pose index)
  std::vector<Track> tracks;

  friend bool operator==(const SynthTake&, const SynthTake&) = default;
};

namespace synth {

enum Actor : std::size_t { patient, head_surgeon, assistant, nurse, anaesthetist, observer, kNumActors };

inline constexpr double kLimbRadius = 0.08;
inline constexpr double kBoxInset = 0.005;
inline constexpr double kInstrumentRadius = 0.035;
inline constexpr std::size_t kInstrumentPoints = 60;

inline std::vector<OrientedBox3> floor_plan() {
  auto box = [](std::string_view cls, Vec3 c, Vec3 h, double yaw) {
    return OrientedBox3{std::string(cls), c, h, yaw, 1.0};
  };
  return {
      box(entity::operating_table, {0.0, 0.0, 0.45}, {1.0, 0.3, 0.45}, 0.0),
      box(entity::anesthesia_machine, {-1.9, 0.1, 0.7}, {0.3, 0.35, 0.7}, 0.0),
      box(entity::instrument_table, {1.6, 1.3, 0.45}, {0.5, 0.3, 0.45}, 0.0),
      box(entity::secondary_table, {2.6, -1.8, 0.4}, {0.4, 0.4, 0.4}, 0.3),
  };
}

/// Upright person with feet at (x, y) facing `yaw`; hands reach forward.
inline HumanPose standing_pose(double x, double y, double yaw, double reach) {
  const Vec3 f(std::cos(yaw), std::sin(yaw), 0);
  const Vec3 l(-std::sin(yaw), std::cos(yaw), 0);
  const Vec3 o(x, y, 0);
  HumanPose p;
  p[Joint::head] = o + Vec3(0, 0, 1.72);
  p[Joint::neck] = o + Vec3(0, 0, 1.52);
  p[Joint::left_shoulder] = o + 0.2 * l + Vec3(0, 0, 1.45);
  p[Joint::right_shoulder] = o - 0.2 * l + Vec3(0, 0, 1.45);
  p[Joint::left_elbow] = o + 0.22 * l + 0.05 * f + Vec3(0, 0, 1.15);
  p[Joint::right_elbow] = o - 0.22 * l + 0.05 * f + Vec3(0, 0, 1.15);
  p[Joint::left_wrist] = o + 0.15 * l + reach * f + Vec3(0, 0, 0.95);
  p[Joint::right_wrist] = o - 0.15 * l + reach * f + Vec3(0, 0, 0.95);
  p[Joint::left_hip] = o + 0.1 * l + Vec3(0, 0, 0.95);
  p[Joint::right_hip] = o - 0.1 * l + Vec3(0, 0, 0.95);
  p[Joint::left_knee] = o + 0.1 * l + Vec3(0, 0, 0.5);
  p[Joint::right_knee] = o - 0.1 * l + Vec3(0, 0, 0.5);
  p[Joint::left_ankle] = o + 0.1 * l + Vec3(0, 0, 0.1);
  p[Joint::right_ankle] = o - 0.1 * l + Vec3(0, 0, 0.1);
  return p;
}

/// Patient lying along +x on the operating table, head toward -x.
inline HumanPose lying_pose(double dx) {
  const double z = 1.05;
  HumanPose p;
  p[Joint::head] = {-0.85 + dx, 0, z};
  p[Joint::neck] = {-0.68 + dx, 0, z};
  p[Joint::left_shoulder] = {-0.6 + dx, 0.18, z};
  p[Joint::right_shoulder] = {-0.6 + dx, -0.18, z};
  p[Joint::left_elbow] = {-0.35 + dx, 0.22, z - 0.03};
  p[Joint::right_elbow] = {-0.35 + dx, -0.22, z - 0.03};
  p[Joint::left_wrist] = {-0.1 + dx, 0.22, z - 0.03};
  p[Joint::right_wrist] = {-0.1 + dx, -0.22, z - 0.03};
  p[Joint::left_hip] = {0.1 + dx, 0.1, z};
  p[Joint::right_hip] = {0.1 + dx, -0.1, z};
  p[Joint::left_knee] = {0.5 + dx, 0.1, z};
  p[Joint::right_knee] = {0.5 + dx, -0.1, z};
  p[Joint::left_ankle] = {0.85 + dx, 0.1, z};
  p[Joint::right_ankle] = {0.85 + dx, -0.1, z};
  return p;
}

/// Scripted choreography: small sways for everyone, a slow walk for the nurse.
inline std::vector<HumanPose> actor_poses(int frame, int n_frames) {
  const double t = frame;
  auto sway = [&](std::size_t k) {
    return Vec2(0.02 * std::sin(0.4 * t + static_cast<double>(k)), 0.02 * std::cos(0.3 * t + static_cast<double>(k)));
  };
  const double walk = n_frames > 1 ? t / (n_frames - 1) : 0.0;
  std::vector<HumanPose> poses(kNumActors);
  poses[patient] = lying_pose(0.01 * std::sin(0.2 * t));
  Vec2 s = sway(head_surgeon);
  poses[head_surgeon] = standing_pose(0.3 + s.x(), -0.85 + s.y(), std::numbers::pi / 2, 0.25);
  s = sway(assistant);
  poses[assistant] = standing_pose(0.3 + s.x(), 0.85 + s.y(), -std::numbers::pi / 2, 0.25);
  poses[nurse] = standing_pose(2.3, 0.3 - 1.0 * walk, std::numbers::pi, 0.2);
  s = sway(anaesthetist);
  poses[anaesthetist] = standing_pose(-1.7 + s.x(), -0.95 + s.y(), std::numbers::pi / 2, 0.25);
  s = sway(observer);
  poses[observer] = standing_pose(-0.9 + s.x(), 2.2 + s.y(), -std::numbers::pi / 2, 0.15);
  for (std::size_t k = 0; k < kNumActors; ++k) poses[k].person_id = static_cast<std::int64_t>(k);
  return poses;
}

inline const std::array<std::optional<RoleClass>, kNumActors>& actor_role_table() {
  static const std::array<std::optional<RoleClass>, kNumActors> roles = {
      RoleClass::Patient,          RoleClass::HeadSurgeon,  RoleClass::AssistantSurgeon,
      RoleClass::CirculatingNurse, RoleClass::Anaesthetist, std::nullopt};
  return roles;
}

inline bool uses_instrument(std::string_view phase) {
  return phase == "cut" || phase == "drill" || phase == "saw" || phase == "hammer" || phase == "cement" ||
         phase == "suture";
}

/// Head surgeon's instrument: a small blob ahead of the right hand.
inline Vec3 instrument_center(const HumanPose& surgeon) {
  const Vec3 fwd = (surgeon[Joint::right_wrist] - 0.5 * (surgeon[Joint::right_hip] + surgeon[Joint::left_hip]));
  Vec3 f(fwd.x(), fwd.y(), 0);
  f.normalize();
  return surgeon[Joint::right_wrist] + 0.17 * f;
}

inline std::array<std::uint8_t, 3> class_color(std::string_view cls) {
  if (cls == entity::operating_table) return {120, 120, 130};
  if (cls == entity::anesthesia_machine) return {60, 90, 160};
  if (cls == entity::instrument_table) return {180, 180, 180};
  if (cls == entity::secondary_table) return {150, 140, 120};
  if (cls == entity::instrument) return {200, 200, 210};
  return {90, 90, 90};
}

inline std::array<std::uint8_t, 3> actor_color(std::size_t actor) {
  return actor == patient ? std::array<std::uint8_t, 3>{220, 190, 170} : std::array<std::uint8_t, 3>{40, 120, 90};
}

struct Sampler {
  Rng& rng;
  double density;
  double sigma;
  PointCloud points;
  std::vector<InstanceId> labels;

  void emit(const Vec3& p, std::array<std::uint8_t, 3> c, InstanceId id) {
    Vec3 q = p;
    if (sigma > 0)
      for (int i = 0; i < 3; ++i) q[i] += rng.normal(0, sigma);
    points.push_back(make_point(q, c[0], c[1], c[2]));
    labels.push_back(id);
  }

  std::size_t count_for(double area) { return static_cast<std::size_t>(std::lround(area * density)); }

  void box_surface(const OrientedBox3& b, InstanceId id) {
    const Vec3 h = b.half_extents.array() - kBoxInset;
    const std::array<double, 3> face_area = {4 * h.y() * h.z(), 4 * h.x() * h.z(), 4 * h.x() * h.y()};
    const double total = 2 * (face_area[0] + face_area[1] + face_area[2]);
    const std::size_t n = count_for(total);
    const auto color = class_color(b.cls);
    const double c = std::cos(b.yaw), s = std::sin(b.yaw);
    for (std::size_t i = 0; i < n; ++i) {
      double pick = rng.uniform() * total / 2;
      int axis = 0;
      while (axis < 2 && pick >= face_area[axis]) pick -= face_area[axis++];
      Vec3 l(rng.uniform(-h.x(), h.x()), rng.uniform(-h.y(), h.y()), rng.uniform(-h.z(), h.z()));
      l[axis] = rng.bernoulli(0.5) ? h[axis] : -h[axis];
      emit(b.center + Vec3(c * l.x() - s * l.y(), s * l.x() + c * l.y(), l.z()), color, id);
    }
  }

  void limb_surface(const Vec3& a, const Vec3& b, std::array<std::uint8_t, 3> color, InstanceId id) {
    const Vec3 axis = b - a;
    const double len = axis.norm();
    if (len <= 0) return;
    const Vec3 d = axis / len;
    const Vec3 helper = std::abs(d.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    const Vec3 u = d.cross(helper).normalized();
    const Vec3 v = d.cross(u);
    const std::size_t n = count_for(2 * std::numbers::pi * kLimbRadius * len);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = rng.uniform();
      const double phi = rng.uniform(0, 2 * std::numbers::pi);
      emit(a + t * axis + kLimbRadius * (std::cos(phi) * u + std::sin(phi) * v), color, id);
    }
  }

  void ball(const Vec3& c, double r, std::size_t n, std::array<std::uint8_t, 3> color, InstanceId id) {
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 p;
      do p = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
      while (p.squaredNorm() > 1.0);
      emit(c + r * p, color, id);
    }
  }
};

inline std::string phase_at(const ScenarioConfig& c, int frame) {
  int acc = 0;
  for (const auto& p : c.script) {
    acc += p.duration;
    if (frame < acc) return p.name;
  }
  return c.script.back().name;
}

/// Non-geometric edges scripted for a phase, in node ids of the frame.
inline std::vector<Edge> phase_edges(std::string_view phase, const InstanceLabelMap& ids, bool has_instrument) {
  using R = RelationClass;
  const auto node = [&](std::size_t actor) { return static_cast<NodeId>(ids.pose_instance(actor)); };
  const auto box = [&](std::size_t b) { return static_cast<NodeId>(ids.box_instance(b)); };
  // floor_plan order: 0 operating table, 1 anesthesia machine, 2 instrument table, 3 secondary table
  std::vector<Edge> e;
  auto surgical = [&](R verb) {
    e.push_back({node(head_surgeon), verb, node(patient)});
    if (has_instrument) e.push_back({node(head_surgeon), R::Hold, static_cast<NodeId>(ids.instrument_instance(head_surgeon))});
  };
  if (phase == "prepare") e.push_back({node(nurse), R::Prepare, box(2)});
  if (phase == "anaesthesia") e.push_back({node(anaesthetist), R::Operate, box(1)});
  if (phase == "cut") surgical(R::Cut);
  if (phase == "drill") surgical(R::Drill);
  if (phase == "saw") surgical(R::Saw);
  if (phase == "hammer") surgical(R::Hammer);
  if (phase == "cement") surgical(R::Cement);
  if (phase == "suture") {
    surgical(R::Suture);
    e.push_back({node(assistant), R::Touch, node(patient)});
  }
  if (uses_instrument(phase)) e.push_back({node(assistant), R::Assist, node(head_surgeon)});
  if (phase == "clean") e.push_back({node(nurse), R::Clean, box(0)});
  return e;
}

inline bool is_geometric(RelationClass r) { return r == RelationClass::CloseTo || r == RelationClass::LyingOn; }

/// Scores a perfect external relation model would emit for a graph: one-hot
/// on the non-geometric predicate of every ordered pair with a human
/// subject, one-hot "none" otherwise.
inline std::vector<PairLogits> model_logits(const SceneGraph& g) {
  std::vector<PairLogits> out;
  for (const auto& s : g.nodes) {
    if (s.cls != entity::human) continue;
    for (const auto& o : g.nodes) {
      if (o.id == s.id) continue;
      PairLogits p{static_cast<InstanceId>(s.id), static_cast<InstanceId>(o.id), std::vector<double>(kNumLogits, 0.0)};
      std::size_t hot = kNoneLogit;
      for (const auto& e : g.edges)
        if (e.sub == s.id && e.obj == o.id && !is_geometric(e.pred)) hot = index_of(e.pred);
      p.scores[hot] = 1.0;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace synth

/// Builds one frame's ground truth; pure in (config, frame index).
inline std::pair<SynthFrame, SceneGraph> generate_frame(const ScenarioConfig& config, int frame) {
  using namespace synth;
  Rng rng = Rng::derive(config.seed, static_cast<std::uint64_t>(frame));
  SynthFrame f;
  f.boxes = floor_plan();
  f.poses = actor_poses(frame, config.n_frames);
  const std::string phase = phase_at(config, frame);
  const bool instrument = uses_instrument(phase);

  InstanceLabelMap ids;
  ids.num_boxes = f.boxes.size();
  ids.num_poses = f.poses.size();
  for (std::size_t i = 0; i < f.boxes.size(); ++i)
    ids.instances[ids.box_instance(i)] = {f.boxes[i].cls, InstanceSourceKind::box, i};
  for (std::size_t j = 0; j < f.poses.size(); ++j)
    ids.instances[ids.pose_instance(j)] = {std::string(entity::human), InstanceSourceKind::pose, j};
  if (instrument)
    ids.instances[ids.instrument_instance(head_surgeon)] = {std::string(entity::instrument),
                                                             InstanceSourceKind::virtual_instrument, head_surgeon};
  f.instances = ids.instances;

  Sampler s{rng, config.surface_density, config.point_sigma, {}, {}};
  for (std::size_t i = 0; i < f.boxes.size(); ++i) s.box_surface(f.boxes[i], ids.box_instance(i));
  for (std::size_t j = 0; j < f.poses.size(); ++j)
    for (const auto& part : default_parts())
      s.limb_surface(part.from.at(f.poses[j]), part.to.at(f.poses[j]), actor_color(j), ids.pose_instance(j));
  if (instrument)
    s.ball(instrument_center(f.poses[head_surgeon]), kInstrumentRadius, kInstrumentPoints,
           class_color(entity::instrument), ids.instrument_instance(head_surgeon));
  // Floor grid, kept clear of every actor so it stays background.
  for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.25)
    for (double y = -3.0; y <= 3.0 + 1e-9; y += 0.25) {
      const Vec3 p(x, y, -0.02);
      bool clear = true;
      for (const auto& pose : f.poses)
        for (const auto& j : pose.joints)
          if (Vec2(j.x() - x, j.y() - y).norm() < 0.4) clear = false;
      if (clear) s.emit(p, {90, 90, 90}, 0);
    }

  const auto cams = static_cast<std::size_t>(config.num_cameras);
  f.camera_clouds.assign(cams, {});
  f.camera_labels.assign(cams, {});
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    f.camera_clouds[k % cams].push_back(s.points[k]);
    f.camera_labels[k % cams].push_back(s.labels[k]);
  }

  FrameGeometry geo{f.poses, f.boxes, ids};
  std::vector<Edge> edges = predict_geometric(geo);
  for (const auto& e : phase_edges(phase, ids, instrument)) edges.push_back(e);
  SceneGraph g = graph_from_labels(frame, ids, edges);
  return {std::move(f), std::move(g)};
}

struct PerturbConfig {
  double box_center_sigma = 0.0;        // meters
  Vec3 box_shift = Vec3::Zero();        // applied to every predicted box
  double pose_sigma = 0.0;              // meters, per joint
  double pose_dropout = 0.0;
  double flip_fraction = 0.0;           // of the selected edges
  std::optional<RelationClass> flip_class;  // all classes when unset
  double drop_fraction = 0.0;           // of all edges
};

/// Controlled-error predictions: jittered detections, and exactly
/// round(fraction * count) flipped or dropped edges.
inline std::vector<FramePrediction> perturb_predictions(const SynthTake& gt, const PerturbConfig& cfg,
                                                        std::uint64_t seed) {
  std::vector<FramePrediction> out(gt.frames.size());
  Rng edge_rng = Rng::derive(seed, 0xED6E);
  for (std::size_t f = 0; f < gt.frames.size(); ++f) {
    Rng rng = Rng::derive(seed, f);
    for (auto b : gt.frames[f].boxes) {
      b.center += cfg.box_shift;
      if (cfg.box_center_sigma > 0)
        for (int i = 0; i < 3; ++i) b.center[i] += rng.normal(0, cfg.box_center_sigma);
      out[f].boxes.push_back(b);
    }
    for (auto p : gt.frames[f].poses) {
      if (cfg.pose_dropout > 0 && rng.bernoulli(cfg.pose_dropout)) continue;
      if (cfg.pose_sigma > 0)
        for (auto& j : p.joints)
          for (int i = 0; i < 3; ++i) j[i] += rng.normal(0, cfg.pose_sigma);
      out[f].poses.push_back(p);
    }
    out[f].graph = gt.take.frames[f].graph;
  }

  // Flip predicates of a chosen subset of edges.
  std::vector<std::pair<std::size_t, std::size_t>> pool;
  for (std::size_t f = 0; f < out.size(); ++f)
    for (std::size_t e = 0; e < out[f].graph.edges.size(); ++e)
      if (!cfg.flip_class || out[f].graph.edges[e].pred == *cfg.flip_class) pool.emplace_back(f, e);
  const auto n_flip = static_cast<std::size_t>(std::lround(cfg.flip_fraction * static_cast<double>(pool.size())));
  for (auto k : edge_rng.sample_indices(pool.size(), n_flip)) {
    auto& g = out[pool[k].first].graph;
    const Edge old = g.edges[pool[k].second];
    std::vector<RelationClass> options;
    for (auto r : kAllRelations)
      if (r != old.pred && !g.has_edge({old.sub, r, old.obj})) options.push_back(r);
    if (options.empty()) continue;
    g.edges[pool[k].second] = canonical({old.sub, options[edge_rng.below(options.size())], old.obj});
  }

  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t f = 0; f < out.size(); ++f)
    for (std::size_t e = 0; e < out[f].graph.edges.size(); ++e) all.emplace_back(f, e);
  const auto n_drop = static_cast<std::size_t>(std::lround(cfg.drop_fraction * static_cast<double>(all.size())));
  std::map<std::size_t, std::set<std::size_t>> dropped;
  for (auto k : edge_rng.sample_indices(all.size(), n_drop)) dropped[all[k].first].insert(all[k].second);
  for (auto& [f, idx] : dropped) {
    auto& edges = out[f].graph.edges;
    std::vector<Edge> kept;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (!idx.contains(e)) kept.push_back(edges[e]);
    edges = std::move(kept);
  }

  for (auto& fp : out) {
    fp.graph.normalize();
    fp.logits = synth::model_logits(fp.graph);
  }
  return out;
}

inline SynthTake generate_take(const ScenarioConfig& config) {
  check_scenario(config);
  SynthTake t;
  t.config = config;
  t.take.take_id = config.take_id;
  t.take.split = config.split;
  for (int i = 0; i < config.n_frames; ++i) {
    auto [frame, graph] = generate_frame(config, i);
    t.take.frames.push_back({i, static_cast<double>(i), std::move(graph)});
    t.frames.push_back(std::move(frame));
  }
  for (const auto& r : synth::actor_role_table()) t.actor_roles.push_back(r);

  for (std::size_t a = 0; a < synth::kNumActors; ++a) {
    Track tr;
    tr.track_id = static_cast<std::int64_t>(a);
    for (std::size_t f = 0; f < t.frames.size(); ++f) {
      const auto node = static_cast<NodeId>(t.frames[f].boxes.size() + a + 1);
      tr.entries[static_cast<std::int64_t>(f)] = {t.frames[f].poses[a], node, a};
    }
    t.tracks.push_back(std::move(tr));
  }

  PerturbConfig detect;
  detect.pose_sigma = config.pose_jitter_sigma;
  detect.pose_dropout = config.dropout_prob;
  t.predictions = perturb_predictions(t, detect, config.seed ^ 0xD37EC7ull);
  return t;
}

}  // namespace orgk
