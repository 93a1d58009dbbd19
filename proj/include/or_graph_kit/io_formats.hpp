#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "or_graph_kit/augmentation.hpp"
#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"
#include "or_graph_kit/instance_labeling.hpp"
#include "or_graph_kit/metrics.hpp"
#include "or_graph_kit/relation_baseline.hpp"
#include "or_graph_kit/role_inference.hpp"
#include "or_graph_kit/synth_generator.hpp"
#include "or_graph_kit/tracking.hpp"

namespace orgk::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Files

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(Errc::io_error, "short write to " + p.string());
}

// ---------------------------------------------------------------------------
// PLY: binary little-endian, float x y z + uchar red green blue.

namespace detail {

inline bool is_float_type(const std::string& t) { return t == "float" || t == "float32"; }
inline bool is_uchar_type(const std::string& t) { return t == "uchar" || t == "uint8"; }

template <class T>
T load_le(const char* p) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <class T>
void store_le(std::string& out, T v) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

}  // namespace detail

inline std::string encode_ply(const PointCloud& cloud) {
  std::string out =
      "ply\nformat binary_little_endian 1.0\nelement vertex " + std::to_string(cloud.size()) +
      "\nproperty float x\nproperty float y\nproperty float z\n"
      "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  out.reserve(out.size() + cloud.size() * 15);
  for (const auto& p : cloud) {
    detail::store_le(out, p.x);
    detail::store_le(out, p.y);
    detail::store_le(out, p.z);
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

/// Accepts ASCII or binary little-endian PLY with exactly one vertex element
/// laid out as x y z (float) red green blue (uchar).
inline PointCloud decode_ply(const std::string& data) {
  std::size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string> {
    if (pos >= data.size()) return std::nullopt;
    auto nl = data.find('\n', pos);
    if (nl == std::string::npos) nl = data.size();
    std::string line = data.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto bad = [](const std::string& why) { return Error(Errc::unsupported_ply, why); };

  if (next_line() != "ply") throw bad("missing 'ply' magic");
  std::string format;
  std::optional<std::size_t> count;
  std::vector<std::pair<std::string, std::string>> props;  // (type, name)
  bool in_vertex = false, ended = false;
  while (auto line = next_line()) {
    std::istringstream ls(*line);
    std::string kw;
    ls >> kw;
    if (kw.empty() || kw == "comment" || kw == "obj_info") continue;
    if (kw == "format") {
      std::string version;
      ls >> format >> version;
      if (version != "1.0") throw bad("unsupported PLY version '" + version + "'");
    } else if (kw == "element") {
      std::string name;
      long long n = -1;
      ls >> name >> n;
      if (name != "vertex" || count || n < 0) throw bad("unexpected element '" + name + "'");
      count = static_cast<std::size_t>(n);
      in_vertex = true;
    } else if (kw == "property") {
      std::string type, name;
      ls >> type >> name;
      if (!in_vertex || type == "list") throw bad("unsupported property layout");
      props.emplace_back(type, name);
    } else if (kw == "end_header") {
      ended = true;
      break;
    } else {
      throw bad("unknown header line '" + *line + "'");
    }
  }
  if (!ended || !count) throw bad("malformed header");
  const std::vector<std::string> want = {"x", "y", "z", "red", "green", "blue"};
  if (props.size() != want.size()) throw bad("expected properties x y z red green blue");
  for (std::size_t i = 0; i < want.size(); ++i) {
    const bool ok = props[i].second == want[i] && (i < 3 ? detail::is_float_type(props[i].first)
                                                          : detail::is_uchar_type(props[i].first));
    if (!ok) throw bad("unexpected property '" + props[i].first + " " + props[i].second + "'");
  }

  PointCloud cloud;
  cloud.reserve(*count);
  if (format == "binary_little_endian") {
    if (data.size() - pos < *count * 15) throw bad("truncated vertex data");
    const char* p = data.data() + pos;
    for (std::size_t i = 0; i < *count; ++i, p += 15) {
      ColoredPoint q;
      q.x = detail::load_le<float>(p);
      q.y = detail::load_le<float>(p + 4);
      q.z = detail::load_le<float>(p + 8);
      q.r = static_cast<std::uint8_t>(p[12]);
      q.g = static_cast<std::uint8_t>(p[13]);
      q.b = static_cast<std::uint8_t>(p[14]);
      cloud.push_back(q);
    }
  } else if (format == "ascii") {
    std::istringstream body(data.substr(pos));
    for (std::size_t i = 0; i < *count; ++i) {
      ColoredPoint q;
      int r = -1, g = -1, b = -1;
      if (!(body >> q.x >> q.y >> q.z >> r >> g >> b)) throw bad("truncated ASCII vertex data");
      if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) throw bad("color out of range");
      q.r = static_cast<std::uint8_t>(r), q.g = static_cast<std::uint8_t>(g), q.b = static_cast<std::uint8_t>(b);
      cloud.push_back(q);
    }
  } else {
    throw bad("unsupported format '" + format + "'");
  }
  return cloud;
}

inline void write_ply(const std::filesystem::path& p, const PointCloud& cloud) { write_text(p, encode_ply(cloud)); }
inline PointCloud read_ply(const std::filesystem::path& p) { return decode_ply(read_text(p)); }

// ---------------------------------------------------------------------------
// Structured documents

namespace detail {

inline json header(std::string_view kind) { return json{{"format_version", kFormatVersion}, {"kind", kind}}; }

inline const json& need(const json& j, std::string_view key) {
  if (!j.is_object()) throw Error(Errc::bad_schema, "expected an object holding '" + std::string(key) + "'");
  auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::bad_schema, "missing required key '" + std::string(key) + "'");
  return *it;
}

template <class T>
T get(const json& j, std::string_view key) {
  const json& v = need(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::bad_schema, "key '" + std::string(key) + "' has the wrong type");
  }
}

inline double get_number(const json& j, std::string_view key) {
  const json& v = need(j, key);
  if (!v.is_number()) throw Error(Errc::bad_schema, "key '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

inline const json& need_array(const json& j, std::string_view key, std::optional<std::size_t> size = std::nullopt) {
  const json& v = need(j, key);
  if (!v.is_array()) throw Error(Errc::bad_schema, "key '" + std::string(key) + "' must be an array");
  if (size && v.size() != *size)
    throw Error(Errc::bad_schema, "key '" + std::string(key) + "' must have " + std::to_string(*size) + " entries");
  return v;
}

inline void check_header(const json& doc, std::string_view kind) {
  if (!doc.is_object()) throw Error(Errc::bad_schema, "document must be an object");
  const json& v = need(doc, "format_version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
    throw Error(Errc::bad_version, "expected format_version " + std::to_string(kFormatVersion));
  if (get<std::string>(doc, "kind") != kind)
    throw Error(Errc::bad_schema, "expected document kind '" + std::string(kind) + "'");
}

inline json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Vec3 vec(const json& j, std::string_view key) {
  const json& a = need_array(j, key, 3);
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) throw Error(Errc::bad_schema, "key '" + std::string(key) + "' must hold numbers");
    v[i] = a[i].get<double>();
  }
  return v;
}

inline std::vector<double> numbers(const json& j, std::string_view key, std::optional<std::size_t> size) {
  std::vector<double> out;
  for (const auto& x : need_array(j, key, size)) {
    if (!x.is_number()) throw Error(Errc::bad_schema, "key '" + std::string(key) + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::bad_schema, std::string("not valid JSON: ") + e.what());
  }
}

}  // namespace detail

inline std::string dump(const json& j) { return j.dump(1) + "\n"; }

// Calibration ----------------------------------------------------------------

inline json calibration_to_json(const std::vector<CameraCalibration>& cams) {
  json doc = detail::header("calibration");
  doc["cameras"] = json::array();
  for (const auto& c : cams) {
    json e = json::array();
    for (int r = 0; r < 4; ++r)
      for (int k = 0; k < 4; ++k) e.push_back(c.extrinsics(r, k));
    doc["cameras"].push_back({{"camera_id", c.camera_id}, {"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx},
                              {"cy", c.cy}, {"extrinsics", e}, {"depth_scale", c.depth_scale}});
  }
  return doc;
}

/// Structural validation only; orthonormality is checked by geometry on use.
inline std::vector<CameraCalibration> calibration_from_json(const json& doc) {
  detail::check_header(doc, "calibration");
  std::vector<CameraCalibration> out;
  for (const auto& c : detail::need_array(doc, "cameras")) {
    CameraCalibration cal;
    cal.camera_id = detail::get<std::string>(c, "camera_id");
    cal.fx = detail::get_number(c, "fx");
    cal.fy = detail::get_number(c, "fy");
    cal.cx = detail::get_number(c, "cx");
    cal.cy = detail::get_number(c, "cy");
    const auto e = detail::numbers(c, "extrinsics", 16);
    for (int r = 0; r < 4; ++r)
      for (int k = 0; k < 4; ++k) cal.extrinsics(r, k) = e[static_cast<std::size_t>(r * 4 + k)];
    cal.depth_scale = detail::get_number(c, "depth_scale");
    out.push_back(cal);
  }
  return out;
}

// Poses ------------------------------------------------------------------------

inline json pose_to_json(const HumanPose& p) {
  json joints = json::object();
  for (std::size_t i = 0; i < kNumJoints; ++i) joints[std::string(kJointNames[i])] = detail::vec(p.joints[i]);
  json conf = nullptr;
  if (p.confidence) conf = json(std::vector<double>(p.confidence->begin(), p.confidence->end()));
  return {{"person_id", p.person_id}, {"joints", joints}, {"confidence", conf}};
}

inline HumanPose pose_from_json(const json& j) {
  HumanPose p;
  p.person_id = detail::get<std::int64_t>(j, "person_id");
  const json& joints = detail::need(j, "joints");
  if (!joints.is_object() || joints.size() != kNumJoints)
    throw Error(Errc::bad_schema, "pose must have exactly " + std::to_string(kNumJoints) + " joints");
  for (const auto& [name, xyz] : joints.items()) {
    auto joint = parse_joint(name);
    if (!joint) throw Error(Errc::bad_schema, "unknown joint '" + name + "'");
    p[*joint] = detail::vec(joints, name);
  }
  const json& conf = detail::need(j, "confidence");
  if (!conf.is_null()) {
    const auto c = detail::numbers(j, "confidence", kNumJoints);
    std::array<double, kNumJoints> a{};
    std::copy(c.begin(), c.end(), a.begin());
    p.confidence = a;
  }
  if (!p.finite()) throw Error(Errc::bad_schema, "non-finite joint");
  return p;
}

struct FramePoseList {
  std::int64_t frame_id = 0;
  std::vector<HumanPose> poses;

  friend bool operator==(const FramePoseList&, const FramePoseList&) = default;
};

inline json poses_to_json(const std::vector<FramePoseList>& frames) {
  json doc = detail::header("poses");
  doc["frames"] = json::array();
  for (const auto& f : frames) {
    json ps = json::array();
    for (const auto& p : f.poses) ps.push_back(pose_to_json(p));
    doc["frames"].push_back({{"frame_id", f.frame_id}, {"poses", ps}});
  }
  return doc;
}

inline std::vector<FramePoseList> poses_from_json(const json& doc) {
  detail::check_header(doc, "poses");
  std::vector<FramePoseList> out;
  for (const auto& f : detail::need_array(doc, "frames")) {
    FramePoseList fl{detail::get<std::int64_t>(f, "frame_id"), {}};
    for (const auto& p : detail::need_array(f, "poses")) fl.poses.push_back(pose_from_json(p));
    out.push_back(std::move(fl));
  }
  return out;
}

// Boxes ------------------------------------------------------------------------

inline json box_to_json(const OrientedBox3& b) {
  return {{"class", b.cls}, {"center", detail::vec(b.center)}, {"half_extents", detail::vec(b.half_extents)},
          {"yaw", b.yaw}, {"confidence", b.confidence}};
}

inline OrientedBox3 box_from_json(const json& j) {
  OrientedBox3 b;
  b.cls = detail::get<std::string>(j, "class");
  b.center = detail::vec(j, "center");
  b.half_extents = detail::vec(j, "half_extents");
  b.yaw = detail::get_number(j, "yaw");
  b.confidence = detail::get_number(j, "confidence");
  check_box(b);
  return b;
}

struct FrameBoxList {
  std::int64_t frame_id = 0;
  std::vector<OrientedBox3> boxes;

  friend bool operator==(const FrameBoxList&, const FrameBoxList&) = default;
};

inline json boxes_to_json(const std::vector<FrameBoxList>& frames) {
  json doc = detail::header("boxes");
  doc["frames"] = json::array();
  for (const auto& f : frames) {
    json bs = json::array();
    for (const auto& b : f.boxes) bs.push_back(box_to_json(b));
    doc["frames"].push_back({{"frame_id", f.frame_id}, {"boxes", bs}});
  }
  return doc;
}

inline std::vector<FrameBoxList> boxes_from_json(const json& doc) {
  detail::check_header(doc, "boxes");
  std::vector<FrameBoxList> out;
  for (const auto& f : detail::need_array(doc, "frames")) {
    FrameBoxList fl{detail::get<std::int64_t>(f, "frame_id"), {}};
    for (const auto& b : detail::need_array(f, "boxes")) fl.boxes.push_back(box_from_json(b));
    out.push_back(std::move(fl));
  }
  return out;
}

// Scene graphs and takes ----------------------------------------------------------

inline json graph_to_json(const SceneGraph& g) {
  json nodes = json::array(), edges = json::array();
  for (const auto& n : g.nodes) {
    json inst = nullptr;
    if (n.instance_id) inst = *n.instance_id;
    nodes.push_back({{"id", n.id}, {"class", n.cls}, {"instance_id", inst}});
  }
  for (const auto& e : g.edges) edges.push_back({{"sub", e.sub}, {"pred", to_string(e.pred)}, {"obj", e.obj}});
  return {{"frame_id", g.frame_id}, {"nodes", nodes}, {"edges", edges}};
}

inline SceneGraph graph_from_json(const json& j) {
  SceneGraph g;
  g.frame_id = detail::get<std::int64_t>(j, "frame_id");
  for (const auto& n : detail::need_array(j, "nodes")) {
    Node node{detail::get<NodeId>(n, "id"), detail::get<std::string>(n, "class"), std::nullopt};
    const json& inst = detail::need(n, "instance_id");
    if (!inst.is_null()) node.instance_id = detail::get<InstanceId>(n, "instance_id");
    g.nodes.push_back(std::move(node));
  }
  for (const auto& e : detail::need_array(j, "edges")) {
    const auto name = detail::get<std::string>(e, "pred");
    auto pred = parse_relation(name);
    if (!pred) throw Error(Errc::bad_schema, "unknown predicate '" + name + "'");
    g.edges.push_back({detail::get<NodeId>(e, "sub"), *pred, detail::get<NodeId>(e, "obj")});
  }
  return g;
}

inline json take_to_json(const Take& t) {
  json doc = detail::header("take");
  doc["take_id"] = t.take_id;
  doc["split"] = to_string(t.split);
  doc["frames"] = json::array();
  for (const auto& f : t.frames)
    doc["frames"].push_back({{"frame_id", f.frame_id}, {"timestamp", f.timestamp}, {"graph", graph_to_json(f.graph)}});
  return doc;
}

inline Take take_from_json(const json& doc) {
  detail::check_header(doc, "take");
  Take t;
  t.take_id = detail::get<std::string>(doc, "take_id");
  const auto split = detail::get<std::string>(doc, "split");
  auto tag = parse_split(split);
  if (!tag) throw Error(Errc::bad_schema, "unknown split '" + split + "'");
  t.split = *tag;
  for (const auto& f : detail::need_array(doc, "frames")) {
    FrameRecord r{detail::get<std::int64_t>(f, "frame_id"), detail::get_number(f, "timestamp"),
                  graph_from_json(detail::need(f, "graph"))};
    if (r.graph.frame_id != r.frame_id) throw Error(Errc::bad_schema, "graph frame_id differs from its frame");
    t.frames.push_back(std::move(r));
  }
  return t;
}

// Instance labels ----------------------------------------------------------------

inline std::string_view to_string(InstanceSourceKind k) {
  switch (k) {
    case InstanceSourceKind::box: return "box";
    case InstanceSourceKind::pose: return "pose";
    case InstanceSourceKind::virtual_instrument: return "virtual";
  }
  return "box";
}

inline json labels_to_json(std::int64_t frame_id, const InstanceLabelMap& m) {
  json doc = detail::header("labels");
  doc["frame_id"] = frame_id;
  doc["num_boxes"] = m.num_boxes;
  doc["num_poses"] = m.num_poses;
  doc["instances"] = json::array();
  for (const auto& [id, info] : m.instances)
    doc["instances"].push_back(
        {{"id", id}, {"class", info.cls}, {"source", to_string(info.source)}, {"source_index", info.source_index}});
  doc["labels"] = m.labels;
  return doc;
}

inline std::pair<std::int64_t, InstanceLabelMap> labels_from_json(const json& doc) {
  detail::check_header(doc, "labels");
  InstanceLabelMap m;
  const auto frame = detail::get<std::int64_t>(doc, "frame_id");
  m.num_boxes = detail::get<std::size_t>(doc, "num_boxes");
  m.num_poses = detail::get<std::size_t>(doc, "num_poses");
  for (const auto& i : detail::need_array(doc, "instances")) {
    const auto src = detail::get<std::string>(i, "source");
    InstanceSourceKind kind;
    if (src == "box") kind = InstanceSourceKind::box;
    else if (src == "pose") kind = InstanceSourceKind::pose;
    else if (src == "virtual") kind = InstanceSourceKind::virtual_instrument;
    else throw Error(Errc::bad_schema, "unknown instance source '" + src + "'");
    m.instances[detail::get<InstanceId>(i, "id")] = {detail::get<std::string>(i, "class"), kind,
                                                     detail::get<std::size_t>(i, "source_index")};
  }
  m.labels = detail::get<std::vector<InstanceId>>(doc, "labels");
  for (auto l : m.labels)
    if (l != 0 && !m.instances.contains(l)) throw Error(Errc::bad_schema, "label " + std::to_string(l) + " not in instance table");
  return {frame, std::move(m)};
}

// Fusion provenance ---------------------------------------------------------------

inline json sources_to_json(std::int64_t frame_id, const std::vector<PointSource>& s) {
  json doc = detail::header("fuse_sources");
  doc["frame_id"] = frame_id;
  json c = json::array(), i = json::array();
  for (const auto& p : s) c.push_back(p.cloud), i.push_back(p.index);
  doc["cloud"] = c;
  doc["index"] = i;
  return doc;
}

inline std::vector<PointSource> sources_from_json(const json& doc) {
  detail::check_header(doc, "fuse_sources");
  const auto c = detail::get<std::vector<std::size_t>>(doc, "cloud");
  const auto i = detail::get<std::vector<std::size_t>>(doc, "index");
  if (c.size() != i.size()) throw Error(Errc::bad_schema, "cloud and index arrays differ in length");
  std::vector<PointSource> out;
  for (std::size_t k = 0; k < c.size(); ++k) out.push_back({c[k], i[k]});
  return out;
}

// Tracks ----------------------------------------------------------------------------

inline json tracks_to_json(const std::vector<Track>& tracks) {
  json doc = detail::header("tracks");
  doc["tracks"] = json::array();
  for (const auto& t : tracks) {
    json entries = json::array();
    for (const auto& [frame, e] : t.entries)
      entries.push_back({{"frame_id", frame}, {"node", e.node}, {"detection", e.detection}, {"pose", pose_to_json(e.pose)}});
    doc["tracks"].push_back({{"track_id", t.track_id}, {"entries", entries}});
  }
  return doc;
}

inline std::vector<Track> tracks_from_json(const json& doc) {
  detail::check_header(doc, "tracks");
  std::vector<Track> out;
  for (const auto& t : detail::need_array(doc, "tracks")) {
    Track tr;
    tr.track_id = detail::get<std::int64_t>(t, "track_id");
    for (const auto& e : detail::need_array(t, "entries")) {
      const auto frame = detail::get<std::int64_t>(e, "frame_id");
      if (!tr.entries.empty() && frame <= tr.entries.rbegin()->first)
        throw Error(Errc::bad_schema, "track frame ids must be strictly increasing");
      tr.entries[frame] = {pose_from_json(detail::need(e, "pose")), detail::get<NodeId>(e, "node"),
                           detail::get<std::size_t>(e, "detection")};
    }
    out.push_back(std::move(tr));
  }
  return out;
}

// Logits ------------------------------------------------------------------------------

struct FrameLogits {
  std::int64_t frame_id = 0;
  std::vector<PairLogits> pairs;

  friend bool operator==(const FrameLogits&, const FrameLogits&) = default;
};

inline json logits_to_json(const std::vector<FrameLogits>& frames) {
  json doc = detail::header("logits");
  doc["frames"] = json::array();
  for (const auto& f : frames) {
    json pairs = json::array();
    for (const auto& p : f.pairs) pairs.push_back({{"sub", p.sub}, {"obj", p.obj}, {"scores", p.scores}});
    doc["frames"].push_back({{"frame_id", f.frame_id}, {"pairs", pairs}});
  }
  return doc;
}

/// Arity is validated by decode_logits (bad-logits), not here.
inline std::vector<FrameLogits> logits_from_json(const json& doc) {
  detail::check_header(doc, "logits");
  std::vector<FrameLogits> out;
  for (const auto& f : detail::need_array(doc, "frames")) {
    FrameLogits fl{detail::get<std::int64_t>(f, "frame_id"), {}};
    for (const auto& p : detail::need_array(f, "pairs"))
      fl.pairs.push_back({detail::get<InstanceId>(p, "sub"), detail::get<InstanceId>(p, "obj"),
                          detail::numbers(p, "scores", std::nullopt)});
    out.push_back(std::move(fl));
  }
  return out;
}

// Role scores and assignments ---------------------------------------------------------

inline json role_scores_to_json(const RoleScoreTable& t) {
  json doc = detail::header("role_scores");
  doc["roles"] = json::array();
  for (auto n : kRoleNames) doc["roles"].push_back(n);
  doc["rows"] = json::array();
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    doc["rows"].push_back({{"track_id", t.track_ids[i]}, {"probs", std::vector<double>(t.rows[i].begin(), t.rows[i].end())}});
  return doc;
}

/// The "roles" header names the column order of every "probs" row. The
/// result has passed ingest_external_scores.
inline RoleScoreTable role_scores_from_json(const json& doc) {
  detail::check_header(doc, "role_scores");
  std::vector<std::size_t> column_role;
  for (const auto& r : detail::need_array(doc, "roles", kNumRoles)) {
    if (!r.is_string()) throw Error(Errc::bad_schema, "role names must be strings");
    auto role = parse_role(r.get<std::string>());
    if (!role) throw Error(Errc::bad_role, "unknown role '" + r.get<std::string>() + "'");
    if (std::find(column_role.begin(), column_role.end(), index_of(*role)) != column_role.end())
      throw Error(Errc::bad_role, "duplicate role '" + r.get<std::string>() + "'");
    column_role.push_back(index_of(*role));
  }
  RoleScoreTable t;
  for (const auto& row : detail::need_array(doc, "rows")) {
    t.track_ids.push_back(detail::get<std::int64_t>(row, "track_id"));
    const auto probs = detail::numbers(row, "probs", kNumRoles);
    RoleVector v{};
    for (std::size_t k = 0; k < kNumRoles; ++k) v[column_role[k]] = probs[k];
    t.rows.push_back(v);
  }
  return ingest_external_scores(std::move(t));
}

inline json role_assignment_to_json(const RoleAssignment& a) {
  json doc = detail::header("role_assignment");
  doc["assignments"] = json::array();
  for (const auto& [track, role] : a) {
    json r = nullptr;
    if (role) r = to_string(*role);
    doc["assignments"].push_back({{"track_id", track}, {"role", r}});
  }
  return doc;
}

inline RoleAssignment role_assignment_from_json(const json& doc) {
  detail::check_header(doc, "role_assignment");
  RoleAssignment a;
  for (const auto& e : detail::need_array(doc, "assignments")) {
    const auto track = detail::get<std::int64_t>(e, "track_id");
    const json& r = detail::need(e, "role");
    if (r.is_null()) {
      a[track] = std::nullopt;
      continue;
    }
    auto role = parse_role(detail::get<std::string>(e, "role"));
    if (!role) throw Error(Errc::bad_role, "unknown role '" + r.dump() + "'");
    a[track] = *role;
  }
  return a;
}

// Metric reports ------------------------------------------------------------------------

inline std::string_view to_string(MacroMode m) {
  return m == MacroMode::mean_of_f1 ? "mean_of_f1" : "harmonic_of_macro_pr";
}

inline std::optional<MacroMode> parse_macro_mode(std::string_view s) {
  if (s == "mean_of_f1") return MacroMode::mean_of_f1;
  if (s == "harmonic_of_macro_pr") return MacroMode::harmonic_of_macro_pr;
  return std::nullopt;
}

inline json macro_to_json(const MacroReport& r) {
  json cls = json::array();
  for (const auto& c : r.classes)
    cls.push_back({{"name", c.name}, {"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"precision", c.precision},
                   {"recall", c.recall}, {"f1", c.f1}});
  return {{"classes", cls},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f1", r.macro_f1},
          {"mean_of_f1", r.mean_of_f1},
          {"harmonic_of_macro", r.harmonic_of_macro},
          {"mode", to_string(r.mode)}};
}

inline MacroReport macro_from_json(const json& j) {
  MacroReport r;
  for (const auto& c : detail::need_array(j, "classes")) {
    ClassPRF p;
    p.name = detail::get<std::string>(c, "name");
    p.tp = detail::get<std::size_t>(c, "tp");
    p.fp = detail::get<std::size_t>(c, "fp");
    p.fn = detail::get<std::size_t>(c, "fn");
    p.precision = detail::get_number(c, "precision");
    p.recall = detail::get_number(c, "recall");
    p.f1 = detail::get_number(c, "f1");
    r.classes.push_back(std::move(p));
  }
  r.macro_precision = detail::get_number(j, "macro_precision");
  r.macro_recall = detail::get_number(j, "macro_recall");
  r.macro_f1 = detail::get_number(j, "macro_f1");
  r.mean_of_f1 = detail::get_number(j, "mean_of_f1");
  r.harmonic_of_macro = detail::get_number(j, "harmonic_of_macro");
  const auto mode = detail::get<std::string>(j, "mode");
  auto m = parse_macro_mode(mode);
  if (!m) throw Error(Errc::bad_schema, "unknown macro mode '" + mode + "'");
  r.mode = *m;
  return r;
}

/// Everything the eval stage measures. Optional sections are null when the
/// inputs for them were not available.
struct MetricsReport {
  std::optional<MacroReport> relations;
  std::optional<MacroReport> roles;
  std::optional<double> pcp3d;
  std::map<std::string, double> ap;  // IoU threshold (as printed) -> mean AP
  std::optional<double> labeling_accuracy;
  std::optional<std::size_t> num_tracks;
};

inline json metrics_to_json(const MetricsReport& r) {
  json doc = detail::header("metrics");
  doc["relations"] = r.relations ? macro_to_json(*r.relations) : json(nullptr);
  doc["roles"] = r.roles ? macro_to_json(*r.roles) : json(nullptr);
  doc["pcp3d"] = r.pcp3d ? json(*r.pcp3d) : json(nullptr);
  doc["ap"] = r.ap;
  doc["labeling_accuracy"] = r.labeling_accuracy ? json(*r.labeling_accuracy) : json(nullptr);
  doc["num_tracks"] = r.num_tracks ? json(*r.num_tracks) : json(nullptr);
  return doc;
}

inline MetricsReport metrics_from_json(const json& doc) {
  detail::check_header(doc, "metrics");
  MetricsReport r;
  if (const json& v = detail::need(doc, "relations"); !v.is_null()) r.relations = macro_from_json(v);
  if (const json& v = detail::need(doc, "roles"); !v.is_null()) r.roles = macro_from_json(v);
  if (const json& v = detail::need(doc, "pcp3d"); !v.is_null()) r.pcp3d = detail::get_number(doc, "pcp3d");
  for (const auto& [k, v] : detail::need(doc, "ap").items()) {
    if (!v.is_number()) throw Error(Errc::bad_schema, "ap values must be numbers");
    r.ap[k] = v.get<double>();
  }
  if (const json& v = detail::need(doc, "labeling_accuracy"); !v.is_null())
    r.labeling_accuracy = detail::get_number(doc, "labeling_accuracy");
  if (const json& v = detail::need(doc, "num_tracks"); !v.is_null())
    r.num_tracks = detail::get<std::size_t>(doc, "num_tracks");
  return r;
}

inline std::string format_macro_table(const std::string& title, const MacroReport& r) {
  std::ostringstream out;
  out << title << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "  %-18s %6s %6s %6s %6s %6s %6s\n", "class", "tp", "fp", "fn", "prec", "rec", "f1");
  out << line;
  for (const auto& c : r.classes) {
    if (c.absent()) {
      std::snprintf(line, sizeof line, "  %-18s %6s\n", c.name.c_str(), "n/a");
    } else {
      std::snprintf(line, sizeof line, "  %-18s %6zu %6zu %6zu %6.4f %6.4f %6.4f\n", c.name.c_str(), c.tp, c.fp,
                    c.fn, c.precision, c.recall, c.f1);
    }
    out << line;
  }
  std::snprintf(line, sizeof line, "  macro P %.4f  R %.4f  F1 %.4f (%s; mean-of-F1 %.4f, harmonic %.4f)\n",
                r.macro_precision, r.macro_recall, r.macro_f1, std::string(to_string(r.mode)).c_str(), r.mean_of_f1,
                r.harmonic_of_macro);
  out << line;
  return out.str();
}

inline std::string format_metrics(const MetricsReport& r) {
  std::ostringstream out;
  char line[128];
  if (r.labeling_accuracy) {
    std::snprintf(line, sizeof line, "labeling accuracy: %.6f\n", *r.labeling_accuracy);
    out << line;
  }
  if (r.num_tracks) out << "tracks: " << *r.num_tracks << "\n";
  if (r.pcp3d) {
    std::snprintf(line, sizeof line, "PCP3D: %.2f\n", *r.pcp3d);
    out << line;
  }
  for (const auto& [k, v] : r.ap) {
    std::snprintf(line, sizeof line, "AP@%s: %.4f\n", k.c_str(), v);
    out << line;
  }
  if (r.relations) out << format_macro_table("relations", *r.relations);
  if (r.roles) out << format_macro_table("roles", *r.roles);
  return out.str();
}

// DOT export -------------------------------------------------------------------------------

/// One digraph block per frame, nodes in id order. `roles` optionally maps
/// (frame, node) to an assigned role shown next to the class.
inline std::string export_dot(const std::vector<SceneGraph>& graphs,
                              const std::map<std::pair<std::int64_t, NodeId>, RoleClass>& roles = {}) {
  std::ostringstream out;
  for (const auto& g0 : graphs) {
    SceneGraph g = g0;
    g.normalize();
    out << "digraph f" << g.frame_id << " {";
    if (g.nodes.empty() && g.edges.empty()) {
      out << "}\n";
      continue;
    }
    out << "\n";
    for (const auto& n : g.nodes) {
      out << "  n" << n.id << " [label=\"" << n.cls;
      if (auto r = roles.find({g.frame_id, n.id}); r != roles.end()) out << " (" << to_string(r->second) << ")";
      out << "\"];\n";
    }
    for (const auto& e : g.edges)
      out << "  n" << e.sub << " -> n" << e.obj << " [label=\"" << to_string(e.pred) << "\"];\n";
    out << "}\n";
  }
  return out.str();
}

// Convenience file wrappers ------------------------------------------------------------------

inline json read_json(const std::filesystem::path& p) { return detail::parse(read_text(p)); }
inline void write_json(const std::filesystem::path& p, const json& doc) { write_text(p, dump(doc)); }

// Take manifest ------------------------------------------------------------------------------

/// Index of one take directory: which frames and cameras exist.
struct Manifest {
  std::string take_id;
  SplitTag split = SplitTag::test;
  std::vector<std::int64_t> frames;
  std::size_t num_cameras = 0;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline json manifest_to_json(const Manifest& m) {
  json doc = detail::header("manifest");
  doc["take_id"] = m.take_id;
  doc["split"] = to_string(m.split);
  doc["frames"] = m.frames;
  doc["num_cameras"] = m.num_cameras;
  return doc;
}

inline Manifest manifest_from_json(const json& doc) {
  detail::check_header(doc, "manifest");
  Manifest m;
  m.take_id = detail::get<std::string>(doc, "take_id");
  const auto split = detail::get<std::string>(doc, "split");
  auto tag = parse_split(split);
  if (!tag) throw Error(Errc::bad_schema, "unknown split '" + split + "'");
  m.split = *tag;
  m.frames = detail::get<std::vector<std::int64_t>>(doc, "frames");
  m.num_cameras = detail::get<std::size_t>(doc, "num_cameras");
  for (std::size_t i = 1; i < m.frames.size(); ++i)
    if (m.frames[i] <= m.frames[i - 1]) throw Error(Errc::bad_schema, "manifest frames must be increasing");
  return m;
}

// Run configuration ---------------------------------------------------------------------------

struct MetricsConfig {
  MacroMode macro_mode = MacroMode::mean_of_f1;
  double pcp_alpha = 0.5;
  std::vector<double> iou_thresholds = {0.25, 0.5};
  std::string correspondence = "geometric";  // or "node_id"

  friend bool operator==(const MetricsConfig&, const MetricsConfig&) = default;
};

struct RunConfig {
  std::string input;  // directory holding <take>/..., relative to the config file
  std::string take = "synth";
  std::vector<SplitTag> splits = {SplitTag::train, SplitTag::val, SplitTag::test};
  std::vector<std::string> entities;  // extra non-virtual classes
  FuseOptions fuse;
  LabelingParams labeling;
  AugmentParams augment;
  BaselineParams baseline;
  bool use_model_logits = true;
  DecodeOptions decode;
  TrackingParams tracking;
  RoleWeightConfig roles = default_role_weights();
  std::optional<std::string> external_role_scores;
  MetricsConfig metrics;
  ScenarioConfig synth;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline void only_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(Errc::bad_config, std::string(where) + " must be an object");
  for (const auto& [k, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw Error(Errc::bad_config, "unknown key '" + k + "' in " + std::string(where));
}

template <class T>
void opt(const json& j, std::string_view key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::bad_config, "key '" + std::string(key) + "' has the wrong type");
  }
}

inline void opt_range(const json& j, std::string_view key, Range& r) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
    throw Error(Errc::bad_config, "key '" + std::string(key) + "' must be [lo, hi]");
  r = {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

inline json range(const Range& r) { return json::array({r.lo, r.hi}); }

inline json role_vector(const RoleVector& v) {
  json o = json::object();
  for (std::size_t k = 0; k < kNumRoles; ++k)
    if (v[k] != 0) o[std::string(kRoleNames[k])] = v[k];
  return o;
}

inline RoleVector role_vector(const json& j) {
  if (!j.is_object()) throw Error(Errc::bad_config, "rule weights must be an object keyed by role");
  RoleVector v{};
  for (const auto& [k, w] : j.items()) {
    auto role = parse_role(k);
    if (!role) throw Error(Errc::bad_role, "unknown role '" + k + "'");
    if (!w.is_number()) throw Error(Errc::bad_config, "role weight must be a number");
    v[index_of(*role)] = w.get<double>();
  }
  return v;
}

}  // namespace detail

inline json run_config_to_json(const RunConfig& c) {
  json doc = detail::header("run_config");
  doc["paths"] = {{"input", c.input}};
  doc["take"] = c.take;
  doc["splits"] = json::array();
  for (auto s : c.splits) doc["splits"].push_back(to_string(s));
  doc["entities"] = c.entities;
  doc["fuse"] = {{"dedup", c.fuse.dedup}, {"voxel_size", c.fuse.voxel_size}};
  doc["labeling"] = {{"human_capsule_radius", c.labeling.human_capsule_radius},
                     {"hand_radius", c.labeling.hand_radius},
                     {"min_points_per_instance", c.labeling.min_points_per_instance}};
  doc["augment"] = {{"scale", detail::range(c.augment.scale)},
                    {"translation", detail::range(c.augment.translation)},
                    {"yaw", detail::range(c.augment.yaw)},
                    {"brightness", detail::range(c.augment.brightness)},
                    {"hue", detail::range(c.augment.hue)},
                    {"crop_to_hand_prob", c.augment.crop_to_hand_prob},
                    {"crop_radius", c.augment.crop_radius}};
  doc["baseline"] = {{"close_to_threshold", c.baseline.close_to_threshold},
                     {"lying_on_max_tilt", c.baseline.lying_on_max_tilt},
                     {"lying_on_overlap_frac", c.baseline.lying_on_overlap_frac},
                     {"use_model_logits", c.use_model_logits},
                     {"decode_mode", c.decode.mode == DecodeMode::argmax ? "argmax" : "threshold"},
                     {"decode_threshold", c.decode.threshold}};
  doc["tracking"] = {{"max_cost", c.tracking.max_cost}, {"max_gap", c.tracking.max_gap}};
  json rules = json::array();
  for (const auto& r : c.roles.rules) {
    json cp = nullptr;
    if (r.counterpart) cp = *r.counterpart;
    rules.push_back({{"relation", to_string(r.relation)}, {"side", to_string(r.side)}, {"counterpart", cp},
                     {"weights", detail::role_vector(r.weights)}});
  }
  doc["roles"] = {{"smoothing", c.roles.smoothing},
                  {"rules", rules},
                  {"external_scores", c.external_role_scores ? json(*c.external_role_scores) : json(nullptr)}};
  doc["metrics"] = {{"macro_mode", to_string(c.metrics.macro_mode)},
                    {"pcp_alpha", c.metrics.pcp_alpha},
                    {"iou_thresholds", c.metrics.iou_thresholds},
                    {"correspondence", c.metrics.correspondence}};
  json script = json::array();
  for (const auto& p : c.synth.script) script.push_back({{"name", p.name}, {"duration", p.duration}});
  doc["synth"] = {{"take_id", c.synth.take_id},
                  {"split", to_string(c.synth.split)},
                  {"n_frames", c.synth.n_frames},
                  {"script", script},
                  {"point_sigma", c.synth.point_sigma},
                  {"pose_jitter_sigma", c.synth.pose_jitter_sigma},
                  {"dropout_prob", c.synth.dropout_prob},
                  {"surface_density", c.synth.surface_density},
                  {"num_cameras", c.synth.num_cameras}};
  return doc;
}

/// Every block and key is optional and falls back to the module default;
/// keys the reader does not know are rejected. The synth seed is not part
/// of the file (it comes from the command line).
inline RunConfig run_config_from_json(const json& doc) {
  detail::check_header(doc, "run_config");
  detail::only_keys(doc, "run_config", {"format_version", "kind", "paths", "take", "splits", "entities", "fuse",
                                        "labeling", "augment", "baseline", "tracking", "roles", "metrics", "synth"});
  RunConfig c;
  using detail::opt;
  if (auto it = doc.find("paths"); it != doc.end()) {
    detail::only_keys(*it, "paths", {"input"});
    opt(*it, "input", c.input);
  }
  opt(doc, "take", c.take);
  if (auto it = doc.find("splits"); it != doc.end()) {
    std::vector<std::string> names;
    opt(doc, "splits", names);
    c.splits.clear();
    for (const auto& n : names) {
      auto tag = parse_split(n);
      if (!tag) throw Error(Errc::bad_config, "unknown split '" + n + "'");
      c.splits.push_back(*tag);
    }
  }
  opt(doc, "entities", c.entities);
  if (auto it = doc.find("fuse"); it != doc.end()) {
    detail::only_keys(*it, "fuse", {"dedup", "voxel_size"});
    opt(*it, "dedup", c.fuse.dedup);
    opt(*it, "voxel_size", c.fuse.voxel_size);
  }
  if (auto it = doc.find("labeling"); it != doc.end()) {
    detail::only_keys(*it, "labeling", {"human_capsule_radius", "hand_radius", "min_points_per_instance"});
    opt(*it, "human_capsule_radius", c.labeling.human_capsule_radius);
    opt(*it, "hand_radius", c.labeling.hand_radius);
    opt(*it, "min_points_per_instance", c.labeling.min_points_per_instance);
  }
  if (auto it = doc.find("augment"); it != doc.end()) {
    detail::only_keys(*it, "augment",
                      {"scale", "translation", "yaw", "brightness", "hue", "crop_to_hand_prob", "crop_radius"});
    detail::opt_range(*it, "scale", c.augment.scale);
    detail::opt_range(*it, "translation", c.augment.translation);
    detail::opt_range(*it, "yaw", c.augment.yaw);
    detail::opt_range(*it, "brightness", c.augment.brightness);
    detail::opt_range(*it, "hue", c.augment.hue);
    opt(*it, "crop_to_hand_prob", c.augment.crop_to_hand_prob);
    opt(*it, "crop_radius", c.augment.crop_radius);
  }
  if (auto it = doc.find("baseline"); it != doc.end()) {
    detail::only_keys(*it, "baseline", {"close_to_threshold", "lying_on_max_tilt", "lying_on_overlap_frac",
                                        "use_model_logits", "decode_mode", "decode_threshold"});
    opt(*it, "close_to_threshold", c.baseline.close_to_threshold);
    opt(*it, "lying_on_max_tilt", c.baseline.lying_on_max_tilt);
    opt(*it, "lying_on_overlap_frac", c.baseline.lying_on_overlap_frac);
    opt(*it, "use_model_logits", c.use_model_logits);
    std::string mode = c.decode.mode == DecodeMode::argmax ? "argmax" : "threshold";
    opt(*it, "decode_mode", mode);
    if (mode == "argmax") c.decode.mode = DecodeMode::argmax;
    else if (mode == "threshold") c.decode.mode = DecodeMode::threshold;
    else throw Error(Errc::bad_config, "unknown decode_mode '" + mode + "'");
    opt(*it, "decode_threshold", c.decode.threshold);
  }
  if (auto it = doc.find("tracking"); it != doc.end()) {
    detail::only_keys(*it, "tracking", {"max_cost", "max_gap"});
    opt(*it, "max_cost", c.tracking.max_cost);
    opt(*it, "max_gap", c.tracking.max_gap);
  }
  if (auto it = doc.find("roles"); it != doc.end()) {
    detail::only_keys(*it, "roles", {"smoothing", "rules", "external_scores"});
    opt(*it, "smoothing", c.roles.smoothing);
    if (auto r = it->find("rules"); r != it->end()) {
      if (!r->is_array()) throw Error(Errc::bad_config, "roles.rules must be an array");
      c.roles.rules.clear();
      for (const auto& rule : *r) {
        detail::only_keys(rule, "role rule", {"relation", "side", "counterpart", "weights"});
        RoleWeightRule w;
        std::string rel, side = "subject";
        opt(rule, "relation", rel);
        auto pred = parse_relation(rel);
        if (!pred) throw Error(Errc::bad_config, "unknown relation '" + rel + "' in role rule");
        w.relation = *pred;
        opt(rule, "side", side);
        auto s = parse_side(side);
        if (!s) throw Error(Errc::bad_config, "unknown side '" + side + "'");
        w.side = *s;
        if (auto cp = rule.find("counterpart"); cp != rule.end() && !cp->is_null()) {
          if (!cp->is_string()) throw Error(Errc::bad_config, "counterpart must be a class name");
          w.counterpart = cp->get<std::string>();
        }
        auto wt = rule.find("weights");
        if (wt == rule.end()) throw Error(Errc::bad_config, "role rule without weights");
        w.weights = detail::role_vector(*wt);
        c.roles.rules.push_back(std::move(w));
      }
    }
    if (auto e = it->find("external_scores"); e != it->end() && !e->is_null()) {
      if (!e->is_string()) throw Error(Errc::bad_config, "external_scores must be a path");
      c.external_role_scores = e->get<std::string>();
    }
  }
  if (auto it = doc.find("metrics"); it != doc.end()) {
    detail::only_keys(*it, "metrics", {"macro_mode", "pcp_alpha", "iou_thresholds", "correspondence"});
    std::string mode(to_string(c.metrics.macro_mode));
    opt(*it, "macro_mode", mode);
    auto m = parse_macro_mode(mode);
    if (!m) throw Error(Errc::bad_config, "unknown macro_mode '" + mode + "'");
    c.metrics.macro_mode = *m;
    opt(*it, "pcp_alpha", c.metrics.pcp_alpha);
    opt(*it, "iou_thresholds", c.metrics.iou_thresholds);
    opt(*it, "correspondence", c.metrics.correspondence);
  }
  if (auto it = doc.find("synth"); it != doc.end()) {
    detail::only_keys(*it, "synth", {"take_id", "split", "n_frames", "script", "point_sigma", "pose_jitter_sigma",
                                     "dropout_prob", "surface_density", "num_cameras"});
    opt(*it, "take_id", c.synth.take_id);
    std::string split(to_string(c.synth.split));
    opt(*it, "split", split);
    auto tag = parse_split(split);
    if (!tag) throw Error(Errc::bad_config, "unknown split '" + split + "'");
    c.synth.split = *tag;
    opt(*it, "n_frames", c.synth.n_frames);
    if (auto sc = it->find("script"); sc != it->end()) {
      if (!sc->is_array()) throw Error(Errc::bad_config, "synth.script must be an array");
      c.synth.script.clear();
      for (const auto& p : *sc) {
        detail::only_keys(p, "script phase", {"name", "duration"});
        Phase ph;
        opt(p, "name", ph.name);
        opt(p, "duration", ph.duration);
        c.synth.script.push_back(std::move(ph));
      }
    }
    opt(*it, "point_sigma", c.synth.point_sigma);
    opt(*it, "pose_jitter_sigma", c.synth.pose_jitter_sigma);
    opt(*it, "dropout_prob", c.synth.dropout_prob);
    opt(*it, "surface_density", c.synth.surface_density);
    opt(*it, "num_cameras", c.synth.num_cameras);
  }
  return c;
}

/// Bounds of every block, as enforced by the owning modules.
inline void check_run_config(const RunConfig& c) {
  if (c.take.empty()) throw Error(Errc::bad_config, "take must not be empty");
  if (c.splits.empty()) throw Error(Errc::bad_config, "splits must not be empty");
  EntityVocabulary vocab;
  for (const auto& e : c.entities) vocab.add(e);
  if (!(c.fuse.voxel_size > 0)) throw Error(Errc::bad_config, "voxel_size must be > 0");
  check_params(c.labeling);
  check_params(c.augment);
  check_params(c.baseline);
  if (!(c.decode.threshold >= 0 && c.decode.threshold <= 1) && c.decode.mode == DecodeMode::threshold)
    throw Error(Errc::bad_config, "decode_threshold outside [0,1]");
  if (!(c.tracking.max_cost > 0) || c.tracking.max_gap < 0) throw Error(Errc::bad_config, "bad tracking gates");
  if (!c.external_role_scores) check_weights(c.roles);
  if (!(c.metrics.pcp_alpha > 0)) throw Error(Errc::bad_config, "pcp_alpha must be > 0");
  for (double t : c.metrics.iou_thresholds)
    if (!(t > 0 && t <= 1)) throw Error(Errc::bad_config, "iou threshold outside (0,1]");
  if (c.metrics.correspondence != "geometric" && c.metrics.correspondence != "node_id")
    throw Error(Errc::bad_config, "correspondence must be 'geometric' or 'node_id'");
  try {
    check_scenario(c.synth);
  } catch (const Error& e) {
    throw Error(Errc::bad_config, e.what());
  }
}

}  // namespace orgk::io
