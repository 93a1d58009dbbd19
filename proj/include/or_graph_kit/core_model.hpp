#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "or_graph_kit/error.hpp"

namespace orgk {

// The 14 predicates, in the enumeration order used for tie-breaking.
enum class RelationClass : std::uint8_t {
  Assist,
  Cement,
  Clean,
  CloseTo,
  Cut,
  Drill,
  Hammer,
  Hold,
  LyingOn,
  Operate,
  Prepare,
  Saw,
  Suture,
  Touch,
};

inline constexpr std::size_t kNumRelations = 14;

inline constexpr std::array<std::string_view, kNumRelations> kRelationNames = {
    "Assist", "Cement", "Clean",   "CloseTo", "Cut", "Drill",  "Hammer",
    "Hold",   "LyingOn", "Operate", "Prepare", "Saw", "Suture", "Touch"};

inline constexpr std::array<RelationClass, kNumRelations> kAllRelations = {
    RelationClass::Assist,  RelationClass::Cement,  RelationClass::Clean,  RelationClass::CloseTo,
    RelationClass::Cut,     RelationClass::Drill,   RelationClass::Hammer, RelationClass::Hold,
    RelationClass::LyingOn, RelationClass::Operate, RelationClass::Prepare, RelationClass::Saw,
    RelationClass::Suture,  RelationClass::Touch};

constexpr std::size_t index_of(RelationClass r) { return static_cast<std::size_t>(r); }

constexpr std::string_view to_string(RelationClass r) { return kRelationNames[index_of(r)]; }

inline std::optional<RelationClass> parse_relation(std::string_view name) {
  for (std::size_t i = 0; i < kNumRelations; ++i)
    if (kRelationNames[i] == name) return kAllRelations[i];
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Entities

namespace entity {
inline constexpr std::string_view human = "human";
inline constexpr std::string_view patient = "patient";
inline constexpr std::string_view anesthesia_machine = "anesthesia_machine";
inline constexpr std::string_view operating_table = "operating_table";
inline constexpr std::string_view instrument_table = "instrument_table";
inline constexpr std::string_view secondary_table = "secondary_table";
inline constexpr std::string_view instrument = "instrument";
}  // namespace entity

struct EntityClass {
  std::string name;
  bool is_virtual = false;

  friend bool operator==(const EntityClass&, const EntityClass&) = default;
};

/// Closed set of entity classes for one run. Builtins are always present;
/// extra (non-virtual) classes come from the run configuration.
class EntityVocabulary {
 public:
  EntityVocabulary() {
    for (auto n : {entity::human, entity::patient, entity::anesthesia_machine, entity::operating_table,
                   entity::instrument_table, entity::secondary_table})
      classes_.push_back({std::string(n), false});
    classes_.push_back({std::string(entity::instrument), true});
  }

  void add(const std::string& name) {
    if (name.empty()) throw Error(Errc::bad_config, "empty entity class name");
    if (!contains(name)) classes_.push_back({name, false});
  }

  bool contains(std::string_view name) const {
    return std::any_of(classes_.begin(), classes_.end(), [&](const auto& c) { return c.name == name; });
  }

  bool is_virtual(std::string_view name) const {
    for (const auto& c : classes_)
      if (c.name == name) return c.is_virtual;
    return false;
  }

  const std::vector<EntityClass>& classes() const { return classes_; }

 private:
  std::vector<EntityClass> classes_;
};

// ---------------------------------------------------------------------------
// Scene graphs

using NodeId = std::int64_t;
using InstanceId = std::uint32_t;

struct Node {
  NodeId id = 0;
  std::string cls;
  std::optional<InstanceId> instance_id;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId sub = 0;
  RelationClass pred = RelationClass::Assist;
  NodeId obj = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// CloseTo is undirected: stored once with the lower node id as subject.
inline Edge canonical(Edge e) {
  if (e.pred == RelationClass::CloseTo && e.obj < e.sub) std::swap(e.sub, e.obj);
  return e;
}

struct SceneGraph {
  std::int64_t frame_id = 0;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  const Node* find_node(NodeId id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
  }

  bool has_edge(const Edge& e) const {
    return std::find(edges.begin(), edges.end(), canonical(e)) != edges.end();
  }

  /// Adds a canonicalized edge unless it is already present. Returns false on duplicates.
  bool add_edge(Edge e) {
    e = canonical(e);
    if (has_edge(e)) return false;
    edges.push_back(e);
    return true;
  }

  /// Sorts nodes by id and edges lexicographically; graphs compare by value afterwards.
  void normalize() {
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
    for (auto& e : edges) e = canonical(e);
    std::sort(edges.begin(), edges.end());
  }

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

enum class ViolationKind { dangling_endpoint, duplicate_triple, self_loop, duplicate_node, non_canonical };

struct Violation {
  ViolationKind kind;
  NodeId node = 0;
  std::optional<Edge> edge;

  std::string describe() const {
    switch (kind) {
      case ViolationKind::dangling_endpoint: return "dangling-endpoint(" + std::to_string(node) + ")";
      case ViolationKind::duplicate_triple: return "duplicate-triple";
      case ViolationKind::self_loop: return "self-loop(" + std::to_string(node) + ")";
      case ViolationKind::duplicate_node: return "duplicate-node(" + std::to_string(node) + ")";
      case ViolationKind::non_canonical: return "non-canonical-closeto";
    }
    return "unknown";
  }
};

inline std::vector<Violation> validate_graph(const SceneGraph& g) {
  std::vector<Violation> out;
  std::set<NodeId> ids;
  for (const auto& n : g.nodes)
    if (!ids.insert(n.id).second) out.push_back({ViolationKind::duplicate_node, n.id, std::nullopt});

  std::set<Edge> seen;
  for (const auto& e : g.edges) {
    if (!ids.contains(e.sub)) out.push_back({ViolationKind::dangling_endpoint, e.sub, e});
    if (!ids.contains(e.obj) && e.obj != e.sub) out.push_back({ViolationKind::dangling_endpoint, e.obj, e});
    if (e.sub == e.obj) out.push_back({ViolationKind::self_loop, e.sub, e});
    if (canonical(e) != e) out.push_back({ViolationKind::non_canonical, e.sub, e});
    if (!seen.insert(canonical(e)).second) out.push_back({ViolationKind::duplicate_triple, e.sub, e});
  }
  return out;
}

/// Maps predicted node ids to ground-truth node ids. Partial.
using NodeCorrespondence = std::map<NodeId, NodeId>;

inline NodeCorrespondence identity_correspondence(const SceneGraph& g) {
  NodeCorrespondence m;
  for (const auto& n : g.nodes) m[n.id] = n.id;
  return m;
}

struct EdgeDiff {
  std::vector<Edge> tp;  // predicted triples (pred ids) that match
  std::vector<Edge> fp;  // predicted triples (pred ids) that do not
  std::vector<Edge> fn;  // ground-truth triples (gt ids) left unmatched
};

inline EdgeDiff graph_edge_diff(const SceneGraph& gt, const SceneGraph& pred, const NodeCorrespondence& corr) {
  std::map<NodeId, NodeId> reverse;
  for (const auto& [p, g] : corr) {
    auto [it, inserted] = reverse.emplace(g, p);
    if (!inserted)
      throw Error(Errc::ambiguous_correspondence, "pred nodes " + std::to_string(it->second) + " and " +
                                                      std::to_string(p) + " both map to gt node " +
                                                      std::to_string(g));
  }

  std::set<Edge> gt_edges;
  for (const auto& e : gt.edges) gt_edges.insert(canonical(e));
  std::set<Edge> matched;

  EdgeDiff d;
  for (const auto& e : pred.edges) {
    auto s = corr.find(e.sub);
    auto o = corr.find(e.obj);
    if (s != corr.end() && o != corr.end() && gt.find_node(s->second) && gt.find_node(o->second)) {
      Edge mapped = canonical({s->second, e.pred, o->second});
      if (gt_edges.contains(mapped) && matched.insert(mapped).second) {
        d.tp.push_back(e);
        continue;
      }
    }
    d.fp.push_back(e);
  }
  for (const auto& e : gt_edges)
    if (!matched.contains(e)) d.fn.push_back(e);
  return d;
}

// ---------------------------------------------------------------------------
// Takes

enum class SplitTag { train, val, test };

constexpr std::string_view to_string(SplitTag s) {
  switch (s) {
    case SplitTag::train: return "train";
    case SplitTag::val: return "val";
    case SplitTag::test: return "test";
  }
  return "train";
}

inline std::optional<SplitTag> parse_split(std::string_view s) {
  if (s == "train") return SplitTag::train;
  if (s == "val") return SplitTag::val;
  if (s == "test") return SplitTag::test;
  return std::nullopt;
}

struct FrameRecord {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;  // seconds
  SceneGraph graph;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct Take {
  std::string take_id;
  SplitTag split = SplitTag::train;
  std::vector<FrameRecord> frames;

  friend bool operator==(const Take&, const Take&) = default;
};

/// Frames must be sampled at 1 Hz: timestamps strictly increasing, one second apart.
inline bool frames_at_one_hz(const Take& t) {
  for (std::size_t i = 1; i < t.frames.size(); ++i)
    if (std::abs(t.frames[i].timestamp - t.frames[i - 1].timestamp - 1.0) > 1e-9) return false;
  return true;
}

}  // namespace orgk
