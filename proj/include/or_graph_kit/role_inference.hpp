#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "or_graph_kit/assignment.hpp"
#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/tracking.hpp"

namespace orgk {

enum class RoleClass : std::uint8_t { Patient, HeadSurgeon, AssistantSurgeon, CirculatingNurse, Anaesthetist };

inline constexpr std::size_t kNumRoles = 5;

inline constexpr std::array<std::string_view, kNumRoles> kRoleNames = {
    "Patient", "HeadSurgeon", "AssistantSurgeon", "CirculatingNurse", "Anaesthetist"};

inline constexpr std::array<RoleClass, kNumRoles> kAllRoles = {RoleClass::Patient, RoleClass::HeadSurgeon,
                                                              RoleClass::AssistantSurgeon,
                                                              RoleClass::CirculatingNurse, RoleClass::Anaesthetist};

constexpr std::size_t index_of(RoleClass r) { return static_cast<std::size_t>(r); }
constexpr std::string_view to_string(RoleClass r) { return kRoleNames[index_of(r)]; }

inline std::optional<RoleClass> parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kNumRoles; ++i)
    if (kRoleNames[i] == name) return kAllRoles[i];
  return std::nullopt;
}

using RoleVector = std::array<double, kNumRoles>;

enum class Side { subject, object, either };

constexpr std::string_view to_string(Side s) {
  switch (s) {
    case Side::subject: return "subject";
    case Side::object: return "object";
    case Side::either: return "either";
  }
  return "either";
}

inline std::optional<Side> parse_side(std::string_view s) {
  if (s == "subject") return Side::subject;
  if (s == "object") return Side::object;
  if (s == "either") return Side::either;
  return std::nullopt;
}

/// One heuristic rule: every edge with `relation` where the tracked human is
/// on `side` (and, if set, the other endpoint has class `counterpart`) adds
/// `weights` to the track's role scores.
struct RoleWeightRule {
  RelationClass relation = RelationClass::Assist;
  Side side = Side::subject;
  std::optional<std::string> counterpart;
  RoleVector weights{};

  friend bool operator==(const RoleWeightRule&, const RoleWeightRule&) = default;
};

struct RoleWeightConfig {
  std::vector<RoleWeightRule> rules;
  double smoothing = 1.0;

  friend bool operator==(const RoleWeightConfig&, const RoleWeightConfig&) = default;
};

inline RoleVector one_hot(RoleClass r, double w = 1.0) {
  RoleVector v{};
  v[index_of(r)] = w;
  return v;
}

inline RoleWeightConfig default_role_weights() {
  using R = RelationClass;
  RoleWeightConfig c;
  c.rules.push_back({R::Saw, Side::subject, std::nullopt, one_hot(RoleClass::HeadSurgeon)});
  c.rules.push_back({R::LyingOn, Side::subject, std::nullopt, one_hot(RoleClass::Patient)});
  for (R r : {R::Drill, R::Hammer, R::Cut, R::Cement, R::Suture})
    c.rules.push_back({r, Side::subject, std::nullopt, one_hot(RoleClass::HeadSurgeon)});
  c.rules.push_back({R::Assist, Side::subject, std::nullopt, one_hot(RoleClass::AssistantSurgeon)});
  for (R r : {R::Prepare, R::Clean})
    c.rules.push_back({r, Side::subject, std::nullopt, one_hot(RoleClass::CirculatingNurse)});
  c.rules.push_back({R::CloseTo, Side::either, std::string(entity::anesthesia_machine),
                     one_hot(RoleClass::Anaesthetist)});
  return c;
}

inline void check_weights(const RoleWeightConfig& c) {
  if (!(c.smoothing > 0) || !std::isfinite(c.smoothing)) throw Error(Errc::bad_config, "smoothing must be > 0");
  for (const auto& r : c.rules)
    for (double w : r.weights)
      if (!std::isfinite(w)) throw Error(Errc::bad_config, "non-finite role weight");
  auto anchored = [&](RelationClass rel, RoleClass role) {
    return std::any_of(c.rules.begin(), c.rules.end(), [&](const RoleWeightRule& r) {
      return r.relation == rel && r.side == Side::subject && r.weights[index_of(role)] > 0;
    });
  };
  if (!anchored(RelationClass::Saw, RoleClass::HeadSurgeon))
    throw Error(Errc::bad_config, "role weights must map Saw/subject to HeadSurgeon");
  if (!anchored(RelationClass::LyingOn, RoleClass::Patient))
    throw Error(Errc::bad_config, "role weights must map LyingOn/subject to Patient");
}

/// Frame-by-frame relation counting around the track's human node, plus
/// additive smoothing, normalized to a distribution. Negative accumulated
/// scores are floored at zero before smoothing.
inline RoleVector score_track_heuristic(const Track& track, const std::map<std::int64_t, SceneGraph>& graphs,
                                        const RoleWeightConfig& weights = default_role_weights()) {
  check_weights(weights);
  if (track.entries.empty()) throw Error(Errc::empty_track, "track " + std::to_string(track.track_id));

  RoleVector score{};
  std::size_t resolved = 0;
  for (const auto& [frame, entry] : track.entries) {
    auto g = graphs.find(frame);
    if (g == graphs.end() || !g->second.find_node(entry.node)) continue;
    ++resolved;
    const SceneGraph& graph = g->second;
    for (const auto& e : graph.edges) {
      const bool as_sub = e.sub == entry.node;
      const bool as_obj = e.obj == entry.node;
      if (!as_sub && !as_obj) continue;
      const Node* other = graph.find_node(as_sub ? e.obj : e.sub);
      for (const auto& rule : weights.rules) {
        if (rule.relation != e.pred) continue;
        if (rule.side == Side::subject && !as_sub) continue;
        if (rule.side == Side::object && !as_obj) continue;
        if (rule.counterpart && (!other || other->cls != *rule.counterpart)) continue;
        for (std::size_t k = 0; k < kNumRoles; ++k) score[k] += rule.weights[k];
      }
    }
  }
  if (resolved == 0)
    throw Error(Errc::empty_track, "track " + std::to_string(track.track_id) + " references no graph node");

  double total = 0;
  for (auto& s : score) {
    s = std::max(0.0, s) + weights.smoothing;
    total += s;
  }
  for (auto& s : score) s /= total;
  return score;
}

struct RoleScoreTable {
  std::vector<std::int64_t> track_ids;
  std::vector<RoleVector> rows;

  friend bool operator==(const RoleScoreTable&, const RoleScoreTable&) = default;
};

/// Validates externally produced role scores. Rows off by at most 1e-3 from
/// unit sum are renormalized; anything further is rejected.
inline RoleScoreTable ingest_external_scores(RoleScoreTable table) {
  if (table.track_ids.size() != table.rows.size()) throw Error(Errc::bad_scores, "row count mismatch");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    double sum = 0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0)
        throw Error(Errc::bad_scores, "track " + std::to_string(table.track_ids[i]) + " has a negative score");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-3)
      throw Error(Errc::bad_scores, "track " + std::to_string(table.track_ids[i]) + " does not sum to 1");
    if (std::abs(sum - 1.0) > 1e-9)
      for (double& v : row) v /= sum;
  }
  return table;
}

using RoleAssignment = std::map<std::int64_t, std::optional<RoleClass>>;

/// Maximum-total-probability matching between tracks and roles; each role
/// goes to at most one track.
inline RoleAssignment assign_roles_unique(const RoleScoreTable& table) {
  if (table.track_ids.size() != table.rows.size()) throw Error(Errc::bad_scores, "row count mismatch");
  RoleAssignment out;
  for (auto id : table.track_ids) out[id] = std::nullopt;
  if (table.rows.empty()) return out;

  AssignmentProblem p{CostMatrix(table.rows.size(), kNumRoles), Objective::maximize};
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t k = 0; k < kNumRoles; ++k) p.cost(i, k) = table.rows[i][k];
  for (auto [row, role] : solve_assignment(p).pairs) out[table.track_ids[row]] = kAllRoles[role];
  return out;
}

/// Heuristic scores for every track, ordered as given.
inline RoleScoreTable score_tracks(const std::vector<Track>& tracks, const std::map<std::int64_t, SceneGraph>& graphs,
                                   const RoleWeightConfig& weights = default_role_weights()) {
  RoleScoreTable t;
  for (const auto& tr : tracks) {
    t.track_ids.push_back(tr.track_id);
    t.rows.push_back(score_track_heuristic(tr, graphs, weights));
  }
  return t;
}

}  // namespace orgk
