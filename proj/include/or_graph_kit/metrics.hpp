#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "or_graph_kit/assignment.hpp"
#include "or_graph_kit/core_model.hpp"
#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"
#include "or_graph_kit/role_inference.hpp"

namespace orgk {

struct ClassPRF {
  std::string name;
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0, recall = 0, f1 = 0;

  /// A class that never occurs in either ground truth or prediction.
  bool absent() const { return tp + fp + fn == 0; }

  friend bool operator==(const ClassPRF&, const ClassPRF&) = default;
};

inline double harmonic_mean(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

inline ClassPRF class_prf(std::string name, std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassPRF c{std::move(name), tp, fp, fn};
  c.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  c.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  c.f1 = harmonic_mean(c.precision, c.recall);
  return c;
}

enum class MacroMode { mean_of_f1, harmonic_of_macro_pr };

struct MacroReport {
  std::vector<ClassPRF> classes;
  double macro_precision = 0, macro_recall = 0;
  double macro_f1 = 0;           // per the selected mode
  double mean_of_f1 = 0;         // unweighted mean of per-class F1
  double harmonic_of_macro = 0;  // harmonic mean of macro precision and recall
  MacroMode mode = MacroMode::mean_of_f1;

  const ClassPRF* find(std::string_view name) const {
    for (const auto& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Unweighted means over the classes that occur; absent classes are n/a.
inline MacroReport macro_report(std::vector<ClassPRF> classes, MacroMode mode = MacroMode::mean_of_f1) {
  MacroReport r;
  r.classes = std::move(classes);
  r.mode = mode;
  std::size_t n = 0;
  for (const auto& c : r.classes) {
    if (c.absent()) continue;
    ++n;
    r.macro_precision += c.precision;
    r.macro_recall += c.recall;
    r.mean_of_f1 += c.f1;
  }
  if (n > 0) {
    r.macro_precision /= static_cast<double>(n);
    r.macro_recall /= static_cast<double>(n);
    r.mean_of_f1 /= static_cast<double>(n);
  }
  r.harmonic_of_macro = harmonic_mean(r.macro_precision, r.macro_recall);
  r.macro_f1 = mode == MacroMode::mean_of_f1 ? r.mean_of_f1 : r.harmonic_of_macro;
  return r;
}

// ---------------------------------------------------------------------------
// Relations

using CorrespondencePolicy = std::function<NodeCorrespondence(const SceneGraph& gt, const SceneGraph& pred)>;

inline NodeCorrespondence match_by_node_id(const SceneGraph& gt, const SceneGraph& pred) {
  NodeCorrespondence m;
  for (const auto& n : pred.nodes)
    if (gt.find_node(n.id)) m[n.id] = n.id;
  return m;
}

struct RelationCounts {
  std::array<std::size_t, kNumRelations> tp{}, fp{}, fn{};

  void add(const EdgeDiff& d) {
    for (const auto& e : d.tp) ++tp[index_of(e.pred)];
    for (const auto& e : d.fp) ++fp[index_of(e.pred)];
    for (const auto& e : d.fn) ++fn[index_of(e.pred)];
  }

  RelationCounts& operator+=(const RelationCounts& o) {
    for (std::size_t k = 0; k < kNumRelations; ++k) tp[k] += o.tp[k], fp[k] += o.fp[k], fn[k] += o.fn[k];
    return *this;
  }

  MacroReport report(MacroMode mode = MacroMode::mean_of_f1) const {
    std::vector<ClassPRF> cls;
    for (std::size_t k = 0; k < kNumRelations; ++k) cls.push_back(class_prf(std::string(kRelationNames[k]), tp[k], fp[k], fn[k]));
    return macro_report(std::move(cls), mode);
  }
};

/// Frame-aligned graph lists (all takes concatenated).
inline RelationCounts relation_counts(const std::vector<SceneGraph>& gt, const std::vector<SceneGraph>& pred,
                                      const CorrespondencePolicy& policy = match_by_node_id) {
  if (gt.size() != pred.size())
    throw Error(Errc::misaligned_takes, std::to_string(gt.size()) + " gt frames vs " + std::to_string(pred.size()));
  RelationCounts counts;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].frame_id != pred[i].frame_id)
      throw Error(Errc::misaligned_takes, "frame " + std::to_string(gt[i].frame_id) + " vs " +
                                              std::to_string(pred[i].frame_id));
    counts.add(graph_edge_diff(gt[i], pred[i], policy(gt[i], pred[i])));
  }
  return counts;
}

inline MacroReport relation_prf(const std::vector<SceneGraph>& gt, const std::vector<SceneGraph>& pred,
                                const CorrespondencePolicy& policy = match_by_node_id,
                                MacroMode mode = MacroMode::mean_of_f1) {
  return relation_counts(gt, pred, policy).report(mode);
}

inline MacroReport relation_prf(const std::vector<Take>& gt, const std::vector<Take>& pred,
                                const CorrespondencePolicy& policy = match_by_node_id,
                                MacroMode mode = MacroMode::mean_of_f1) {
  if (gt.size() != pred.size()) throw Error(Errc::misaligned_takes, "take count differs");
  std::vector<SceneGraph> g, p;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (gt[t].take_id != pred[t].take_id) throw Error(Errc::misaligned_takes, "take " + gt[t].take_id);
    for (const auto& f : gt[t].frames) g.push_back(f.graph);
    for (const auto& f : pred[t].frames) p.push_back(f.graph);
  }
  return relation_prf(g, p, policy, mode);
}

// ---------------------------------------------------------------------------
// Human poses

/// Hungarian matching (minimum pose_distance) of gt humans (rows) to predictions.
inline std::vector<std::optional<std::size_t>> match_poses(const std::vector<HumanPose>& gt,
                                                           const std::vector<HumanPose>& pred) {
  std::vector<std::optional<std::size_t>> out(gt.size());
  if (gt.empty() || pred.empty()) return out;
  AssignmentProblem p{CostMatrix(gt.size(), pred.size()), Objective::minimize};
  for (std::size_t i = 0; i < gt.size(); ++i)
    for (std::size_t j = 0; j < pred.size(); ++j) p.cost(i, j) = pose_distance(gt[i], pred[j]);
  for (auto [i, j] : solve_assignment(p).pairs) out[i] = j;
  return out;
}

struct PcpCounts {
  std::size_t correct = 0;
  std::size_t total = 0;

  double percentage() const { return total == 0 ? 100.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total); }
};

/// Parts pooled globally over all frames. A part is correct when both of its
/// predicted endpoints lie within alpha * (gt part length) of the gt endpoints.
inline PcpCounts pcp3d_counts(const std::vector<std::vector<HumanPose>>& gt,
                              const std::vector<std::vector<HumanPose>>& pred, double alpha = 0.5,
                              const PartList& parts = default_parts()) {
  if (gt.size() != pred.size()) throw Error(Errc::misaligned_takes, "pose frame counts differ");
  PcpCounts c;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    const auto match = match_poses(gt[f], pred[f]);
    for (std::size_t i = 0; i < gt[f].size(); ++i) {
      c.total += parts.size();
      if (!match[i]) continue;
      const HumanPose& g = gt[f][i];
      const HumanPose& p = pred[f][*match[i]];
      for (const auto& part : parts) {
        const double limit = alpha * (part.to.at(g) - part.from.at(g)).norm();
        if ((part.from.at(p) - part.from.at(g)).norm() <= limit && (part.to.at(p) - part.to.at(g)).norm() <= limit)
          ++c.correct;
      }
    }
  }
  return c;
}

inline double pcp3d(const std::vector<std::vector<HumanPose>>& gt, const std::vector<std::vector<HumanPose>>& pred,
                    double alpha = 0.5) {
  return pcp3d_counts(gt, pred, alpha).percentage();
}

// ---------------------------------------------------------------------------
// Boxes

/// All-point interpolated area under the precision-recall curve.
inline double average_precision(const std::vector<bool>& is_tp, std::size_t num_gt) {
  if (num_gt == 0 || is_tp.empty()) return 0.0;
  std::vector<double> rec, prec;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < is_tp.size(); ++i) {
    tp += is_tp[i] ? 1 : 0;
    rec.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  // Precision envelope, then sum rectangles where recall increases.
  for (std::size_t i = prec.size() - 1; i > 0; --i) prec[i - 1] = std::max(prec[i - 1], prec[i]);
  double ap = 0, prev_rec = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    ap += (rec[i] - prev_rec) * prec[i];
    prev_rec = rec[i];
  }
  return ap;
}

struct ApReport {
  std::map<std::string, double> per_class;
  double mean = 0;
};

inline ApReport ap_report(const std::vector<std::vector<OrientedBox3>>& gt,
                          const std::vector<std::vector<OrientedBox3>>& pred, double iou_thresh) {
  if (gt.size() != pred.size()) throw Error(Errc::misaligned_takes, "box frame counts differ");
  std::map<std::string, std::size_t> num_gt;
  for (const auto& f : gt)
    for (const auto& b : f) ++num_gt[b.cls];

  ApReport r;
  for (const auto& [cls, n] : num_gt) {
    struct Det {
      std::size_t frame, index;
      double conf;
    };
    std::vector<Det> dets;
    for (std::size_t f = 0; f < pred.size(); ++f)
      for (std::size_t i = 0; i < pred[f].size(); ++i)
        if (pred[f][i].cls == cls) dets.push_back({f, i, pred[f][i].confidence});
    std::stable_sort(dets.begin(), dets.end(), [](const Det& a, const Det& b) { return a.conf > b.conf; });

    std::vector<std::vector<bool>> used(gt.size());
    for (std::size_t f = 0; f < gt.size(); ++f) used[f].assign(gt[f].size(), false);
    std::vector<bool> is_tp;
    for (const auto& d : dets) {
      std::optional<std::size_t> best;
      double best_iou = -1;
      for (std::size_t g = 0; g < gt[d.frame].size(); ++g) {
        if (used[d.frame][g] || gt[d.frame][g].cls != cls) continue;
        const double iou = box_iou(pred[d.frame][d.index], gt[d.frame][g]);
        if (iou > best_iou) best_iou = iou, best = g;
      }
      const bool hit = best && best_iou >= iou_thresh;
      if (hit) used[d.frame][*best] = true;
      is_tp.push_back(hit);
    }
    r.per_class[cls] = average_precision(is_tp, n);
  }
  if (!r.per_class.empty()) {
    for (const auto& [_, ap] : r.per_class) r.mean += ap;
    r.mean /= static_cast<double>(r.per_class.size());
  }
  return r;
}

inline double ap_at_iou(const std::vector<std::vector<OrientedBox3>>& gt,
                        const std::vector<std::vector<OrientedBox3>>& pred, double iou_thresh) {
  return ap_report(gt, pred, iou_thresh).mean;
}

// ---------------------------------------------------------------------------
// Roles

/// One human in one frame: its ground-truth role and the predicted one.
struct RoleObservation {
  std::optional<RoleClass> gt;
  std::optional<RoleClass> pred;
};

inline MacroReport role_prf(const std::vector<RoleObservation>& obs, MacroMode mode = MacroMode::mean_of_f1) {
  std::array<std::size_t, kNumRoles> tp{}, fp{}, fn{};
  for (const auto& o : obs) {
    if (o.gt && o.pred && *o.gt == *o.pred) {
      ++tp[index_of(*o.gt)];
      continue;
    }
    if (o.pred) ++fp[index_of(*o.pred)];
    if (o.gt) ++fn[index_of(*o.gt)];
  }
  std::vector<ClassPRF> cls;
  for (std::size_t k = 0; k < kNumRoles; ++k) cls.push_back(class_prf(std::string(kRoleNames[k]), tp[k], fp[k], fn[k]));
  return macro_report(std::move(cls), mode);
}

inline MacroReport role_prf(const std::vector<std::optional<RoleClass>>& gt,
                            const std::vector<std::optional<RoleClass>>& pred, MacroMode mode = MacroMode::mean_of_f1) {
  if (gt.size() != pred.size()) throw Error(Errc::misaligned_takes, "role lists differ in length");
  std::vector<RoleObservation> obs;
  for (std::size_t i = 0; i < gt.size(); ++i) obs.push_back({gt[i], pred[i]});
  return role_prf(obs, mode);
}

// ---------------------------------------------------------------------------
// Instance labels

/// Fraction of points whose predicted instance maps to their true instance.
/// Background (0) maps to background; unmapped predicted ids count as wrong.
inline double labeling_accuracy(const std::vector<InstanceId>& gt, const std::vector<InstanceId>& pred,
                                const std::map<InstanceId, InstanceId>& pred_to_gt = {}) {
  if (gt.size() != pred.size()) throw Error(Errc::misaligned_takes, "label arrays differ in length");
  if (gt.empty()) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    InstanceId mapped = pred[i];
    if (!pred_to_gt.empty() && pred[i] != 0) {
      auto it = pred_to_gt.find(pred[i]);
      mapped = it == pred_to_gt.end() ? static_cast<InstanceId>(-1) : it->second;
    }
    ok += mapped == gt[i] ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(gt.size());
}

}  // namespace orgk
