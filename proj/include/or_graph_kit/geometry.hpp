#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "or_graph_kit/error.hpp"

namespace orgk {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// World frame: right-handed, z up, meters.
struct ColoredPoint {
  float x = 0, y = 0, z = 0;
  std::uint8_t r = 0, g = 0, b = 0;

  Vec3 pos() const { return {x, y, z}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend bool operator==(const ColoredPoint&, const ColoredPoint&) = default;
};

using PointCloud = std::vector<ColoredPoint>;

inline ColoredPoint make_point(const Vec3& p, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0) {
  return {static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z()), r, g, b};
}

inline Vec3 centroid(const PointCloud& cloud) {
  Vec3 c = Vec3::Zero();
  if (cloud.empty()) return c;
  for (const auto& p : cloud) c += p.pos();
  return c / static_cast<double>(cloud.size());
}

// ---------------------------------------------------------------------------
// Cameras

struct CameraCalibration {
  std::string camera_id;
  double fx = 1, fy = 1, cx = 0, cy = 0;
  Eigen::Matrix4d extrinsics = Eigen::Matrix4d::Identity();  // camera-to-world
  double depth_scale = 0.001;                                 // meters per depth unit

  friend bool operator==(const CameraCalibration&, const CameraCalibration&) = default;
};

/// Throws bad-calibration unless the intrinsics are positive and the extrinsic
/// rotation is orthonormal with a homogeneous last row.
inline void check_calibration(const CameraCalibration& c) {
  if (!(c.fx > 0) || !(c.fy > 0)) throw Error(Errc::bad_calibration, c.camera_id + ": focal lengths must be > 0");
  if (!(c.depth_scale > 0)) throw Error(Errc::bad_calibration, c.camera_id + ": depth_scale must be > 0");
  if (!c.extrinsics.allFinite()) throw Error(Errc::bad_calibration, c.camera_id + ": non-finite extrinsics");
  const Eigen::Matrix3d R = c.extrinsics.topLeftCorner<3, 3>();
  if ((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() >= 1e-6)
    throw Error(Errc::bad_calibration, c.camera_id + ": rotation is not orthonormal");
  if ((c.extrinsics.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).norm() > 1e-12)
    throw Error(Errc::bad_calibration, c.camera_id + ": last extrinsics row must be 0 0 0 1");
}

/// Depth in sensor units, row-major, 0 = invalid.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<float> depth;

  float at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
};

struct ColorFrame {
  int width = 0;
  int height = 0;
  std::vector<std::array<std::uint8_t, 3>> rgb;
};

inline PointCloud backproject(const DepthFrame& depth, const CameraCalibration& calib,
                              const ColorFrame* color = nullptr) {
  check_calibration(calib);
  if (depth.width < 0 || depth.height < 0 ||
      depth.depth.size() != static_cast<std::size_t>(depth.width) * depth.height)
    throw Error(Errc::invalid_points, "depth buffer size does not match its dimensions");
  if (color && (color->width != depth.width || color->height != depth.height))
    throw Error(Errc::invalid_points, "color frame dimensions differ from depth");

  const Eigen::Matrix3d R = calib.extrinsics.topLeftCorner<3, 3>();
  const Vec3 t = calib.extrinsics.topRightCorner<3, 1>();
  PointCloud out;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const float d = depth.at(u, v);
      if (!(d > 0) || !std::isfinite(d)) continue;
      const double z = d * calib.depth_scale;
      const Vec3 cam((u - calib.cx) * z / calib.fx, (v - calib.cy) * z / calib.fy, z);
      const Vec3 world = R * cam + t;
      std::uint8_t r = 255, g = 255, b = 255;
      if (color) {
        const auto& px = color->rgb[static_cast<std::size_t>(v) * depth.width + u];
        r = px[0], g = px[1], b = px[2];
      }
      out.push_back(make_point(world, r, g, b));
    }
  }
  return out;
}

struct PixelDepth {
  double u = 0, v = 0;
  double depth = 0;  // sensor units
};

/// Inverse of backproject for one world point; nullopt behind the camera.
inline std::optional<PixelDepth> project(const Vec3& world, const CameraCalibration& calib) {
  check_calibration(calib);
  const Eigen::Matrix3d R = calib.extrinsics.topLeftCorner<3, 3>();
  const Vec3 t = calib.extrinsics.topRightCorner<3, 1>();
  const Vec3 cam = R.transpose() * (world - t);
  if (cam.z() <= 0) return std::nullopt;
  return PixelDepth{calib.fx * cam.x() / cam.z() + calib.cx, calib.fy * cam.y() / cam.z() + calib.cy,
                    cam.z() / calib.depth_scale};
}

// ---------------------------------------------------------------------------
// Fusion

struct FuseOptions {
  bool dedup = true;
  double voxel_size = 0.005;

  friend bool operator==(const FuseOptions&, const FuseOptions&) = default;
};

struct PointSource {
  std::size_t cloud = 0;
  std::size_t index = 0;

  friend bool operator==(const PointSource&, const PointSource&) = default;
};

struct FusedCloud {
  PointCloud cloud;
  std::vector<PointSource> sources;  // where each fused point came from
};

namespace detail {
struct VoxelKeyHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};
}  // namespace detail

/// Concatenates in input order; with dedup on, keeps the first point of each voxel.
inline FusedCloud fuse_with_sources(const std::vector<PointCloud>& clouds, const FuseOptions& opts = {}) {
  if (opts.dedup && !(opts.voxel_size > 0)) throw Error(Errc::bad_config, "voxel_size must be > 0");
  FusedCloud out;
  std::unordered_set<std::array<std::int64_t, 3>, detail::VoxelKeyHash> occupied;
  for (std::size_t c = 0; c < clouds.size(); ++c) {
    for (std::size_t i = 0; i < clouds[c].size(); ++i) {
      const auto& p = clouds[c][i];
      if (opts.dedup) {
        std::array<std::int64_t, 3> key{static_cast<std::int64_t>(std::floor(p.x / opts.voxel_size)),
                                        static_cast<std::int64_t>(std::floor(p.y / opts.voxel_size)),
                                        static_cast<std::int64_t>(std::floor(p.z / opts.voxel_size))};
        if (!occupied.insert(key).second) continue;
      }
      out.cloud.push_back(p);
      out.sources.push_back({c, i});
    }
  }
  return out;
}

inline PointCloud fuse(const std::vector<PointCloud>& clouds, const FuseOptions& opts = {}) {
  return fuse_with_sources(clouds, opts).cloud;
}

// ---------------------------------------------------------------------------
// Boxes

inline double normalize_yaw(double yaw) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double y = std::fmod(yaw + std::numbers::pi, two_pi);
  if (y < 0) y += two_pi;
  y -= std::numbers::pi;
  return y >= std::numbers::pi ? -std::numbers::pi : y;
}

/// Box with yaw about the gravity (z) axis.
struct OrientedBox3 {
  std::string cls;
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  double yaw = 0;
  double confidence = 1.0;

  Vec3 to_local(const Vec3& p) const {
    const Vec3 d = p - center;
    const double c = std::cos(yaw), s = std::sin(yaw);
    return {c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z()};
  }

  bool contains(const Vec3& p, double tol = 1e-9) const {
    const Vec3 l = to_local(p);
    return std::abs(l.x()) <= half_extents.x() + tol && std::abs(l.y()) <= half_extents.y() + tol &&
           std::abs(l.z()) <= half_extents.z() + tol;
  }

  /// Distance from an interior point to the nearest face (negative outside).
  double depth_inside(const Vec3& p) const {
    const Vec3 l = to_local(p);
    return (half_extents - l.cwiseAbs()).minCoeff();
  }

  /// Counter-clockwise footprint corners in the ground plane.
  std::array<Vec2, 4> footprint() const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    const Vec2 ax(c * half_extents.x(), s * half_extents.x());
    const Vec2 ay(-s * half_extents.y(), c * half_extents.y());
    const Vec2 o(center.x(), center.y());
    return {o - ax - ay, o + ax - ay, o + ax + ay, o - ax + ay};
  }

  bool footprint_contains(const Vec3& p) const {
    const Vec3 l = to_local(p);
    return std::abs(l.x()) <= half_extents.x() && std::abs(l.y()) <= half_extents.y();
  }

  double volume() const { return 8.0 * half_extents.prod(); }

  friend bool operator==(const OrientedBox3&, const OrientedBox3&) = default;
};

inline void check_box(const OrientedBox3& b) {
  if (!(b.half_extents.array() > 0).all() || !b.half_extents.allFinite())
    throw Error(Errc::bad_schema, "box half_extents must be strictly positive");
  if (!b.center.allFinite() || !std::isfinite(b.yaw)) throw Error(Errc::bad_schema, "non-finite box");
  if (!(b.confidence >= 0 && b.confidence <= 1)) throw Error(Errc::bad_schema, "box confidence outside [0,1]");
}

namespace detail {

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * std::abs(a);
}

/// Sutherland-Hodgman clip of a polygon against a convex CCW clip polygon.
inline std::vector<Vec2> clip_convex(std::vector<Vec2> subject, const std::array<Vec2, 4>& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % clip.size()];
    const Vec2 edge = b - a;
    auto side = [&](const Vec2& p) { return cross2(edge, p - a); };
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Vec2& cur = subject[i];
      const Vec2& nxt = subject[(i + 1) % subject.size()];
      const double sc = side(cur), sn = side(nxt);
      if (sc >= 0) out.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) {
        const double t = sc / (sc - sn);
        out.push_back(cur + t * (nxt - cur));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

}  // namespace detail

/// Volume IoU: ground-plane polygon intersection times overlap along z.
inline double box_iou(const OrientedBox3& a, const OrientedBox3& b) {
  const double z_lo = std::max(a.center.z() - a.half_extents.z(), b.center.z() - b.half_extents.z());
  const double z_hi = std::min(a.center.z() + a.half_extents.z(), b.center.z() + b.half_extents.z());
  const double dz = z_hi - z_lo;
  if (dz <= 0) return 0.0;

  const auto fa = a.footprint();
  const auto fb = b.footprint();
  const auto poly = detail::clip_convex(std::vector<Vec2>(fa.begin(), fa.end()), fb);
  if (poly.size() < 3) return 0.0;
  const double inter = detail::polygon_area(poly) * dz;
  const double uni = a.volume() + b.volume() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Poses

enum class Joint : std::uint8_t {
  head,
  neck,
  left_shoulder,
  right_shoulder,
  left_elbow,
  right_elbow,
  left_wrist,
  right_wrist,
  left_hip,
  right_hip,
  left_knee,
  right_knee,
  left_ankle,
  right_ankle,
};

inline constexpr std::size_t kNumJoints = 14;

inline constexpr std::array<std::string_view, kNumJoints> kJointNames = {
    "head",      "neck",      "left_shoulder", "right_shoulder", "left_elbow", "right_elbow", "left_wrist",
    "right_wrist", "left_hip", "right_hip",    "left_knee",      "right_knee", "left_ankle",  "right_ankle"};

constexpr std::size_t index_of(Joint j) { return static_cast<std::size_t>(j); }

inline std::optional<Joint> parse_joint(std::string_view name) {
  for (std::size_t i = 0; i < kNumJoints; ++i)
    if (kJointNames[i] == name) return static_cast<Joint>(i);
  return std::nullopt;
}

struct HumanPose {
  std::int64_t person_id = 0;
  std::array<Vec3, kNumJoints> joints{};
  std::optional<std::array<double, kNumJoints>> confidence;

  const Vec3& operator[](Joint j) const { return joints[index_of(j)]; }
  Vec3& operator[](Joint j) { return joints[index_of(j)]; }

  Vec3 mean_joint() const {
    Vec3 c = Vec3::Zero();
    for (const auto& j : joints) c += j;
    return c / static_cast<double>(kNumJoints);
  }

  bool finite() const {
    return std::all_of(joints.begin(), joints.end(), [](const Vec3& j) { return j.allFinite(); });
  }

  friend bool operator==(const HumanPose&, const HumanPose&) = default;
};

/// Mean Euclidean distance over the 14 joints.
inline double pose_distance(const HumanPose& a, const HumanPose& b) {
  double s = 0;
  for (std::size_t i = 0; i < kNumJoints; ++i) s += (a.joints[i] - b.joints[i]).norm();
  return s / static_cast<double>(kNumJoints);
}

/// A part endpoint is one joint or the midpoint of two.
struct PartEnd {
  Joint a;
  Joint b;

  constexpr PartEnd(Joint j) : a(j), b(j) {}
  constexpr PartEnd(Joint j, Joint k) : a(j), b(k) {}

  Vec3 at(const HumanPose& p) const { return 0.5 * (p[a] + p[b]); }
};

struct Part {
  std::string_view name;
  PartEnd from;
  PartEnd to;
};

using PartList = std::vector<Part>;

inline const PartList& default_parts() {
  using J = Joint;
  static const PartList parts = {
      {"head", J::head, J::neck},
      {"trunk", PartEnd(J::left_shoulder, J::right_shoulder), PartEnd(J::left_hip, J::right_hip)},
      {"left_upper_arm", J::left_shoulder, J::left_elbow},
      {"right_upper_arm", J::right_shoulder, J::right_elbow},
      {"left_lower_arm", J::left_elbow, J::left_wrist},
      {"right_lower_arm", J::right_elbow, J::right_wrist},
      {"left_upper_leg", J::left_hip, J::left_knee},
      {"right_upper_leg", J::right_hip, J::right_knee},
      {"left_lower_leg", J::left_knee, J::left_ankle},
      {"right_lower_leg", J::right_knee, J::right_ankle},
  };
  return parts;
}

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

/// Rigid transform: yaw about z then translation.
struct RigidYaw {
  double yaw = 0;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    return Vec3(c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z()) + translation;
  }

  OrientedBox3 apply(OrientedBox3 b) const {
    b.center = apply(b.center);
    b.yaw = normalize_yaw(b.yaw + yaw);
    return b;
  }

  HumanPose apply(HumanPose p) const {
    for (auto& j : p.joints) j = apply(j);
    return p;
  }

  PointCloud apply(PointCloud c) const {
    for (auto& p : c) {
      const Vec3 q = apply(p.pos());
      p.x = static_cast<float>(q.x()), p.y = static_cast<float>(q.y()), p.z = static_cast<float>(q.z());
    }
    return c;
  }
};

}  // namespace orgk
