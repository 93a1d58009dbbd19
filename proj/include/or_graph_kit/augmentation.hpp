#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "or_graph_kit/error.hpp"
#include "or_graph_kit/geometry.hpp"
#include "or_graph_kit/instance_labeling.hpp"
#include "or_graph_kit/random.hpp"

namespace orgk {

struct Range {
  double lo = 0;
  double hi = 0;

  friend bool operator==(const Range&, const Range&) = default;
};

struct AugmentParams {
  Range scale{0.9, 1.1};
  Range translation{-0.2, 0.2};  // meters, per axis
  Range yaw{-std::numbers::pi, std::numbers::pi};
  Range brightness{-25, 25};  // additive, color units
  Range hue{-18, 18};         // degrees
  double crop_to_hand_prob = 0.5;
  double crop_radius = 0.6;

  /// Every range collapsed onto the identity transform.
  static AugmentParams identity() {
    AugmentParams p;
    p.scale = {1, 1};
    p.translation = {0, 0};
    p.yaw = {0, 0};
    p.brightness = {0, 0};
    p.hue = {0, 0};
    p.crop_to_hand_prob = 0;
    return p;
  }

  friend bool operator==(const AugmentParams&, const AugmentParams&) = default;
};

inline void check_params(const AugmentParams& p) {
  for (const Range& r : {p.scale, p.translation, p.yaw, p.brightness, p.hue})
    if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi))
      throw Error(Errc::bad_config, "augmentation range with lo > hi");
  if (!(p.scale.lo > 0)) throw Error(Errc::bad_config, "scale must be > 0");
  if (!(p.crop_to_hand_prob >= 0 && p.crop_to_hand_prob <= 1))
    throw Error(Errc::bad_config, "crop_to_hand_prob outside [0,1]");
  if (!(p.crop_radius > 0)) throw Error(Errc::bad_config, "crop_radius must be > 0");
}

namespace detail {

inline constexpr std::uint64_t kColorStream = 0;
inline constexpr std::uint64_t kGeometryStreamA = 1;
inline constexpr std::uint64_t kGeometryStreamB = 2;
inline constexpr std::uint64_t kCropStream = 3;

struct GeometricDraw {
  double scale = 1;
  double yaw = 0;
  Vec3 translation = Vec3::Zero();
};

inline GeometricDraw draw_geometry(Rng& rng, const AugmentParams& p) {
  GeometricDraw d;
  d.scale = rng.uniform(p.scale.lo, p.scale.hi);
  d.yaw = rng.uniform(p.yaw.lo, p.yaw.hi);
  for (int i = 0; i < 3; ++i) d.translation[i] = rng.uniform(p.translation.lo, p.translation.hi);
  return d;
}

struct ColorDraw {
  double brightness = 0;
  double hue = 0;
};

inline ColorDraw draw_color(Rng& rng, const AugmentParams& p) {
  ColorDraw d;
  d.brightness = rng.uniform(p.brightness.lo, p.brightness.hi);
  d.hue = rng.uniform(p.hue.lo, p.hue.hi);
  return d;
}

/// Scale about the centroid, then yaw about the centroid, then translate.
/// Written as p' = sR p + (c - sR c + t) so the identity draw is exact.
inline void apply_geometry(PointCloud& cloud, const std::vector<std::size_t>& idx, const GeometricDraw& d) {
  if (idx.empty()) return;
  Vec3 c = Vec3::Zero();
  for (auto k : idx) c += cloud[k].pos();
  c /= static_cast<double>(idx.size());
  const double cs = std::cos(d.yaw), sn = std::sin(d.yaw);
  Eigen::Matrix3d sr;
  sr << cs, -sn, 0, sn, cs, 0, 0, 0, 1;
  sr *= d.scale;
  const Vec3 offset = c - sr * c + d.translation;
  for (auto k : idx) {
    const Vec3 q = sr * cloud[k].pos() + offset;
    cloud[k].x = static_cast<float>(q.x());
    cloud[k].y = static_cast<float>(q.y());
    cloud[k].z = static_cast<float>(q.z());
  }
}

inline std::uint8_t clamp_channel(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

inline std::array<double, 3> rgb_to_hsv(double r, double g, double b) {
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double delta = mx - mn;
  double h = 0;
  if (delta > 0) {
    if (mx == r)
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (mx == g)
      h = 60.0 * ((b - r) / delta + 2.0);
    else
      h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0) h += 360.0;
  return {h, mx > 0 ? delta / mx : 0.0, mx};
}

inline std::array<double, 3> hsv_to_rgb(double h, double s, double v) {
  h = std::fmod(h, 360.0);
  if (h < 0) h += 360.0;
  const double c = v * s;
  const double x = c * (1 - std::abs(std::fmod(h / 60.0, 2.0) - 1));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  if (h < 60) r = c, g = x;
  else if (h < 120) r = x, g = c;
  else if (h < 180) g = c, b = x;
  else if (h < 240) g = x, b = c;
  else if (h < 300) r = x, b = c;
  else r = c, b = x;
  return {r + m, g + m, b + m};
}

inline void apply_color(PointCloud& cloud, const ColorDraw& d) {
  for (auto& p : cloud) {
    const double r = clamp_channel(p.r + d.brightness);
    const double g = clamp_channel(p.g + d.brightness);
    const double b = clamp_channel(p.b + d.brightness);
    const auto hsv = rgb_to_hsv(r, g, b);
    const auto rgb = hsv_to_rgb(hsv[0] + d.hue, hsv[1], hsv[2]);
    p.r = clamp_channel(rgb[0]);
    p.g = clamp_channel(rgb[1]);
    p.b = clamp_channel(rgb[2]);
  }
}

}  // namespace detail

inline PointCloud augment_cloud(PointCloud cloud, const AugmentParams& params, std::uint64_t seed) {
  check_params(params);
  Rng geo = Rng::derive(seed, detail::kGeometryStreamA);
  Rng col = Rng::derive(seed, detail::kColorStream);
  std::vector<std::size_t> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  detail::apply_geometry(cloud, all, detail::draw_geometry(geo, params));
  detail::apply_color(cloud, detail::draw_color(col, params));
  return cloud;
}

/// Each side of the pair gets its own geometric draw; the color draw is shared.
/// With an empty second side this reproduces augment_cloud on the first.
inline RelationPoints augment_relation_pair(RelationPoints pair, const AugmentParams& params, std::uint64_t seed) {
  check_params(params);
  if (pair.provenance.size() != pair.cloud.size())
    throw Error(Errc::no_provenance, "provenance length differs from point count");
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < pair.provenance.size(); ++i) {
    if (pair.provenance[i] == 0)
      a.push_back(i);
    else if (pair.provenance[i] == 1)
      b.push_back(i);
    else
      throw Error(Errc::no_provenance, "provenance must be 0 or 1");
  }
  Rng geo_a = Rng::derive(seed, detail::kGeometryStreamA);
  Rng geo_b = Rng::derive(seed, detail::kGeometryStreamB);
  Rng col = Rng::derive(seed, detail::kColorStream);
  detail::apply_geometry(pair.cloud, a, detail::draw_geometry(geo_a, params));
  detail::apply_geometry(pair.cloud, b, detail::draw_geometry(geo_b, params));
  detail::apply_color(pair.cloud, detail::draw_color(col, params));
  return pair;
}

/// With probability crop_to_hand_prob keeps only points near either wrist of
/// poses[pose_index]; otherwise returns the cloud untouched.
inline PointCloud crop_to_hands(PointCloud cloud, const std::vector<HumanPose>& poses, const AugmentParams& params,
                                std::uint64_t seed, std::size_t pose_index = 0) {
  check_params(params);
  Rng rng = Rng::derive(seed, detail::kCropStream);
  if (!rng.bernoulli(params.crop_to_hand_prob)) return cloud;
  if (poses.empty()) throw Error(Errc::no_hands, "crop-to-hand fired without any pose");
  if (pose_index >= poses.size()) throw Error(Errc::no_hands, "designated pose index out of range");
  const Vec3 lw = poses[pose_index][Joint::left_wrist];
  const Vec3 rw = poses[pose_index][Joint::right_wrist];
  const double r = params.crop_radius;
  std::erase_if(cloud, [&](const ColoredPoint& p) {
    const Vec3 q = p.pos();
    return (q - lw).norm() > r && (q - rw).norm() > r;
  });
  return cloud;
}

}  // namespace orgk
