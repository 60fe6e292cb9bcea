#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <vector>

#include "ivf/errors.hpp"

namespace ivf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Rigid transform: camera_point = rotation * model_point + translation.
// The rotation is kept orthonormal with det +1; construction checks this to
// 1e-9 so downstream pose metrics can trust it.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return Pose{}; }

  static Pose from_axis_angle(const Vec3& axis, double angle, const Vec3& translation) {
    Pose p;
    p.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    p.translation = translation;
    return p;
  }

  Vec3 apply(const Vec3& point) const { return rotation * point + translation; }

  Pose compose(const Pose& other) const {
    Pose out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }

  Pose inverse() const {
    Pose out;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation);
    return out;
  }
};

inline void validate_rotation(const Mat3& r, double tol = 1e-9) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det_err = std::abs(r.determinant() - 1.0);
  if (ortho > tol || det_err > tol) {
    throw InvalidRotation("rotation is not orthonormal with det +1 (ortho err " +
                          std::to_string(ortho) + ", det err " + std::to_string(det_err) + ")");
  }
}

inline Pose make_pose(const Mat3& rotation, const Vec3& translation) {
  validate_rotation(rotation);
  return Pose{rotation, translation};
}

// Nearest rotation matrix in the Frobenius sense (sign-corrected SVD).
inline Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

// Geodesic distance on the rotation group, in radians.
inline double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double c = ((a.transpose() * b).trace() - 1.0) * 0.5;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Pinhole camera with zero skew and no distortion. Pixel coordinates are
// (x = column, y = row) with the top-left pixel center at (0, 0).
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
};

inline CameraIntrinsics make_intrinsics(double fx, double fy, double cx, double cy,
                                        int width, int height) {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvalidSpec("focal lengths must be positive");
  }
  if (width < 1 || height < 1) {
    throw InvalidSpec("image size must be at least 1x1");
  }
  return CameraIntrinsics{fx, fy, cx, cy, width, height};
}

// Projects a model-frame point through `pose` into pixel coordinates.
// Throws NonPositiveDepth when the transformed point lies on or behind the
// camera plane (z <= 1e-12).
inline Vec2 project(const Vec3& point, const Pose& pose, const CameraIntrinsics& k) {
  const Vec3 c = pose.apply(point);
  if (c.z() <= 1e-12) {
    throw NonPositiveDepth("point depth " + std::to_string(c.z()) +
                           " is not positive under projection");
  }
  return Vec2(k.fx * c.x() / c.z() + k.cx, k.fy * c.y() / c.z() + k.cy);
}

// Exact O(m^2) maximum pairwise distance.
inline double model_diameter(const std::vector<Vec3>& points) {
  if (points.size() < 2) {
    throw InsufficientPoints("model diameter needs at least 2 points, got " +
                             std::to_string(points.size()));
  }
  double best = 0.0;
  for (std::size_t a = 0; a + 1 < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      best = std::max(best, (points[a] - points[b]).norm());
    }
  }
  return best;
}

// Greedy farthest point sampling. The first output is points[seed_index];
// each following pick maximizes its minimum distance to everything already
// selected, ties broken by lowest index. Deterministic.
inline std::vector<Vec3> farthest_point_sample(const std::vector<Vec3>& points,
                                               std::size_t k, std::size_t seed_index = 0) {
  if (k < 1 || k > points.size()) {
    throw InsufficientPoints("cannot sample " + std::to_string(k) + " of " +
                             std::to_string(points.size()) + " points");
  }
  if (seed_index >= points.size()) {
    throw InsufficientPoints("seed index " + std::to_string(seed_index) + " out of range");
  }
  std::vector<Vec3> out;
  out.reserve(k);
  out.push_back(points[seed_index]);
  std::vector<double> min_d2(points.size(), std::numeric_limits<double>::infinity());
  std::size_t last = seed_index;
  for (std::size_t picked = 1; picked < k; ++picked) {
    std::size_t best_i = 0;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      min_d2[i] = std::min(min_d2[i], (points[i] - points[last]).squaredNorm());
      if (min_d2[i] > best_d2) {  // strict: ties keep the lowest index
        best_d2 = min_d2[i];
        best_i = i;
      }
    }
    last = best_i;
    out.push_back(points[best_i]);
  }
  return out;
}

// 3D point set plus the derived quantities pose evaluation needs.
struct ObjectModel {
  std::vector<Vec3> points;
  std::vector<Vec3> keypoints;
  double diameter = 0.0;
  bool symmetric = false;
};

inline void check_finite(const std::vector<Vec3>& pts, const char* what) {
  for (const Vec3& p : pts) {
    if (!p.allFinite()) throw InvalidSpec(std::string(what) + " contains a non-finite point");
  }
}

// Builds a model, computing the diameter from the points. When
// `expected_diameter` is supplied (e.g. from a scene file) it is verified to
// 1e-9 against the recomputed value.
inline ObjectModel make_object_model(std::vector<Vec3> points, std::vector<Vec3> keypoints,
                                     bool symmetric = false,
                                     double expected_diameter = -1.0) {
  if (points.size() < 4) {
    throw InsufficientPoints("object model needs at least 4 points, got " +
                             std::to_string(points.size()));
  }
  check_finite(points, "model points");
  check_finite(keypoints, "model keypoints");
  const double d = model_diameter(points);
  if (expected_diameter >= 0.0 && std::abs(expected_diameter - d) > 1e-9) {
    throw InvalidSpec("stored diameter " + std::to_string(expected_diameter) +
                      " disagrees with recomputed " + std::to_string(d));
  }
  return ObjectModel{std::move(points), std::move(keypoints), d, symmetric};
}

}  // namespace ivf
