#pragma once

// Pure coordinate math shared by every fusion path: pinhole projection and
// back-projection, world composition, Euclidean range, and the planar-scan
// trigonometry. All lengths are millimetres, all angles at the interface are
// degrees. Camera orientation is identical to the world frame (translation
// only), so camera->world is a plain offset by the platform pose.

#include <cmath>
#include <numbers>

#include "thermofuse/errors.hpp"

namespace thermofuse {

// Pinhole intrinsics: focal lengths and optical center, all in pixels.
struct Intrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    bool valid() const {
        return std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) &&
               std::isfinite(cy) && fx > 0.0 && fy > 0.0 && cx >= 0.0 && cy >= 0.0;
    }
};

// Continuous pixel coordinate. Origin at the top-left corner, x grows
// rightward along columns, y grows downward along rows.
struct PixelCoord {
    double x = 0.0;
    double y = 0.0;
};

// Point in the camera frame, mm. z is the depth along the optical axis.
struct CameraPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Platform (UAV/robot) position in the world frame, mm.
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Point in the world frame, mm.
struct WorldPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double deg_to_rad(double degrees) {
    return degrees * std::numbers::pi / 180.0;
}

/// Lift a pixel to a camera-frame point at the given depth.
inline CameraPoint backproject(PixelCoord p, double depth_mm, const Intrinsics& k) {
    if (!k.valid()) throw InvalidIntrinsics{};
    if (!(depth_mm > 0.0)) throw NonPositiveDepth{depth_mm};
    return {depth_mm * (p.x - k.cx) / k.fx, depth_mm * (p.y - k.cy) / k.fy, depth_mm};
}

/// Project a camera-frame point onto the image plane. The result may lie
/// outside the image bounds; callers cull.
inline PixelCoord project(const CameraPoint& q, const Intrinsics& k) {
    if (!k.valid()) throw InvalidIntrinsics{};
    if (!(q.z > 0.0)) throw NonPositiveDepth{q.z};
    return {k.cx + k.fx * (q.x / q.z), k.cy + k.fy * (q.y / q.z)};
}

/// Camera-frame point plus platform position. Orientation is identity, so
/// composition is a pure translation.
inline WorldPoint compose_world(const CameraPoint& q, const Pose& pose) {
    return {pose.x + q.x, pose.y + q.y, pose.z + q.z};
}

/// Straight-line distance from the camera origin, mm.
inline double euclidean_range(const CameraPoint& q) {
    return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
}

/// Convert one planar-scan return (beam angle alpha, measured range) into a
/// camera-frame point. alpha is measured in the scan plane with 90 degrees at
/// boresight; y_offset_mm is the fixed vertical displacement between the
/// scanner and the camera. For alpha > 90 the x coordinate goes negative.
inline CameraPoint scan_point_to_camera(double alpha_deg, double range_mm, double y_offset_mm) {
    if (!(range_mm > 0.0)) throw NonPositiveRange{range_mm};
    if (!(alpha_deg > 0.0 && alpha_deg < 180.0)) throw InvalidAngle{alpha_deg};
    const double alpha = deg_to_rad(alpha_deg);
    return {range_mm * std::cos(alpha), y_offset_mm, range_mm * std::sin(alpha)};
}

}  // namespace thermofuse
