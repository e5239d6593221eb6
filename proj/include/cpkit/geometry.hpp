#pragma once

#include <cstdint>
#include <optional>
#include <string>

// Camera-relative 3D geometry for overtaking analysis.
//
// Coordinate convention: camera-centered, x = right, y = down, z = forward.
// Object positions are stored as (forward_m, right_m, vertical_m) where
// vertical_m is the upward offset of the box center (i.e. -y).

namespace cpkit {

enum class Category {
  Car,
  Truck,
  Bus,
  Motorcycle,
  Bicycle,
  Pedestrian,
  Other,
};

const char* to_string(Category category);
Category category_from_string(const std::string& name);

/// Categories whose passes are subject to the clearance rules.
bool is_motor_vehicle(Category category);

/// One object's camera-relative state at a single timestamp.
struct ObjectState {
  std::int64_t object_id = 0;
  Category category = Category::Other;
  double width_m = 0.0;
  double height_m = 0.0;
  double length_m = 0.0;
  double forward_m = 0.0;   // distance from camera to box center, positive ahead
  double right_m = 0.0;     // positive to the camera's right
  double vertical_m = 0.0;  // upward offset of the box center
  double yaw_rad = 0.0;     // allocentric orientation; carried, not used by the criteria
  double t = 0.0;           // seconds since clip start
  std::optional<double> speed_mps;
  std::optional<double> confidence;  // in [0, 1] when present

  bool operator==(const ObjectState&) const = default;
};

void validate(const ObjectState& state);

/// Bike-mount geometry: where the camera sits relative to the handlebar
/// edge, and how long the bicycle is.
struct RigGeometry {
  double handlebar_offset_m = 0.5;  // camera to outer handlebar edge, lateral
  double bike_length_m = 1.8;

  bool operator==(const RigGeometry&) const = default;
};

void validate(const RigGeometry& rig);

struct CameraIntrinsics {
  double fx = 1000.0;  // focal lengths, pixels
  double fy = 1000.0;
  double cx = 800.0;  // principal point, pixels
  double cy = 450.0;
  int image_width_px = 1600;
  int image_height_px = 900;

  bool operator==(const CameraIntrinsics&) const = default;
};

void validate(const CameraIntrinsics& intrinsics);

/// Image-plane point with metric depth.
struct ImagePoint25D {
  double u = 0.0;
  double v = 0.0;
  double depth_m = 0.0;

  bool operator==(const ImagePoint25D&) const = default;
};

/// Camera-frame point: x right, y down, z forward, meters.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Point3&) const = default;
};

enum class TrafficSide {
  LeftHand,   // drive on the left, overtakes pass on the cyclist's right
  RightHand,  // mirrored
};

const char* to_string(TrafficSide side);
TrafficSide traffic_side_from_string(const std::string& name);

/// Lateral clearance between the handlebar edge and the vehicle's near side:
/// right_m - width_m / 2 - handlebar offset. Negative means the vehicle
/// laterally overlaps the handlebar line.
double passing_distance(double right_m, double width_m, const RigGeometry& rig);

/// True while the vehicle is longitudinally beside the bicycle, i.e.
/// forward_m in [-length_m/2 - bike_length, length_m/2] (closed interval).
bool longitudinal_overlap(double forward_m, double length_m, const RigGeometry& rig);

/// True when the object sits on the side overtakes happen on: right_m >= 0
/// for left-hand traffic, right_m <= 0 for right-hand traffic.
bool on_passing_side(double right_m, TrafficSide side);

/// Pinhole projection. Throws std::domain_error when p.z <= 0.
ImagePoint25D project(const Point3& p, const CameraIntrinsics& intrinsics);

/// Exact inverse of project. Throws std::invalid_argument for depth <= 0.
Point3 backproject(const ImagePoint25D& p, const CameraIntrinsics& intrinsics);

/// True iff the object is ahead of the camera and its projected center lands
/// inside the image rectangle. Center-only test; box extent is ignored.
bool in_fov(const ObjectState& state, const CameraIntrinsics& intrinsics);

}  // namespace cpkit
