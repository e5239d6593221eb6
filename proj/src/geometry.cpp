#include "cpkit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace cpkit {

namespace {

void require(bool ok, const char* message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

}  // namespace

const char* to_string(Category category) {
  switch (category) {
    case Category::Car:
      return "car";
    case Category::Truck:
      return "truck";
    case Category::Bus:
      return "bus";
    case Category::Motorcycle:
      return "motorcycle";
    case Category::Bicycle:
      return "bicycle";
    case Category::Pedestrian:
      return "pedestrian";
    case Category::Other:
      return "other";
  }
  throw std::invalid_argument("unknown category value");
}

Category category_from_string(const std::string& name) {
  if (name == "car") return Category::Car;
  if (name == "truck") return Category::Truck;
  if (name == "bus") return Category::Bus;
  if (name == "motorcycle") return Category::Motorcycle;
  if (name == "bicycle") return Category::Bicycle;
  if (name == "pedestrian") return Category::Pedestrian;
  if (name == "other") return Category::Other;
  throw std::invalid_argument("unknown category: " + name);
}

bool is_motor_vehicle(Category category) {
  switch (category) {
    case Category::Car:
    case Category::Truck:
    case Category::Bus:
    case Category::Motorcycle:
      return true;
    default:
      return false;
  }
}

void validate(const ObjectState& state) {
  require(std::isfinite(state.width_m) && state.width_m > 0.0, "width_m must be > 0");
  require(std::isfinite(state.height_m) && state.height_m > 0.0, "height_m must be > 0");
  require(std::isfinite(state.length_m) && state.length_m > 0.0, "length_m must be > 0");
  require(std::isfinite(state.forward_m), "forward_m must be finite");
  require(std::isfinite(state.right_m), "right_m must be finite");
  require(std::isfinite(state.vertical_m), "vertical_m must be finite");
  require(std::isfinite(state.yaw_rad), "yaw_rad must be finite");
  require(std::isfinite(state.t) && state.t >= 0.0, "t must be >= 0");
  if (state.confidence) {
    require(*state.confidence >= 0.0 && *state.confidence <= 1.0, "confidence must be in [0, 1]");
  }
  if (state.speed_mps) {
    require(std::isfinite(*state.speed_mps), "speed_mps must be finite");
  }
}

void validate(const RigGeometry& rig) {
  require(std::isfinite(rig.handlebar_offset_m) && rig.handlebar_offset_m >= 0.0,
          "handlebar_offset_m must be >= 0");
  require(std::isfinite(rig.bike_length_m) && rig.bike_length_m > 0.0,
          "bike_length_m must be > 0");
}

void validate(const CameraIntrinsics& intrinsics) {
  require(std::isfinite(intrinsics.fx) && intrinsics.fx > 0.0, "fx must be > 0");
  require(std::isfinite(intrinsics.fy) && intrinsics.fy > 0.0, "fy must be > 0");
  require(intrinsics.image_width_px > 0, "image_width_px must be > 0");
  require(intrinsics.image_height_px > 0, "image_height_px must be > 0");
  require(std::isfinite(intrinsics.cx) && intrinsics.cx >= 0.0 &&
              intrinsics.cx < intrinsics.image_width_px,
          "cx must be in [0, image_width_px)");
  require(std::isfinite(intrinsics.cy) && intrinsics.cy >= 0.0 &&
              intrinsics.cy < intrinsics.image_height_px,
          "cy must be in [0, image_height_px)");
}

const char* to_string(TrafficSide side) {
  return side == TrafficSide::LeftHand ? "left_hand" : "right_hand";
}

TrafficSide traffic_side_from_string(const std::string& name) {
  if (name == "left_hand") return TrafficSide::LeftHand;
  if (name == "right_hand") return TrafficSide::RightHand;
  throw std::invalid_argument("unknown traffic side: " + name);
}

double passing_distance(double right_m, double width_m, const RigGeometry& rig) {
  require(std::isfinite(width_m) && width_m > 0.0, "width_m must be > 0");
  require(std::isfinite(right_m), "right_m must be finite");
  return right_m - width_m / 2.0 - rig.handlebar_offset_m;
}

bool longitudinal_overlap(double forward_m, double length_m, const RigGeometry& rig) {
  require(std::isfinite(length_m) && length_m > 0.0, "length_m must be > 0");
  require(std::isfinite(forward_m), "forward_m must be finite");
  const double half_length = length_m / 2.0;
  return forward_m >= -half_length - rig.bike_length_m && forward_m <= half_length;
}

bool on_passing_side(double right_m, TrafficSide side) {
  require(std::isfinite(right_m), "right_m must be finite");
  return side == TrafficSide::LeftHand ? right_m >= 0.0 : right_m <= 0.0;
}

ImagePoint25D project(const Point3& p, const CameraIntrinsics& intrinsics) {
  if (!(p.z > 0.0)) {
    throw std::domain_error("cannot project a point at or behind the camera plane");
  }
  return ImagePoint25D{intrinsics.cx + intrinsics.fx * p.x / p.z,
                       intrinsics.cy + intrinsics.fy * p.y / p.z, p.z};
}

Point3 backproject(const ImagePoint25D& p, const CameraIntrinsics& intrinsics) {
  if (!(p.depth_m > 0.0)) {
    throw std::invalid_argument("depth_m must be > 0");
  }
  return Point3{(p.u - intrinsics.cx) / intrinsics.fx * p.depth_m,
                (p.v - intrinsics.cy) / intrinsics.fy * p.depth_m, p.depth_m};
}

bool in_fov(const ObjectState& state, const CameraIntrinsics& intrinsics) {
  if (!(state.forward_m > 0.0)) {
    return false;
  }
  const ImagePoint25D center =
      project(Point3{state.right_m, -state.vertical_m, state.forward_m}, intrinsics);
  return center.u >= 0.0 && center.u <= intrinsics.image_width_px && center.v >= 0.0 &&
         center.v <= intrinsics.image_height_px;
}

}  // namespace cpkit
