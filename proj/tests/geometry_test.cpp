#include "cpkit/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "cpkit/rng.hpp"

namespace {

using namespace cpkit;

const RigGeometry kRig{};          // 0.5 m handlebar offset, 1.8 m bike
const CameraIntrinsics kCamera{};  // fx = fy = 1000, 1600x900, centered

TEST_CASE("passing distance matches hand-computed clearances") {
  CHECK(passing_distance(2.0, 2.0, kRig) == 0.5);  // 2.0 - 1.0 - 0.5, exact
  CHECK(passing_distance(1.4, 1.8, kRig) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(passing_distance(3.3, 1.6, kRig) == doctest::Approx(2.0).epsilon(1e-12));
  // Lateral overlap with the handlebar line reads negative.
  CHECK(passing_distance(0.4, 1.8, kRig) < 0.0);
}

TEST_CASE("passing distance rejects non-positive width") {
  CHECK_THROWS_AS(passing_distance(2.0, 0.0, kRig), std::invalid_argument);
  CHECK_THROWS_AS(passing_distance(2.0, -1.8, kRig), std::invalid_argument);
}

TEST_CASE("passing distance is affine in the lateral offset and width") {
  StreamRng rng(2024, 0);
  for (int i = 0; i < 1000; ++i) {
    const double right = rng.uniform(-5.0, 5.0);
    const double width = rng.uniform(0.5, 3.0);
    const double delta = rng.uniform(0.0, 2.0);
    const double base = passing_distance(right, width, kRig);
    CHECK(passing_distance(right + delta, width, kRig) ==
          doctest::Approx(base + delta).epsilon(1e-12));
    CHECK(passing_distance(right, width + delta, kRig) ==
          doctest::Approx(base - delta / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("longitudinal overlap interval is closed on both ends") {
  // Vehicle length 4.0: beside the bike for forward in [-3.8, 2.0].
  CHECK(longitudinal_overlap(0.0, 4.0, kRig));
  CHECK(longitudinal_overlap(2.0, 4.0, kRig));
  CHECK(longitudinal_overlap(-3.8, 4.0, kRig));
  CHECK_FALSE(longitudinal_overlap(-3.81, 4.0, kRig));
  CHECK_FALSE(longitudinal_overlap(std::nextafter(2.0, 3.0), 4.0, kRig));
  CHECK_FALSE(longitudinal_overlap(std::nextafter(-3.8, -4.0), 4.0, kRig));
  CHECK_FALSE(longitudinal_overlap(25.0, 4.0, kRig));
  CHECK_FALSE(longitudinal_overlap(-25.0, 4.0, kRig));
}

TEST_CASE("longitudinal overlap rejects non-positive length") {
  CHECK_THROWS_AS(longitudinal_overlap(0.0, 0.0, kRig), std::invalid_argument);
  CHECK_THROWS_AS(longitudinal_overlap(0.0, -4.0, kRig), std::invalid_argument);
}

TEST_CASE("overlap interval length equals vehicle length plus bike length") {
  StreamRng rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    const double length = rng.uniform(0.5, 15.0);
    const double lo = -length / 2.0 - kRig.bike_length_m;
    const double hi = length / 2.0;
    CHECK(longitudinal_overlap(lo, length, kRig));
    CHECK(longitudinal_overlap(hi, length, kRig));
    const double mid = rng.uniform(lo, hi);
    CHECK(longitudinal_overlap(mid, length, kRig));
    CHECK_FALSE(longitudinal_overlap(hi + 0.001, length, kRig));
    CHECK_FALSE(longitudinal_overlap(lo - 0.001, length, kRig));
  }
}

TEST_CASE("passing side includes the centerline and mirrors per traffic side") {
  CHECK(on_passing_side(0.0, TrafficSide::LeftHand));
  CHECK(on_passing_side(1.3, TrafficSide::LeftHand));
  CHECK_FALSE(on_passing_side(-0.5, TrafficSide::LeftHand));
  CHECK(on_passing_side(0.0, TrafficSide::RightHand));
  CHECK(on_passing_side(-0.5, TrafficSide::RightHand));
  CHECK_FALSE(on_passing_side(1.3, TrafficSide::RightHand));
}

TEST_CASE("projection reproduces hand-computed image points") {
  const ImagePoint25D a = project(Point3{2.0, 0.0, 10.0}, kCamera);
  CHECK(a.u == 1000.0);
  CHECK(a.v == 450.0);
  CHECK(a.depth_m == 10.0);

  const ImagePoint25D b = project(Point3{0.0, 0.0, 5.0}, kCamera);
  CHECK(b.u == 800.0);
  CHECK(b.v == 450.0);

  const ImagePoint25D c = project(Point3{-1.0, 1.0, 4.0}, kCamera);
  CHECK(c.u == 550.0);
  CHECK(c.v == 700.0);
  CHECK(c.depth_m == 4.0);
}

TEST_CASE("projection rejects points at or behind the camera plane") {
  CHECK_THROWS_AS(project(Point3{1.0, 1.0, 0.0}, kCamera), std::domain_error);
  CHECK_THROWS_AS(project(Point3{1.0, 1.0, -3.0}, kCamera), std::domain_error);
}

TEST_CASE("backprojection reproduces hand-computed points") {
  const Point3 a = backproject(ImagePoint25D{1000.0, 450.0, 10.0}, kCamera);
  CHECK(a.x == 2.0);
  CHECK(a.y == 0.0);
  CHECK(a.z == 10.0);

  const Point3 b = backproject(ImagePoint25D{800.0, 450.0, 7.0}, kCamera);
  CHECK(b.x == 0.0);
  CHECK(b.y == 0.0);

  CHECK_THROWS_AS(backproject(ImagePoint25D{800.0, 450.0, 0.0}, kCamera),
                  std::invalid_argument);
  CHECK_THROWS_AS(backproject(ImagePoint25D{800.0, 450.0, -2.0}, kCamera),
                  std::invalid_argument);
}

TEST_CASE("project then backproject recovers the point to 1e-9 relative") {
  StreamRng rng(99, 0);
  CameraIntrinsics wide = kCamera;
  wide.fx = 740.0;
  wide.fy = 910.0;
  wide.cx = 801.5;
  wide.cy = 449.25;
  for (int i = 0; i < 10000; ++i) {
    const Point3 p{rng.uniform(-50.0, 50.0), rng.uniform(-20.0, 20.0),
                   rng.uniform(0.1, 120.0)};
    const Point3 q = backproject(project(p, wide), wide);
    CHECK(std::abs(q.x - p.x) <= 1e-9 * std::max(1.0, std::abs(p.x)));
    CHECK(std::abs(q.y - p.y) <= 1e-9 * std::max(1.0, std::abs(p.y)));
    CHECK(q.z == p.z);
  }
}

TEST_CASE("fov keeps objects ahead of the camera that project inside the image") {
  ObjectState state;
  state.category = Category::Car;
  state.width_m = 1.8;
  state.height_m = 1.5;
  state.length_m = 4.2;

  state.forward_m = 10.0;
  state.right_m = 2.0;  // projects to u = 1000
  CHECK(in_fov(state, kCamera));

  state.right_m = 0.0;  // principal point
  CHECK(in_fov(state, kCamera));

  state.forward_m = -2.0;  // behind the camera
  CHECK_FALSE(in_fov(state, kCamera));
  state.forward_m = 0.0;  // on the camera plane
  CHECK_FALSE(in_fov(state, kCamera));

  state.forward_m = 0.5;  // abeam: projects far off the right edge
  state.right_m = 5.0;
  CHECK_FALSE(in_fov(state, kCamera));

  state.forward_m = 2.0;  // projects above the image
  state.right_m = 0.0;
  state.vertical_m = 2.0;
  CHECK_FALSE(in_fov(state, kCamera));
}

TEST_CASE("state and config validation rejects out-of-range fields") {
  ObjectState state;
  state.width_m = 1.8;
  state.height_m = 1.5;
  state.length_m = 4.2;
  CHECK_NOTHROW(validate(state));
  state.width_m = 0.0;
  CHECK_THROWS_AS(validate(state), std::invalid_argument);
  state.width_m = 1.8;
  state.t = -0.5;
  CHECK_THROWS_AS(validate(state), std::invalid_argument);
  state.t = 0.0;
  state.confidence = 1.5;
  CHECK_THROWS_AS(validate(state), std::invalid_argument);

  CameraIntrinsics intrinsics;
  CHECK_NOTHROW(validate(intrinsics));
  intrinsics.fx = 0.0;
  CHECK_THROWS_AS(validate(intrinsics), std::invalid_argument);
  intrinsics = CameraIntrinsics{};
  intrinsics.cx = 1600.0;  // must lie inside the image
  CHECK_THROWS_AS(validate(intrinsics), std::invalid_argument);

  RigGeometry rig;
  CHECK_NOTHROW(validate(rig));
  rig.bike_length_m = 0.0;
  CHECK_THROWS_AS(validate(rig), std::invalid_argument);
  rig = RigGeometry{};
  rig.handlebar_offset_m = -0.1;
  CHECK_THROWS_AS(validate(rig), std::invalid_argument);
}

TEST_CASE("category names round-trip and classify motor vehicles") {
  for (const Category category :
       {Category::Car, Category::Truck, Category::Bus, Category::Motorcycle,
        Category::Bicycle, Category::Pedestrian, Category::Other}) {
    CHECK(category_from_string(to_string(category)) == category);
  }
  CHECK(is_motor_vehicle(Category::Car));
  CHECK(is_motor_vehicle(Category::Truck));
  CHECK(is_motor_vehicle(Category::Bus));
  CHECK(is_motor_vehicle(Category::Motorcycle));
  CHECK_FALSE(is_motor_vehicle(Category::Bicycle));
  CHECK_FALSE(is_motor_vehicle(Category::Pedestrian));
  CHECK_FALSE(is_motor_vehicle(Category::Other));
  CHECK_THROWS_AS(category_from_string("tractor"), std::invalid_argument);
}

}  // namespace
