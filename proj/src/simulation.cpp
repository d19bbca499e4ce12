#include "air/simulation.hpp"

#include <random>

#include "air/error.hpp"

namespace air {

namespace {

std::vector<double> linspace_deg(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(deg2rad(lo + (hi - lo) * i / (n - 1)));
  return out;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

}  // namespace

CalibrationProtocol default_protocol() {
  CalibrationProtocol p;
  p.pan_angles = linspace_deg(-21.0, 21.0, 7);
  p.tilt_angles = linspace_deg(-18.0, 18.0, 7);

  p.axis_board.rows = 6;
  p.axis_board.cols = 9;
  p.axis_board.square_size = 0.04;
  p.axis_board.pose = {Mat3::Identity(), Vec3(-0.16, -0.10, 1.5)};

  // Board on the left wall: its x axis runs along world -z, its normal along +x.
  p.rear_board.rows = 6;
  p.rear_board.cols = 9;
  p.rear_board.square_size = 0.06;
  p.rear_board.pose = {rotation_about_axis(UnitAxis::from(Vec3::UnitY()), kPi / 2),
                       Vec3(-1.0, -0.15, 0.24)};
  p.rear_front_state = {deg2rad(-75.0), 0.0};
  p.rear_rear_state = {deg2rad(75.0), 0.0};

  p.projector_planes = {
      {Vec3(0.0, 0.0, 1.6), Vec3(0.0, 0.0, -1.0), 9, 6, 160.0},
      {Vec3(0.0, 0.0, 2.0), Vec3(std::sin(deg2rad(30.0)), 0.0, -std::cos(deg2rad(30.0))), 8, 5,
       180.0},
      {Vec3(0.0, 0.0, 2.4), Vec3(0.0, std::sin(deg2rad(-25.0)), -std::cos(deg2rad(25.0))), 10, 7,
       140.0},
  };
  return p;
}

ProjectorSamples simulate_projector_correspondences(const RigModel& truth,
                                                    const CalibrationProtocol& protocol) {
  ProjectorSamples out;
  out.clean.width = out.noisy.width = truth.proj_device.width;
  out.clean.height = out.noisy.height = truth.proj_device.height;
  auto rng = stream(protocol.seed, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Home pose: the front-camera frame is the world frame.
  const RigidTransform proj_to_front = truth.front_to_proj.inverse();
  const Vec2 center(truth.proj_device.width / 2.0, truth.proj_device.height / 2.0);
  for (std::size_t id = 0; id < protocol.projector_planes.size(); ++id) {
    const auto& plane = protocol.projector_planes[id];
    const Vec3 n = plane.normal.normalized();
    for (int i = 0; i < plane.grid_rows; ++i) {
      for (int j = 0; j < plane.grid_cols; ++j) {
        const Vec2 pixel = center + plane.spacing_px * Vec2(j - (plane.grid_cols - 1) / 2.0,
                                                            i - (plane.grid_rows - 1) / 2.0);
        const Vec3 noise(gauss(rng), gauss(rng), gauss(rng));
        const double depth_noise = gauss(rng);
        const Vec3 origin = proj_to_front.translation;
        const Vec3 dir = proj_to_front.apply_direction(pixel_ray(truth.proj_device, pixel));
        const double denom = n.dot(dir);
        if (std::abs(denom) < 1e-9) continue;
        const double t = n.dot(plane.point - origin) / denom;
        if (!(t > 0.0)) continue;
        const Vec3 p = origin + t * dir;
        if (!(p.z() > 0.0) || !truth.front_device.in_image(project(truth.front_device, p).pixel)) {
          continue;
        }
        Vec3 q = p + protocol.corner_sigma * noise;
        q *= (q.z() + protocol.depth_sigma * depth_noise) / q.z();
        out.clean.records.push_back({pixel, p, static_cast<int>(id)});
        out.noisy.records.push_back({pixel, q, static_cast<int>(id)});
      }
    }
  }
  return out;
}

CalibrationSession simulate_calibration_session(const RigModel& truth,
                                                const CalibrationProtocol& protocol) {
  CalibrationSession s;
  s.front_device = truth.front_device;
  s.rear_device = truth.rear_device;
  s.ground_truth = truth;

  auto axis_rng = stream(protocol.seed, 1);
  s.pan.which = MotorAxis::pan;
  for (double a : protocol.pan_angles) {
    s.pan.records.push_back({a, observe_checkerboard(protocol.axis_board, truth, {a, 0.0},
                                                     protocol.corner_sigma, axis_rng)});
  }
  s.tilt.which = MotorAxis::tilt;
  for (double b : protocol.tilt_angles) {
    s.tilt.records.push_back({b, observe_checkerboard(protocol.axis_board, truth, {0.0, b},
                                                      protocol.corner_sigma, axis_rng)});
  }

  auto rear_rng = stream(protocol.seed, 2);
  s.rear.front_state = protocol.rear_front_state;
  s.rear.front_corners = observe_checkerboard(protocol.rear_board, truth, protocol.rear_front_state,
                                              protocol.corner_sigma, rear_rng);
  s.rear.rear_state = protocol.rear_rear_state;
  s.rear.rear_corners = observe_checkerboard_rear(protocol.rear_board, truth,
                                                  protocol.rear_rear_state, protocol.corner_sigma,
                                                  rear_rng);

  s.projector = simulate_projector_correspondences(truth, protocol).noisy;
  return s;
}

}  // namespace air
