#include "air/rig.hpp"

#include <string>

#include "air/error.hpp"

namespace air {

void RigModel::check_state(const PanTiltState& s) const {
  if (!(s.alpha >= limits.pan_min && s.alpha <= limits.pan_max)) {
    throw Error(ErrorCode::limit, "pan angle " + std::to_string(rad2deg(s.alpha)) +
                                      " deg outside mechanical limits");
  }
  if (!(s.beta >= limits.tilt_min && s.beta <= limits.tilt_max)) {
    throw Error(ErrorCode::limit, "tilt angle " + std::to_string(rad2deg(s.beta)) +
                                      " deg outside mechanical limits");
  }
}

Mat3 pan_tilt_rotation(const RigModel& model, const PanTiltState& state) {
  model.check_state(state);
  return rotation_about_axis(model.tilt_axis, state.beta) *
         rotation_about_axis(model.pan_axis, state.alpha);
}

RigPose rig_pose(const RigModel& model, const PanTiltState& state) {
  RigPose pose;
  pose.front_to_world = {pan_tilt_rotation(model, state), Vec3::Zero()};
  pose.rear_to_world = pose.front_to_world * model.rear_to_front;
  pose.proj_to_world = pose.front_to_world * model.front_to_proj.inverse();
  return pose;
}

std::vector<CornerObservation> observe_corners(const CheckerboardTarget& target,
                                               const PinholeDevice& device,
                                               const RigidTransform& device_to_world,
                                               double noise_sigma, std::mt19937_64& rng) {
  target.validate();
  const RigidTransform world_to_device = device_to_world.inverse();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<CornerObservation> out;
  for (int idx = 0; idx < target.corner_count(); ++idx) {
    const Vec3 p = world_to_device.apply(target.corner_world(idx));
    // Draw for every corner so visibility does not shift the noise stream.
    const Vec3 n(gauss(rng), gauss(rng), gauss(rng));
    if (!(p.z() > 0.0)) continue;
    if (!device.in_image(project(device, p).pixel)) continue;
    out.push_back({idx, p + noise_sigma * n});
  }
  if (out.empty()) {
    throw Error(ErrorCode::empty_observation, "no checkerboard corner is visible");
  }
  return out;
}

std::vector<CornerObservation> observe_checkerboard(const CheckerboardTarget& target,
                                                    const RigModel& model,
                                                    const PanTiltState& state,
                                                    double noise_sigma, std::mt19937_64& rng) {
  return observe_corners(target, model.front_device, rig_pose(model, state).front_to_world,
                         noise_sigma, rng);
}

std::vector<CornerObservation> observe_checkerboard_rear(const CheckerboardTarget& target,
                                                         const RigModel& model,
                                                         const PanTiltState& state,
                                                         double noise_sigma, std::mt19937_64& rng) {
  return observe_corners(target, model.rear_device, rig_pose(model, state).rear_to_world,
                         noise_sigma, rng);
}

RigModel default_rig() {
  RigModel rig;
  // Pan axis ~3 deg off vertical, tilt axis not quite perpendicular to it.
  rig.pan_axis = UnitAxis::from(Vec3(0.035, 1.0, 0.038));
  rig.tilt_axis = UnitAxis::from(Vec3(1.0, -0.02, 0.03));

  rig.front_device = {525.0, 525.0, 319.5, 239.5, 0.0, 640, 480};
  rig.rear_device = {525.0, 525.0, 319.5, 239.5, 0.0, 640, 480};
  rig.proj_device = {1400.0, 1400.0, 959.5, 560.0, 0.0, 1920, 1080};

  // Rear camera looks backwards (optical axis along world -z at home).
  rig.rear_to_front =
      RigidTransform{rotation_about_axis(UnitAxis::from(Vec3(0.01, 1.0, -0.02)), kPi),
                     Vec3(0.0, -0.06, -0.05)};
  // Projector sits 8 cm right of and 4 cm above the front camera.
  const Vec3 proj_center(0.08, -0.04, 0.01);
  const Mat3 proj_to_front_rot = rotation_about_axis(UnitAxis::from(Vec3(0.3, -1.0, 0.2)), deg2rad(2.0));
  rig.front_to_proj = RigidTransform{proj_to_front_rot, proj_center}.inverse();
  return rig;
}

}  // namespace air
