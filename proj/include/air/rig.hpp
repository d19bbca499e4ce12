#pragma once

#include <random>
#include <vector>

#include "air/geometry.hpp"
#include "air/scene.hpp"

namespace air {

/// Pan angle alpha and tilt angle beta, radians.
struct PanTiltState {
  double alpha = 0.0;
  double beta = 0.0;
};

struct MechanicalLimits {
  double pan_min = -kPi / 2;
  double pan_max = kPi / 2;
  double tilt_min = -kPi / 2;
  double tilt_max = kPi / 2;
};

/// Pan/tilt platform carrying the front RGB-D camera, the rear (user-facing)
/// camera and the projector. Both motor axes are fixed in the world frame and
/// pass through its origin, which coincides with the front camera at home.
struct RigModel {
  UnitAxis pan_axis = UnitAxis::from(Vec3::UnitY());
  UnitAxis tilt_axis = UnitAxis::from(Vec3::UnitX());
  RigidTransform rear_to_front;  // rear-camera frame -> front-camera frame
  RigidTransform front_to_proj;  // front-camera frame -> projector frame
  PinholeDevice front_device;
  PinholeDevice rear_device;
  PinholeDevice proj_device;
  MechanicalLimits limits;

  /// Throws limit if the state is outside the mechanical range.
  void check_state(const PanTiltState& state) const;
};

/// World poses of the three devices for one motor state.
struct RigPose {
  RigidTransform front_to_world;
  RigidTransform rear_to_world;
  RigidTransform proj_to_world;
};

/// R(beta about tilt axis) * R(alpha about pan axis).
Mat3 pan_tilt_rotation(const RigModel& model, const PanTiltState& state);

RigPose rig_pose(const RigModel& model, const PanTiltState& state);

struct CornerObservation {
  int index = 0;
  Vec3 point;  // device frame, meters
};

/// Corners of `target` visible to a device (positive depth, inside the image),
/// expressed in the device frame with isotropic Gaussian noise. Throws
/// empty_observation when no corner is visible.
std::vector<CornerObservation> observe_corners(const CheckerboardTarget& target,
                                               const PinholeDevice& device,
                                               const RigidTransform& device_to_world,
                                               double noise_sigma, std::mt19937_64& rng);

/// Front-camera observation of a target at the given motor state.
std::vector<CornerObservation> observe_checkerboard(const CheckerboardTarget& target,
                                                    const RigModel& model,
                                                    const PanTiltState& state,
                                                    double noise_sigma, std::mt19937_64& rng);

/// Rear-camera observation of a target at the given motor state.
std::vector<CornerObservation> observe_checkerboard_rear(const CheckerboardTarget& target,
                                                         const RigModel& model,
                                                         const PanTiltState& state,
                                                         double noise_sigma, std::mt19937_64& rng);

/// Ground-truth rig used by the simulator: slightly skewed motor axes, a
/// user-facing rear camera and a projector offset from the front camera.
RigModel default_rig();

}  // namespace air
