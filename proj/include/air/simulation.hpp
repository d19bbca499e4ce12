#pragma once

#include <cstdint>
#include <vector>

#include "air/calibration.hpp"
#include "air/rig.hpp"
#include "air/scene.hpp"

namespace air {

/// Planar surface used for projector calibration plus the projected
/// chessboard grid (inner-corner pixel lattice) shown on it.
struct ProjectorTargetPlane {
  Vec3 point;
  Vec3 normal;
  int grid_cols = 9;
  int grid_rows = 6;
  double spacing_px = 160.0;
};

struct CalibrationProtocol {
  std::vector<double> pan_angles;   // radians, tilt held at 0
  std::vector<double> tilt_angles;  // radians, pan held at 0
  CheckerboardTarget axis_board;    // fixed board seen while rotating
  CheckerboardTarget rear_board;    // seen by both cameras at different states
  PanTiltState rear_front_state;
  PanTiltState rear_rear_state;
  std::vector<ProjectorTargetPlane> projector_planes;
  double corner_sigma = 0.0;  // meters, isotropic
  double depth_sigma = 0.0;   // meters, along the front-camera z axis
  std::uint64_t seed = 0;
};

/// Seven angles per axis, a 6x9 board and three projector planes.
CalibrationProtocol default_protocol();

/// Synthesizes every observation a calibration run would collect from the
/// ground-truth rig. The ground truth is attached to the session.
CalibrationSession simulate_calibration_session(const RigModel& truth,
                                                const CalibrationProtocol& protocol);

/// Noise-free projector correspondences together with their noisy
/// counterparts (same pixels), for noise-floor estimates.
struct ProjectorSamples {
  ProjectorCorrespondenceSet clean;
  ProjectorCorrespondenceSet noisy;
};

ProjectorSamples simulate_projector_correspondences(const RigModel& truth,
                                                    const CalibrationProtocol& protocol);

}  // namespace air
