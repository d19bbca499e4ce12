#pragma once

#include <optional>
#include <string>
#include <vector>

#include "air/geometry.hpp"
#include "air/rig.hpp"

namespace air {

enum class MotorAxis { pan, tilt };

std::string_view to_string(MotorAxis axis);

/// Front-camera corner observations taken while rotating about one motor axis
/// with the other motor at zero.
struct AxisObservationSet {
  struct Record {
    double theta = 0.0;  // radians
    std::vector<CornerObservation> corners;
  };
  MotorAxis which = MotorAxis::pan;
  std::vector<Record> records;
};

struct AxisEstimate {
  UnitAxis axis;
  double rms = 0.0;  // meters, spread of reconstructed world corners
  int iterations = 0;
};

/// Least-squares motor axis: the axis under which all observations rotate
/// back onto one consistent set of world corners.
AxisEstimate estimate_axis(const AxisObservationSet& observations);

/// Mean-squared world-corner inconsistency for a candidate axis (the cost
/// minimized by estimate_axis), meters squared per observation.
double axis_consistency_cost(const AxisObservationSet& observations, const Vec3& axis);

struct RearRegistration {
  RigidTransform rear_to_front;
  double rms = 0.0;  // meters
};

/// Registers the rear camera from checkerboard corners in world coordinates
/// (obtained through the front camera) and the same corners seen by the rear
/// camera at `state`. Corners are matched by index.
RearRegistration register_rear_camera(const std::vector<CornerObservation>& world_corners,
                                      const std::vector<CornerObservation>& rear_corners,
                                      const PanTiltState& state, const UnitAxis& pan_axis,
                                      const UnitAxis& tilt_axis);

/// Projector pixel / front-camera point pairs gathered from projected
/// chessboards on several planes.
struct ProjectorCorrespondenceSet {
  struct Record {
    Vec2 pixel;  // projector image
    Vec3 point;  // front-camera frame, meters
    int plane_id = 0;
  };
  int width = 1920;  // projector resolution
  int height = 1080;
  std::vector<Record> records;
};

struct ProjectorCalibration {
  PinholeDevice intrinsics;
  RigidTransform front_to_proj;
  double rms_px = 0.0;      // after refinement
  double dlt_rms_px = 0.0;  // linear initialization
  int iterations = 0;
};

/// 3x4 projection matrix from normalized DLT, scaled to unit Frobenius norm.
Mat34 projection_dlt(const ProjectorCorrespondenceSet& correspondences);

struct ProjectionFactors {
  Mat3 intrinsics;  // upper triangular, positive diagonal, K(2,2) = 1
  RigidTransform pose;
};

/// Splits M = s * K [R | t] with det(R) = +1. Throws decomposition when the
/// factorization yields a non-positive focal length.
ProjectionFactors decompose_projection(const Mat34& m);

/// DLT, RQ decomposition and nonlinear refinement of projector intrinsics and
/// the front-camera-to-projector transform.
ProjectorCalibration calibrate_projector(const ProjectorCorrespondenceSet& correspondences);

/// RMS reprojection error (pixels) of the correspondences through a model.
double reprojection_rms(const ProjectorCorrespondenceSet& correspondences,
                        const PinholeDevice& intrinsics, const RigidTransform& front_to_proj);

struct RearRegistrationRecord {
  PanTiltState front_state;
  std::vector<CornerObservation> front_corners;  // front frame
  PanTiltState rear_state;
  std::vector<CornerObservation> rear_corners;   // rear frame
};

/// Everything gathered during one calibration run, plus optional ground truth.
struct CalibrationSession {
  PinholeDevice front_device;
  PinholeDevice rear_device;
  AxisObservationSet pan;
  AxisObservationSet tilt;
  RearRegistrationRecord rear;
  ProjectorCorrespondenceSet projector;
  std::optional<RigModel> ground_truth;
};

struct CalibrationResiduals {
  double pan_axis_rms_m = 0.0;
  double tilt_axis_rms_m = 0.0;
  double axis_rms_m = 0.0;  // larger of the two
  double rear_rms_m = 0.0;
  double proj_reproj_rms_px = 0.0;
  double proj_dlt_rms_px = 0.0;
};

/// Parameter errors against ground truth.
struct CalibrationErrors {
  double pan_axis_rad = 0.0;
  double tilt_axis_rad = 0.0;
  double rear_rotation_rad = 0.0;
  double rear_translation_m = 0.0;
  double proj_focal_rel = 0.0;      // max of |dfx|/fx, |dfy|/fy
  double proj_principal_px = 0.0;
  double proj_rotation_rad = 0.0;
  double proj_translation_m = 0.0;
};

struct CalibrationResult {
  UnitAxis pan_axis;
  UnitAxis tilt_axis;
  RigidTransform rear_to_front;
  PinholeDevice proj_intrinsics;
  RigidTransform front_to_proj;
  CalibrationResiduals residuals;
  std::optional<CalibrationErrors> errors;

  /// Rig assembled from the estimates and the known camera intrinsics.
  RigModel to_rig(const PinholeDevice& front, const PinholeDevice& rear) const;
};

CalibrationErrors compare_to_ground_truth(const CalibrationResult& result, const RigModel& truth);

/// Runs pan axis, tilt axis, rear registration and projector calibration in
/// that order. Failures keep their code and name the stage in the message.
CalibrationResult run_full_calibration(const CalibrationSession& session);

}  // namespace air
