#include "air/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "air/error.hpp"
#include "air/optim.hpp"

namespace air {

std::string_view to_string(MotorAxis axis) { return axis == MotorAxis::pan ? "pan" : "tilt"; }

namespace {

struct Sample {
  int record = 0;
  Vec3 point;
};

/// Corner index -> observations across records, keeping corners seen at least twice.
std::map<int, std::vector<Sample>> corner_tracks(const AxisObservationSet& obs) {
  std::map<int, std::vector<Sample>> tracks;
  for (std::size_t k = 0; k < obs.records.size(); ++k) {
    for (const auto& c : obs.records[k].corners) {
      tracks[c.index].push_back({static_cast<int>(k), c.point});
    }
  }
  std::erase_if(tracks, [](const auto& kv) { return kv.second.size() < 2; });
  return tracks;
}

void check_axis_observations(const AxisObservationSet& obs) {
  std::set<double> angles;
  for (const auto& r : obs.records) angles.insert(r.theta);
  if (angles.size() < 3) {
    throw Error(ErrorCode::degenerate_configuration,
                "axis estimation needs observations at >= 3 distinct angles");
  }
  for (const auto& r : obs.records) {
    if (r.corners.size() < 4) {
      throw Error(ErrorCode::degenerate_configuration,
                  "axis estimation needs >= 4 corners per observation");
    }
  }
}

std::pair<Vec3, Vec3> tangent_basis(const Vec3& a) {
  const Vec3 helper = std::abs(a.x()) < 0.6 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = helper.cross(a).normalized();
  return {e1, a.cross(e1)};
}

Mat3 skew_matrix(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

/// Residuals R_a(theta_k) p_ki - mean_k(...) and, optionally, their derivative
/// with respect to a local step on the sphere around `a`.
void axis_residuals(const AxisObservationSet& obs, const std::map<int, std::vector<Sample>>& tracks,
                    const Vec3& a, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  std::size_t n = 0;
  for (const auto& [idx, track] : tracks) n += track.size();
  r.resize(static_cast<Eigen::Index>(3 * n));
  Eigen::Matrix<double, 3, 2> basis;
  if (jac) {
    jac->resize(static_cast<Eigen::Index>(3 * n), 2);
    const auto [e1, e2] = tangent_basis(a);
    basis.col(0) = e1;
    basis.col(1) = e2;
  }
  const UnitAxis axis = UnitAxis::from(a);
  std::vector<Mat3> rotations;
  rotations.reserve(obs.records.size());
  for (const auto& rec : obs.records) rotations.push_back(rotation_about_axis(axis, rec.theta));

  Eigen::Index row = 0;
  std::vector<Vec3> world;
  std::vector<Mat3> deriv;
  for (const auto& [idx, track] : tracks) {
    world.clear();
    deriv.clear();
    Vec3 mean = Vec3::Zero();
    Mat3 mean_d = Mat3::Zero();
    for (const auto& s : track) {
      const Vec3 w = rotations[s.record] * s.point;
      world.push_back(w);
      mean += w;
      if (jac) {
        const double theta = obs.records[s.record].theta;
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        const Vec3& p = s.point;
        // d(R_a p)/da for R_a p = c p + (1 - c)(a.p) a + s (a x p)
        const Mat3 d = (1.0 - c) * (a * p.transpose() + a.dot(p) * Mat3::Identity()) -
                       sn * skew_matrix(p);
        deriv.push_back(d);
        mean_d += d;
      }
    }
    const double inv = 1.0 / static_cast<double>(track.size());
    mean *= inv;
    mean_d *= inv;
    for (std::size_t k = 0; k < track.size(); ++k) {
      r.segment<3>(row) = world[k] - mean;
      if (jac) jac->block<3, 2>(row, 0) = (deriv[k] - mean_d) * basis;
      row += 3;
    }
  }
}

Vec3 initial_axis(const std::map<int, std::vector<Sample>>& tracks) {
  // Each corner's front-frame trajectory lies on a circle in a plane
  // perpendicular to the axis.
  Vec3 sum = Vec3::Zero();
  Vec3 reference = Vec3::Zero();
  bool usable = false;
  for (const auto& [idx, track] : tracks) {
    if (track.size() < 3) continue;
    Vec3 c = Vec3::Zero();
    for (const auto& s : track) c += s.point;
    c /= static_cast<double>(track.size());
    Eigen::MatrixXd m(track.size(), 3);
    for (std::size_t k = 0; k < track.size(); ++k) m.row(k) = (track[k].point - c).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const auto sv = svd.singularValues();
    if (sv(0) < 1e-9) continue;  // corner on the axis: trajectory is a point
    Vec3 n = svd.matrixV().col(2);
    if (!usable) {
      reference = n;
      usable = true;
    }
    if (n.dot(reference) < 0.0) n = -n;
    sum += sv(1) * n;
  }
  if (!usable || !(sum.norm() > 0.0)) {
    throw Error(ErrorCode::degenerate_configuration,
                "corner trajectories do not move under rotation (corners on the axis)");
  }
  return sum.normalized();
}

}  // namespace

double axis_consistency_cost(const AxisObservationSet& observations, const Vec3& axis) {
  const auto tracks = corner_tracks(observations);
  Eigen::VectorXd r;
  axis_residuals(observations, tracks, axis.normalized(), r, nullptr);
  if (r.size() == 0) return 0.0;
  return r.squaredNorm() / (static_cast<double>(r.size()) / 3.0);
}

AxisEstimate estimate_axis(const AxisObservationSet& observations) {
  check_axis_observations(observations);
  const auto tracks = corner_tracks(observations);
  if (tracks.empty()) {
    throw Error(ErrorCode::degenerate_configuration, "no corner is observed at two angles");
  }
  Vec3 a = initial_axis(tracks);

  auto cost_of = [&](const Vec3& axis) {
    Eigen::VectorXd r;
    axis_residuals(observations, tracks, axis, r, nullptr);
    return r.squaredNorm();
  };
  // The plane normal is sign-free; the rotation sense picks the sign.
  if (cost_of(-a) < cost_of(a)) a = -a;

  const ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r,
                                        Eigen::MatrixXd* jac) {
    axis_residuals(observations, tracks, Vec3(x), r, jac);
  };
  const Retraction retract = [](const Eigen::VectorXd& x, const Eigen::VectorXd& step) {
    const Vec3 a0(x);
    const auto [e1, e2] = tangent_basis(a0);
    return Eigen::VectorXd((a0 + step[0] * e1 + step[1] * e2).normalized());
  };
  const LmResult lm = levenberg_marquardt(residual, Eigen::VectorXd(a), 2, {}, retract);
  if (!lm.converged) {
    throw ConvergenceError("axis refinement did not converge in 100 iterations",
                           {lm.params[0], lm.params[1], lm.params[2]});
  }

  std::size_t n = 0;
  for (const auto& [idx, track] : tracks) n += track.size();
  AxisEstimate out;
  out.axis = UnitAxis::from(Vec3(lm.params));
  out.rms = std::sqrt(lm.cost / static_cast<double>(n));
  out.iterations = lm.iterations;
  return out;
}

RearRegistration register_rear_camera(const std::vector<CornerObservation>& world_corners,
                                      const std::vector<CornerObservation>& rear_corners,
                                      const PanTiltState& state, const UnitAxis& pan_axis,
                                      const UnitAxis& tilt_axis) {
  std::map<int, Vec3> world_by_index;
  for (const auto& c : world_corners) world_by_index[c.index] = c.point;
  std::vector<Vec3> src;
  std::vector<Vec3> dst;
  for (const auto& c : rear_corners) {
    const auto it = world_by_index.find(c.index);
    if (it == world_by_index.end()) continue;
    src.push_back(c.point);
    dst.push_back(it->second);
  }
  const Alignment rear_to_world = rigid_align(src, dst);
  const Mat3 motor = rotation_about_axis(tilt_axis, state.beta) * rotation_about_axis(pan_axis, state.alpha);
  const RigidTransform world_to_front{motor.transpose(), Vec3::Zero()};
  return {world_to_front * rear_to_world.transform, rear_to_world.rms};
}

namespace {

void check_projector_set(const ProjectorCorrespondenceSet& set) {
  const std::size_t n = set.records.size();
  if (n < 6) {
    throw Error(ErrorCode::underdetermined,
                "projector calibration needs >= 6 correspondences (11 DOF), got " +
                    std::to_string(n));
  }
  // All points on one plane make the DLT rank deficient.
  Vec3 c = Vec3::Zero();
  for (const auto& r : set.records) c += r.point;
  c /= static_cast<double>(n);
  Mat3 spread = Mat3::Zero();
  for (const auto& r : set.records) spread += (r.point - c) * (r.point - c).transpose();
  Eigen::JacobiSVD<Mat3> svd(spread);
  if (svd.singularValues()(2) <= 1e-12 * svd.singularValues()(0)) {
    throw Error(ErrorCode::degenerate_configuration, "projector correspondences are coplanar");
  }
  std::map<int, std::vector<Vec3>> planes;
  for (const auto& r : set.records) planes[r.plane_id].push_back(r.point);
  std::vector<Vec3> normals;
  for (const auto& [id, pts] : planes) {
    if (pts.size() < 3) continue;
    Vec3 pc = Vec3::Zero();
    for (const auto& p : pts) pc += p;
    pc /= static_cast<double>(pts.size());
    Mat3 s = Mat3::Zero();
    for (const auto& p : pts) s += (p - pc) * (p - pc).transpose();
    Eigen::JacobiSVD<Mat3> psvd(s, Eigen::ComputeFullU);
    normals.push_back(psvd.matrixU().col(2));
  }
  bool oriented = false;
  for (std::size_t i = 0; i < normals.size() && !oriented; ++i) {
    for (std::size_t j = i + 1; j < normals.size(); ++j) {
      if (std::abs(normals[i].dot(normals[j])) < std::cos(deg2rad(1.0))) {
        oriented = true;
        break;
      }
    }
  }
  if (!oriented) {
    throw Error(ErrorCode::degenerate_configuration,
                "projector correspondences need >= 2 non-parallel planes");
  }
}

Vec2 project_unchecked(const Mat3& k, const RigidTransform& pose, const Vec3& p, bool& behind) {
  const Vec3 q = pose.apply(p);
  if (!(q.z() > 0.0)) behind = true;
  const Vec3 h = k * q;
  return h.head<2>() / h.z();
}

Mat3 intrinsics_from_params(const Eigen::VectorXd& x) {
  Mat3 k;
  k << x[0], x[4], x[2],
       0.0, x[1], x[3],
       0.0, 0.0, 1.0;
  return k;
}

RigidTransform pose_from_params(const Eigen::VectorXd& x) {
  return {rotation_from_vector(Vec3(x[5], x[6], x[7])), Vec3(x[8], x[9], x[10])};
}

}  // namespace

Mat34 projection_dlt(const ProjectorCorrespondenceSet& set) {
  const std::size_t n = set.records.size();
  if (n < 6) {
    throw Error(ErrorCode::underdetermined, "DLT needs >= 6 correspondences");
  }
  Vec2 pc = Vec2::Zero();
  Vec3 xc = Vec3::Zero();
  for (const auto& r : set.records) {
    pc += r.pixel;
    xc += r.point;
  }
  pc /= static_cast<double>(n);
  xc /= static_cast<double>(n);
  double pd = 0.0;
  double xd = 0.0;
  for (const auto& r : set.records) {
    pd += (r.pixel - pc).norm();
    xd += (r.point - xc).norm();
  }
  const double ps = std::sqrt(2.0) * static_cast<double>(n) / pd;
  const double xs = std::sqrt(3.0) * static_cast<double>(n) / xd;

  Mat3 t_pix = Mat3::Identity();
  t_pix(0, 0) = t_pix(1, 1) = ps;
  t_pix.topRightCorner<2, 1>() = -ps * pc;
  Mat4 t_pt = Mat4::Identity();
  t_pt.topLeftCorner<3, 3>() *= xs;
  t_pt.topRightCorner<3, 1>() = -xs * xc;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), 12);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = ps * (set.records[i].pixel - pc);
    Eigen::RowVector4d p;
    p << (xs * (set.records[i].point - xc)).transpose(), 1.0;
    const auto row = static_cast<Eigen::Index>(2 * i);
    a.block<1, 4>(row, 0) = p;
    a.block<1, 4>(row, 8) = -u.x() * p;
    a.block<1, 4>(row + 1, 4) = p;
    a.block<1, 4>(row + 1, 8) = -u.y() * p;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(11);
  Mat34 mn;
  mn << h.segment<4>(0).transpose(), h.segment<4>(4).transpose(), h.segment<4>(8).transpose();
  Mat34 m = t_pix.inverse() * mn * t_pt;
  return m / m.norm();
}

ProjectionFactors decompose_projection(const Mat34& m_in) {
  Mat34 m = m_in;
  Mat3 b = m.leftCols<3>();
  const double det = b.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300) {
    throw Error(ErrorCode::decomposition, "projection matrix has a singular 3x3 block");
  }
  if (det < 0.0) {
    m = -m;
    b = -b;
  }
  // RQ through QR of the row-reversed transpose.
  Mat3 flip = Mat3::Zero();
  flip(0, 2) = flip(1, 1) = flip(2, 0) = 1.0;
  Eigen::HouseholderQR<Mat3> qr((flip * b).transpose());
  const Mat3 q = qr.householderQ();
  const Mat3 r = qr.matrixQR().triangularView<Eigen::Upper>();
  Mat3 k = flip * r.transpose() * flip;
  Mat3 rot = flip * q.transpose();
  for (int i = 0; i < 3; ++i) {
    if (k(i, i) < 0.0) {
      k.col(i) = -k.col(i);
      rot.row(i) = -rot.row(i);
    }
  }
  const Vec3 t = k.triangularView<Eigen::Upper>().solve(Vec3(m.col(3)));
  k /= k(2, 2);
  if (!(k(0, 0) > 0.0) || !(k(1, 1) > 0.0) || rot.determinant() < 0.0) {
    throw Error(ErrorCode::decomposition, "projection decomposition gave a non-positive focal length");
  }
  return {k, {rot, t}};
}

double reprojection_rms(const ProjectorCorrespondenceSet& set, const PinholeDevice& intrinsics,
                        const RigidTransform& front_to_proj) {
  if (set.records.empty()) return 0.0;
  const Mat3 k = intrinsics.intrinsic_matrix();
  double sq = 0.0;
  bool behind = false;
  for (const auto& r : set.records) {
    sq += (project_unchecked(k, front_to_proj, r.point, behind) - r.pixel).squaredNorm();
  }
  return std::sqrt(sq / static_cast<double>(set.records.size()));
}

ProjectorCalibration calibrate_projector(const ProjectorCorrespondenceSet& set) {
  check_projector_set(set);
  const ProjectionFactors init = decompose_projection(projection_dlt(set));

  Eigen::VectorXd x0(11);
  const Vec3 rv = rotation_vector(init.pose.rotation);
  x0 << init.intrinsics(0, 0), init.intrinsics(1, 1), init.intrinsics(0, 2), init.intrinsics(1, 2),
      init.intrinsics(0, 1), rv, init.pose.translation;

  const std::size_t n = set.records.size();
  const Retraction retract = [](const Eigen::VectorXd& x, const Eigen::VectorXd& step) {
    Eigen::VectorXd y = x + step;
    const Mat3 r = rotation_from_vector(step.segment<3>(5)) *
                   rotation_from_vector(Vec3(x.segment<3>(5)));
    y.segment<3>(5) = rotation_vector(r);
    return y;
  };
  ResidualFunction residual;
  residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const Mat3 k = intrinsics_from_params(x);
    const RigidTransform pose = pose_from_params(x);
    r.resize(static_cast<Eigen::Index>(2 * n));
    bool behind = false;
    for (std::size_t i = 0; i < n; ++i) {
      r.segment<2>(static_cast<Eigen::Index>(2 * i)) =
          project_unchecked(k, pose, set.records[i].point, behind) - set.records[i].pixel;
    }
    if (behind) r.setConstant(1e6);
    if (jac) {
      Eigen::VectorXd h(11);
      for (int i = 0; i < 5; ++i) h[i] = 1e-6 * std::max(1.0, std::abs(x[i]));
      for (int i = 5; i < 11; ++i) h[i] = 1e-7;
      *jac = numeric_jacobian(residual, x, 11, h, retract);
    }
  };

  Eigen::VectorXd r0;
  residual(x0, r0, nullptr);
  const LmResult lm = levenberg_marquardt(residual, x0, 11, {}, retract);

  ProjectorCalibration out;
  const Mat3 k = intrinsics_from_params(lm.params);
  out.intrinsics = PinholeDevice::from_matrix(k, set.width, set.height);
  out.front_to_proj = pose_from_params(lm.params);
  out.dlt_rms_px = std::sqrt(r0.squaredNorm() / static_cast<double>(n));
  out.rms_px = std::sqrt(lm.cost / static_cast<double>(n));
  out.iterations = lm.iterations;
  if (!(out.intrinsics.fx > 0.0) || !(out.intrinsics.fy > 0.0)) {
    throw Error(ErrorCode::decomposition, "refinement produced a non-positive focal length");
  }
  return out;
}

RigModel CalibrationResult::to_rig(const PinholeDevice& front, const PinholeDevice& rear) const {
  RigModel rig;
  rig.pan_axis = pan_axis;
  rig.tilt_axis = tilt_axis;
  rig.rear_to_front = rear_to_front;
  rig.front_to_proj = front_to_proj;
  rig.front_device = front;
  rig.rear_device = rear;
  rig.proj_device = proj_intrinsics;
  return rig;
}

CalibrationErrors compare_to_ground_truth(const CalibrationResult& result, const RigModel& truth) {
  CalibrationErrors e;
  e.pan_axis_rad = angle_between(result.pan_axis.direction(), truth.pan_axis.direction());
  e.tilt_axis_rad = angle_between(result.tilt_axis.direction(), truth.tilt_axis.direction());
  e.rear_rotation_rad = rotation_distance(result.rear_to_front.rotation, truth.rear_to_front.rotation);
  e.rear_translation_m = (result.rear_to_front.translation - truth.rear_to_front.translation).norm();
  const auto& p = result.proj_intrinsics;
  const auto& q = truth.proj_device;
  e.proj_focal_rel = std::max(std::abs(p.fx - q.fx) / q.fx, std::abs(p.fy - q.fy) / q.fy);
  e.proj_principal_px = std::hypot(p.cx - q.cx, p.cy - q.cy);
  e.proj_rotation_rad = rotation_distance(result.front_to_proj.rotation, truth.front_to_proj.rotation);
  e.proj_translation_m = (result.front_to_proj.translation - truth.front_to_proj.translation).norm();
  return e;
}

namespace {

template <typename F>
auto run_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(stage) + ": " + e.what(), e.best_iterate());
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace

CalibrationResult run_full_calibration(const CalibrationSession& session) {
  auto require = [](bool ok, const char* stage, const char* what) {
    if (!ok) throw Error(ErrorCode::stage, std::string(stage) + ": " + what);
  };
  require(!session.pan.records.empty(), "pan axis", "no observations");
  require(!session.tilt.records.empty(), "tilt axis", "no observations");
  require(!session.rear.front_corners.empty() && !session.rear.rear_corners.empty(),
          "rear camera", "no registration corners");
  require(!session.projector.records.empty(), "projector", "no correspondences");

  CalibrationResult result;
  const AxisEstimate pan = run_stage("pan axis", [&] { return estimate_axis(session.pan); });
  const AxisEstimate tilt = run_stage("tilt axis", [&] { return estimate_axis(session.tilt); });
  result.pan_axis = pan.axis;
  result.tilt_axis = tilt.axis;

  const RearRegistration rear = run_stage("rear camera", [&] {
    // Front-camera corners lifted to world coordinates with the new axes.
    const auto& fs = session.rear.front_state;
    const Mat3 motor = rotation_about_axis(tilt.axis, fs.beta) * rotation_about_axis(pan.axis, fs.alpha);
    std::vector<CornerObservation> world;
    world.reserve(session.rear.front_corners.size());
    for (const auto& c : session.rear.front_corners) world.push_back({c.index, motor * c.point});
    return register_rear_camera(world, session.rear.rear_corners, session.rear.rear_state,
                                pan.axis, tilt.axis);
  });
  result.rear_to_front = rear.rear_to_front;

  const ProjectorCalibration proj =
      run_stage("projector", [&] { return calibrate_projector(session.projector); });
  result.proj_intrinsics = proj.intrinsics;
  result.front_to_proj = proj.front_to_proj;

  result.residuals.pan_axis_rms_m = pan.rms;
  result.residuals.tilt_axis_rms_m = tilt.rms;
  result.residuals.axis_rms_m = std::max(pan.rms, tilt.rms);
  result.residuals.rear_rms_m = rear.rms;
  result.residuals.proj_reproj_rms_px = proj.rms_px;
  result.residuals.proj_dlt_rms_px = proj.dlt_rms_px;
  if (session.ground_truth) result.errors = compare_to_ground_truth(result, *session.ground_truth);
  return result;
}

}  // namespace air
