#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "air/calibration.hpp"
#include "air/evaluation.hpp"
#include "air/io.hpp"
#include "air/pipeline.hpp"

namespace py = pybind11;
using namespace air;

namespace {

CornerSet corner_set(const std::vector<std::pair<int, Vec2>>& corners) {
  return CornerSet{corners, 0, 0};
}

py::dict command_output(const CommandOutput& out) {
  py::dict d;
  d["directory"] = out.directory;
  d["files"] = out.files;
  d["summary"] = out.summary;
  return d;
}

io::SessionConfig config_for(const std::optional<std::filesystem::path>& config,
                             std::optional<std::uint64_t> seed,
                             const std::optional<std::filesystem::path>& out,
                             const std::optional<Vec3>& eye, std::optional<double> pan,
                             std::optional<double> tilt, bool no_correction) {
  ConfigOverrides o;
  o.seed = seed;
  o.output_dir = out;
  if (eye) o.eye = EyePose{eye->x(), eye->y(), eye->z()};
  o.pan_deg = pan;
  o.tilt_deg = tilt;
  o.no_correction = no_correction;
  return resolve_config(config, o);
}

}  // namespace

PYBIND11_MODULE(_air, m) {
  m.doc() = "Pan-tilt projector-camera simulation, calibration and distortion correction";

  static py::exception<Error> air_error(m, "AirError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = air_error;
      py::object exc = err(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(err.ptr(), exc.ptr());
    }
  });

  py::class_<RigidTransform>(m, "RigidTransform")
      .def(py::init<>())
      .def(py::init([](const Mat3& r, const Vec3& t) { return RigidTransform::from_matrix(r, t); }),
           py::arg("rotation"), py::arg("translation"))
      .def_static("from_axis_angle", &RigidTransform::from_axis_angle, py::arg("axis"),
                  py::arg("theta"), py::arg("translation") = Vec3::Zero())
      .def_readwrite("rotation", &RigidTransform::rotation)
      .def_readwrite("translation", &RigidTransform::translation)
      .def("apply", &RigidTransform::apply)
      .def("apply_direction", &RigidTransform::apply_direction)
      .def("inverse", &RigidTransform::inverse)
      .def("matrix", &RigidTransform::matrix)
      .def("__mul__", [](const RigidTransform& a, const RigidTransform& b) { return a * b; });

  m.def("rotation_about_axis", py::overload_cast<const Vec3&, double>(&rotation_about_axis),
        py::arg("axis"), py::arg("theta"));
  m.def("rotation_vector", &rotation_vector);
  m.def("rotation_from_vector", &rotation_from_vector);
  m.def("rotation_distance", &rotation_distance);

  py::class_<PinholeDevice>(m, "PinholeDevice")
      .def(py::init([](double fx, double fy, double cx, double cy, int w, int h, double skew) {
             PinholeDevice d{fx, fy, cx, cy, skew, w, h};
             d.validate();
             return d;
           }),
           py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"),
           py::arg("height"), py::arg("skew") = 0.0)
      .def_readonly("fx", &PinholeDevice::fx)
      .def_readonly("fy", &PinholeDevice::fy)
      .def_readonly("cx", &PinholeDevice::cx)
      .def_readonly("cy", &PinholeDevice::cy)
      .def_readonly("skew", &PinholeDevice::skew)
      .def_readonly("width", &PinholeDevice::width)
      .def_readonly("height", &PinholeDevice::height)
      .def("intrinsic_matrix", &PinholeDevice::intrinsic_matrix)
      .def("project",
           [](const PinholeDevice& d, const Vec3& p) {
             const Projection pr = project(d, p);
             return std::make_pair(pr.pixel, pr.depth);
           })
      .def("backproject", [](const PinholeDevice& d, const Vec2& px, double z) { return backproject(d, px, z); })
      .def("pixel_ray", [](const PinholeDevice& d, const Vec2& px) { return pixel_ray(d, px); });

  m.def("user_projection_matrix",
        [](const Vec3& eye) { return user_projection_matrix({eye.x(), eye.y(), eye.z()}); },
        py::arg("eye"));

  py::class_<UprMatrix>(m, "UprMatrix")
      .def(py::init([](const Vec3& eye, const RigidTransform& world_to_rear) {
             return UprMatrix({eye.x(), eye.y(), eye.z()}, world_to_rear);
           }),
           py::arg("eye"), py::arg("world_to_rear") = RigidTransform{})
      .def("matrix", &UprMatrix::matrix)
      .def("user_matrix", &UprMatrix::user_matrix)
      .def("eye_world", &UprMatrix::eye_world)
      .def("image", &UprMatrix::image)
      .def("screen_point_world", &UprMatrix::screen_point_world);

  m.def(
      "corner_dislocation",
      [](const std::vector<std::pair<int, Vec2>>& base, const std::vector<std::pair<int, Vec2>>& test) {
        const Dislocation d = corner_dislocation(corner_set(base), corner_set(test));
        return py::make_tuple(d.mean_px, d.per_corner, d.unresolved);
      },
      py::arg("base"), py::arg("test"),
      "Mean pixel distance over shared indices, per-corner distances and unmatched indices.");

  m.def("scene_variants", [] {
    std::vector<std::string> names;
    for (int v = 0; v <= static_cast<int>(SceneVariant::frontal_steps); ++v) {
      names.emplace_back(to_string(static_cast<SceneVariant>(v)));
    }
    return names;
  });

  m.def("default_rig_json", [] { return io::rig_to_json(default_rig()).dump(); });
  m.def("calibrate_session_json", [](const std::filesystem::path& session) {
    return io::result_to_json(run_full_calibration(io::load_session(session))).dump();
  });

  m.def(
      "simulate_calib",
      [](std::optional<std::filesystem::path> config, std::optional<std::uint64_t> seed,
         std::optional<std::filesystem::path> out) {
        return command_output(cmd_simulate_calib(config_for(config, seed, out, {}, {}, {}, false)));
      },
      py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("out") = py::none());
  m.def(
      "calibrate",
      [](std::filesystem::path session, std::optional<std::filesystem::path> config,
         std::optional<std::filesystem::path> out, std::optional<std::filesystem::path> ground_truth) {
        return command_output(cmd_calibrate(config_for(config, {}, out, {}, {}, {}, false), session, ground_truth));
      },
      py::arg("session"), py::arg("config") = py::none(), py::arg("out") = py::none(),
      py::arg("ground_truth") = py::none());

  auto view_command = [&m](const char* name, CommandOutput (*fn)(const io::SessionConfig&, const ImageOptions&)) {
    m.def(
        name,
        [fn](std::optional<std::filesystem::path> config, std::optional<std::uint64_t> seed,
             std::optional<std::filesystem::path> out, std::optional<Vec3> eye, std::optional<double> pan,
             std::optional<double> tilt, bool no_correction, bool png) {
          const auto cfg = config_for(config, seed, out, eye, pan, tilt, no_correction);
          CommandOutput result;
          {
            py::gil_scoped_release release;
            result = fn(cfg, ImageOptions{png});
          }
          return command_output(result);
        },
        py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("out") = py::none(),
        py::arg("eye") = py::none(), py::arg("pan") = py::none(), py::arg("tilt") = py::none(),
        py::arg("no_correction") = false, py::arg("png") = false);
  };
  view_command("correct", &cmd_correct);
  view_command("evaluate", &cmd_evaluate);
  view_command("render_user_view", &cmd_render_user_view);
}
