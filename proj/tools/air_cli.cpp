// air: simulation, calibration, correction and evaluation runs from the shell.
//
// Failures print one line "error[<code>]: <message>" on stderr and exit 1;
// usage errors use the code "usage" and exit 2.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "air/pipeline.hpp"

namespace {

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int fail(std::string_view code, const std::string& message, int status = 1) {
  std::cerr << "error[" << code << "]: " << one_line(message) << "\n";
  return status;
}

air::EyePose parse_eye(const std::string& text) {
  std::istringstream in(text);
  double v[3];
  char sep = 0;
  if (!(in >> v[0] >> sep) || sep != ',' || !(in >> v[1] >> sep) || sep != ',' || !(in >> v[2]) ||
      !(in >> std::ws).eof()) {
    throw air::Error(air::ErrorCode::invalid_argument, "--eye expects x,y,z in meters, got '" + text + "'");
  }
  return {v[0], v[1], v[2]};
}

void report(const air::CommandOutput& out) {
  std::cout << out.summary;
  for (const auto& f : out.files) std::cout << "wrote " << (out.directory / f).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pan-tilt projector-camera simulation and distortion correction"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string eye;
  double pan = 0.0;
  double tilt = 0.0;
  bool no_correction = false;
  bool png = false;
  std::string session_path;
  std::string ground_truth;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (JSON)");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--out", out_dir, "Output directory");
  };
  auto view = [&](CLI::App* sub) {
    sub->add_option("--eye", eye, "Eye position x,y,z in meters, rear-camera frame");
    sub->add_option("--pan", pan, "Pan angle, degrees");
    sub->add_option("--tilt", tilt, "Tilt angle, degrees");
    sub->add_flag("--no-correction", no_correction, "Project the pass-1 image unwarped");
    sub->add_flag("--png", png, "Also write PNG images");
  };

  auto* sim = app.add_subcommand("simulate-calib", "Synthesize a calibration session");
  common(sim);
  auto* cal = app.add_subcommand("calibrate", "Calibrate from a session file");
  common(cal);
  cal->add_option("--session", session_path, "Session file (default <out>/session.json)");
  cal->add_option("--ground-truth", ground_truth, "Ground-truth rig file for error columns")
      ->check(CLI::ExistingFile);
  auto* cor = app.add_subcommand("correct", "Render pass 1 and the projector framebuffer");
  common(cor);
  view(cor);
  auto* eva = app.add_subcommand("evaluate", "Run the corner-dislocation benchmark");
  common(eva);
  view(eva);
  auto* ruv = app.add_subcommand("render-user-view", "Simulate what the user sees");
  common(ruv);
  view(ruv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    air::ConfigOverrides o;
    const auto given = [&](const char* name) {
      for (auto* sub : app.get_subcommands()) {
        const auto* opt = sub->get_option_no_throw(name);
        if (opt && opt->count() > 0) return true;
      }
      return false;
    };
    if (given("--seed")) o.seed = seed;
    if (given("--out")) o.output_dir = out_dir;
    if (given("--eye")) o.eye = parse_eye(eye);
    if (given("--pan")) o.pan_deg = pan;
    if (given("--tilt")) o.tilt_deg = tilt;
    o.no_correction = no_correction;

    std::optional<std::filesystem::path> cfg;
    if (!config_path.empty()) cfg = config_path;
    const air::io::SessionConfig config = air::resolve_config(cfg, o);
    const air::ImageOptions images{png};
    if (png && !air::png_supported()) {
      return fail(air::to_string(air::ErrorCode::io), "PNG output was not compiled in");
    }

    if (sim->parsed()) {
      report(air::cmd_simulate_calib(config));
    } else if (cal->parsed()) {
      const std::filesystem::path session =
          session_path.empty() ? config.output_dir / "session.json" : std::filesystem::path(session_path);
      std::optional<std::filesystem::path> gt;
      if (!ground_truth.empty()) gt = ground_truth;
      report(air::cmd_calibrate(config, session, gt));
    } else if (cor->parsed()) {
      report(air::cmd_correct(config, images));
    } else if (eva->parsed()) {
      report(air::cmd_evaluate(config, images));
    } else if (ruv->parsed()) {
      report(air::cmd_render_user_view(config, images));
    }
  } catch (const air::Error& e) {
    return fail(air::to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
