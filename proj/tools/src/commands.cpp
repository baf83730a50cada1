#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "labmech/error.hpp"
#include "labmech/number_format.hpp"
#include "labmech/progress_score.hpp"
#include "labmech_cli/cli.hpp"
#include "labmech_cli/config.hpp"
#include "labmech_cli/inputs.hpp"
#include "labmech_cli/manifest.hpp"

namespace labmech::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Maps library error codes to exit statuses for one command.
using ErrorMap = std::function<int(const Error&)>;

int invalid_only(const Error&) { return kExitInvalid; }

int mesh_errors(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotWatertight: return kExitSolver;
    case ErrorCode::VolumeOutOfRange: return kExitVolume;
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError: return kExitInvalid;
    default: return kExitFailure;
  }
}

std::optional<LoadedConfig> load_config(const std::string& path, RunManifest* manifest) {
  if (path.empty()) return std::nullopt;
  const std::string bytes = read_file_bytes(path);
  if (manifest) manifest->add_input(path, bytes);
  return parse_config(bytes, path);
}

json section_of(const std::optional<LoadedConfig>& config, const std::string& name,
                const std::vector<std::string>& keys) {
  return config ? section(*config, name, keys) : json::object();
}

Vec3 vec3_from(const std::string& text, std::string_view what) {
  const std::vector<double> v = parse_number_list(text, what);
  if (v.size() != 3) throw Failure(kExitInvalid, std::string(what) + ": expected three numbers");
  return {v[0], v[1], v[2]};
}

Vec3 unit_normal(const std::string& text) {
  const Vec3 n = vec3_from(text, "--normal");
  const double len = norm(n);
  if (!(len > 0.0) || !std::isfinite(len)) throw Failure(kExitInvalid, "--normal must be a non-zero vector");
  return n / len;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

// ---------------------------------------------------------------------------

struct HelixFlags {
  std::string config;
  std::optional<double> r1, r2, p, l, h;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "Configuration document (helix section)");
    cmd->add_option("--r1", r1, "Helix radius");
    cmd->add_option("--r2", r2, "Wire radius");
    cmd->add_option("--pitch", p, "Axial advance per radian");
    cmd->add_option("--low", l, "Lower bound in turns");
    cmd->add_option("--high", h, "Upper bound in turns");
  }

  HelixSpec resolve(const std::optional<LoadedConfig>& loaded) const {
    const json s = section_of(loaded, "helix", {"r1", "r2", "p", "l", "h"});
    HelixSpec spec;
    spec.r1 = r1.value_or(number_or(s, "r1", NAN));
    spec.r2 = r2.value_or(number_or(s, "r2", NAN));
    spec.p = p.value_or(number_or(s, "p", NAN));
    spec.l = l.value_or(number_or(s, "l", NAN));
    spec.h = h.value_or(number_or(s, "h", NAN));
    (void)HelixThread(spec);
    return spec;
  }
};

json helix_json(const HelixSpec& s) {
  return {{"r1", s.r1}, {"r2", s.r2}, {"p", s.p}, {"l", s.l}, {"h", s.h}};
}

// sdf-grid ------------------------------------------------------------------

struct SdfGridArgs {
  HelixFlags helix;
  std::string min_corner, max_corner, resolution, out;
};

int cmd_sdf_grid(const SdfGridArgs& a, std::ostream& out) {
  RunManifest manifest("sdf-grid");
  const auto loaded = load_config(a.helix.config, &manifest);
  const HelixSpec spec = a.helix.resolve(loaded);
  const HelixThread helix(spec);

  const Vec3 lo = vec3_from(a.min_corner, "--min");
  const Vec3 hi = vec3_from(a.max_corner, "--max");
  const std::vector<double> res = parse_number_list(a.resolution, "--res");
  if (res.size() != 3) throw Failure(kExitInvalid, "--res: expected three integers");
  std::array<std::size_t, 3> n{};
  for (int i = 0; i < 3; ++i) {
    if (!(res[i] >= 2.0) || res[i] != std::floor(res[i]) || res[i] > 1e6) {
      throw Failure(kExitInvalid, "--res: each resolution must be an integer >= 2");
    }
    n[i] = static_cast<std::size_t>(res[i]);
  }
  if (!(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z)) {
    throw Failure(kExitInvalid, "--max must exceed --min on every axis");
  }

  const auto coord = [](double a0, double a1, std::size_t i, std::size_t count) {
    return a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(count - 1);
  };
  std::string text = "x,y,z,sdf\n";
  for (std::size_t i = 0; i < n[0]; ++i) {
    for (std::size_t j = 0; j < n[1]; ++j) {
      for (std::size_t k = 0; k < n[2]; ++k) {
        const Vec3 p{coord(lo.x, hi.x, i, n[0]), coord(lo.y, hi.y, j, n[1]), coord(lo.z, hi.z, k, n[2])};
        text += format_roundtrip(p.x) + ',' + format_roundtrip(p.y) + ',' + format_roundtrip(p.z) + ',' +
                format_roundtrip(sdf_thread(helix, p).distance) + '\n';
      }
    }
  }
  write_file_bytes(a.out, text);

  manifest.set_parameters({{"helix", helix_json(spec)},
                           {"min", vec_json(lo)},
                           {"max", vec_json(hi)},
                           {"resolution", n}});
  manifest.add_output(a.out);
  manifest.write_beside(a.out);
  out << n[0] * n[1] * n[2] << " rows written to " << a.out << '\n';
  return kExitOk;
}

// liquid --------------------------------------------------------------------

struct LiquidArgs {
  std::string config, trajectory, out;
  std::optional<double> dt, duration, volume, length, mass, damping;
  std::string gravity;
};

const std::vector<std::string> kSceneKeys = {"gravity",  "container", "volume", "fill_fraction",
                                             "dt",       "duration",  "pendulum", "eccentric",
                                             "screw",    "knob"};

SceneConfig scene_from(const LiquidArgs& a, const std::optional<LoadedConfig>& loaded,
                       RunManifest& manifest, json& params) {
  if (!loaded) throw Failure(kExitInvalid, "liquid needs --config with a scene section");
  const json s = section(*loaded, "scene", kSceneKeys);
  SceneConfig c;
  const std::vector<double> g = numbers_or(s, "gravity", {0.0, 0.0, -9.81});
  if (g.size() != 3) throw Failure(kExitInvalid, "config: gravity needs three numbers");
  c.gravity = a.gravity.empty() ? Vec3{g[0], g[1], g[2]} : vec3_from(a.gravity, "--gravity");

  if (!s.contains("container")) throw Failure(kExitInvalid, "config: scene.container is required");
  fs::path mesh_path;
  std::string mesh_bytes;
  c.container = std::make_shared<const Container>(
      build_container(s.at("container"), loaded->base_dir, &mesh_path, &mesh_bytes));
  if (!mesh_path.empty()) manifest.add_input(mesh_path, mesh_bytes);

  if (a.volume) {
    c.liquid_volume = *a.volume;
  } else if (s.contains("volume")) {
    c.liquid_volume = number_or(s, "volume", 0.0);
  } else {
    c.liquid_volume = number_or(s, "fill_fraction", 0.5) * c.container->volume();
  }
  c.dt = a.dt.value_or(number_or(s, "dt", kDefaultPendulumStep));
  c.duration = a.duration.value_or(number_or(s, "duration", 1.0));

  if (s.contains("pendulum")) {
    const json& p = s.at("pendulum");
    if (!p.is_object()) throw Failure(kExitInvalid, "config: scene.pendulum must be an object");
    for (const auto& [key, value] : p.items()) {
      if (key != "length" && key != "mass" && key != "damping_phi" && key != "damping_theta" &&
          key != "epsilon") {
        throw Failure(kExitInvalid, "config: unknown key '" + key + "' in scene.pendulum");
      }
    }
    c.pendulum.length = number_or(p, "length", c.pendulum.length);
    c.pendulum.mass = number_or(p, "mass", c.pendulum.mass);
    c.pendulum.damping_phi = number_or(p, "damping_phi", c.pendulum.damping_phi);
    c.pendulum.damping_theta = number_or(p, "damping_theta", c.pendulum.damping_theta);
    c.pendulum.epsilon = number_or(p, "epsilon", c.pendulum.epsilon);
  }
  if (a.length) c.pendulum.length = *a.length;
  if (a.mass) c.pendulum.mass = *a.mass;
  if (a.damping) c.pendulum.damping_phi = c.pendulum.damping_theta = *a.damping;

  if (s.contains("eccentric")) {
    const json& e = s.at("eccentric");
    EccentricDrive drive{EccentricSpec{number_or(e, "throw_radius", 0.0)},
                         number_or(e, "angular_velocity", 0.0), true};
    if (e.contains("shake_container")) drive.shake_container = e.at("shake_container").get<bool>();
    c.eccentric = drive;
  }
  if (s.contains("screw")) {
    const json helix = section(*loaded, "helix", {"r1", "r2", "p", "l", "h"});
    HelixSpec spec{number_or(helix, "r1", NAN), number_or(helix, "r2", NAN), number_or(helix, "p", NAN),
                   number_or(helix, "l", NAN), number_or(helix, "h", NAN)};
    (void)HelixThread(spec);
    c.screw = ScrewDrive{spec, number_or(s.at("screw"), "angular_velocity", 0.0)};
  }
  if (s.contains("knob")) {
    const json d = section(*loaded, "detent",
                           {"positions", "stiffness", "damping", "inertia", "q0", "qdot0", "torque",
                            "dt", "duration"});
    DetentProfile profile(numbers_or(d, "positions", {}), number_or(d, "stiffness", NAN),
                          number_or(d, "damping", 0.0));
    KnobState init{number_or(d, "q0", 0.0), number_or(d, "qdot0", 0.0), number_or(d, "inertia", 1.0)};
    c.knob = KnobDrive{profile, init, number_or(s.at("knob"), "torque", number_or(d, "torque", 0.0))};
  }

  params = {{"gravity", vec_json(c.gravity)},
            {"volume", c.liquid_volume},
            {"dt", c.dt},
            {"duration", c.duration},
            {"pendulum",
             {{"length", c.pendulum.length},
              {"mass", c.pendulum.mass},
              {"damping_phi", c.pendulum.damping_phi},
              {"damping_theta", c.pendulum.damping_theta},
              {"epsilon", c.pendulum.epsilon}}},
            {"container_volume", c.container->volume()}};
  return c;
}

int cmd_liquid(const LiquidArgs& a, std::ostream& out) {
  RunManifest manifest("liquid");
  const auto loaded = load_config(a.config, &manifest);
  json params;
  SceneConfig config;
  std::optional<FrameTrajectory> trajectory;
  try {
    config = scene_from(a, loaded, manifest, params);
    config.validate();
    if (a.trajectory.empty()) {
      trajectory = FrameTrajectory::constant({0, 0, 0}, config.dt, config.duration);
    } else {
      const std::string bytes = read_file_bytes(a.trajectory);
      manifest.add_input(a.trajectory, bytes);
      try {
        trajectory = FrameTrajectory(parse_trajectory(bytes));
      } catch (const Error& e) {
        throw Failure(kExitInvalid, a.trajectory + ": " + e.what());
      }
    }
  } catch (const Error& e) {
    throw Failure(kExitInvalid, e.what());
  }

  ReplayTrace trace;
  try {
    trace = run_liquid_scene(config, *trajectory);
  } catch (const StepError& e) {
    throw Failure(kExitSolver, "solver failed at step " + std::to_string(e.step()) + ": " + e.what());
  } catch (const Error& e) {
    throw Failure(kExitInvalid, e.what());
  }
  std::ostringstream bytes;
  write_trace(bytes, trace);
  write_file_bytes(a.out, bytes.str());

  manifest.set_parameters(params);
  manifest.add_output(a.out);
  manifest.write_beside(a.out);

  double worst = 0.0;
  for (const TraceRecord& r : trace.records) worst = std::max(worst, std::abs(r.residual));
  const TraceRecord last = trace.records.empty() ? TraceRecord{} : trace.records.back();
  out << "steps " << trace.records.size() << " normal " << format_roundtrip(last.normal.x) << ' '
      << format_roundtrip(last.normal.y) << ' ' << format_roundtrip(last.normal.z) << " height "
      << format_roundtrip(last.height) << " max_residual " << format_roundtrip(worst) << '\n';
  return kExitOk;
}

// clip / fill-height --------------------------------------------------------

struct MeshPlaneArgs {
  std::string mesh, normal = "0,0,1";
  double offset = 0.0;
  double volume = 0.0;
  bool area = false;
};

int cmd_clip(const MeshPlaneArgs& a, std::ostream& out) {
  const Vec3 n = unit_normal(a.normal);
  const Container container(parse_mesh_bytes(read_file_bytes(a.mesh)));
  const LiquidPlane plane{n, a.offset - dot(n, container.center())};
  const ClipResult r = clip_volume(container, plane);
  out << format_sig12(r.volume);
  if (a.area) out << ' ' << format_sig12(r.cut_area);
  out << '\n';
  return kExitOk;
}

int cmd_fill_height(const MeshPlaneArgs& a, std::ostream& out) {
  const Vec3 n = unit_normal(a.normal);
  const Container container(parse_mesh_bytes(read_file_bytes(a.mesh)));
  const HeightSolution s = solve_height(container, n, a.volume);
  out << format_sig12(s.height + dot(n, container.center())) << '\n';
  return kExitOk;
}

// detent-sim ----------------------------------------------------------------

struct DetentArgs {
  std::string config, positions, torque_file, out;
  std::optional<double> stiffness, damping, inertia, q0, qdot0, torque, dt, duration;
};

int cmd_detent_sim(const DetentArgs& a, std::ostream& out) {
  RunManifest manifest("detent-sim");
  const auto loaded = load_config(a.config, &manifest);
  const json s = section_of(loaded, "detent",
                            {"positions", "stiffness", "damping", "inertia", "q0", "qdot0", "torque", "dt",
                             "duration"});
  const std::vector<double> positions =
      a.positions.empty() ? numbers_or(s, "positions", {}) : parse_number_list(a.positions, "--positions");
  const DetentProfile profile(positions, a.stiffness.value_or(number_or(s, "stiffness", NAN)),
                              a.damping.value_or(number_or(s, "damping", 0.0)));
  const KnobState init{a.q0.value_or(number_or(s, "q0", 0.0)), a.qdot0.value_or(number_or(s, "qdot0", 0.0)),
                       a.inertia.value_or(number_or(s, "inertia", 1.0))};
  const double dt = a.dt.value_or(number_or(s, "dt", kDefaultKnobStep));
  const double duration = a.duration.value_or(number_or(s, "duration", 1.0));

  std::vector<double> torque;
  if (!a.torque_file.empty()) {
    const std::string bytes = read_file_bytes(a.torque_file);
    manifest.add_input(a.torque_file, bytes);
    torque = parse_profile(bytes);
  } else {
    torque = {a.torque.value_or(number_or(s, "torque", 0.0))};
  }

  ReplayTrace trace;
  try {
    trace = run_knob_scene(profile, torque, init, dt, duration);
  } catch (const StepError& e) {
    throw Failure(kExitSolver, "knob diverged at step " + std::to_string(e.step()));
  }
  if (!a.out.empty()) {
    std::ostringstream bytes;
    write_trace(bytes, trace);
    write_file_bytes(a.out, bytes.str());
    manifest.set_parameters({{"positions", positions},
                             {"stiffness", profile.stiffness()},
                             {"damping", profile.damping()},
                             {"inertia", init.inertia},
                             {"q0", init.q},
                             {"qdot0", init.qdot},
                             {"dt", dt},
                             {"duration", duration}});
    manifest.add_output(a.out);
    manifest.write_beside(a.out);
  }
  const TraceRecord last = trace.records.empty() ? TraceRecord{} : trace.records.back();
  out << "q " << format_roundtrip(last.knob_q) << " qdot " << format_roundtrip(last.knob_qdot) << " index "
      << last.knob_index << '\n';
  return kExitOk;
}

// screw-sim -----------------------------------------------------------------

struct ScrewArgs {
  HelixFlags helix;
  std::string angles_file, out;
  std::optional<double> omega, dt, duration;
};

int cmd_screw_sim(const ScrewArgs& a, std::ostream& out) {
  RunManifest manifest("screw-sim");
  const auto loaded = load_config(a.helix.config, &manifest);
  const HelixSpec spec = a.helix.resolve(loaded);
  const json s = section_of(loaded, "screw", {"angular_velocity", "dt", "duration"});
  const double dt = a.dt.value_or(number_or(s, "dt", 1e-3));

  std::vector<double> angles;
  if (!a.angles_file.empty()) {
    const std::string bytes = read_file_bytes(a.angles_file);
    manifest.add_input(a.angles_file, bytes);
    angles = parse_profile(bytes);
  } else {
    const double omega = a.omega.value_or(number_or(s, "angular_velocity", 0.0));
    const std::size_t n = step_count(a.duration.value_or(number_or(s, "duration", 1.0)), dt);
    angles.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) angles.push_back(omega * (static_cast<double>(i) * dt));
  }
  const ReplayTrace trace = run_screw_scene(spec, angles, dt);
  if (!a.out.empty()) {
    std::ostringstream bytes;
    write_trace(bytes, trace);
    write_file_bytes(a.out, bytes.str());
    manifest.set_parameters({{"helix", helix_json(spec)}, {"dt", dt}, {"samples", angles.size()}});
    manifest.add_output(a.out);
    manifest.write_beside(a.out);
  }
  const TraceRecord last = trace.records.empty() ? TraceRecord{} : trace.records.back();
  out << "angle " << format_roundtrip(last.screw_angle) << " axial " << format_roundtrip(last.screw_axial)
      << '\n';
  return kExitOk;
}

// score ---------------------------------------------------------------------

struct ScoreArgs {
  std::string config, initial, target, final_values, weights;
};

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const auto loaded = load_config(a.config, nullptr);
  std::vector<ProgressTerm> terms;
  const json s = section_of(loaded, "score", {"terms"});
  if (s.contains("terms")) {
    for (const json& t : s.at("terms")) {
      terms.push_back({number_or(t, "initial", NAN), number_or(t, "target", NAN), number_or(t, "final", NAN),
                       number_or(t, "weight", NAN)});
    }
  }
  const auto override_field = [&](const std::string& text, const char* flag, double ProgressTerm::*field) {
    if (text.empty()) return;
    const std::vector<double> v = parse_number_list(text, flag);
    if (terms.empty()) terms.resize(v.size());
    if (v.size() != terms.size()) throw Failure(kExitInvalid, std::string(flag) + ": term count mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) terms[i].*field = v[i];
  };
  override_field(a.initial, "--initial", &ProgressTerm::initial);
  override_field(a.target, "--target", &ProgressTerm::target);
  override_field(a.final_values, "--final", &ProgressTerm::final_value);
  override_field(a.weights, "--weights", &ProgressTerm::weight);
  if (terms.empty()) throw Failure(kExitInvalid, "score needs at least one term");
  out << format_sig12(progress_score(terms)) << '\n';
  return kExitOk;
}

// replay --------------------------------------------------------------------

struct ReplayArgs {
  std::string trace, exporter = "table", out = "-", mesh, config;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out) {
  RunManifest manifest("replay");
  const std::string bytes = read_file_bytes(a.trace);
  manifest.add_input(a.trace, bytes);
  ReplayTrace trace;
  {
    std::istringstream in(bytes);
    trace = read_trace(in);
  }

  if (a.exporter == "table") {
    std::ostringstream table;
    write_trace_table(table, trace);
    if (a.out == "-") {
      out << table.str();
    } else {
      write_file_bytes(a.out, table.str());
      manifest.set_parameters({{"export", "table"}, {"records", trace.records.size()}});
      manifest.add_output(a.out);
      manifest.write_beside(a.out);
    }
    return kExitOk;
  }
  if (a.exporter != "meshes") throw Failure(kExitInvalid, "--export must be 'table' or 'meshes'");
  if (trace.kind != TraceKind::Liquid) throw Failure(kExitInvalid, "mesh export needs a liquid trace");
  if (a.out == "-") throw Failure(kExitInvalid, "mesh export needs --out <directory>");

  std::optional<Container> container;
  if (!a.mesh.empty()) {
    const std::string mesh_bytes = read_file_bytes(a.mesh);
    manifest.add_input(a.mesh, mesh_bytes);
    container.emplace(parse_mesh_bytes(mesh_bytes));
  } else if (!a.config.empty()) {
    const auto loaded = load_config(a.config, &manifest);
    const json s = section(*loaded, "scene", kSceneKeys);
    if (!s.contains("container")) throw Failure(kExitInvalid, "config: scene.container is required");
    fs::path mesh_path;
    std::string mesh_bytes;
    container.emplace(build_container(s.at("container"), loaded->base_dir, &mesh_path, &mesh_bytes));
    if (!mesh_path.empty()) manifest.add_input(mesh_path, mesh_bytes);
  } else {
    throw Failure(kExitInvalid, "mesh export needs --mesh or --config");
  }

  const fs::path dir = a.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure(kExitInvalid, "cannot create " + dir.string());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    char name[32];
    std::snprintf(name, sizeof name, "step_%06zu.obj", i);
    std::ostringstream mesh_text;
    write_mesh(mesh_text, liquid_geometry(*container, {r.normal, r.height}));
    write_file_bytes(dir / name, mesh_text.str());
    manifest.add_output(dir / name);
  }
  manifest.set_parameters({{"export", "meshes"}, {"records", trace.records.size()}});
  manifest.write_beside(dir / "replay");
  out << trace.records.size() << " meshes written to " << dir.string() << '\n';
  return kExitOk;
}

int liquid_errors(const Error&) { return kExitInvalid; }

int replay_errors(const Error& e) {
  switch (e.code()) {
    case ErrorCode::OpenCutLoop:
    case ErrorCode::NonStarShapedLoop: return kExitSolver;
    default: return kExitInvalid;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mechanism and liquid kernels: helix SDF, detents, eccentric drive, quasi-static liquid"};
  app.name(args.empty() ? "labmech" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  SdfGridArgs grid;
  auto* sdf = app.add_subcommand("sdf-grid", "Sample the thread SDF on a regular grid (CSV x,y,z,sdf)");
  grid.helix.attach(sdf);
  sdf->add_option("--min", grid.min_corner, "Grid minimum corner x,y,z")->required();
  sdf->add_option("--max", grid.max_corner, "Grid maximum corner x,y,z")->required();
  sdf->add_option("--res", grid.resolution, "Samples per axis nx,ny,nz")->required();
  sdf->add_option("-o,--out", grid.out, "Output CSV path")->required();

  LiquidArgs liq;
  auto* liquid = app.add_subcommand("liquid", "Run a quasi-static liquid scene and write a trace");
  liquid->add_option("--config", liq.config, "Configuration document (scene section)")->required();
  liquid->add_option("--trajectory", liq.trajectory, "Frame trajectory: time ax ay az [qw qx qy qz]");
  liquid->add_option("-o,--out", liq.out, "Output trace path")->required();
  liquid->add_option("--dt", liq.dt, "Time step");
  liquid->add_option("--duration", liq.duration, "Simulated time");
  liquid->add_option("--volume", liq.volume, "Liquid volume");
  liquid->add_option("--length", liq.length, "Pendulum length");
  liquid->add_option("--mass", liq.mass, "Pendulum mass");
  liquid->add_option("--damping", liq.damping, "Damping for both angles");
  liquid->add_option("--gravity", liq.gravity, "Gravity x,y,z");

  MeshPlaneArgs clip_args;
  auto* clip = app.add_subcommand("clip", "Liquid volume below the plane normal . x = offset");
  clip->add_option("--mesh", clip_args.mesh, "Watertight mesh")->required();
  clip->add_option("--normal", clip_args.normal, "Plane normal x,y,z (normalized)");
  clip->add_option("--offset", clip_args.offset, "Plane offset along the normal")->required();
  clip->add_flag("--area", clip_args.area, "Also print the cut area");

  MeshPlaneArgs fill_args;
  auto* fill = app.add_subcommand("fill-height", "Plane offset along the normal enclosing a volume");
  fill->add_option("--mesh", fill_args.mesh, "Watertight mesh")->required();
  fill->add_option("--normal", fill_args.normal, "Plane normal x,y,z (normalized)");
  fill->add_option("--volume", fill_args.volume, "Target liquid volume")->required();

  DetentArgs det;
  auto* detent = app.add_subcommand("detent-sim", "Simulate a knob on a detent profile");
  detent->add_option("--config", det.config, "Configuration document (detent section)");
  detent->add_option("--positions", det.positions, "Detent positions, comma separated");
  detent->add_option("--stiffness", det.stiffness, "Spring constant k");
  detent->add_option("--damping", det.damping, "Damping lambda");
  detent->add_option("--inertia", det.inertia, "Knob inertia");
  detent->add_option("--q0", det.q0, "Initial position");
  detent->add_option("--qdot0", det.qdot0, "Initial velocity");
  detent->add_option("--torque", det.torque, "Constant external torque");
  detent->add_option("--torque-file", det.torque_file, "Torque per step, one per line");
  detent->add_option("--dt", det.dt, "Time step");
  detent->add_option("--duration", det.duration, "Simulated time");
  detent->add_option("-o,--out", det.out, "Output trace path");

  ScrewArgs scr;
  auto* screw = app.add_subcommand("screw-sim", "Replay screw rotation as axial motion");
  scr.helix.attach(screw);
  screw->add_option("--omega", scr.omega, "Angular velocity (rad/s)");
  screw->add_option("--angles-file", scr.angles_file, "Angle per sample, one per line");
  screw->add_option("--dt", scr.dt, "Sample spacing");
  screw->add_option("--duration", scr.duration, "Simulated time");
  screw->add_option("-o,--out", scr.out, "Output trace path");

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Weighted relative progress score");
  score->add_option("--config", sc.config, "Configuration document (score section)");
  score->add_option("--initial", sc.initial, "Initial values, comma separated");
  score->add_option("--target", sc.target, "Target values");
  score->add_option("--final", sc.final_values, "Final values");
  score->add_option("--weights", sc.weights, "Weights summing to 1");

  ReplayArgs rep;
  auto* replay = app.add_subcommand("replay", "Export a trace as a table or per-step liquid meshes");
  replay->add_option("trace", rep.trace, "Trace file")->required();
  replay->add_option("--export", rep.exporter, "table or meshes")->check(CLI::IsMember({"table", "meshes"}));
  replay->add_option("-o,--out", rep.out, "Table file ('-' for stdout) or mesh directory");
  replay->add_option("--mesh", rep.mesh, "Container mesh for mesh export");
  replay->add_option("--config", rep.config, "Configuration document with scene.container");

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  ErrorMap map = invalid_only;
  std::function<int()> command;
  if (*sdf) {
    command = [&] { return cmd_sdf_grid(grid, out); };
  } else if (*liquid) {
    map = liquid_errors;
    command = [&] { return cmd_liquid(liq, out); };
  } else if (*clip) {
    map = mesh_errors;
    command = [&] { return cmd_clip(clip_args, out); };
  } else if (*fill) {
    map = mesh_errors;
    command = [&] { return cmd_fill_height(fill_args, out); };
  } else if (*detent) {
    command = [&] { return cmd_detent_sim(det, out); };
  } else if (*screw) {
    command = [&] { return cmd_screw_sim(scr, out); };
  } else if (*score) {
    command = [&] { return cmd_score(sc, out); };
  } else {
    map = replay_errors;
    command = [&] { return cmd_replay(rep, out); };
  }

  try {
    return command();
  } catch (const Failure& f) {
    err << "error: " << f.what() << '\n';
    return f.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return map(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace labmech::cli
