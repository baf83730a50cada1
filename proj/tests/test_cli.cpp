#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "labmech/mesh.hpp"
#include "labmech/mesh_volume.hpp"
#include "labmech/number_format.hpp"
#include "labmech/replay_trace.hpp"
#include "labmech_cli/cli.hpp"
#include "labmech_cli/inputs.hpp"
#include "labmech_cli/manifest.hpp"

using namespace labmech;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run labmech_cmd(std::vector<std::string> args) {
  args.insert(args.begin(), "labmech");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() / ("labmech_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return path(name);
  }

 private:
  fs::path dir_;
};

std::string slurp(const std::string& path) { return cli::read_file_bytes(path); }

double to_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  REQUIRE(res.ec == std::errc{});
  return v;
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> w;
  for (std::string t; in >> t;) w.push_back(t);
  return w;
}

const char* kCubeScene =
    R"({"version": 1, "scene": {"container": {"box": {"lo": [0,0,0], "hi": [1,1,1]}},
        "volume": 0.5, "dt": 0.001, "duration": 0.2}})";

}  // namespace

TEST_CASE("cli: sdf-grid") {
  Scratch s;
  const std::vector<std::string> helix = {"--r1", "0.8", "--r2", "0.1", "--pitch", "0.02", "--low", "-2",
                                          "--high", "2"};
  auto args = helix;
  args.insert(args.begin(), "sdf-grid");
  for (const char* a : {"--min", "-1,-1,-0.5", "--max", "1,1,0.5", "--res", "2,2,2", "-o"}) args.push_back(a);
  args.push_back(s.path("g.csv"));
  const Run r = labmech_cmd(args);
  REQUIRE(r.code == 0);

  const HelixThread h({0.8, 0.1, 0.02, -2, 2});
  std::istringstream csv(slurp(s.path("g.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x,y,z,sdf");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<double> v;
    std::size_t pos = 0;
    for (int k = 0; k < 4; ++k) {
      const std::size_t comma = line.find(',', pos);
      v.push_back(to_double(std::string_view(line).substr(pos, comma - pos)));
      pos = comma + 1;
    }
    const int i = rows / 4, j = (rows / 2) % 2, k = rows % 2;
    CHECK(v[0] == (i ? 1.0 : -1.0));
    CHECK(v[1] == (j ? 1.0 : -1.0));
    CHECK(v[2] == (k ? 0.5 : -0.5));
    CHECK(v[3] == sdf_thread(h, {v[0], v[1], v[2]}).distance);
    ++rows;
  }
  CHECK(rows == 8);

  const fs::path manifest = s.path("g.csv.manifest.json");
  REQUIRE(fs::exists(manifest));
  const auto m = nlohmann::json::parse(slurp(manifest.string()));
  CHECK(m["command"] == "sdf-grid");
  CHECK(m["parameters"]["helix"]["r1"] == 0.8);

  SUBCASE("bad resolution") {
    auto bad = args;
    bad[bad.size() - 3] = "1,2,2";
    CHECK(labmech_cmd(bad).code == 2);
  }
  SUBCASE("row count is the product of resolutions") {
    auto big = args;
    big[big.size() - 3] = "10,7,5";
    REQUIRE(labmech_cmd(big).code == 0);
    const std::string text = slurp(s.path("g.csv"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 350);
  }
  SUBCASE("rerun is byte-identical") {
    const std::string first = slurp(s.path("g.csv"));
    REQUIRE(labmech_cmd(args).code == 0);
    CHECK(slurp(s.path("g.csv")) == first);
  }
  SUBCASE("invalid helix") {
    auto bad = args;
    bad[2] = "0.05";  // r1 below r2
    const Run e = labmech_cmd(bad);
    CHECK(e.code == 2);
    CHECK_FALSE(e.err.empty());
    CHECK(e.out.empty());
  }
}

TEST_CASE("cli: config file with flag overrides") {
  Scratch s;
  const std::string cfg = s.write(
      "h.json", R"({"version": 1, "helix": {"r1": 1.0, "r2": 0.1, "p": 0.05, "l": -2, "h": 2}})");
  const Run file_only = labmech_cmd({"screw-sim", "--config", cfg, "--omega", "1", "--duration", "1"});
  REQUIRE(file_only.code == 0);
  CHECK(words(file_only.out).at(3) == format_roundtrip(0.05 * 1.0));
  const Run flagged =
      labmech_cmd({"screw-sim", "--config", cfg, "--pitch", "0.1", "--omega", "1", "--duration", "1"});
  REQUIRE(flagged.code == 0);
  CHECK(words(flagged.out).at(3) == format_roundtrip(0.1));

  CHECK(labmech_cmd({"screw-sim", "--config", s.write("v.json", R"({"version": 2})")}).code == 2);
  CHECK(labmech_cmd({"screw-sim", "--config", s.write("k.json", R"({"version": 1, "helx": {}})")}).code == 2);
  CHECK(labmech_cmd({"screw-sim", "--config", s.write("j.json", "{not json")}).code == 2);
}

TEST_CASE("cli: manifest digests track input bytes") {
  Scratch s;
  const std::string cfg = s.write("scene.json", kCubeScene);
  REQUIRE(labmech_cmd({"liquid", "--config", cfg, "-o", s.path("t.lmt")}).code == 0);
  const auto first = nlohmann::json::parse(slurp(s.path("t.lmt.manifest.json")));
  CHECK(first["inputs"][0]["sha256"] == cli::sha256_hex(kCubeScene));
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  REQUIRE(labmech_cmd({"liquid", "--config", cfg, "-o", s.path("t.lmt")}).code == 0);
  const auto again = nlohmann::json::parse(slurp(s.path("t.lmt.manifest.json")));
  CHECK(again["inputs"] == first["inputs"]);

  s.write("scene.json", std::string(kCubeScene) + "\n");
  REQUIRE(labmech_cmd({"liquid", "--config", cfg, "-o", s.path("t.lmt")}).code == 0);
  const auto changed = nlohmann::json::parse(slurp(s.path("t.lmt.manifest.json")));
  CHECK(changed["inputs"][0]["sha256"] != first["inputs"][0]["sha256"]);
}

TEST_CASE("cli: liquid") {
  Scratch s;
  const std::string cfg = s.write("scene.json", kCubeScene);
  SUBCASE("static fixture") {
    const Run r = labmech_cmd({"liquid", "--config", cfg, "-o", s.path("t.lmt")});
    REQUIRE(r.code == 0);
    const auto w = words(r.out);
    CHECK(w.at(1) == "200");
    CHECK(to_double(w.at(3)) == 0.0);
    CHECK(to_double(w.at(4)) == 0.0);
    CHECK(to_double(w.at(5)) == 1.0);
    const std::string bytes = slurp(s.path("t.lmt"));
    REQUIRE(labmech_cmd({"liquid", "--config", cfg, "-o", s.path("t.lmt")}).code == 0);
    CHECK(slurp(s.path("t.lmt")) == bytes);
  }
  SUBCASE("missing file") {
    CHECK(labmech_cmd({"liquid", "--config", s.path("absent.json"), "-o", s.path("t.lmt")}).code == 2);
    CHECK(labmech_cmd({"liquid", "--config", cfg, "--trajectory", s.path("absent.txt"), "-o",
                       s.path("t.lmt")})
              .code == 2);
  }
  SUBCASE("trajectory parse error names the line") {
    const std::string traj = s.write("bad.txt", "# t ax ay az\n0 0 0 0\n0.001 0 zero 0\n");
    const Run r = labmech_cmd({"liquid", "--config", cfg, "--trajectory", traj, "-o", s.path("t.lmt")});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
  }
  SUBCASE("lateral acceleration reaches the equilibrium") {
    const double a = 3.0;
    const std::string traj = s.write("lat.txt", "0 3 0 0\n");
    const Run r = labmech_cmd({"liquid", "--config", cfg, "--trajectory", traj, "--duration", "30", "-o",
                               s.path("t.lmt")});
    REQUIRE(r.code == 0);
    const auto w = words(r.out);
    const Vec3 n{to_double(w.at(3)), to_double(w.at(4)), to_double(w.at(5))};
    const Vec3 expected = normalized(Vec3{a, 0, 9.81});
    CHECK(std::acos(std::min(1.0, dot(n, expected))) <= 1e-3);
  }
  SUBCASE("solver failure reports the step") {
    const std::string traj = s.write("wild.txt", "0 1e300 0 0\n");
    const Run r = labmech_cmd({"liquid", "--config", cfg, "--trajectory", traj, "-o", s.path("t.lmt")});
    CHECK(r.code == 3);
    CHECK(r.err.find("step 0") != std::string::npos);
  }
  SUBCASE("overfull volume is rejected") {
    CHECK(labmech_cmd({"liquid", "--config", cfg, "--volume", "1.5", "-o", s.path("t.lmt")}).code == 2);
  }
}

TEST_CASE("cli: clip and fill-height") {
  Scratch s;
  const std::string cube = s.path("cube.obj");
  write_mesh_file(cube, make_unit_cube());

  const Run clip = labmech_cmd({"clip", "--mesh", cube, "--offset", "0.3"});
  CHECK(clip.code == 0);
  CHECK(clip.out == "0.300000000000\n");
  CHECK(labmech_cmd({"clip", "--mesh", cube, "--offset", "0.3", "--area"}).out ==
        "0.300000000000 1.00000000000\n");

  CHECK(labmech_cmd({"fill-height", "--mesh", cube, "--volume", "0.3"}).out == "0.300000000000\n");
  CHECK(labmech_cmd({"fill-height", "--mesh", cube, "--volume", "2.0"}).code == 4);
  CHECK(labmech_cmd({"clip", "--mesh", cube, "--offset", "0.3", "--normal", "0,0,0"}).code == 2);

  TriMesh open = make_unit_cube();
  open.triangles.pop_back();
  const std::string holed = s.path("open.obj");
  write_mesh_file(holed, open);
  CHECK(labmech_cmd({"clip", "--mesh", holed, "--offset", "0.3"}).code == 3);
  CHECK(labmech_cmd({"fill-height", "--mesh", holed, "--volume", "0.3"}).code == 3);
  CHECK(labmech_cmd({"clip", "--mesh", s.write("junk.obj", "v 1 2\n"), "--offset", "0"}).code == 2);
  CHECK(labmech_cmd({"clip", "--mesh", s.path("none.obj"), "--offset", "0"}).code == 2);

  std::mt19937_64 rng(97);
  std::normal_distribution<double> nd;
  const Container c(make_cylinder(0.4, 1.2, 24));
  const std::string cyl = s.path("cyl.obj");
  write_mesh_file(cyl, c.mesh());
  for (int i = 0; i < 5; ++i) {
    const Vec3 n = normalized(Vec3{nd(rng), nd(rng), nd(rng)});
    const double offset = dot(n, c.center()) + 0.2 * nd(rng);
    std::ostringstream normal;
    normal.precision(17);
    normal << n.x << ',' << n.y << ',' << n.z;
    std::ostringstream off;
    off.precision(17);
    off << offset;
    const Run r = labmech_cmd({"clip", "--mesh", cyl, "--normal", normal.str(), "--offset", off.str()});
    REQUIRE(r.code == 0);
    const Vec3 parsed = normalized(n);
    const double expected = clip_volume(c, {parsed, offset - dot(parsed, c.center())}).volume;
    CHECK(r.out == format_sig12(expected) + "\n");
  }
}

TEST_CASE("cli: replay") {
  Scratch s;
  const std::string cfg = s.write("scene.json", kCubeScene);
  REQUIRE(labmech_cmd({"liquid", "--config", cfg, "--duration", "0.05", "-o", s.path("t.lmt")}).code == 0);
  const ReplayTrace trace = read_trace_file(s.path("t.lmt"));
  REQUIRE(trace.records.size() == 50);

  SUBCASE("table rows match records") {
    const Run r = labmech_cmd({"replay", s.path("t.lmt")});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 51);
    REQUIRE(labmech_cmd({"replay", s.path("t.lmt"), "-o", s.path("t.txt")}).code == 0);
    CHECK(slurp(s.path("t.txt")) == r.out);
  }
  SUBCASE("static trace gives identical meshes with the traced volume") {
    const Run r = labmech_cmd({"replay", s.path("t.lmt"), "--export", "meshes", "--config", cfg, "-o",
                               s.path("meshes")});
    REQUIRE(r.code == 0);
    const std::string first = slurp(s.path("meshes/step_000000.obj"));
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "meshes/step_%06zu.obj", i);
      const std::string text = slurp(s.path(name));
      REQUIRE(text == first);
      const double v = mesh_volume(read_mesh_file(s.path(name)));
      REQUIRE(std::abs(v - trace.records[i].volume) <= 1e-9 * trace.records[i].volume);
    }
  }
  SUBCASE("tilted scene meshes match trace volumes") {
    const std::string traj = s.write("lat.txt", "0 4 -1 0\n");
    REQUIRE(labmech_cmd({"liquid", "--config", cfg, "--trajectory", traj, "-o", s.path("tilt.lmt")}).code ==
            0);
    const std::string cube = s.path("cube.obj");
    write_mesh_file(cube, make_unit_cube());
    REQUIRE(labmech_cmd({"replay", s.path("tilt.lmt"), "--export", "meshes", "--mesh", cube, "-o",
                         s.path("tilt")})
                .code == 0);
    const ReplayTrace tilt = read_trace_file(s.path("tilt.lmt"));
    for (std::size_t i = 0; i < tilt.records.size(); i += 17) {
      char name[32];
      std::snprintf(name, sizeof name, "tilt/step_%06zu.obj", i);
      const double v = mesh_volume(read_mesh_file(s.path(name)));
      REQUIRE(std::abs(v - tilt.records[i].volume) <= 1e-9 * tilt.records[i].volume);
    }
  }
  SUBCASE("malformed trace") {
    const std::string bytes = slurp(s.path("t.lmt"));
    const std::string cut = s.write("cut.lmt", bytes.substr(0, bytes.size() - 5));
    const Run r = labmech_cmd({"replay", cut});
    CHECK(r.code == 2);
    CHECK(r.err.find("record 49") != std::string::npos);
    CHECK(labmech_cmd({"replay", s.path("t.lmt"), "--export", "meshes", "-o", s.path("m")}).code == 2);
  }
}

TEST_CASE("cli: detent-sim, screw-sim, score") {
  Scratch s;
  const Run knob = labmech_cmd({"detent-sim", "--positions", "0,0.5,1", "--stiffness", "10", "--damping", "0.1",
                                "--inertia", "0.01", "--q0", "0.6", "--duration", "10", "-o",
                                s.path("k.lmt")});
  REQUIRE(knob.code == 0);
  const auto kw = words(knob.out);
  CHECK(std::abs(to_double(kw.at(1)) - 0.5) <= 1e-4);
  CHECK(kw.at(5) == "1");
  CHECK(read_trace_file(s.path("k.lmt")).records.size() == 10000);
  CHECK(labmech_cmd({"detent-sim", "--positions", "1,0", "--stiffness", "10"}).code == 2);

  const std::string torque = s.write("tau.txt", "3\n3\n# hold\n");
  const Run pushed = labmech_cmd({"detent-sim", "--positions", "0,0.5,1", "--stiffness", "10", "--damping",
                                  "0.1", "--inertia", "0.01", "--torque-file", torque, "--duration", "2"});
  REQUIRE(pushed.code == 0);
  CHECK(words(pushed.out).at(5) == "2");

  const Run turn = labmech_cmd({"screw-sim", "--r1", "1", "--r2", "0.1", "--pitch", "0.05", "--low", "-2",
                                "--high", "2", "--omega", "6.283185307179586", "--duration", "1"});
  REQUIRE(turn.code == 0);
  CHECK(to_double(words(turn.out).at(3)) == 2 * std::numbers::pi * 0.05);

  CHECK(labmech_cmd({"score", "--initial", "0,0,0", "--target", "10,10,10", "--final", "5,10,0", "--weights",
                     "0.5,0.3,0.2"})
            .out == "0.550000000000\n");
  const std::string sc = s.write(
      "score.json",
      R"({"version": 1, "score": {"terms": [{"initial": 0, "target": 1, "final": 1, "weight": 1}]}})");
  CHECK(labmech_cmd({"score", "--config", sc}).out == "1.00000000000\n");
  CHECK(labmech_cmd({"score", "--config", sc, "--final", "0"}).out == "0.00000000000\n");
  CHECK(labmech_cmd({"score", "--initial", "1", "--target", "1", "--final", "1", "--weights", "1"}).code == 2);
  CHECK(labmech_cmd({"score"}).code == 2);
}

TEST_CASE("cli: usage") {
  CHECK(labmech_cmd({}).code == 2);
  CHECK(labmech_cmd({"frobnicate"}).code == 2);
  const Run help = labmech_cmd({"--help"});
  CHECK(help.code == 0);
  for (const char* cmd : {"sdf-grid", "liquid", "clip", "fill-height", "detent-sim", "screw-sim", "score",
                          "replay"}) {
    CHECK(help.out.find(cmd) != std::string::npos);
  }
}
