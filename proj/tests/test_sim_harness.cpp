#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "labmech/error.hpp"
#include "labmech/progress_score.hpp"
#include "labmech/replay_trace.hpp"
#include "labmech/sim_harness.hpp"

using namespace labmech;
using std::numbers::pi;

namespace {

std::shared_ptr<const Container> unit_cube() {
  static const auto cube = std::make_shared<const Container>(make_unit_cube());
  return cube;
}

SceneConfig cube_scene(double duration) {
  SceneConfig c;
  c.container = unit_cube();
  c.liquid_volume = 0.5;
  c.dt = 1e-3;
  c.duration = duration;
  return c;
}

ReplayTrace random_trace(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<std::int64_t> idx(-1000, 1000);
  std::uniform_int_distribution<int> len(0, 40), kind(1, 3);
  ReplayTrace t;
  t.kind = static_cast<TraceKind>(kind(rng));
  t.records.resize(static_cast<std::size_t>(len(rng)));
  for (TraceRecord& r : t.records) {
    r = {u(rng), u(rng), u(rng), u(rng), u(rng), {u(rng), u(rng), u(rng)}, u(rng), u(rng),
         u(rng) * 1e-300, u(rng), u(rng), u(rng), u(rng), idx(rng), u(rng)};
  }
  if (!t.records.empty()) t.records.front().phi = -0.0;
  return t;
}

std::string bytes_of(const ReplayTrace& t) {
  std::ostringstream out;
  write_trace(out, t);
  return out.str();
}

}  // namespace

TEST_CASE("effective acceleration") {
  const Vec3 g{0, 0, -9.81};
  CHECK(effective_accel(g, Vec3{}) == Vec3{0, 0, -9.81});
  CHECK(effective_accel(g, g) == Vec3{0, 0, 0});
  CHECK(effective_accel(g, Vec3{2, 0, 0}) == Vec3{-2, 0, -9.81});

  FrameSample tilted{0.0, {0, 0, 0}, std::array<double, 4>{std::cos(pi / 4), std::sin(pi / 4), 0, 0}};
  const Vec3 local = effective_accel(g, tilted);
  // Container rotated +90 deg about x: world -z appears along container -y... or +y.
  CHECK(local.x == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(local.y) == doctest::Approx(9.81));
  CHECK(local.z == doctest::Approx(0.0).scale(1.0));
  CHECK(local.y == doctest::Approx(-9.81));
}

TEST_CASE("frame trajectory validation") {
  CHECK_THROWS_AS(FrameTrajectory({}), Error);
  CHECK_THROWS_AS(FrameTrajectory({{0.0, {}, {}}, {0.1, {}, {}}, {0.3, {}, {}}}), Error);
  CHECK_THROWS_AS(FrameTrajectory({{0.0, {}, {}}, {0.0, {}, {}}}), Error);
  CHECK_THROWS_AS(FrameTrajectory({{0.0, {NAN, 0, 0}, {}}}), Error);
  const FrameTrajectory t({{0.0, {1, 0, 0}, {}}, {0.5, {2, 0, 0}, {}}, {1.0, {3, 0, 0}, {}}});
  CHECK(t.at(-1.0).accel.x == 1.0);
  CHECK(t.at(0.49).accel.x == 1.0);
  CHECK(t.at(0.5).accel.x == 2.0);
  CHECK(t.at(7.0).accel.x == 3.0);
  CHECK(step_count(1.0, 1e-3) == 1000);
  CHECK_THROWS_AS(step_count(1.0, 0.3), Error);
}

TEST_CASE("scene validation") {
  SceneConfig c = cube_scene(0.01);
  CHECK_NOTHROW(c.validate());
  c.liquid_volume = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = cube_scene(0.01);
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = cube_scene(0.01);
  c.container.reset();
  CHECK_THROWS_AS(c.validate(), Error);
  c = cube_scene(1.0);
  CHECK_THROWS_AS(run_liquid_scene(c, FrameTrajectory::constant({}, 0.1, 0.5)), Error);
}

TEST_CASE("static liquid scene is an exact fixed point") {
  const SceneConfig c = cube_scene(2.0);
  const ReplayTrace t = run_liquid_scene(c, FrameTrajectory::constant({}, 1e-3, 2.0));
  REQUIRE(t.records.size() == 2000);
  CHECK(t.kind == TraceKind::Liquid);
  const TraceRecord& first = t.records.front();
  CHECK(std::abs(first.height) <= 1e-12);
  for (const TraceRecord& r : t.records) {
    REQUIRE(r.normal == Vec3{0, 0, 1});
    REQUIRE(r.height == first.height);
    REQUIRE(std::abs(r.residual) <= 1e-9 * c.container->volume());
  }
  CHECK(t.records.back().time == doctest::Approx(2.0));
}

TEST_CASE("lateral acceleration tilts the surface to the equilibrium") {
  const double a = 2.0;
  SceneConfig c = cube_scene(30.0);
  const ReplayTrace t = run_liquid_scene(c, FrameTrajectory::constant({a, 0, 0}, 1e-3, 30.0));
  const Vec3 expected = normalized(Vec3{a, 0, 9.81});
  const Vec3 n = t.records.back().normal;
  CHECK(std::acos(std::min(1.0, dot(n, expected))) <= 1e-3);
  double worst = 0.0;
  for (const TraceRecord& r : t.records) worst = std::max(worst, std::abs(r.residual));
  CHECK(worst <= 1e-9 * c.container->volume());
}

TEST_CASE("liquid scenes are deterministic") {
  SceneConfig c = cube_scene(0.5);
  c.eccentric = EccentricDrive{EccentricSpec{0.01}, 8.0, true};
  const FrameTrajectory traj = FrameTrajectory::constant({0.5, -0.3, 0}, 1e-3, 0.5);
  const ReplayTrace a = run_liquid_scene(c, traj);
  const ReplayTrace b = run_liquid_scene(c, traj);
  CHECK(a == b);
  CHECK(bytes_of(a) == bytes_of(b));
  CHECK(a.records.back().eccentric_theta == doctest::Approx(8.0 * 0.5));
}

TEST_CASE("solver failures carry the step index") {
  SceneConfig c = cube_scene(0.01);
  c.pendulum.damping_phi = 0.0;
  c.pendulum.damping_theta = 0.0;
  const FrameTrajectory traj = FrameTrajectory::constant({1e300, 0, 0}, 1e-3, 0.01);
  try {
    (void)run_liquid_scene(c, traj);
    FAIL("expected a step error");
  } catch (const StepError& e) {
    CHECK(e.step() == 0);
  }
}

TEST_CASE("screw scene") {
  const HelixSpec spec{1.0, 0.1, 0.05, -2, 2};
  const std::vector<double> turn = {0.0, pi, 2 * pi};
  const ReplayTrace t = run_screw_scene(spec, turn, 0.1);
  REQUIRE(t.records.size() == 3);
  CHECK(t.kind == TraceKind::Screw);
  CHECK(t.records.back().screw_axial - t.records.front().screw_axial == 2 * pi * 0.05);

  const std::vector<double> zeros(10, 0.0);
  for (const TraceRecord& r : run_screw_scene(spec, zeros, 0.1).records) CHECK(r.screw_axial == 0.0);

  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(-50, 50);
  std::vector<double> profile(200);
  for (double& x : profile) x = u(rng);
  const ReplayTrace rt = run_screw_scene(spec, profile, 0.01);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    REQUIRE(rt.records[i].screw_angle == profile[i]);
    REQUIRE(rt.records[i].screw_axial == spec.p * profile[i]);
  }
  const std::vector<double> bad = {0.0, INFINITY};
  CHECK_THROWS_AS(run_screw_scene(spec, bad, 0.1), Error);
}

TEST_CASE("knob scene") {
  const DetentProfile p({0.0, 0.5, 1.0}, 10.0, 0.1);
  SUBCASE("resting on a detent") {
    const std::vector<double> none = {0.0};
    const ReplayTrace t = run_knob_scene(p, none, {0.5, 0.0, 0.01}, 1e-3, 1.0);
    REQUIRE(t.records.size() == 1000);
    for (const TraceRecord& r : t.records) {
      REQUIRE(r.knob_q == 0.5);
      REQUIRE(r.knob_index == 1);
    }
  }
  SUBCASE("strong torque clicks forward") {
    const std::vector<double> push = {3.0};
    const ReplayTrace t = run_knob_scene(p, push, {0.0, 0.0, 0.01}, 1e-3, 2.0);
    CHECK(t.records.back().knob_index == 2);
  }
  SUBCASE("released torque settles back") {
    const DetentProfile overdamped({0.0, 0.5, 1.0}, 10.0, 1.0);
    std::vector<double> torque(10000, 0.0);
    std::fill(torque.begin(), torque.begin() + 500, 2.0);
    const ReplayTrace t = run_knob_scene(overdamped, torque, {0.0, 0.0, 0.01}, 1e-3, 10.0);
    CHECK(t.records.back().knob_index == 0);
    CHECK(std::abs(t.records.back().knob_q) <= 1e-4);
  }
  SUBCASE("divergence reports the step") {
    const std::vector<double> huge = {1e308};
    try {
      (void)run_knob_scene(p, huge, {0.0, 0.0, 1e-10}, 1.0, 100.0);
      FAIL("expected a step error");
    } catch (const StepError& e) {
      CHECK(e.code() == ErrorCode::NonFiniteState);
    }
  }
}

TEST_CASE("progress score") {
  const std::vector<double> w = {0.5, 0.3, 0.2};
  std::vector<ProgressTerm> done, idle, mixed;
  const double fin[3] = {5, 10, 0};
  for (int i = 0; i < 3; ++i) {
    done.push_back({0, 10, 10, w[i]});
    idle.push_back({0, 10, 0, w[i]});
    mixed.push_back({0, 10, fin[i], w[i]});
  }
  CHECK(progress_score(done) == 1.0);
  CHECK(progress_score(idle) == 0.0);
  CHECK(progress_score(mixed) == doctest::Approx(0.55).epsilon(1e-15));

  std::vector<ProgressTerm> degenerate = done;
  degenerate[1].initial = degenerate[1].target;
  try {
    (void)progress_score(degenerate);
    FAIL("expected DegenerateTerm");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTerm);
  }
  std::vector<ProgressTerm> heavy = done;
  heavy[0].weight = 0.6;
  CHECK_THROWS_AS(progress_score(heavy), Error);
  heavy[0].weight = 0.7;
  heavy[1].weight = -0.2;
  heavy[2].weight = 0.5;
  CHECK_THROWS_AS(progress_score(heavy), Error);

  std::vector<ProgressTerm> overshoot = idle;
  for (auto& t : overshoot) t.final_value = -100;
  CHECK(progress_score(overshoot) == 0.0);
}

TEST_CASE("progress score is monotone toward the target") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-10, 10), f(0, 1);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = f(rng), b = f(rng) * (1 - a);
    std::vector<ProgressTerm> terms = {{u(rng), u(rng), u(rng), a}, {u(rng), u(rng), u(rng), b},
                                       {u(rng), u(rng), u(rng), 1 - a - b}};
    const double before = progress_score(terms);
    ProgressTerm& t = terms[static_cast<std::size_t>(pick(rng))];
    t.final_value += f(rng) * (t.target - t.final_value);
    REQUIRE(progress_score(terms) >= before);
  }
}

TEST_CASE("trace round trip") {
  std::mt19937_64 rng(89);
  for (int i = 0; i < 100; ++i) {
    const ReplayTrace t = random_trace(rng);
    std::stringstream ss;
    write_trace(ss, t);
    const ReplayTrace back = read_trace(ss);
    REQUIRE(back == t);
    REQUIRE(bytes_of(back) == bytes_of(t));
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      REQUIRE(std::memcmp(&back.records[k].phi, &t.records[k].phi, sizeof(double)) == 0);
    }
  }
}

TEST_CASE("trace file format") {
  const ReplayTrace empty{TraceKind::Knob, {}};
  const std::string header = bytes_of(empty);
  REQUIRE(header.size() == kTraceHeaderSize);
  CHECK(std::memcmp(header.data(), "LMTRACE\0", 8) == 0);
  CHECK(static_cast<unsigned char>(header[8]) == 1);
  CHECK(static_cast<unsigned char>(header[10]) == 136);
  CHECK(static_cast<unsigned char>(header[12]) == 3);

  ReplayTrace t{TraceKind::Screw, std::vector<TraceRecord>(5)};
  for (std::size_t i = 0; i < 5; ++i) t.records[i].time = static_cast<double>(i);
  const std::string full = bytes_of(t);
  CHECK(full.size() == kTraceHeaderSize + 5 * kTraceRecordSize);

  std::istringstream cut(full.substr(0, kTraceHeaderSize + 3 * kTraceRecordSize + 17));
  try {
    (void)read_trace(cut);
    FAIL("expected MalformedTrace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedTrace);
    CHECK(std::string(e.what()).find("record 3") != std::string::npos);
  }
  std::string bad_magic = full;
  bad_magic[0] = 'X';
  std::istringstream bm(bad_magic);
  CHECK_THROWS_AS(read_trace(bm), Error);
  std::string bad_kind = full;
  bad_kind[12] = 9;
  std::istringstream bk(bad_kind);
  CHECK_THROWS_AS(read_trace(bk), Error);

  std::ostringstream table;
  write_trace_table(table, t);
  const std::string text = table.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}
