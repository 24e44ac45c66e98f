#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "surfwarp/config.hpp"
#include "surfwarp/io.hpp"

using namespace surfwarp;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "surfwarp_io_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("trajectory csv carries the exact header and one row per pose") {
  const fs::path path = temp_dir() / "traj.csv";
  std::vector<Pose> poses = {Pose(Rotation::identity(), Vec3(0.5, 0, 0.25))};
  write_trajectory_csv(path, poses, {0}, {true});
  const std::string text = slurp(path);
  CHECK(text == "k,tile_id,contact_flag,px,py,pz,qw,qx,qy,qz\n"
                "0,0,1,0.5,0,0.25,1,0,0,0\n");
}

TEST_CASE("execution csv carries the exact header") {
  const fs::path path = temp_dir() / "exec.csv";
  ExecutionLog log;
  ExecutionRecord rec;
  rec.k = 0;
  rec.F = 0.5;
  rec.step.projected = Pose(Rotation::identity(), Vec3::Zero());
  log.records.push_back(rec);
  write_execution_csv(path, log);
  const std::string text = slurp(path);
  CHECK(text.rfind("k,F,e,phi_deg,delta_cone_deg,px,py,pz,qw,qx,qy,qz,event_flag\n",
                   0) == 0);
}

TEST_CASE("scenario json round-trips and rejects malformed input") {
  const nlohmann::json good = {
      {"stiffness", 120.0},
      {"noise_sigma", 0.01},
      {"seed", 7},
      {"events",
       {{{"kind", "height_drop"}, {"at_step", 10}, {"magnitude", 0.01}},
        {{"kind", "force_bias"}, {"at_step", 0}, {"magnitude", 0.5}}}}};
  const Scenario scenario = scenario_from_json(good);
  CHECK(scenario.stiffness == 120.0);
  REQUIRE(scenario.events.size() == 2);
  CHECK(scenario.events[0].kind == ScenarioEvent::Kind::HeightDrop);
  CHECK(scenario.events[1].magnitude == 0.5);

  nlohmann::json bad_kind = good;
  bad_kind["events"][0]["kind"] = "melt";
  CHECK_THROWS_AS(scenario_from_json(bad_kind), std::invalid_argument);

  nlohmann::json missing = good;
  missing["events"][0].erase("at_step");
  CHECK_THROWS_AS(scenario_from_json(missing), std::invalid_argument);

  const fs::path bad_file = temp_dir() / "broken.json";
  std::ofstream(bad_file) << "{ not json";
  CHECK_THROWS_AS(load_scenario(bad_file), std::invalid_argument);
}

TEST_CASE("config overrides apply dotted paths") {
  nlohmann::json j = {{"surface", {{"family", "sin"}, {"amplitude", 0.05}}}};
  apply_overrides(j, {"surface.amplitude=0.08", "deform.smoothing_window=7",
                      "surface.family=cos"});
  CHECK(j["surface"]["amplitude"] == 0.08);
  CHECK(j["deform"]["smoothing_window"] == 7);
  CHECK(j["surface"]["family"] == "cos");
  CHECK_THROWS_AS(apply_overrides(j, {"no_equals"}), std::invalid_argument);

  const RunConfig config = run_config_from_json(j);
  CHECK(config.surface.family == SurfaceFamily::Cos);
  CHECK(config.surface.amplitude == 0.08);
  CHECK(config.deform.smoothing_window == 7);
}

TEST_CASE("run config validation catches bad values") {
  nlohmann::json j = {{"deform", {{"smoothing_window", 4}}}};
  CHECK_THROWS_AS(run_config_from_json(j), std::invalid_argument);
  nlohmann::json j2 = {{"primitive", {{"waypoints", 2}}}};
  CHECK_THROWS_AS(run_config_from_json(j2), std::invalid_argument);
}

TEST_CASE("default sweep config covers the five families") {
  const SweepConfig sweep = default_sweep_config();
  sweep.validate();
  CHECK(sweep.families.size() == 5);
  for (SurfaceFamily f : sweep.families) {
    CHECK(sweep.grids.at(f).size() >= 4);
  }
}

TEST_CASE("fmt_double round-trips doubles") {
  for (double v : {0.0, 1.0, -16.59, 0.1, 3.141592653589793, 1e-9}) {
    CHECK(std::stod(fmt_double(v)) == v);
  }
}
