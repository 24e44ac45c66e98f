#pragma once

// File formats: trajectory / execution-log / summary-table CSV and the JSON
// scenario schema. Doubles are written with shortest round-trip formatting
// so repeated runs produce byte-identical files.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfwarp/contact_sim.hpp"
#include "surfwarp/metrics.hpp"
#include "surfwarp/offline_warp.hpp"
#include "surfwarp/online_exec.hpp"

namespace surfwarp {

inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("fmt_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
  return out;
}

/// `k,tile_id,contact_flag,px,py,pz,qw,qx,qy,qz` with a header row.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<Pose>& poses,
                                 const std::vector<int>& tile_id,
                                 const std::vector<bool>& contact_flags) {
  if (poses.size() != tile_id.size() || poses.size() != contact_flags.size()) {
    throw std::invalid_argument("write_trajectory_csv: length mismatch");
  }
  std::ofstream out = open_output(path);
  out << "k,tile_id,contact_flag,px,py,pz,qw,qx,qy,qz\n";
  for (std::size_t k = 0; k < poses.size(); ++k) {
    const Pose& p = poses[k];
    out << k << ',' << tile_id[k] << ',' << (contact_flags[k] ? 1 : 0) << ','
        << fmt_double(p.position.x()) << ',' << fmt_double(p.position.y()) << ','
        << fmt_double(p.position.z()) << ',' << fmt_double(p.rotation.w()) << ','
        << fmt_double(p.rotation.x()) << ',' << fmt_double(p.rotation.y()) << ','
        << fmt_double(p.rotation.z()) << '\n';
  }
}

/// `k,F,e,phi_deg,delta_cone_deg,px,py,pz,qw,qx,qy,qz,event_flag` with a
/// header row; pose columns hold the projected pose.
inline void write_execution_csv(const std::filesystem::path& path,
                                const ExecutionLog& log) {
  std::ofstream out = open_output(path);
  out << "k,F,e,phi_deg,delta_cone_deg,px,py,pz,qw,qx,qy,qz,event_flag\n";
  const double deg = 180.0 / kPi;
  for (const ExecutionRecord& rec : log.records) {
    const Pose& p = rec.step.projected;
    out << rec.k << ',' << fmt_double(rec.F) << ','
        << fmt_double(rec.step.contact_error) << ','
        << fmt_double(rec.step.phi * deg) << ','
        << fmt_double(rec.step.delta_cone * deg) << ','
        << fmt_double(p.position.x()) << ',' << fmt_double(p.position.y()) << ','
        << fmt_double(p.position.z()) << ',' << fmt_double(p.rotation.w()) << ','
        << fmt_double(p.rotation.x()) << ',' << fmt_double(p.rotation.y()) << ','
        << fmt_double(p.rotation.z()) << ',' << rec.event_flag << '\n';
  }
}

inline std::string pair_summary_csv_header() {
  return "surface_family,n_pairs,n_steps,median_delta_p95,bad_rate_tiled,"
         "bad_rate_warped,delta_bad,collisions_tiled,collisions_warped";
}

inline std::string pair_summary_csv_row(const PairSummary& s) {
  std::ostringstream row;
  row << family_name(s.surface_family) << ',' << s.n_pairs << ',' << s.n_steps
      << ',' << fmt_double(s.median_delta_p95) << ','
      << fmt_double(s.bad_rate_tiled) << ',' << fmt_double(s.bad_rate_warped)
      << ',' << fmt_double(s.delta_bad) << ',' << s.collisions_tiled << ','
      << s.collisions_warped;
  return row.str();
}

/// One row per surface family, in the given order.
inline void write_summary_table_csv(const std::filesystem::path& path,
                                    const std::vector<PairSummary>& rows) {
  std::ofstream out = open_output(path);
  out << pair_summary_csv_header() << '\n';
  for (const PairSummary& row : rows) {
    out << pair_summary_csv_row(row) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Scenario JSON: {stiffness, noise_sigma, seed, events:[{kind, at_step,
// magnitude}]}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario scenario;
  try {
    scenario.stiffness = j.value("stiffness", scenario.stiffness);
    scenario.noise_sigma = j.value("noise_sigma", scenario.noise_sigma);
    scenario.seed = j.value("seed", scenario.seed);
    if (j.contains("events")) {
      for (const auto& je : j.at("events")) {
        ScenarioEvent ev;
        const std::string kind = je.at("kind").get<std::string>();
        if (kind == "height_drop") {
          ev.kind = ScenarioEvent::Kind::HeightDrop;
        } else if (kind == "force_bias") {
          ev.kind = ScenarioEvent::Kind::ForceBias;
        } else {
          throw std::invalid_argument("unknown event kind: " + kind);
        }
        ev.at_step = je.at("at_step").get<int>();
        ev.magnitude = je.at("magnitude").get<double>();
        scenario.events.push_back(ev);
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed scenario: ") + ex.what());
  }
  if (!(scenario.stiffness > 0.0) || scenario.noise_sigma < 0.0) {
    throw std::invalid_argument("malformed scenario: bad stiffness or noise");
  }
  return scenario;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open scenario file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed scenario: ") + ex.what());
  }
  return scenario_from_json(j);
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace surfwarp
