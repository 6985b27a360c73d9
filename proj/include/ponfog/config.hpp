#pragma once

// Run configuration: one JSON document with a section per module. Every
// field is optional and falls back to the reference defaults. Unknown keys
// and wrongly typed values are rejected with the offending JSON path.

#include <cstdint>
#include <istream>
#include <iterator>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "ponfog/control_sim.hpp"
#include "ponfog/error.hpp"
#include "ponfog/power.hpp"
#include "ponfog/topology.hpp"

namespace ponfog {

struct SimParams {
  double line_rate_gbps = 10.0;
  double propagation_us_per_km = 5.0;
  SimTime olt_processing_us = 10;
  SimTime tuning_us = 1;
  SimTime control_service_us = 1;
  std::uint64_t seed = 1;
};

struct RunConfig {
  TopologyParams topology;
  OltCapacity olt;
  CardAllocation card_allocation = CardAllocation::PerCell;
  SpineLeafParams spine_leaf;
  PowerParams power;
  SimParams sim;

  PowerConfig power_config() const { return {topology, olt, spine_leaf, power, card_allocation}; }

  SimConfig sim_config(const FogTopology& topo, const RoutingMap& map) const {
    SimConfig c;
    c.topo = topo;
    c.map = map;
    c.line_rate_gbps = sim.line_rate_gbps;
    c.propagation_us_per_km = sim.propagation_us_per_km;
    c.olt_processing_us = sim.olt_processing_us;
    c.tuning_us = sim.tuning_us;
    c.control_service_us = sim.control_service_us;
    c.seed = sim.seed;
    return c;
  }
};

namespace detail {

class SectionReader {
 public:
  SectionReader(const nlohmann::json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) fail(path_, "expected an object");
  }

  template <typename T>
  void read(const char* key, T& field) {
    seen_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    const std::string where = path_ + "." + key;
    if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) fail(where, "expected a number");
      field = it->template get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_unsigned()) fail(where, "expected a non-negative integer");
      field = it->template get<T>();
    } else {
      field = it->template get<T>();
    }
  }

  const nlohmann::json* take(const char* key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [k, v] : doc_.items())
      if (!seen_.count(k)) fail(path_ + "." + k, "unknown key");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& why) {
    throw Error(ErrorCode::Parse, "config " + where + ": " + why);
  }

 private:
  const nlohmann::json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

inline std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// Validates the merged configuration against every module's preconditions.
inline void check_run_config(const RunConfig& c) {
  check_params(c.topology);
  check_capacity(c.olt);
  check_power_params(c.power);
  if (c.topology.servers() > c.olt.max_servers())
    throw Error(ErrorCode::CapacityExceeded, "topology needs " + std::to_string(c.topology.servers()) +
                                                 " servers, OLT serves at most " +
                                                 std::to_string(c.olt.max_servers()));
  if (c.spine_leaf.leaf_server_ports == 0 || c.spine_leaf.leaf_uplink_ports == 0 ||
      c.spine_leaf.leaves_per_spine == 0)
    throw Error(ErrorCode::InvalidParams, "spine_leaf port counts must be positive");
  if (!(c.sim.line_rate_gbps > 0.0)) throw Error(ErrorCode::InvalidParams, "sim.line_rate_gbps must be positive");
  if (!(c.sim.propagation_us_per_km >= 0.0))
    throw Error(ErrorCode::InvalidParams, "sim.propagation_us_per_km must be >= 0");
}

inline RunConfig parse_run_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, "config line " + std::to_string(detail::line_of_offset(text, e.byte)) + ": " +
                                      e.what());
  }
  RunConfig c;
  detail::SectionReader root(doc, "$");

  if (const auto* t = root.take("topology")) {
    detail::SectionReader r(*t, "$.topology");
    r.read("cells", c.topology.cells);
    r.read("racks_per_cell", c.topology.racks_per_cell);
    r.read("servers_per_rack", c.topology.servers_per_rack);
    if (const auto* km = r.take("olt_to_cell_km")) {
      if (km->is_number()) {
        c.topology.olt_to_cell_km = {km->get<double>()};
      } else if (km->is_array() && !km->empty()) {
        c.topology.olt_to_cell_km.clear();
        for (const auto& v : *km) {
          if (!v.is_number()) detail::SectionReader::fail("$.topology.olt_to_cell_km", "expected numbers");
          c.topology.olt_to_cell_km.push_back(v.get<double>());
        }
      } else {
        detail::SectionReader::fail("$.topology.olt_to_cell_km", "expected a number or non-empty array");
      }
    }
    r.read("inter_cell_awgr_km", c.topology.inter_cell_awgr_km);
    r.read("intra_cell_awgr_km", c.topology.intra_cell_awgr_km);
    r.read("intra_rack_km", c.topology.intra_rack_km);
    r.finish();
  }
  if (const auto* o = root.take("olt")) {
    detail::SectionReader r(*o, "$.olt");
    r.read("cards_per_chassis_total", c.olt.cards_per_chassis_total);
    r.read("cards_reserved", c.olt.cards_reserved);
    r.read("ports_per_card", c.olt.ports_per_card);
    r.read("split_ratio_per_port", c.olt.split_ratio_per_port);
    if (const auto* a = r.take("card_allocation")) {
      const auto s = a->is_string() ? a->get<std::string>() : std::string{};
      if (s == "per-cell")
        c.card_allocation = CardAllocation::PerCell;
      else if (s == "shared")
        c.card_allocation = CardAllocation::Shared;
      else
        detail::SectionReader::fail("$.olt.card_allocation", "expected \"per-cell\" or \"shared\"");
    }
    r.finish();
  }
  if (const auto* s = root.take("spine_leaf")) {
    detail::SectionReader r(*s, "$.spine_leaf");
    r.read("leaf_server_ports", c.spine_leaf.leaf_server_ports);
    r.read("leaf_uplink_ports", c.spine_leaf.leaf_uplink_ports);
    r.read("min_spines", c.spine_leaf.min_spines);
    r.read("leaves_per_spine", c.spine_leaf.leaves_per_spine);
    r.finish();
  }
  if (const auto* p = root.take("power")) {
    detail::SectionReader r(*p, "$.power");
    r.read("olt_gpon_card_w", c.power.olt_gpon_card_w);
    r.read("tunable_onu_w", c.power.tunable_onu_w);
    r.read("spine_switch_w", c.power.spine_switch_w);
    r.read("leaf_switch_w", c.power.leaf_switch_w);
    r.read("server_transceiver_w", c.power.server_transceiver_w);
    r.read("olt_overhead_w", c.power.olt_overhead_w);
    r.finish();
  }
  if (const auto* s = root.take("sim")) {
    detail::SectionReader r(*s, "$.sim");
    r.read("line_rate_gbps", c.sim.line_rate_gbps);
    r.read("propagation_us_per_km", c.sim.propagation_us_per_km);
    r.read("olt_processing_us", c.sim.olt_processing_us);
    r.read("tuning_us", c.sim.tuning_us);
    r.read("control_service_us", c.sim.control_service_us);
    r.read("seed", c.sim.seed);
    r.finish();
  }
  root.finish();
  check_run_config(c);
  return c;
}

inline RunConfig read_run_config(std::istream& is) {
  const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  return parse_run_config(text);
}

}  // namespace ponfog
