#pragma once

// Itemized power of the PON fog interconnect versus a spine-and-leaf fabric
// serving the same servers. Passive optics (AWGRs, AWG multiplexers, FBG
// reflectors, couplers) are listed at 0 W so the breakdown shows what was
// replaced rather than silently dropping it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ponfog/error.hpp"
#include "ponfog/topology.hpp"

namespace ponfog {

struct PowerParams {
  double olt_gpon_card_w = 90.0;
  double tunable_onu_w = 2.5;
  double spine_switch_w = 660.0;
  double leaf_switch_w = 508.0;
  double server_transceiver_w = 3.0;
  // Switching-matrix and control cards of the OLT chassis.
  double olt_overhead_w = 0.0;

  PowerParams scaled(double k) const {
    return {olt_gpon_card_w * k, tunable_onu_w * k,        spine_switch_w * k,
            leaf_switch_w * k,   server_transceiver_w * k, olt_overhead_w * k};
  }

  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

inline void check_power_params(const PowerParams& p) {
  for (double v : {p.olt_gpon_card_w, p.tunable_onu_w, p.spine_switch_w, p.leaf_switch_w,
                   p.server_transceiver_w, p.olt_overhead_w})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::InvalidParams, "device power values must be finite and >= 0");
}

/// How GPON line cards are provisioned for the fog cells.
enum class CardAllocation {
  PerCell,  // each cell gets its own card(s)
  Shared,   // cells are packed onto as few cards as capacity allows
};

enum class Architecture { PonFog, SpineLeaf };

inline std::string_view to_string(Architecture a) {
  return a == Architecture::PonFog ? "pon-fog" : "spine-leaf";
}

struct PowerItem {
  std::string device;
  std::size_t count = 0;
  double unit_w = 0.0;
  double subtotal_w = 0.0;
};

struct PowerBreakdown {
  Architecture architecture = Architecture::PonFog;
  std::size_t n_servers = 0;
  std::vector<PowerItem> items;
  double total_w = 0.0;

  void add(std::string device, std::size_t count, double unit_w) {
    const double sub = static_cast<double>(count) * unit_w;
    items.push_back({std::move(device), count, unit_w, sub});
    total_w += sub;
  }

  const PowerItem* find(std::string_view device) const {
    for (const auto& it : items)
      if (it.device == device) return &it;
    return nullptr;
  }
};

struct PowerConfig {
  // Only racks_per_cell and servers_per_rack shape the sweep; the cell count
  // is derived from the server count.
  TopologyParams profile;
  OltCapacity capacity;
  SpineLeafParams spine_leaf;
  PowerParams power;
  CardAllocation cards = CardAllocation::PerCell;
};

namespace detail {

inline PowerBreakdown pon_fog_from_layout(const std::vector<std::size_t>& servers_per_cell,
                                          std::size_t groups, const OltCapacity& cap,
                                          const PowerParams& p, CardAllocation policy) {
  check_power_params(p);
  std::size_t n = 0;
  for (auto s : servers_per_cell) n += s;

  std::size_t cards = 0;
  if (policy == CardAllocation::PerCell) {
    for (auto s : servers_per_cell) cards += std::max<std::size_t>(1, ceil_div(s, cap.servers_per_card()));
  } else {
    cards = std::max<std::size_t>(1, ceil_div(n, cap.servers_per_card()));
  }

  PowerBreakdown b;
  b.architecture = Architecture::PonFog;
  b.n_servers = n;
  b.add("tunable-onu", n, p.tunable_onu_w);
  b.add("olt-gpon-card", cards, p.olt_gpon_card_w);
  b.add("olt-overhead", 1, p.olt_overhead_w);
  b.add("awgr", groups, 0.0);
  b.add("awg-mux", groups, 0.0);
  b.add("fbg-reflector", groups, 0.0);
  b.add("coupler", groups, 0.0);
  return b;
}

}  // namespace detail

inline PowerBreakdown pon_fog_power(const TopologyParams& params, const OltCapacity& capacity,
                                    const PowerParams& p, CardAllocation policy = CardAllocation::PerCell) {
  const FogTopology topo = build_fog_topology(params, capacity);
  std::vector<std::size_t> layout(params.cells, params.racks_per_cell * params.servers_per_rack);
  return detail::pon_fog_from_layout(layout, topo.group_count(), capacity, p, policy);
}

/// PON fog power for an arbitrary server count: cells are filled in order
/// using the profile's racks and rack size, the last one possibly partial.
inline PowerBreakdown pon_fog_power_for_servers(std::size_t n_servers, const PowerConfig& cfg) {
  check_params(cfg.profile);
  check_capacity(cfg.capacity);
  if (n_servers == 0) throw Error(ErrorCode::InvalidParams, "need at least one server");
  if (n_servers > cfg.capacity.max_servers())
    throw Error(ErrorCode::CapacityExceeded, std::to_string(n_servers) + " servers exceed OLT capacity of " +
                                                 std::to_string(cfg.capacity.max_servers()));
  const std::size_t per_cell = cfg.profile.racks_per_cell * cfg.profile.servers_per_rack;
  std::vector<std::size_t> layout;
  for (std::size_t left = n_servers; left > 0;) {
    const std::size_t take = std::min(left, per_cell);
    layout.push_back(take);
    left -= take;
  }
  const std::size_t groups = ceil_div(n_servers, cfg.profile.servers_per_rack);
  return detail::pon_fog_from_layout(layout, groups, cfg.capacity, cfg.power, cfg.cards);
}

inline PowerBreakdown spine_leaf_power(std::size_t n_servers, const SpineLeafParams& slp, const PowerParams& p) {
  check_power_params(p);
  const SpineLeafTopology t = build_spine_leaf(n_servers, slp);
  PowerBreakdown b;
  b.architecture = Architecture::SpineLeaf;
  b.n_servers = n_servers;
  b.add("leaf-switch", t.leaves, p.leaf_switch_w);
  b.add("spine-switch", t.spines, p.spine_switch_w);
  b.add("server-transceiver", n_servers, p.server_transceiver_w);
  return b;
}

inline double savings_fraction(double pon_fog_w, double spine_leaf_w) {
  if (!(spine_leaf_w > 0.0)) throw Error(ErrorCode::InvalidParams, "reference power must be positive");
  return 1.0 - pon_fog_w / spine_leaf_w;
}

inline double savings(std::size_t n_servers, const PowerConfig& cfg) {
  return savings_fraction(pon_fog_power_for_servers(n_servers, cfg).total_w,
                          spine_leaf_power(n_servers, cfg.spine_leaf, cfg.power).total_w);
}

struct SweepRow {
  std::size_t n_servers = 0;
  double pon_fog_w = 0.0;
  double spine_leaf_w = 0.0;
  double savings = 0.0;
  std::optional<std::string> infeasible;  // reason, when the row could not be evaluated
};

struct SweepSeries {
  std::vector<SweepRow> rows;
};

inline SweepSeries sweep(std::vector<std::size_t> n_list, const PowerConfig& cfg) {
  std::sort(n_list.begin(), n_list.end());
  SweepSeries out;
  out.rows.reserve(n_list.size());
  for (auto n : n_list) {
    SweepRow row;
    row.n_servers = n;
    try {
      row.pon_fog_w = pon_fog_power_for_servers(n, cfg).total_w;
      row.spine_leaf_w = spine_leaf_power(n, cfg.spine_leaf, cfg.power).total_w;
      row.savings = savings_fraction(row.pon_fog_w, row.spine_leaf_w);
    } catch (const Error& e) {
      row.infeasible = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepSeries& s) {
  os << "n_servers,pon_fog_w,spine_leaf_w,savings\n";
  char buf[128];
  for (const auto& r : s.rows) {
    if (r.infeasible) {
      std::snprintf(buf, sizeof buf, "%zu,NA,NA,NA\n", r.n_servers);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%.1f,%.1f,%.4f\n", r.n_servers, r.pon_fog_w, r.spine_leaf_w,
                    r.savings);
    }
    os << buf;
  }
}

/// Whitespace-separated columns for gnuplot; infeasible rows become comments.
inline void write_sweep_dat(std::ostream& os, const SweepSeries& s) {
  os << "# n_servers pon_fog_w spine_leaf_w savings\n";
  char buf[128];
  for (const auto& r : s.rows) {
    if (r.infeasible) {
      std::snprintf(buf, sizeof buf, "# %zu infeasible\n", r.n_servers);
    } else {
      std::snprintf(buf, sizeof buf, "%zu %.1f %.1f %.4f\n", r.n_servers, r.pon_fog_w, r.spine_leaf_w,
                    r.savings);
    }
    os << buf;
  }
}

inline nlohmann::ordered_json to_json(const PowerBreakdown& b) {
  nlohmann::ordered_json j;
  j["architecture"] = std::string(to_string(b.architecture));
  j["n_servers"] = b.n_servers;
  auto items = nlohmann::ordered_json::array();
  for (const auto& it : b.items) {
    nlohmann::ordered_json ij;
    ij["device"] = it.device;
    ij["count"] = it.count;
    ij["unit_w"] = it.unit_w;
    ij["subtotal_w"] = it.subtotal_w;
    items.push_back(std::move(ij));
  }
  j["items"] = std::move(items);
  j["total_w"] = b.total_w;
  return j;
}

}  // namespace ponfog
