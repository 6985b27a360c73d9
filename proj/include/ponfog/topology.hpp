#pragma once

// PON-cell fog architecture and the spine-and-leaf reference fabric.
//
// A cell is a fog computing unit; each of its racks is one PON group with a
// dedicated AWGR. Groups are numbered globally, cell by cell, so that cell 0
// holds groups 0..racks_per_cell-1 and so on. The OLT is not a group; it is
// reached from every AWGR through an AWG multiplexer uplink.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ponfog/error.hpp"

namespace ponfog {

inline constexpr double kMaxOltReachKm = 20.0;

struct TopologyParams {
  std::size_t cells = 3;
  std::size_t racks_per_cell = 2;
  std::size_t servers_per_rack = 16;
  // One entry applies to every cell; otherwise one entry per cell.
  std::vector<double> olt_to_cell_km{kMaxOltReachKm};
  double inter_cell_awgr_km = 0.5;
  double intra_cell_awgr_km = 0.005;
  double intra_rack_km = 0.005;

  std::size_t groups() const { return cells * racks_per_cell; }
  std::size_t servers() const { return groups() * servers_per_rack; }

  double olt_km_for_cell(std::size_t cell) const {
    if (olt_to_cell_km.size() == 1) return olt_to_cell_km.front();
    return olt_to_cell_km.at(cell);
  }

  friend bool operator==(const TopologyParams&, const TopologyParams&) = default;
};

struct OltCapacity {
  std::size_t cards_per_chassis_total = 18;
  std::size_t cards_reserved = 2;
  std::size_t ports_per_card = 16;
  std::size_t split_ratio_per_port = 128;

  std::size_t usable_cards() const {
    return cards_per_chassis_total > cards_reserved ? cards_per_chassis_total - cards_reserved : 0;
  }
  std::size_t servers_per_card() const { return ports_per_card * split_ratio_per_port; }
  std::size_t max_servers() const { return usable_cards() * servers_per_card(); }

  friend bool operator==(const OltCapacity&, const OltCapacity&) = default;
};

inline void check_params(const TopologyParams& p) {
  if (p.cells == 0 || p.racks_per_cell == 0 || p.servers_per_rack == 0)
    throw Error(ErrorCode::InvalidParams, "cells, racks_per_cell and servers_per_rack must be >= 1");
  if (p.olt_to_cell_km.size() != 1 && p.olt_to_cell_km.size() != p.cells)
    throw Error(ErrorCode::InvalidParams,
                "olt_to_cell_km needs 1 or " + std::to_string(p.cells) + " entries, got " +
                    std::to_string(p.olt_to_cell_km.size()));
  for (std::size_t c = 0; c < p.cells; ++c) {
    const double km = p.olt_km_for_cell(c);
    if (!(km > 0.0 && km <= kMaxOltReachKm))
      throw Error(ErrorCode::InvalidParams, "cell " + std::to_string(c + 1) +
                                                ": OLT distance must lie in (0, 20] km, got " +
                                                std::to_string(km));
  }
  if (p.inter_cell_awgr_km < 0.0 || p.intra_cell_awgr_km < 0.0 || p.intra_rack_km < 0.0)
    throw Error(ErrorCode::InvalidParams, "fiber lengths must be non-negative");
}

inline void check_capacity(const OltCapacity& c) {
  if (c.usable_cards() == 0 || c.ports_per_card == 0 || c.split_ratio_per_port == 0)
    throw Error(ErrorCode::InvalidParams, "OLT capacity leaves no usable ports");
}

struct TunableOnu {
  std::size_t id = 0;  // global server index
  bool tunable = true;

  friend bool operator==(const TunableOnu&, const TunableOnu&) = default;
};

struct ServerNode {
  std::size_t group = 0;  // global, 0-based
  std::size_t index = 0;  // rack-local
  TunableOnu onu;

  friend bool operator==(const ServerNode& a, const ServerNode& b) {
    return a.group == b.group && a.index == b.index;
  }
};

struct PonGroup {
  std::size_t cell = 0;
  std::size_t id = 0;
  std::vector<ServerNode> servers;

  friend bool operator==(const PonGroup&, const PonGroup&) = default;
};

struct PonCell {
  std::size_t id = 0;
  double olt_km = kMaxOltReachKm;
  std::vector<PonGroup> groups;

  friend bool operator==(const PonCell&, const PonCell&) = default;
};

struct OltNode {
  OltCapacity capacity;

  friend bool operator==(const OltNode&, const OltNode&) = default;
};

/// Unordered AWGR pair, stored with a < b. AWGR ids equal group ids.
struct AwgrLink {
  std::size_t a = 0;
  std::size_t b = 0;
  double km = 0.0;

  friend bool operator==(const AwgrLink& x, const AwgrLink& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(const AwgrLink& x, const AwgrLink& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  }
};

inline AwgrLink make_awgr_link(std::size_t x, std::size_t y, double km) {
  return x < y ? AwgrLink{x, y, km} : AwgrLink{y, x, km};
}

struct AwgUplink {
  std::size_t group = 0;
  double km = 0.0;

  friend bool operator==(const AwgUplink&, const AwgUplink&) = default;
};

struct FogTopology {
  TopologyParams params;
  std::vector<PonCell> cells;
  OltNode olt;
  std::set<AwgrLink> awgr_links;
  std::vector<AwgUplink> awg_uplinks;

  std::size_t group_count() const { return params.groups(); }
  std::size_t server_count() const { return params.servers(); }
  std::size_t cell_of(std::size_t group) const { return group / params.racks_per_cell; }

  const PonGroup& group(std::size_t g) const {
    if (g >= group_count()) throw Error(ErrorCode::OutOfRange, "group " + std::to_string(g));
    return cells[cell_of(g)].groups[g % params.racks_per_cell];
  }

  const ServerNode& server(std::size_t g, std::size_t index) const {
    const auto& grp = group(g);
    if (index >= grp.servers.size())
      throw Error(ErrorCode::OutOfRange,
                  "server " + std::to_string(index) + " in group " + std::to_string(g));
    return grp.servers[index];
  }

  bool contains(const ServerNode& s) const {
    return s.group < group_count() && s.index < params.servers_per_rack;
  }

  const AwgrLink* find_link(std::size_t x, std::size_t y) const {
    auto it = awgr_links.find(make_awgr_link(x, y, 0.0));
    return it == awgr_links.end() ? nullptr : &*it;
  }

  double uplink_km(std::size_t g) const {
    for (const auto& u : awg_uplinks)
      if (u.group == g) return u.km;
    throw Error(ErrorCode::OutOfRange, "no OLT uplink for group " + std::to_string(g));
  }

  friend bool operator==(const FogTopology& x, const FogTopology& y) {
    if (!(x.params == y.params && x.cells == y.cells && x.olt == y.olt &&
          x.awg_uplinks == y.awg_uplinks && x.awgr_links.size() == y.awgr_links.size()))
      return false;
    return std::equal(x.awgr_links.begin(), x.awgr_links.end(), y.awgr_links.begin(),
                      [](const AwgrLink& l, const AwgrLink& r) { return l == r && l.km == r.km; });
  }
};

inline FogTopology build_fog_topology(const TopologyParams& params, const OltCapacity& capacity = {}) {
  check_params(params);
  check_capacity(capacity);
  if (params.servers() > capacity.max_servers())
    throw Error(ErrorCode::CapacityExceeded,
                std::to_string(params.servers()) + " servers exceed OLT capacity of " +
                    std::to_string(capacity.max_servers()) + " (" +
                    std::to_string(capacity.usable_cards()) + " usable cards x " +
                    std::to_string(capacity.servers_per_card()) + ")");

  FogTopology topo;
  topo.params = params;
  topo.olt.capacity = capacity;
  topo.cells.reserve(params.cells);

  std::size_t next_group = 0;
  std::size_t next_server = 0;
  for (std::size_t c = 0; c < params.cells; ++c) {
    PonCell cell{c, params.olt_km_for_cell(c), {}};
    cell.groups.reserve(params.racks_per_cell);
    for (std::size_t r = 0; r < params.racks_per_cell; ++r) {
      PonGroup grp{c, next_group, {}};
      grp.servers.reserve(params.servers_per_rack);
      for (std::size_t s = 0; s < params.servers_per_rack; ++s)
        grp.servers.push_back(ServerNode{next_group, s, TunableOnu{next_server++, true}});
      cell.groups.push_back(std::move(grp));
      topo.awg_uplinks.push_back(AwgUplink{next_group, cell.olt_km});
      ++next_group;
    }
    topo.cells.push_back(std::move(cell));
  }

  const std::size_t g = params.groups();
  for (std::size_t x = 0; x < g; ++x)
    for (std::size_t y = x + 1; y < g; ++y) {
      const bool same_cell = topo.cell_of(x) == topo.cell_of(y);
      topo.awgr_links.insert(
          make_awgr_link(x, y, same_cell ? params.intra_cell_awgr_km : params.inter_cell_awgr_km));
    }
  return topo;
}

struct Diagnostic {
  std::string code;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Empty result means every structural invariant of the fog topology holds.
inline std::vector<Diagnostic> validate_topology(const FogTopology& topo) {
  std::vector<Diagnostic> out;
  const std::size_t g = topo.group_count();
  auto label = [](std::size_t grp) { return "G" + std::to_string(grp + 1); };

  std::size_t expected_id = 0;
  for (std::size_t c = 0; c < topo.cells.size(); ++c) {
    const auto& cell = topo.cells[c];
    for (const auto& grp : cell.groups) {
      if (grp.id != expected_id || grp.cell != c)
        out.push_back({"group-numbering", "group " + label(grp.id) + " in cell " +
                                              std::to_string(c + 1) + " breaks dense numbering"});
      for (const auto& s : grp.servers)
        if (s.group != grp.id || !s.onu.tunable)
          out.push_back({"server-onu", "server " + std::to_string(s.index) + " of " +
                                           label(grp.id) + " lacks a tunable ONU bound to its group"});
      ++expected_id;
    }
  }
  if (expected_id != g)
    out.push_back({"group-count", "expected " + std::to_string(g) + " groups, found " +
                                      std::to_string(expected_id)});

  for (const auto& l : topo.awgr_links)
    if (l.a >= g || l.b >= g || l.a == l.b)
      out.push_back({"bad-awgr-link", "link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
                                          " does not join two distinct AWGRs"});

  for (std::size_t x = 0; x < g; ++x)
    for (std::size_t y = x + 1; y < g; ++y)
      if (topo.find_link(x, y) == nullptr) {
        const bool same_cell = topo.cell_of(x) == topo.cell_of(y);
        out.push_back({same_cell ? "missing-intra-cell-link" : "missing-inter-cell-link",
                       "AWGR(" + label(x) + ") and AWGR(" + label(y) + ") are not linked"});
      }

  std::vector<std::size_t> uplinks(g, 0);
  for (const auto& u : topo.awg_uplinks) {
    if (u.group >= g) {
      out.push_back({"bad-uplink", "uplink references unknown group " + std::to_string(u.group)});
      continue;
    }
    ++uplinks[u.group];
  }
  for (std::size_t x = 0; x < g; ++x) {
    if (uplinks[x] == 0)
      out.push_back({"missing-uplink", "AWGR(" + label(x) + ") has no AWG uplink to the OLT"});
    else if (uplinks[x] > 1)
      out.push_back({"duplicate-uplink", "AWGR(" + label(x) + ") has " +
                                             std::to_string(uplinks[x]) + " OLT uplinks"});
  }
  return out;
}

/// Groups in id order, then the OLT as the last endpoint.
struct Endpoint {
  std::size_t index = 0;
  bool is_olt = false;
  std::string label;
};

inline std::vector<Endpoint> rwa_endpoints(const FogTopology& topo) {
  std::vector<Endpoint> eps;
  const std::size_t g = topo.group_count();
  eps.reserve(g + 1);
  for (std::size_t i = 0; i < g; ++i) eps.push_back({i, false, "G" + std::to_string(i + 1)});
  eps.push_back({g, true, "OLT"});
  return eps;
}

enum class ElementKind { Onu, Reflector, Awgr, Fiber, LeafSwitch, SpineSwitch, Transceiver, Olt };

inline std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Onu: return "onu";
    case ElementKind::Reflector: return "fbg-reflector";
    case ElementKind::Awgr: return "awgr";
    case ElementKind::Fiber: return "fiber";
    case ElementKind::LeafSwitch: return "leaf";
    case ElementKind::SpineSwitch: return "spine";
    case ElementKind::Transceiver: return "transceiver";
    case ElementKind::Olt: return "olt";
  }
  return "?";
}

enum class PathClass { IntraRack, InterRackSameCell, InterCell };

inline std::string_view to_string(PathClass c) {
  switch (c) {
    case PathClass::IntraRack: return "intra-rack";
    case PathClass::InterRackSameCell: return "inter-rack-same-cell";
    case PathClass::InterCell: return "inter-cell";
  }
  return "?";
}

struct PathElement {
  ElementKind kind;
  std::size_t id = 0;
  double km = 0.0;  // fiber segments only
};

struct DataPath {
  std::vector<PathElement> elements;
  PathClass classification = PathClass::IntraRack;
  double length_km = 0.0;

  std::size_t count(ElementKind k) const {
    return static_cast<std::size_t>(std::count_if(
        elements.begin(), elements.end(), [k](const PathElement& e) { return e.kind == k; }));
  }
};

inline PathClass classify(const FogTopology& topo, const ServerNode& a, const ServerNode& b) {
  if (a.group == b.group) return PathClass::IntraRack;
  return topo.cell_of(a.group) == topo.cell_of(b.group) ? PathClass::InterRackSameCell
                                                        : PathClass::InterCell;
}

/// Passive data path between two servers. The OLT only carries control
/// traffic, so it never shows up here.
inline DataPath data_path(const FogTopology& topo, const ServerNode& src, const ServerNode& dst) {
  if (!topo.contains(src) || !topo.contains(dst))
    throw Error(ErrorCode::OutOfRange, "server not in topology");
  if (src == dst) throw Error(ErrorCode::SamePath, "source and destination are the same server");

  DataPath p;
  p.classification = classify(topo, src, dst);
  if (p.classification == PathClass::IntraRack) {
    p.elements = {{ElementKind::Onu, src.onu.id},
                  {ElementKind::Reflector, src.group},
                  {ElementKind::Onu, dst.onu.id}};
    p.length_km = topo.params.intra_rack_km;
    return p;
  }
  const AwgrLink* link = topo.find_link(src.group, dst.group);
  if (link == nullptr)
    throw Error(ErrorCode::InvalidParams, "no AWGR link between groups " +
                                              std::to_string(src.group) + " and " +
                                              std::to_string(dst.group));
  p.elements = {{ElementKind::Onu, src.onu.id},
                {ElementKind::Awgr, src.group},
                {ElementKind::Fiber, 0, link->km},
                {ElementKind::Awgr, dst.group},
                {ElementKind::Onu, dst.onu.id}};
  p.length_km = link->km;
  return p;
}

// ---------------------------------------------------------------------------
// Spine-and-leaf reference fabric

struct SpineLeafParams {
  std::size_t leaf_server_ports = 48;
  std::size_t leaf_uplink_ports = 64;
  std::size_t min_spines = 2;
  std::size_t leaves_per_spine = 4;

  friend bool operator==(const SpineLeafParams&, const SpineLeafParams&) = default;
};

struct SpineLeafTopology {
  SpineLeafParams params;
  std::size_t n_servers = 0;
  std::size_t leaves = 0;
  std::size_t spines = 0;

  std::size_t leaf_of(std::size_t server) const {
    if (server >= n_servers) throw Error(ErrorCode::OutOfRange, "server " + std::to_string(server));
    return server / params.leaf_server_ports;
  }
  std::size_t leaf_spine_links() const { return leaves * spines; }
};

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

inline SpineLeafTopology build_spine_leaf(std::size_t n_servers, const SpineLeafParams& params = {}) {
  if (params.leaf_server_ports == 0 || params.leaf_uplink_ports == 0 || params.leaves_per_spine == 0)
    throw Error(ErrorCode::InvalidParams, "spine-leaf port counts must be positive");
  if (n_servers == 0) throw Error(ErrorCode::InvalidParams, "spine-leaf fabric needs >= 1 server");

  SpineLeafTopology t;
  t.params = params;
  t.n_servers = n_servers;
  t.leaves = ceil_div(n_servers, params.leaf_server_ports);
  t.spines = std::max(params.min_spines, ceil_div(t.leaves, params.leaves_per_spine));
  if (t.spines > params.leaf_uplink_ports)
    throw Error(ErrorCode::CapacityExceeded,
                std::to_string(t.spines) + " spines exceed " +
                    std::to_string(params.leaf_uplink_ports) + " leaf uplink ports");
  return t;
}

inline DataPath spine_leaf_path(const SpineLeafTopology& t, std::size_t src, std::size_t dst) {
  if (src == dst) throw Error(ErrorCode::SamePath, "source and destination are the same server");
  const std::size_t ls = t.leaf_of(src);
  const std::size_t ld = t.leaf_of(dst);
  DataPath p;
  p.elements.push_back({ElementKind::Transceiver, src});
  p.elements.push_back({ElementKind::LeafSwitch, ls});
  if (ls != ld) {
    // Spine chosen by destination leaf; any spine works in a full bipartite fabric.
    p.elements.push_back({ElementKind::SpineSwitch, ld % t.spines});
    p.elements.push_back({ElementKind::LeafSwitch, ld});
  }
  p.elements.push_back({ElementKind::Transceiver, dst});
  p.classification = ls == ld ? PathClass::IntraRack : PathClass::InterRackSameCell;
  return p;
}

}  // namespace ponfog
