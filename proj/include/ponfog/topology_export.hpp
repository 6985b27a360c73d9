#pragma once

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ponfog/topology.hpp"

namespace ponfog {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const FogTopology& topo) {
  ordered_json doc;
  doc["cells"] = topo.params.cells;
  doc["groups"] = topo.group_count();
  doc["servers"] = topo.server_count();
  doc["awgrs"] = topo.group_count();

  ordered_json olt;
  const auto& cap = topo.olt.capacity;
  olt["cards_per_chassis_total"] = cap.cards_per_chassis_total;
  olt["cards_reserved"] = cap.cards_reserved;
  olt["ports_per_card"] = cap.ports_per_card;
  olt["split_ratio_per_port"] = cap.split_ratio_per_port;
  olt["servers_per_card"] = cap.servers_per_card();
  doc["olt"] = olt;

  ordered_json cells = ordered_json::array();
  for (const auto& cell : topo.cells) {
    ordered_json c;
    c["id"] = cell.id + 1;
    c["olt_km"] = cell.olt_km;
    ordered_json groups = ordered_json::array();
    for (const auto& grp : cell.groups) {
      ordered_json g;
      g["id"] = grp.id + 1;
      g["label"] = "G" + std::to_string(grp.id + 1);
      g["awgr"] = "AWGR" + std::to_string(grp.id + 1);
      ordered_json servers = ordered_json::array();
      for (const auto& s : grp.servers) {
        ordered_json sj;
        sj["index"] = s.index;
        sj["onu"] = s.onu.id;
        sj["tunable"] = s.onu.tunable;
        servers.push_back(std::move(sj));
      }
      g["servers"] = std::move(servers);
      groups.push_back(std::move(g));
    }
    c["groups"] = std::move(groups);
    cells.push_back(std::move(c));
  }
  doc["cell_list"] = std::move(cells);

  ordered_json links = ordered_json::array();
  for (const auto& l : topo.awgr_links) {
    ordered_json lj;
    lj["a"] = "AWGR" + std::to_string(l.a + 1);
    lj["b"] = "AWGR" + std::to_string(l.b + 1);
    lj["scope"] = topo.cell_of(l.a) == topo.cell_of(l.b) ? "intra-cell" : "inter-cell";
    lj["km"] = l.km;
    links.push_back(std::move(lj));
  }
  doc["awgr_links"] = std::move(links);

  ordered_json uplinks = ordered_json::array();
  for (const auto& u : topo.awg_uplinks) {
    ordered_json uj;
    uj["awgr"] = "AWGR" + std::to_string(u.group + 1);
    uj["via"] = "AWG";
    uj["to"] = "OLT";
    uj["km"] = u.km;
    uplinks.push_back(std::move(uj));
  }
  doc["awg_uplinks"] = std::move(uplinks);
  return doc;
}

/// Physical topology as a DOT digraph. Servers are collapsed to one node per
/// rack to keep the graph readable.
inline std::string to_dot(const FogTopology& topo) {
  std::ostringstream os;
  os << "digraph pon_fog {\n";
  os << "  rankdir=TB;\n";
  os << "  OLT [shape=box,label=\"SD-OLT\"];\n";
  for (const auto& cell : topo.cells) {
    os << "  subgraph cluster_cell" << cell.id + 1 << " {\n";
    os << "    label=\"PON cell " << cell.id + 1 << "\";\n";
    for (const auto& grp : cell.groups) {
      const auto n = grp.id + 1;
      os << "    AWGR" << n << " [shape=diamond];\n";
      os << "    RACK" << n << " [shape=folder,label=\"G" << n << " (" << grp.servers.size()
         << " servers)\"];\n";
      os << "    RACK" << n << " -> AWGR" << n << " [dir=both];\n";
    }
    os << "  }\n";
  }
  for (const auto& u : topo.awg_uplinks)
    os << "  AWGR" << u.group + 1 << " -> OLT [dir=both,style=dashed,label=\"AWG " << u.km
       << " km\"];\n";
  for (const auto& l : topo.awgr_links)
    os << "  AWGR" << l.a + 1 << " -> AWGR" << l.b + 1 << " [dir=both];\n";
  os << "}\n";
  return os.str();
}

}  // namespace ponfog
