#pragma once

// Workload CSV and JSON-lines trace formats.
//
// Workload columns:
//   flow_id,src_cell,src_group,src_server,dst_cell,dst_group,dst_server,size_bits,arrival_us
// Cells and groups are 1-based with groups numbered globally (G1..Gn);
// servers are 1-based within their rack.

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ponfog/control_sim.hpp"
#include "ponfog/error.hpp"

namespace ponfog {

inline constexpr std::string_view kWorkloadHeader =
    "flow_id,src_cell,src_group,src_server,dst_cell,dst_group,dst_server,size_bits,arrival_us";

namespace detail {

inline std::uint64_t parse_u64(std::string_view tok, const std::string& where, std::string_view field) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(ErrorCode::Parse, where + ": field '" + std::string(field) + "' is not a non-negative integer: '" +
                                      std::string(tok) + "'");
  return v;
}

}  // namespace detail

/// Reads a workload and resolves servers against `topo`. Syntax errors raise
/// Parse; servers outside the topology raise InvalidRequest. Both name the row.
inline std::vector<FlowRequest> read_workload_csv(std::istream& is, const FogTopology& topo) {
  static constexpr std::string_view fields[] = {"flow_id",    "src_cell",   "src_group",
                                                "src_server", "dst_cell",   "dst_group",
                                                "dst_server", "size_bits",  "arrival_us"};
  std::vector<FlowRequest> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    const std::string where = "workload row " + std::to_string(lineno);
    if (!header_seen) {
      if (line != kWorkloadHeader)
        throw Error(ErrorCode::Parse, where + ": expected header '" + std::string(kWorkloadHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols.size() != 9)
      throw Error(ErrorCode::Parse, where + ": expected 9 fields, got " + std::to_string(cols.size()));
    std::uint64_t v[9];
    for (std::size_t k = 0; k < 9; ++k) v[k] = detail::parse_u64(cols[k], where, fields[k]);

    auto node = [&](std::uint64_t cell, std::uint64_t group, std::uint64_t server, const char* side) {
      if (group == 0 || group > topo.group_count())
        throw Error(ErrorCode::InvalidRequest, where + ": " + side + " group G" + std::to_string(group) +
                                                   " not in topology");
      if (cell == 0 || topo.cell_of(group - 1) != cell - 1)
        throw Error(ErrorCode::InvalidRequest, where + ": " + side + " group G" + std::to_string(group) +
                                                   " is not in cell " + std::to_string(cell));
      if (server == 0 || server > topo.params.servers_per_rack)
        throw Error(ErrorCode::InvalidRequest, where + ": " + side + " server " + std::to_string(server) +
                                                   " not in rack");
      return topo.server(group - 1, server - 1);
    };
    FlowRequest r;
    r.id = v[0];
    r.src = node(v[1], v[2], v[3], "source");
    r.dst = node(v[4], v[5], v[6], "destination");
    r.size_bits = v[7];
    r.arrival_us = v[8];
    out.push_back(r);
  }
  if (!header_seen) throw Error(ErrorCode::Parse, "workload: missing header");
  return out;
}

inline void write_workload_csv(std::ostream& os, const FogTopology& topo, const std::vector<FlowRequest>& reqs) {
  os << kWorkloadHeader << '\n';
  for (const auto& r : reqs) {
    os << r.id << ',' << topo.cell_of(r.src.group) + 1 << ',' << r.src.group + 1 << ',' << r.src.index + 1 << ','
       << topo.cell_of(r.dst.group) + 1 << ',' << r.dst.group + 1 << ',' << r.dst.index + 1 << ',' << r.size_bits
       << ',' << r.arrival_us << '\n';
  }
}

inline std::string endpoint_label(std::size_t endpoint, std::size_t olt_endpoint) {
  return endpoint == olt_endpoint ? std::string("OLT") : "G" + std::to_string(endpoint + 1);
}

inline std::string to_json_line(const TraceEvent& e, std::size_t olt_endpoint) {
  nlohmann::ordered_json j;
  j["t"] = e.t;
  j["event"] = std::string(to_string(e.kind));
  j["flow"] = e.flow;
  j["lambda"] = e.lambda;
  j["from"] = endpoint_label(e.from, olt_endpoint);
  j["to"] = endpoint_label(e.to, olt_endpoint);
  j["arrival"] = e.arrival;
  return j.dump();
}

inline void write_trace_jsonl(std::ostream& os, const SimTrace& trace) {
  for (const auto& e : trace.events) os << to_json_line(e, trace.olt_endpoint) << '\n';
}

inline SimTrace read_trace_jsonl(std::istream& is, std::size_t olt_endpoint) {
  SimTrace trace;
  trace.olt_endpoint = olt_endpoint;
  std::string line;
  std::size_t lineno = 0;
  auto endpoint = [&](const std::string& s, const std::string& where) -> std::size_t {
    if (s == "OLT") return olt_endpoint;
    if (s.size() < 2 || s[0] != 'G') throw Error(ErrorCode::Parse, where + ": bad endpoint '" + s + "'");
    return static_cast<std::size_t>(std::stoul(s.substr(1))) - 1;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "trace line " + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      TraceEvent e;
      e.t = j.at("t").get<SimTime>();
      const auto kind = event_kind_from(j.at("event").get<std::string>());
      if (!kind) throw Error(ErrorCode::Parse, where + ": unknown event kind");
      e.kind = *kind;
      e.flow = j.at("flow").get<FlowId>();
      e.lambda = j.at("lambda").get<Wavelength>();
      e.from = endpoint(j.at("from").get<std::string>(), where);
      e.to = endpoint(j.at("to").get<std::string>(), where);
      e.arrival = j.at("arrival").get<SimTime>();
      trace.events.push_back(e);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::Parse, where + ": " + ex.what());
    }
  }
  return trace;
}

struct SyntheticWorkload {
  std::size_t flows = 100;
  double mean_interarrival_us = 50.0;
  std::uint64_t size_bits = 1'000'000;
};

/// Random server pairs with exponential inter-arrival times. The seed is the
/// only source of randomness, so equal seeds give equal workloads.
inline std::vector<FlowRequest> generate_workload(const FogTopology& topo, const SyntheticWorkload& shape,
                                                  std::uint64_t seed) {
  if (topo.server_count() < 2) throw Error(ErrorCode::InvalidParams, "need two servers for traffic");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, topo.server_count() - 1);
  std::exponential_distribution<double> gap(1.0 / shape.mean_interarrival_us);
  const std::size_t per_rack = topo.params.servers_per_rack;

  std::vector<FlowRequest> out;
  double t = 0.0;
  for (std::size_t k = 0; k < shape.flows; ++k) {
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    FlowRequest r;
    r.id = k + 1;
    r.src = topo.server(a / per_rack, a % per_rack);
    r.dst = topo.server(b / per_rack, b % per_rack);
    r.size_bits = shape.size_bits;
    r.arrival_us = static_cast<SimTime>(t);
    out.push_back(r);
    t += gap(rng);
  }
  return out;
}

}  // namespace ponfog
