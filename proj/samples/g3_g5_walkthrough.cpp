// Walks one G3 -> G5 flow through the control protocol on the default
// three-cell topology, using the solver's routing map.
#include <iostream>

#include "ponfog/ponfog.hpp"

int main() {
  using namespace ponfog;
  const FogTopology topo = build_fog_topology(TopologyParams{});
  const RoutingMap map = solve(topo.group_count() + 1);
  write_routing_csv(std::cout, map, default_endpoint_labels(map.n_endpoints()));

  FlowRequest r;
  r.id = 1;
  r.src = topo.server(2, 0);
  r.dst = topo.server(4, 0);
  r.size_bits = 10'000'000;

  const SimConfig cfg = make_sim_config(topo, map);
  std::cout << "\nsetup latency: " << setup_latency(cfg, 2, 4) << " us\n";
  write_trace_jsonl(std::cout, run(cfg, {r}));
}
