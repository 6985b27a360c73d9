// Acceptance gate. One line per criterion; exits non-zero if any fails.
// Reference values are computed here, independently of the library code
// under test, wherever that is practical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ponfog/ponfog.hpp"

using namespace ponfog;

namespace {

// Tolerances and limits.
constexpr double kSavingsLow = 0.78;
constexpr double kSavingsHigh = 0.83;
constexpr double kSavingsRef = 0.8056;
constexpr double kSavingsRefTol = 5e-5;
constexpr double kWattTol = 1e-9;
constexpr double kTrendTol = 1e-12;
constexpr double kLimit1 = 1.0, kLimit2 = 10.0, kLimit3 = 1.0, kLimit4 = 1.0, kLimit5 = 1.0, kLimit6 = 5.0,
                 kLimit7 = 30.0;
constexpr std::size_t kRandomCases = 1000;

struct Check {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

std::string data(const std::string& name) { return std::string(PONFOG_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Row/column distinctness, full off-diagonal coverage, in-range values.
bool oracle_valid(const RoutingMap& m, std::size_t* used = nullptr) {
  const std::size_t n = m.n_endpoints();
  std::set<Wavelength> all;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<Wavelength> row, col;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        if (m.at(i, j) != kUnassigned) return false;
        continue;
      }
      const Wavelength r = m.at(i, j), c = m.at(j, i);
      if (r == kUnassigned || r > m.n_wavelengths()) return false;
      if (!row.insert(r).second || !col.insert(c).second) return false;
      all.insert(r);
    }
  }
  if (used) *used = all.size();
  return true;
}

template <typename F>
bool criterion(int id, const char* title, double limit_s, F body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(s < limit_s, "took " + std::to_string(s) + " s");
  std::printf("[%s] criterion %d: %s (%.3f s, limit %.0f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title, s, limit_s,
              c.ok ? "" : ": ", c.why.c_str());
  return c.ok;
}

std::vector<FlowRequest> workload(const std::string& name, const FogTopology& t) {
  std::ifstream in(data(name));
  return read_workload_csv(in, t);
}

std::string jsonl(const SimTrace& t) {
  std::ostringstream os;
  write_trace_jsonl(os, t);
  return os.str();
}

double oracle_spine_leaf_w(std::size_t n) {
  const std::size_t leaves = (n + 47) / 48;
  const std::size_t spines = std::max<std::size_t>(2, (leaves + 3) / 4);
  return 508.0 * leaves + 660.0 * spines + 3.0 * n;
}

}  // namespace

int main() {
  bool all = true;

  all &= criterion(1, "reference 7-endpoint map verifies with 6 wavelengths; every single-cell mutation is caught", kLimit1,
                   [](Check& c) {
                     std::ifstream in(data("reference_map.csv"));
                     const RoutingMap m = read_routing_csv(in).map;
                     std::size_t used = 0;
                     c.require(oracle_valid(m, &used) && used == 6, "fixture fails the independent check");
                     const auto rep = verify(m);
                     c.require(rep.valid, "verify rejects the fixture");
                     c.require(rep.wavelengths_used == 6, "wavelength count != 6");
                     for (std::size_t i = 0; i < 7; ++i)
                       for (std::size_t j = 0; j < 7; ++j)
                         for (Wavelength w = 0; w <= 7; ++w) {
                           if (w == m.at(i, j)) continue;
                           RoutingMap mut = m;
                           mut.set(i, j, w);
                           c.require(!verify(mut).violations.empty(),
                                     "mutation (" + std::to_string(i) + "," + std::to_string(j) + ")=" +
                                         std::to_string(w) + " not detected");
                         }
                   });

  all &= criterion(2, "solver optimal for n=2..5, n-1 wavelengths and valid for n=2..16", kLimit2, [](Check& c) {
    for (std::size_t n = 2; n <= 5; ++n) {
      const std::size_t bf = minimal_wavelengths_bruteforce(n);
      c.require(bf == n - 1, "brute force n=" + std::to_string(n) + " gave " + std::to_string(bf));
      c.require(solve(n).n_wavelengths() == bf, "solve disagrees with brute force at n=" + std::to_string(n));
    }
    for (std::size_t n = 2; n <= 16; ++n) {
      const RoutingMap m = solve(n);
      std::size_t used = 0;
      c.require(oracle_valid(m, &used), "solve(" + std::to_string(n) + ") invalid");
      c.require(m.n_wavelengths() == n - 1 && used == n - 1, "solve(" + std::to_string(n) + ") not n-1");
      c.require(construct_cyclic(n).n_wavelengths() == m.n_wavelengths(), "cyclic count differs");
      c.require(oracle_valid(construct_cyclic(n)), "cyclic invalid at n=" + std::to_string(n));
    }
  });

  all &= criterion(3, "savings(96) in [0.78, 0.83] with the default configuration", kLimit3, [](Check& c) {
    const double ref = 1.0 - (96 * 2.5 + 3 * 90.0) / oracle_spine_leaf_w(96);
    const double s = savings(96, PowerConfig{});
    c.require(std::abs(pon_fog_power_for_servers(96, PowerConfig{}).total_w - 510.0) < kWattTol, "pon-fog != 510 W");
    c.require(std::abs(spine_leaf_power(96, {}, {}).total_w - 2624.0) < kWattTol, "spine-leaf != 2624 W");
    c.require(s >= kSavingsLow && s <= kSavingsHigh, "savings " + std::to_string(s) + " outside band");
    c.require(std::abs(s - ref) < kWattTol && std::abs(s - kSavingsRef) < kSavingsRefTol,
              "savings " + std::to_string(s) + " differs from reference");
  });

  all &= criterion(4, "savings non-increasing over 96..1536 servers", kLimit4, [](Check& c) {
    const auto series = sweep({96, 192, 384, 768, 1536}, PowerConfig{});
    c.require(series.rows.size() == 5, "wrong row count");
    for (std::size_t i = 0; i < series.rows.size(); ++i) {
      const auto& r = series.rows[i];
      c.require(!r.infeasible, "infeasible row");
      const double ref = 1.0 - (r.n_servers * 2.5 + (r.n_servers / 32) * 90.0) / oracle_spine_leaf_w(r.n_servers);
      c.require(std::abs(r.savings - ref) < kWattTol, "row " + std::to_string(r.n_servers) + " differs from oracle");
      if (i > 0)
        c.require(r.savings <= series.rows[i - 1].savings + kTrendTol,
                  "savings rises at " + std::to_string(r.n_servers));
    }
  });

  all &= criterion(5, "marginal cost 2.5 W (pon-fog) and 3 W plus switch quanta (spine-leaf)", kLimit5,
                   [](Check& c) {
                     const PowerConfig cfg;
                     for (std::size_t n = 1; n < 3000; ++n) {
                       const double pf = pon_fog_power_for_servers(n + 1, cfg).total_w -
                                         pon_fog_power_for_servers(n, cfg).total_w;
                       if (n % 32 != 0) c.require(std::abs(pf - 2.5) < kWattTol, "pon-fog delta at " + std::to_string(n));
                       const double sl = spine_leaf_power(n + 1, {}, {}).total_w - spine_leaf_power(n, {}, {}).total_w;
                       const double want = oracle_spine_leaf_w(n + 1) - oracle_spine_leaf_w(n);
                       c.require(std::abs(sl - want) < kWattTol, "spine-leaf delta at " + std::to_string(n));
                       if (n % 48 != 0) {
                         c.require(std::abs(sl - 3.0) < kWattTol, "spine-leaf not 3 W at " + std::to_string(n));
                       } else {
                         const double jump = sl - 3.0;
                         c.require(std::abs(jump - 508.0) < kWattTol || std::abs(jump - 508.0 - 660.0) < kWattTol,
                                   "boundary jump " + std::to_string(jump) + " at " + std::to_string(n));
                       }
                     }
                   });

  all &= criterion(6, "protocol golden traces and seeded reproducibility", kLimit6, [](Check& c) {
    const FogTopology topo = build_fog_topology(TopologyParams{});
    std::ifstream in(data("reference_map.csv"));
    const SimConfig cfg = make_sim_config(topo, read_routing_csv(in).map);

    const auto g = run(cfg, workload("workload_g3_g5.csv", topo));
    std::vector<Wavelength> ctrl;
    bool data_ok = false;
    for (const auto& e : g.events) {
      if (e.kind == EventKind::RequestSent || e.kind == EventKind::GrantSent) ctrl.push_back(e.lambda);
      if (e.kind == EventKind::DataStart) data_ok = e.lambda == 6 && e.from == 2 && e.to == 4;
    }
    c.require(ctrl == std::vector<Wavelength>{4, 3, 1}, "control wavelengths differ from 4,3,1");
    c.require(data_ok, "data not on lambda 6 G3->G5");
    c.require(stats(g).control_messages == 3, "control message count != 3");
    c.require(jsonl(g) == slurp(data("g3_g5_trace.golden.jsonl")), "G3->G5 trace differs from golden");

    const auto ct = run(cfg, workload("workload_contention.csv", topo));
    c.require(jsonl(ct) == slurp(data("contention_trace.golden.jsonl")), "contention trace differs from golden");

    SyntheticWorkload w;
    w.flows = 500;
    w.mean_interarrival_us = 20;
    const auto reqs = generate_workload(topo, w, 42);
    const std::string first = jsonl(run(make_sim_config(topo, solve(7)), reqs));
    for (int k = 0; k < 3; ++k) {
      c.require(jsonl(run(make_sim_config(topo, solve(7)), generate_workload(topo, w, 42))) == first,
                "seeded run not bit-identical");
    }
  });

  all &= criterion(7, "structural invariants over random cases", kLimit7, [](Check& c) {
    std::mt19937_64 rng(20261019);
    std::size_t topo_cases = 0, path_cases = 0, map_cases = 0;
    for (std::size_t k = 0; k < kRandomCases; ++k) {
      TopologyParams p;
      p.cells = 1 + rng() % 8;
      p.racks_per_cell = 1 + rng() % 4;
      p.servers_per_rack = 1 + rng() % 16;
      const FogTopology t = build_fog_topology(p);
      const std::size_t g = t.group_count();
      ++topo_cases;
      c.require(t.awgr_links.size() == g * (g - 1) / 2, "AWGR link count");
      for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = a + 1; b < g; ++b) c.require(t.find_link(a, b) != nullptr, "missing AWGR link");
      c.require(validate_topology(t).empty(), "diagnostics on a built topology");

      if (t.server_count() >= 2) {
        std::uniform_int_distribution<std::size_t> pick(0, t.server_count() - 1);
        for (int q = 0; q < 5; ++q) {
          std::size_t a = pick(rng), b = pick(rng);
          if (a == b) continue;
          const ServerNode& s = t.server(a / p.servers_per_rack, a % p.servers_per_rack);
          const ServerNode& d = t.server(b / p.servers_per_rack, b % p.servers_per_rack);
          const DataPath path = data_path(t, s, d);
          ++path_cases;
          c.require(path.count(ElementKind::Olt) == 0, "OLT on a data path");
          const bool same_group = s.group == d.group;
          const bool same_cell = t.cell_of(s.group) == t.cell_of(d.group);
          const PathClass want = same_group ? PathClass::IntraRack
                                 : same_cell ? PathClass::InterRackSameCell
                                             : PathClass::InterCell;
          c.require(path.classification == want, "path class");
          c.require(path.count(ElementKind::Awgr) == (same_group ? 0u : 2u), "AWGR traversal count");
        }
      }

      const std::size_t n = 2 + rng() % 15;
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<Wavelength> colors(n - 1);
      std::iota(colors.begin(), colors.end(), 1);
      std::shuffle(colors.begin(), colors.end(), rng);
      RoutingMap m = relabel(construct_cyclic(n), perm);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) m.set(i, j, colors[m.at(i, j) - 1]);
      ++map_cases;
      c.require(oracle_valid(m) && verify(m).valid, "random valid map rejected");
      std::shuffle(perm.begin(), perm.end(), rng);
      const RoutingMap solved = solve(std::min<std::size_t>(n, 8));
      std::vector<std::size_t> p2(solved.n_endpoints());
      std::iota(p2.begin(), p2.end(), 0);
      std::shuffle(p2.begin(), p2.end(), rng);
      c.require(verify(relabel(solved, p2)).valid && verify(relabel(m, perm)).valid, "relabelled map rejected");
    }
    c.require(topo_cases >= kRandomCases && map_cases >= kRandomCases && path_cases >= kRandomCases,
              "fewer random cases than required");
  });

  std::printf("%s\n", all ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL");
  return all ? 0 : 1;
}
