#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.
//
// Exit codes: 0 success, 1 validation/verification failure, 2 usage or
// configuration error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ponfog/ponfog.hpp"

namespace ponfog::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;

  bool topo_dot = false;
  std::string verify_path;
  std::string servers;
  std::string dat_path;
  std::string workload_path;
  std::string map_path;
  std::size_t synthetic = 0;
  bool stats_only = false;
  std::string stats_path;
};

inline std::vector<std::size_t> parse_server_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) continue;
    if (!std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw Error(ErrorCode::Parse, "--servers: '" + tok + "' is not a server count");
    out.push_back(std::stoul(tok));
  }
  return out;
}

inline double round4(double x) { return std::round(x * 1e4) / 1e4; }

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

  RunConfig load_config() const {
    RunConfig cfg;
    if (!opt_.config_path.empty()) {
      std::ifstream in(opt_.config_path);
      if (!in) throw Error(ErrorCode::Parse, "cannot open config '" + opt_.config_path + "'");
      cfg = read_run_config(in);
    }
    if (opt_.seed) cfg.sim.seed = *opt_.seed;
    return cfg;
  }

  int topo() {
    const RunConfig cfg = load_config();
    const FogTopology t = build_fog_topology(cfg.topology, cfg.olt);
    const auto diags = validate_topology(t);
    if (opt_.topo_dot) {
      out_ << to_dot(t);
    } else {
      auto doc = to_json(t);
      auto dj = nlohmann::ordered_json::array();
      for (const auto& d : diags) dj.push_back({{"code", d.code}, {"message", d.message}});
      doc["diagnostics"] = std::move(dj);
      out_ << doc.dump(2) << '\n';
    }
    for (const auto& d : diags) err_ << "diagnostic: " << d.code << ": " << d.message << '\n';
    return diags.empty() ? kExitOk : kExitInvalid;
  }

  int rwa() {
    if (!opt_.verify_path.empty()) {
      std::ifstream in(opt_.verify_path);
      if (!in) throw Error(ErrorCode::Parse, "cannot open routing map '" + opt_.verify_path + "'");
      const auto lm = read_routing_csv(in);
      const auto rep = verify(lm.map);
      if (rep.valid) {
        out_ << "valid (" << rep.wavelengths_used << " wavelengths, " << lm.map.n_endpoints() << " endpoints)\n";
        return kExitOk;
      }
      out_ << "invalid: " << rep.violations.size() << " violation(s)\n";
      for (const auto& v : rep.violations) out_ << "  " << describe(v, lm.labels) << '\n';
      return kExitInvalid;
    }
    const RunConfig cfg = load_config();
    const FogTopology t = build_fog_topology(cfg.topology, cfg.olt);
    const auto eps = rwa_endpoints(t);
    const RoutingMap m = solve(eps.size());
    std::vector<std::string> labels;
    for (const auto& e : eps) labels.push_back(e.label);
    write_routing_csv(out_, m, labels);
    err_ << eps.size() << " endpoints, " << m.n_wavelengths() << " wavelengths\n";
    return kExitOk;
  }

  int power() {
    const RunConfig cfg = load_config();
    const auto pon = pon_fog_power(cfg.topology, cfg.olt, cfg.power, cfg.card_allocation);
    const auto sl = spine_leaf_power(cfg.topology.servers(), cfg.spine_leaf, cfg.power);
    nlohmann::ordered_json doc;
    doc["n_servers"] = cfg.topology.servers();
    doc["pon_fog"] = to_json(pon);
    doc["spine_leaf"] = to_json(sl);
    doc["savings"] = round4(savings_fraction(pon.total_w, sl.total_w));
    out_ << doc.dump(2) << '\n';
    return kExitOk;
  }

  int sweep() {
    const RunConfig cfg = load_config();
    const auto series = ponfog::sweep(parse_server_list(opt_.servers), cfg.power_config());
    write_sweep_csv(out_, series);
    std::string dat = opt_.dat_path;
    if (dat.empty() && !opt_.out_path.empty()) dat = opt_.out_path + ".dat";
    if (!dat.empty()) {
      std::ofstream f(dat);
      if (!f) throw Error(ErrorCode::Parse, "cannot write '" + dat + "'");
      write_sweep_dat(f, series);
    }
    bool all_ok = true;
    for (const auto& r : series.rows)
      if (r.infeasible) {
        err_ << "infeasible: n_servers=" << r.n_servers << ": " << *r.infeasible << '\n';
        all_ok = false;
      }
    return all_ok ? kExitOk : kExitInvalid;
  }

  int sim() {
    const RunConfig cfg = load_config();
    const FogTopology t = build_fog_topology(cfg.topology, cfg.olt);
    RoutingMap m;
    if (!opt_.map_path.empty()) {
      std::ifstream in(opt_.map_path);
      if (!in) throw Error(ErrorCode::Parse, "cannot open routing map '" + opt_.map_path + "'");
      m = read_routing_csv(in).map;
    } else {
      m = solve(t.group_count() + 1);
    }
    const SimConfig sc = cfg.sim_config(t, m);

    std::vector<FlowRequest> reqs;
    if (!opt_.workload_path.empty()) {
      std::ifstream in(opt_.workload_path);
      if (!in) throw Error(ErrorCode::Parse, "cannot open workload '" + opt_.workload_path + "'");
      reqs = read_workload_csv(in, t);
    } else if (opt_.synthetic > 0) {
      SyntheticWorkload w;
      w.flows = opt_.synthetic;
      reqs = generate_workload(t, w, sc.seed);
    } else {
      throw Error(ErrorCode::Parse, "sim needs --workload FILE or --synthetic N");
    }

    const SimTrace trace = run(sc, reqs);
    const SimStats st = stats(trace);
    if (opt_.stats_only) {
      out_ << to_json(st).dump(2) << '\n';
      return kExitOk;
    }
    write_trace_jsonl(out_, trace);
    if (!opt_.stats_path.empty()) {
      std::ofstream f(opt_.stats_path);
      if (!f) throw Error(ErrorCode::Parse, "cannot write '" + opt_.stats_path + "'");
      f << to_json(st).dump(2) << '\n';
    }
    return kExitOk;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"PON fog interconnect design and simulation toolkit", "ponfog"};
  app.require_subcommand(1);
  app.add_option("--config", opt.config_path, "JSON run configuration");
  app.add_option("--out", opt.out_path, "write output to PATH instead of stdout");
  app.add_option("--seed", opt.seed, "RNG seed for synthetic workloads");

  auto* topo = app.add_subcommand("topo", "build, validate and export the fog topology");
  topo->add_flag("--dot", opt.topo_dot, "emit a DOT graph instead of JSON");

  auto* rwa = app.add_subcommand("rwa", "compute or verify a wavelength routing map");
  rwa->add_option("--verify", opt.verify_path, "check a routing map CSV instead of solving");

  auto* power = app.add_subcommand("power", "itemized power and savings for the configured topology");

  auto* sweep = app.add_subcommand("sweep", "power and savings over a list of server counts");
  sweep->add_option("--servers", opt.servers, "comma-separated server counts")->required();
  sweep->add_option("--dat", opt.dat_path, "also write a gnuplot data file");

  auto* sim = app.add_subcommand("sim", "simulate the OLT control protocol");
  sim->add_option("--workload", opt.workload_path, "workload CSV");
  sim->add_option("--map", opt.map_path, "routing map CSV (default: solver output)");
  sim->add_option("--synthetic", opt.synthetic, "generate N random flows from --seed");
  sim->add_flag("--stats-only", opt.stats_only, "print statistics instead of the trace");
  sim->add_option("--stats", opt.stats_path, "also write statistics to PATH");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!opt.out_path.empty()) {
    file.open(opt.out_path);
    if (!file) {
      err << "error: cannot write '" << opt.out_path << "'\n";
      return kExitUsage;
    }
    sink = &file;
  }

  Runner runner(opt, *sink, err);
  try {
    if (topo->parsed()) return runner.topo();
    if (rwa->parsed()) return runner.rwa();
    if (power->parsed()) return runner.power();
    if (sweep->parsed()) return runner.sweep();
    if (sim->parsed()) return runner.sim();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace ponfog::cli
