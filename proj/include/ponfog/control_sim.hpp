#pragma once

// Discrete-event model of the SDN-OLT control protocol.
//
// An inter-group flow goes through four steps:
//   1. the source group sends a request to the OLT on lambda(src -> OLT);
//   2. after olt_processing_us the OLT sends one grant to each of the two
//      groups, on lambda(OLT -> src) and lambda(OLT -> dst);
//   3. once both grants have landed, the servers spend tuning_us retuning;
//   4. data flows over the AWGRs on lambda(src -> dst).
// Intra-rack flows skip steps 1-2 and use the rack's passive reflector,
// recorded as wavelength 0.
//
// Channels are (endpoint, wavelength, tx) resources with a FIFO queue. A
// control message holds its channel for control_service_us; the message
// itself is in flight for the propagation delay only. A data transfer holds
// the source channel from data-start to data-end. By the column-distinctness
// of a valid routing map, (src, lambda, tx) and (dst, lambda, rx) always
// have the same set of users, so only the tx side is tracked here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ponfog/error.hpp"
#include "ponfog/rwa.hpp"
#include "ponfog/topology.hpp"

namespace ponfog {

/// Simulation time in integer microseconds.
using SimTime = std::uint64_t;
using FlowId = std::uint64_t;

/// Wavelength 0 in a trace marks the intra-rack reflective channel.
inline constexpr Wavelength kReflectorChannel = 0;

struct SimConfig {
  FogTopology topo;
  RoutingMap map;
  double line_rate_gbps = 10.0;
  double propagation_us_per_km = 5.0;
  SimTime olt_processing_us = 10;
  SimTime tuning_us = 1;
  SimTime control_service_us = 1;
  std::uint64_t seed = 1;
};

inline SimConfig make_sim_config(const FogTopology& topo, const RoutingMap& map) {
  SimConfig cfg;
  cfg.topo = topo;
  cfg.map = map;
  return cfg;
}

inline void check_sim_config(const SimConfig& cfg) {
  if (!(cfg.line_rate_gbps > 0.0) || !std::isfinite(cfg.line_rate_gbps))
    throw Error(ErrorCode::InvalidParams, "line rate must be positive");
  if (!(cfg.propagation_us_per_km >= 0.0) || !std::isfinite(cfg.propagation_us_per_km))
    throw Error(ErrorCode::InvalidParams, "propagation delay must be >= 0");
  if (cfg.map.n_endpoints() != cfg.topo.group_count() + 1)
    throw Error(ErrorCode::InvalidParams,
                "routing map has " + std::to_string(cfg.map.n_endpoints()) + " endpoints, topology needs " +
                    std::to_string(cfg.topo.group_count() + 1));
  if (!verify(cfg.map).valid) throw Error(ErrorCode::InvalidParams, "routing map does not verify");
}

/// Rounds a non-negative delay up to whole microseconds.
inline SimTime ceil_us(double us) {
  if (!(us > 0.0)) return 0;
  return static_cast<SimTime>(std::ceil(us - 1e-9));
}

inline SimTime propagation_us(const SimConfig& cfg, double km) { return ceil_us(km * cfg.propagation_us_per_km); }

inline SimTime transmission_us(const SimConfig& cfg, std::uint64_t bits) {
  return ceil_us(static_cast<double>(bits) / (cfg.line_rate_gbps * 1000.0));
}

inline SimTime olt_leg_us(const SimConfig& cfg, std::size_t group) {
  return propagation_us(cfg, cfg.topo.uplink_km(group));
}

/// Zero-contention time from a flow's arrival to its data-start.
inline SimTime setup_latency(const SimConfig& cfg, std::size_t src_group, std::size_t dst_group) {
  if (src_group == dst_group)
    throw Error(ErrorCode::InvalidRequest, "setup latency needs two different groups");
  return olt_leg_us(cfg, src_group) + cfg.olt_processing_us +
         std::max(olt_leg_us(cfg, src_group), olt_leg_us(cfg, dst_group)) + cfg.tuning_us;
}

struct FlowRequest {
  FlowId id = 0;
  ServerNode src;
  ServerNode dst;
  std::uint64_t size_bits = 0;
  SimTime arrival_us = 0;
};

enum class EventKind { RequestSent, GrantSent, Tuned, DataStart, DataEnd, Blocked, Unblocked };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::RequestSent: return "request-sent";
    case EventKind::GrantSent: return "grant-sent";
    case EventKind::Tuned: return "tuned";
    case EventKind::DataStart: return "data-start";
    case EventKind::DataEnd: return "data-end";
    case EventKind::Blocked: return "blocked";
    case EventKind::Unblocked: return "unblocked";
  }
  return "?";
}

inline std::optional<EventKind> event_kind_from(std::string_view s) {
  for (auto k : {EventKind::RequestSent, EventKind::GrantSent, EventKind::Tuned, EventKind::DataStart,
                 EventKind::DataEnd, EventKind::Blocked, EventKind::Unblocked})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// One trace record. `from`/`to` are routing endpoints (groups, then the OLT
/// as index == group count). Blocked/unblocked carry the message that waits.
struct TraceEvent {
  SimTime t = 0;
  EventKind kind = EventKind::RequestSent;
  FlowId flow = 0;
  Wavelength lambda = kUnassigned;
  std::size_t from = 0;
  std::size_t to = 0;
  SimTime arrival = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimTrace {
  std::vector<TraceEvent> events;
  std::size_t olt_endpoint = 0;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

namespace detail {

class ControlSimulation {
 public:
  ControlSimulation(const SimConfig& cfg, const std::vector<FlowRequest>& reqs)
      : cfg_(cfg), olt_(cfg.topo.group_count()) {
    trace_.olt_endpoint = olt_;
    std::vector<FlowRequest> sorted = reqs;
    std::sort(sorted.begin(), sorted.end(), [](const FlowRequest& a, const FlowRequest& b) {
      return std::tie(a.arrival_us, a.id) < std::tie(b.arrival_us, b.id);
    });
    for (const auto& r : sorted) {
      const std::size_t idx = flows_.size();
      Flow f;
      f.req = r;
      f.intra = r.src.group == r.dst.group;
      f.data_lambda = f.intra ? kReflectorChannel : wavelength(cfg_.map, r.src.group, r.dst.group);
      f.data_prop = propagation_us(cfg_, data_path(cfg_.topo, r.src, r.dst).length_km);
      flows_.push_back(f);
      schedule(r.arrival_us, Step::Arrive, idx);
    }
  }

  SimTrace run() {
    while (!queue_.empty()) {
      const Pending ev = queue_.top();
      queue_.pop();
      dispatch(ev);
    }
    return std::move(trace_);
  }

 private:
  enum class Step { Arrive, RequestAtOlt, IssueGrants, GrantLanded, Tuned, DataDone, Release };
  enum class Purpose { Request, GrantSrc, GrantDst, Data };

  struct ChannelKey {
    std::size_t endpoint;
    Wavelength lambda;
    friend auto operator<=>(const ChannelKey&, const ChannelKey&) = default;
  };

  struct Waiter {
    std::size_t flow;
    Purpose purpose;
  };

  struct Channel {
    std::optional<std::size_t> holder;
    std::deque<Waiter> waiting;
  };

  struct Flow {
    FlowRequest req;
    bool intra = false;
    Wavelength data_lambda = kUnassigned;
    SimTime data_prop = 0;
    int grants_landed = 0;
  };

  // At equal times, steps that free a channel run first: a channel held over
  // [t0, t1) is free again for anyone asking at t1.
  struct Pending {
    SimTime t;
    int rank;
    std::uint64_t seq;
    Step step;
    std::size_t flow;
    ChannelKey channel{};
    friend bool operator>(const Pending& a, const Pending& b) {
      return std::tie(a.t, a.rank, a.seq) > std::tie(b.t, b.rank, b.seq);
    }
  };

  void schedule(SimTime t, Step s, std::size_t flow, ChannelKey ch = {}) {
    const int rank = (s == Step::Release || s == Step::DataDone) ? 0 : 1;
    queue_.push(Pending{t, rank, seq_++, s, flow, ch});
  }

  void emit(SimTime t, EventKind k, std::size_t flow, Wavelength lambda, std::size_t from, std::size_t to) {
    const Flow& f = flows_[flow];
    trace_.events.push_back({t, k, f.req.id, lambda, from, to, f.req.arrival_us});
  }

  // Endpoints and wavelength of the message a purpose stands for.
  std::tuple<std::size_t, std::size_t, Wavelength> message(std::size_t flow, Purpose p) const {
    const Flow& f = flows_[flow];
    const std::size_t s = f.req.src.group, d = f.req.dst.group;
    switch (p) {
      case Purpose::Request: return {s, olt_, wavelength(cfg_.map, s, olt_)};
      case Purpose::GrantSrc: return {olt_, s, wavelength(cfg_.map, olt_, s)};
      case Purpose::GrantDst: return {olt_, d, wavelength(cfg_.map, olt_, d)};
      case Purpose::Data: return {s, d, f.data_lambda};
    }
    return {0, 0, 0};
  }

  void acquire(SimTime t, std::size_t flow, Purpose p) {
    const auto [from, to, lambda] = message(flow, p);
    const ChannelKey key{from, lambda};
    Channel& ch = channels_[key];
    if (ch.holder) {
      emit(t, EventKind::Blocked, flow, lambda, from, to);
      ch.waiting.push_back({flow, p});
      return;
    }
    ch.holder = flow;
    on_acquired(t, flow, p, key);
  }

  void release(SimTime t, ChannelKey key) {
    Channel& ch = channels_[key];
    ch.holder.reset();
    if (ch.waiting.empty()) return;
    const Waiter w = ch.waiting.front();
    ch.waiting.pop_front();
    ch.holder = w.flow;
    const auto [from, to, lambda] = message(w.flow, w.purpose);
    emit(t, EventKind::Unblocked, w.flow, lambda, from, to);
    on_acquired(t, w.flow, w.purpose, key);
  }

  void on_acquired(SimTime t, std::size_t flow, Purpose p, ChannelKey key) {
    const auto [from, to, lambda] = message(flow, p);
    const Flow& f = flows_[flow];
    switch (p) {
      case Purpose::Request:
        emit(t, EventKind::RequestSent, flow, lambda, from, to);
        schedule(t + cfg_.control_service_us, Step::Release, flow, key);
        schedule(t + olt_leg_us(cfg_, f.req.src.group), Step::RequestAtOlt, flow);
        break;
      case Purpose::GrantSrc:
      case Purpose::GrantDst:
        emit(t, EventKind::GrantSent, flow, lambda, from, to);
        schedule(t + cfg_.control_service_us, Step::Release, flow, key);
        schedule(t + olt_leg_us(cfg_, to), Step::GrantLanded, flow);
        break;
      case Purpose::Data:
        emit(t, EventKind::DataStart, flow, lambda, from, to);
        schedule(t + transmission_us(cfg_, f.req.size_bits) + f.data_prop, Step::DataDone, flow, key);
        break;
    }
  }

  void dispatch(const Pending& ev) {
    Flow& f = flows_[ev.flow];
    switch (ev.step) {
      case Step::Arrive:
        if (f.intra)
          schedule(ev.t + cfg_.tuning_us, Step::Tuned, ev.flow);
        else
          acquire(ev.t, ev.flow, Purpose::Request);
        break;
      case Step::RequestAtOlt:
        schedule(ev.t + cfg_.olt_processing_us, Step::IssueGrants, ev.flow);
        break;
      case Step::IssueGrants:
        acquire(ev.t, ev.flow, Purpose::GrantSrc);
        acquire(ev.t, ev.flow, Purpose::GrantDst);
        break;
      case Step::GrantLanded:
        if (++f.grants_landed == 2) schedule(ev.t + cfg_.tuning_us, Step::Tuned, ev.flow);
        break;
      case Step::Tuned: {
        const std::size_t s = f.req.src.group, d = f.req.dst.group;
        emit(ev.t, EventKind::Tuned, ev.flow, f.data_lambda, s, d);
        acquire(ev.t, ev.flow, Purpose::Data);
        break;
      }
      case Step::DataDone: {
        const std::size_t s = f.req.src.group, d = f.req.dst.group;
        emit(ev.t, EventKind::DataEnd, ev.flow, f.data_lambda, s, d);
        release(ev.t, ev.channel);
        break;
      }
      case Step::Release:
        release(ev.t, ev.channel);
        break;
    }
  }

  const SimConfig& cfg_;
  std::size_t olt_;
  std::vector<Flow> flows_;
  std::map<ChannelKey, Channel> channels_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  SimTrace trace_;
};

}  // namespace detail

inline void check_requests(const SimConfig& cfg, const std::vector<FlowRequest>& reqs) {
  std::set<FlowId> ids;
  for (const auto& r : reqs) {
    const std::string who = "flow " + std::to_string(r.id);
    if (!ids.insert(r.id).second) throw Error(ErrorCode::InvalidRequest, who + ": duplicate id");
    if (!cfg.topo.contains(r.src) || !cfg.topo.contains(r.dst))
      throw Error(ErrorCode::InvalidRequest, who + ": unknown server");
    if (r.src == r.dst) throw Error(ErrorCode::InvalidRequest, who + ": source equals destination");
    if (r.size_bits == 0) throw Error(ErrorCode::InvalidRequest, who + ": size must be > 0");
  }
}

inline SimTrace run(const SimConfig& cfg, const std::vector<FlowRequest>& requests) {
  check_sim_config(cfg);
  check_requests(cfg, requests);
  return detail::ControlSimulation(cfg, requests).run();
}

}  // namespace ponfog
