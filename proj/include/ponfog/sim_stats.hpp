#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ponfog/control_sim.hpp"

namespace ponfog {

struct FlowStats {
  FlowId id = 0;
  SimTime arrival = 0;
  std::optional<SimTime> setup_us;       // arrival -> tuned
  std::optional<SimTime> queueing_us;    // tuned -> data-start
  std::optional<SimTime> completion_us;  // arrival -> data-end
  std::size_t control_messages = 0;
};

struct Summary {
  double mean = 0.0;
  SimTime p95 = 0;
  SimTime max = 0;
};

struct SimStats {
  std::vector<FlowStats> flows;  // ordered by flow id
  std::size_t submitted = 0;
  std::size_t completed = 0;
  std::size_t still_queued = 0;
  std::size_t control_messages = 0;
  std::size_t requests = 0;
  std::size_t grants = 0;
  Summary setup, queueing, completion;
};

namespace detail {

// Nearest-rank percentile.
inline Summary summarize(std::vector<SimTime> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (auto x : v) sum += static_cast<double>(x);
  s.mean = sum / static_cast<double>(v.size());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
  s.p95 = v[std::max<std::size_t>(rank, 1) - 1];
  s.max = v.back();
  return s;
}

}  // namespace detail

/// Per-flow and aggregate figures from a trace. Throws MalformedTrace when
/// event times go backwards or a flow's protocol steps are out of order.
inline SimStats stats(const SimTrace& trace) {
  struct Seen {
    SimTime arrival = 0;
    std::optional<SimTime> request, tuned, start, end;
    std::vector<SimTime> grants;
  };
  std::map<FlowId, Seen> per_flow;
  auto bad = [](FlowId id, const std::string& why) {
    throw Error(ErrorCode::MalformedTrace, "flow " + std::to_string(id) + ": " + why);
  };

  SimTime last = 0;
  for (const auto& e : trace.events) {
    if (e.t < last) throw Error(ErrorCode::MalformedTrace, "event times decrease at t=" + std::to_string(e.t));
    last = e.t;
    auto [it, fresh] = per_flow.try_emplace(e.flow);
    Seen& s = it->second;
    if (fresh) s.arrival = e.arrival;
    if (e.t < s.arrival) bad(e.flow, "event before arrival");
    switch (e.kind) {
      case EventKind::RequestSent:
        if (s.request) bad(e.flow, "second request");
        s.request = e.t;
        break;
      case EventKind::GrantSent:
        if (!s.request) bad(e.flow, "grant before request");
        if (s.grants.size() == 2) bad(e.flow, "more than two grants");
        s.grants.push_back(e.t);
        break;
      case EventKind::Tuned:
        if (s.tuned) bad(e.flow, "tuned twice");
        if (s.request && s.grants.size() != 2) bad(e.flow, "tuned before both grants");
        if (!s.request && !s.grants.empty()) bad(e.flow, "grants without request");
        s.tuned = e.t;
        break;
      case EventKind::DataStart:
        if (!s.tuned || s.start) bad(e.flow, "data-start out of order");
        s.start = e.t;
        break;
      case EventKind::DataEnd:
        if (!s.start || s.end) bad(e.flow, "data-end out of order");
        if (e.t <= *s.start) bad(e.flow, "data-end not after data-start");
        s.end = e.t;
        break;
      case EventKind::Blocked:
      case EventKind::Unblocked:
        break;
    }
  }

  SimStats out;
  std::vector<SimTime> setup, queueing, completion;
  for (const auto& [id, s] : per_flow) {
    FlowStats f;
    f.id = id;
    f.arrival = s.arrival;
    f.control_messages = (s.request ? 1 : 0) + s.grants.size();
    if (s.tuned) f.setup_us = *s.tuned - s.arrival;
    if (s.tuned && s.start) f.queueing_us = *s.start - *s.tuned;
    if (s.end) f.completion_us = *s.end - s.arrival;

    out.requests += s.request ? 1 : 0;
    out.grants += s.grants.size();
    ++out.submitted;
    if (s.end) {
      ++out.completed;
      setup.push_back(*f.setup_us);
      queueing.push_back(*f.queueing_us);
      completion.push_back(*f.completion_us);
    }
    out.flows.push_back(f);
  }
  out.still_queued = out.submitted - out.completed;
  out.control_messages = out.requests + out.grants;
  out.setup = detail::summarize(std::move(setup));
  out.queueing = detail::summarize(std::move(queueing));
  out.completion = detail::summarize(std::move(completion));
  return out;
}

inline nlohmann::ordered_json to_json(const SimStats& s) {
  using nlohmann::ordered_json;
  auto summary = [](const Summary& x) {
    ordered_json j;
    j["mean"] = x.mean;
    j["p95"] = x.p95;
    j["max"] = x.max;
    return j;
  };
  ordered_json j;
  j["submitted"] = s.submitted;
  j["completed"] = s.completed;
  j["still_queued"] = s.still_queued;
  j["control_messages"] = s.control_messages;
  j["requests"] = s.requests;
  j["grants"] = s.grants;
  j["setup_us"] = summary(s.setup);
  j["queueing_us"] = summary(s.queueing);
  j["completion_us"] = summary(s.completion);
  auto flows = ordered_json::array();
  for (const auto& f : s.flows) {
    ordered_json fj;
    fj["flow"] = f.id;
    fj["arrival_us"] = f.arrival;
    fj["setup_us"] = f.setup_us ? ordered_json(*f.setup_us) : ordered_json(nullptr);
    fj["queueing_us"] = f.queueing_us ? ordered_json(*f.queueing_us) : ordered_json(nullptr);
    fj["completion_us"] = f.completion_us ? ordered_json(*f.completion_us) : ordered_json(nullptr);
    fj["control_messages"] = f.control_messages;
    flows.push_back(std::move(fj));
  }
  j["flows"] = std::move(flows);
  return j;
}

}  // namespace ponfog
