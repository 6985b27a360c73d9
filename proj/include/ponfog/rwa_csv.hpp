#pragma once

// Routing map CSV: first row is ",<dst labels...>", then one row per source
// "<label>,<entries...>" with "-" on the diagonal and "L<k>" elsewhere.

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ponfog/error.hpp"
#include "ponfog/rwa.hpp"

namespace ponfog {

struct LabeledRoutingMap {
  RoutingMap map;
  std::vector<std::string> labels;
};

inline std::vector<std::string> default_endpoint_labels(std::size_t n_endpoints) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i + 1 < n_endpoints; ++i) labels.push_back("G" + std::to_string(i + 1));
  labels.push_back("OLT");
  return labels;
}

inline void write_routing_csv(std::ostream& os, const RoutingMap& m,
                              const std::vector<std::string>& labels) {
  const std::size_t n = m.n_endpoints();
  if (labels.size() != n) throw Error(ErrorCode::InvalidParams, "label count mismatch");
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (std::size_t s = 0; s < n; ++s) {
    os << labels[s];
    for (std::size_t d = 0; d < n; ++d) {
      os << ',';
      const Wavelength w = m.at(s, d);
      if (w == kUnassigned)
        os << '-';
      else
        os << 'L' << w;
    }
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

/// Parses a routing-map CSV. Structural problems (ragged rows, unknown
/// tokens) throw; semantic ones (clashes, missing pairs, a wavelength on the
/// diagonal) are left for verify(). n_wavelengths is the largest index seen.
inline LabeledRoutingMap read_routing_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next()) throw Error(ErrorCode::Parse, "routing map: empty input");
  auto header = detail::split_csv_line(line);
  if (header.size() < 3)
    throw Error(ErrorCode::Parse, "routing map line 1: need at least two endpoint columns");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  const std::size_t n = labels.size();

  RoutingMap m(n, 0);
  Wavelength max_w = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!next())
      throw Error(ErrorCode::Parse, "routing map: expected " + std::to_string(n) + " rows, got " +
                                        std::to_string(s));
    auto row = detail::split_csv_line(line);
    const std::string where = "routing map line " + std::to_string(lineno);
    if (row.size() != n + 1)
      throw Error(ErrorCode::Parse, where + ": expected " + std::to_string(n + 1) + " fields, got " +
                                        std::to_string(row.size()));
    if (row[0] != labels[s])
      throw Error(ErrorCode::Parse, where + ": row label '" + row[0] + "' does not match column '" +
                                        labels[s] + "'");
    for (std::size_t d = 0; d < n; ++d) {
      const std::string& tok = row[d + 1];
      if (tok == "-" || tok.empty()) continue;
      const bool ok = tok.size() >= 2 && (tok[0] == 'L' || tok[0] == 'l') &&
                      std::all_of(tok.begin() + 1, tok.end(), [](char c) { return c >= '0' && c <= '9'; });
      if (!ok) throw Error(ErrorCode::Parse, where + ": bad entry '" + tok + "'");
      const auto w = static_cast<Wavelength>(std::stoul(tok.substr(1)));
      if (w == 0) throw Error(ErrorCode::Parse, where + ": wavelength indices start at L1");
      m.set(s, d, w);
      max_w = std::max(max_w, w);
    }
  }
  if (next()) throw Error(ErrorCode::Parse, "routing map line " + std::to_string(lineno) + ": trailing row");
  m.set_n_wavelengths(max_w);
  return {std::move(m), std::move(labels)};
}

inline std::string describe(const Violation& v, const std::vector<std::string>& labels) {
  auto name = [&](std::size_t i) { return i < labels.size() ? labels[i] : std::to_string(i); };
  std::string out(to_string(v.kind));
  out += " at " + name(v.at);
  if (v.kind == ViolationKind::RowClash || v.kind == ViolationKind::ColumnClash) {
    out += ": L" + std::to_string(v.wavelength) + " used for ";
    for (std::size_t k = 0; k < v.with.size(); ++k) out += (k ? "," : "") + name(v.with[k]);
  } else {
    out += " -> " + (v.with.empty() ? std::string("?") : name(v.with.front()));
    if (v.wavelength != kUnassigned) out += " (L" + std::to_string(v.wavelength) + ")";
  }
  return out;
}

}  // namespace ponfog
