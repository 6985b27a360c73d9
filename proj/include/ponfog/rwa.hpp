#pragma once

// Routing and wavelength assignment among PON groups and the OLT.
//
// Every endpoint owns one tunable transmitter and one tunable receiver per
// wavelength, so a valid map uses each wavelength at most once per source
// row and at most once per destination column. With n endpoints each row
// holds n-1 entries, which puts the lower bound at n-1 wavelengths.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ponfog/error.hpp"

namespace ponfog {

/// Wavelength index, 1-based. 0 marks an unassigned pair.
using Wavelength = std::uint32_t;
inline constexpr Wavelength kUnassigned = 0;

class RoutingMap {
 public:
  RoutingMap() = default;
  RoutingMap(std::size_t n_endpoints, std::size_t n_wavelengths)
      : n_(n_endpoints), w_(n_wavelengths), cells_(n_endpoints * n_endpoints, kUnassigned) {}

  std::size_t n_endpoints() const { return n_; }
  std::size_t n_wavelengths() const { return w_; }
  void set_n_wavelengths(std::size_t w) { w_ = w; }

  Wavelength at(std::size_t src, std::size_t dst) const { return cells_.at(src * n_ + dst); }
  void set(std::size_t src, std::size_t dst, Wavelength w) { cells_.at(src * n_ + dst) = w; }

  friend bool operator==(const RoutingMap&, const RoutingMap&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t w_ = 0;
  std::vector<Wavelength> cells_;
};

enum class ViolationKind { RowClash, ColumnClash, MissingPair, SelfPair, OutOfRange };

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::RowClash: return "row-clash";
    case ViolationKind::ColumnClash: return "column-clash";
    case ViolationKind::MissingPair: return "missing-pair";
    case ViolationKind::SelfPair: return "self-pair";
    case ViolationKind::OutOfRange: return "out-of-range";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  // Row clash: `at` is the source, `with` lists the clashing destinations.
  // Column clash: `at` is the destination, `with` lists the clashing sources.
  // Pair violations: `at` is the source, `with` holds the destination.
  std::size_t at = 0;
  std::vector<std::size_t> with;
  Wavelength wavelength = kUnassigned;
};

struct RwaValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::size_t wavelengths_used = 0;  // distinct indices appearing in the map

  bool has(ViolationKind k) const {
    for (const auto& v : violations)
      if (v.kind == k) return true;
    return false;
  }
};

inline RwaValidationReport verify(const RoutingMap& m) {
  RwaValidationReport rep;
  const std::size_t n = m.n_endpoints();
  std::map<Wavelength, bool> seen_any;

  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t d = 0; d < n; ++d) {
      const Wavelength w = m.at(s, d);
      if (s == d) {
        if (w != kUnassigned) rep.violations.push_back({ViolationKind::SelfPair, s, {d}, w});
        continue;
      }
      if (w == kUnassigned) {
        rep.violations.push_back({ViolationKind::MissingPair, s, {d}, w});
        continue;
      }
      seen_any[w] = true;
      if (w > m.n_wavelengths()) rep.violations.push_back({ViolationKind::OutOfRange, s, {d}, w});
    }
  rep.wavelengths_used = seen_any.size();

  // Grouping by wavelength per row and per column yields one violation per
  // clashing wavelength rather than one per clashing pair.
  for (std::size_t s = 0; s < n; ++s) {
    std::map<Wavelength, std::vector<std::size_t>> by_w;
    for (std::size_t d = 0; d < n; ++d)
      if (d != s && m.at(s, d) != kUnassigned) by_w[m.at(s, d)].push_back(d);
    for (auto& [w, dsts] : by_w)
      if (dsts.size() > 1) rep.violations.push_back({ViolationKind::RowClash, s, dsts, w});
  }
  for (std::size_t d = 0; d < n; ++d) {
    std::map<Wavelength, std::vector<std::size_t>> by_w;
    for (std::size_t s = 0; s < n; ++s)
      if (d != s && m.at(s, d) != kUnassigned) by_w[m.at(s, d)].push_back(s);
    for (auto& [w, srcs] : by_w)
      if (srcs.size() > 1) rep.violations.push_back({ViolationKind::ColumnClash, d, srcs, w});
  }
  rep.valid = rep.violations.empty();
  return rep;
}

inline Wavelength wavelength(const RoutingMap& m, std::size_t src, std::size_t dst) {
  if (src >= m.n_endpoints() || dst >= m.n_endpoints())
    throw Error(ErrorCode::OutOfRange, "endpoint pair (" + std::to_string(src) + ", " +
                                           std::to_string(dst) + ") outside a " +
                                           std::to_string(m.n_endpoints()) + "-endpoint map");
  if (src == dst) throw Error(ErrorCode::SelfPair, "endpoint " + std::to_string(src) + " to itself");
  const Wavelength w = m.at(src, dst);
  if (w == kUnassigned)
    throw Error(ErrorCode::OutOfRange, "pair (" + std::to_string(src) + ", " + std::to_string(dst) +
                                           ") has no wavelength");
  return w;
}

/// Closed-form map: endpoint i reaches j on ((j - i) mod n). Always valid
/// with n-1 wavelengths, and used as the analytic certificate for solve().
inline RoutingMap construct_cyclic(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidParams, "need at least 2 endpoints");
  RoutingMap m(n, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) m.set(i, j, static_cast<Wavelength>((j + n - i) % n));
  return m;
}

/// m'(perm[i], perm[j]) = m(i, j).
inline RoutingMap relabel(const RoutingMap& m, const std::vector<std::size_t>& perm) {
  const std::size_t n = m.n_endpoints();
  if (perm.size() != n) throw Error(ErrorCode::InvalidParams, "permutation size mismatch");
  RoutingMap out(n, m.n_wavelengths());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.set(perm.at(i), perm.at(j), m.at(i, j));
  return out;
}

namespace detail {

// Exact search for a map using at most `colors` wavelengths. Cells are visited
// in (src, dst) scan order and values tried ascending, so the first complete
// assignment is the lexicographically smallest one.
class ExactRwaSearch {
 public:
  ExactRwaSearch(std::size_t n, std::size_t colors)
      : n_(n), colors_(colors), row_used_(n, 0), col_used_(n, 0), grid_(n * n, kUnassigned) {
    full_ = colors >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << colors) - 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) order_.push_back(i * n + j);
  }

  bool run() {
    // Pigeonhole: a row needs n-1 distinct wavelengths.
    if (colors_ + 1 < n_) return false;
    return place(0);
  }

  std::uint64_t nodes() const { return nodes_; }

  RoutingMap result() const {
    RoutingMap m(n_, colors_);
    for (std::size_t c = 0; c < grid_.size(); ++c)
      if (grid_[c] != kUnassigned) m.set(c / n_, c % n_, grid_[c]);
    return m;
  }

 private:
  std::uint64_t domain(std::size_t r, std::size_t c) const {
    return full_ & ~row_used_[r] & ~col_used_[c];
  }

  // Forward check on the row and column just touched: every open cell must
  // keep a candidate, and the open cells of a line cannot outnumber the
  // wavelengths that line still has free.
  bool consistent(std::size_t r, std::size_t c) const {
    std::size_t open_row = 0, open_col = 0;
    std::uint64_t row_union = 0, col_union = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k != r && grid_[r * n_ + k] == kUnassigned) {
        const auto d = domain(r, k);
        if (d == 0) return false;
        row_union |= d;
        ++open_row;
      }
      if (k != c && grid_[k * n_ + c] == kUnassigned) {
        const auto d = domain(k, c);
        if (d == 0) return false;
        col_union |= d;
        ++open_col;
      }
    }
    return static_cast<std::size_t>(std::popcount(row_union)) >= open_row &&
           static_cast<std::size_t>(std::popcount(col_union)) >= open_col;
  }

  bool place(std::size_t k) {
    if (k == order_.size()) return true;
    ++nodes_;
    const std::size_t cell = order_[k];
    const std::size_t r = cell / n_, c = cell % n_;
    std::uint64_t cand = domain(r, c);
    while (cand != 0) {
      const int bit = std::countr_zero(cand);
      const std::uint64_t mask = std::uint64_t{1} << bit;
      cand &= cand - 1;
      grid_[cell] = static_cast<Wavelength>(bit + 1);
      row_used_[r] |= mask;
      col_used_[c] |= mask;
      if (consistent(r, c) && place(k + 1)) return true;
      row_used_[r] &= ~mask;
      col_used_[c] &= ~mask;
      grid_[cell] = kUnassigned;
    }
    return false;
  }

  std::size_t n_;
  std::size_t colors_;
  std::uint64_t full_ = 0;
  std::vector<std::uint64_t> row_used_, col_used_;
  std::vector<Wavelength> grid_;
  std::vector<std::size_t> order_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

inline constexpr std::size_t kMaxSolveEndpoints = 64;

/// Minimum-wavelength routing map for `n_endpoints` fully connected
/// endpoints. Tries 1, 2, ... wavelengths and returns the first feasible
/// count, so the result is optimal by construction.
inline RoutingMap solve(std::size_t n_endpoints) {
  if (n_endpoints < 2) throw Error(ErrorCode::InvalidParams, "need at least 2 endpoints");
  if (n_endpoints > kMaxSolveEndpoints)
    throw Error(ErrorCode::TooLarge, "exact solver supports up to 64 endpoints");
  for (std::size_t w = 1; w <= kMaxSolveEndpoints; ++w) {
    detail::ExactRwaSearch search(n_endpoints, w);
    if (search.run()) return search.result();
  }
  throw Error(ErrorCode::TooLarge, "no assignment within 64 wavelengths");
}

inline constexpr std::size_t kBruteForceMaxEndpoints = 5;

/// Exhaustive minimum over all assignments, pruned only by direct conflict
/// checks against already-placed pairs. Kept deliberately naive so it stays
/// an independent check on solve().
inline std::size_t minimal_wavelengths_bruteforce(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidParams, "need at least 2 endpoints");
  if (n > kBruteForceMaxEndpoints)
    throw Error(ErrorCode::TooLarge, "brute force is limited to 5 endpoints");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);

  std::vector<Wavelength> assigned(pairs.size(), kUnassigned);
  for (Wavelength colors = 1;; ++colors) {
    auto feasible = [&](auto&& self, std::size_t k) -> bool {
      if (k == pairs.size()) return true;
      for (Wavelength w = 1; w <= colors; ++w) {
        bool clash = false;
        for (std::size_t p = 0; p < k && !clash; ++p)
          clash = assigned[p] == w &&
                  (pairs[p].first == pairs[k].first || pairs[p].second == pairs[k].second);
        if (clash) continue;
        assigned[k] = w;
        if (self(self, k + 1)) return true;
      }
      assigned[k] = kUnassigned;
      return false;
    };
    if (feasible(feasible, 0)) return colors;
  }
}

}  // namespace ponfog
