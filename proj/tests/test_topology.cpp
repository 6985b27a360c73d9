#include <gtest/gtest.h>

#include <random>

#include "ponfog/topology.hpp"
#include "ponfog/topology_export.hpp"

using namespace ponfog;

namespace {

TopologyParams shape(std::size_t cells, std::size_t racks, std::size_t servers) {
  TopologyParams p;
  p.cells = cells;
  p.racks_per_cell = racks;
  p.servers_per_rack = servers;
  return p;
}

}  // namespace

TEST(BuildFogTopology, DefaultProfile) {
  const auto t = build_fog_topology(TopologyParams{}, OltCapacity{});
  EXPECT_EQ(t.group_count(), 6u);
  EXPECT_EQ(t.server_count(), 96u);
  EXPECT_EQ(t.cells.size(), 3u);
  EXPECT_EQ(t.awgr_links.size(), 15u);
  EXPECT_EQ(t.awg_uplinks.size(), 6u);

  std::size_t inter = 0, intra = 0;
  for (const auto& l : t.awgr_links) (t.cell_of(l.a) == t.cell_of(l.b) ? intra : inter)++;
  EXPECT_EQ(inter, 12u);
  EXPECT_EQ(intra, 3u);
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(BuildFogTopology, SingleServer) {
  const auto t = build_fog_topology(shape(1, 1, 1));
  EXPECT_EQ(t.group_count(), 1u);
  EXPECT_EQ(t.awgr_links.size(), 0u);
  EXPECT_EQ(t.awg_uplinks.size(), 1u);
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(BuildFogTopology, TwoCellsOneRackEach) {
  const auto t = build_fog_topology(shape(2, 1, 16));
  ASSERT_EQ(t.group_count(), 2u);
  ASSERT_EQ(t.awgr_links.size(), 1u);
  EXPECT_NE(t.cell_of(t.awgr_links.begin()->a), t.cell_of(t.awgr_links.begin()->b));
  EXPECT_DOUBLE_EQ(t.awgr_links.begin()->km, 0.5);
}

TEST(BuildFogTopology, GroupNumberingFollowsCells) {
  const auto t = build_fog_topology(TopologyParams{});
  EXPECT_EQ(t.group(0).cell, 0u);
  EXPECT_EQ(t.group(1).cell, 0u);
  EXPECT_EQ(t.group(2).cell, 1u);
  EXPECT_EQ(t.group(5).cell, 2u);
  std::size_t onu = 0;
  for (std::size_t g = 0; g < t.group_count(); ++g)
    for (const auto& s : t.group(g).servers) {
      EXPECT_EQ(s.group, g);
      EXPECT_TRUE(s.onu.tunable);
      EXPECT_EQ(s.onu.id, onu++);
    }
}

TEST(BuildFogTopology, RejectsBadParams) {
  EXPECT_THROW(build_fog_topology(shape(0, 2, 16)), Error);
  EXPECT_THROW(build_fog_topology(shape(3, 0, 16)), Error);
  EXPECT_THROW(build_fog_topology(shape(3, 2, 0)), Error);

  auto far = TopologyParams{};
  far.olt_to_cell_km = {20.5};
  try {
    build_fog_topology(far);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }

  auto per_cell = TopologyParams{};
  per_cell.olt_to_cell_km = {5.0, 10.0};  // 3 cells need 1 or 3 entries
  EXPECT_THROW(build_fog_topology(per_cell), Error);
  per_cell.olt_to_cell_km = {5.0, 10.0, 20.0};
  const auto t = build_fog_topology(per_cell);
  EXPECT_DOUBLE_EQ(t.uplink_km(0), 5.0);
  EXPECT_DOUBLE_EQ(t.uplink_km(3), 10.0);
  EXPECT_DOUBLE_EQ(t.uplink_km(5), 20.0);

  auto zero = TopologyParams{};
  zero.olt_to_cell_km = {0.0};
  EXPECT_THROW(build_fog_topology(zero), Error);
}

TEST(BuildFogTopology, CapacityExceeded) {
  OltCapacity cap;
  EXPECT_EQ(cap.usable_cards(), 16u);
  EXPECT_EQ(cap.servers_per_card(), 2048u);
  // 16 cards x 2048 = 32768 servers fit; one more rack does not.
  EXPECT_NO_THROW(build_fog_topology(shape(1024, 2, 16), cap));
  try {
    build_fog_topology(shape(1025, 2, 16), cap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapacityExceeded);
  }
}

TEST(BuildFogTopology, Deterministic) {
  const auto a = build_fog_topology(shape(4, 3, 5));
  const auto b = build_fog_topology(shape(4, 3, 5));
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(to_dot(a), to_dot(b));
}

TEST(RwaEndpoints, GroupsThenOlt) {
  const auto eps = rwa_endpoints(build_fog_topology(TopologyParams{}));
  ASSERT_EQ(eps.size(), 7u);
  EXPECT_EQ(eps.front().label, "G1");
  EXPECT_EQ(eps[5].label, "G6");
  EXPECT_TRUE(eps.back().is_olt);
  EXPECT_EQ(eps.back().label, "OLT");

  EXPECT_EQ(rwa_endpoints(build_fog_topology(shape(1, 1, 1))).size(), 2u);
  EXPECT_EQ(rwa_endpoints(build_fog_topology(shape(4, 3, 2))).size(), 13u);
}

TEST(ValidateTopology, MissingInterCellLink) {
  auto t = build_fog_topology(TopologyParams{});
  t.awgr_links.erase(make_awgr_link(0, 3, 0.0));
  const auto d = validate_topology(t);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "missing-inter-cell-link");
  EXPECT_NE(d[0].message.find("G1"), std::string::npos);
  EXPECT_NE(d[0].message.find("G4"), std::string::npos);
}

TEST(ValidateTopology, MissingIntraCellLink) {
  auto t = build_fog_topology(TopologyParams{});
  t.awgr_links.erase(make_awgr_link(4, 5, 0.0));
  const auto d = validate_topology(t);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "missing-intra-cell-link");
}

TEST(ValidateTopology, MissingUplink) {
  auto t = build_fog_topology(TopologyParams{});
  t.awg_uplinks.erase(t.awg_uplinks.begin() + 2);
  const auto d = validate_topology(t);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "missing-uplink");
  EXPECT_NE(d[0].message.find("G3"), std::string::npos);
}

TEST(ValidateTopology, DuplicateUplinkAndBadLink) {
  auto t = build_fog_topology(TopologyParams{});
  t.awg_uplinks.push_back({1, 20.0});
  t.awgr_links.insert(AwgrLink{2, 9, 0.5});
  const auto d = validate_topology(t);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].code, "bad-awgr-link");
  EXPECT_EQ(d[1].code, "duplicate-uplink");
}

TEST(DataPath, IntraRackUsesReflectorOnly) {
  const auto t = build_fog_topology(TopologyParams{});
  const auto p = data_path(t, t.server(0, 0), t.server(0, 5));
  EXPECT_EQ(p.classification, PathClass::IntraRack);
  ASSERT_EQ(p.elements.size(), 3u);
  EXPECT_EQ(p.elements[0].kind, ElementKind::Onu);
  EXPECT_EQ(p.elements[1].kind, ElementKind::Reflector);
  EXPECT_EQ(p.elements[2].kind, ElementKind::Onu);
  EXPECT_EQ(p.count(ElementKind::Awgr), 0u);
}

TEST(DataPath, InterCellTraversesSourceThenDestinationAwgr) {
  const auto t = build_fog_topology(TopologyParams{});
  const auto p = data_path(t, t.server(2, 0), t.server(4, 0));  // G3 -> G5
  EXPECT_EQ(p.classification, PathClass::InterCell);
  ASSERT_EQ(p.count(ElementKind::Awgr), 2u);
  std::vector<std::size_t> awgrs;
  for (const auto& e : p.elements)
    if (e.kind == ElementKind::Awgr) awgrs.push_back(e.id);
  EXPECT_EQ(awgrs, (std::vector<std::size_t>{2, 4}));
  EXPECT_DOUBLE_EQ(p.length_km, 0.5);
}

TEST(DataPath, SameCellDifferentRack) {
  const auto t = build_fog_topology(TopologyParams{});
  const auto p = data_path(t, t.server(0, 1), t.server(1, 1));
  EXPECT_EQ(p.classification, PathClass::InterRackSameCell);
  EXPECT_EQ(p.count(ElementKind::Awgr), 2u);
}

TEST(DataPath, SameServerRejected) {
  const auto t = build_fog_topology(TopologyParams{});
  try {
    data_path(t, t.server(1, 1), t.server(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SamePath);
  }
}

TEST(DataPath, PropertiesOverRandomShapes) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int round = 0; round < 200; ++round) {
    const auto t = build_fog_topology(shape(dim(rng), dim(rng), dim(rng) + 1));
    const std::size_t g = t.group_count();
    ASSERT_EQ(t.awgr_links.size(), g * (g - 1) / 2);
    ASSERT_TRUE(validate_topology(t).empty());

    std::uniform_int_distribution<std::size_t> pg(0, g - 1), ps(0, t.params.servers_per_rack - 1);
    for (int k = 0; k < 20; ++k) {
      const auto& a = t.server(pg(rng), ps(rng));
      const auto& b = t.server(pg(rng), ps(rng));
      if (a == b) continue;
      const auto p = data_path(t, a, b);
      EXPECT_EQ(classify(t, a, b), classify(t, b, a));
      EXPECT_EQ(p.count(ElementKind::Olt), 0u);
      EXPECT_EQ(p.count(ElementKind::LeafSwitch) + p.count(ElementKind::SpineSwitch), 0u);
      EXPECT_EQ(p.count(ElementKind::Awgr), p.classification == PathClass::IntraRack ? 0u : 2u);
    }
  }
}

TEST(SpineLeaf, Sizing) {
  auto t = build_spine_leaf(96);
  EXPECT_EQ(t.leaves, 2u);
  EXPECT_EQ(t.spines, 2u);
  t = build_spine_leaf(1);
  EXPECT_EQ(t.leaves, 1u);
  EXPECT_EQ(t.spines, 2u);
  t = build_spine_leaf(1536);
  EXPECT_EQ(t.leaves, 32u);
  EXPECT_EQ(t.spines, 8u);
  // Beyond 8 leaves a third spine appears.
  EXPECT_EQ(build_spine_leaf(384).spines, 2u);
  EXPECT_EQ(build_spine_leaf(385).spines, 3u);
  EXPECT_EQ(build_spine_leaf(385).leaf_spine_links(), 27u);
}

TEST(SpineLeaf, Errors) {
  EXPECT_THROW(build_spine_leaf(0), Error);
  SpineLeafParams p;
  p.leaf_server_ports = 0;
  EXPECT_THROW(build_spine_leaf(10, p), Error);
  p = {};
  p.leaf_uplink_ports = 2;
  EXPECT_NO_THROW(build_spine_leaf(384, p));
  EXPECT_THROW(build_spine_leaf(385, p), Error);
}

TEST(SpineLeaf, LeafCountIsTight) {
  for (std::size_t n = 1; n <= 3000; n += 7) {
    const auto t = build_spine_leaf(n);
    EXPECT_GE(t.leaves * t.params.leaf_server_ports, n);
    EXPECT_LT((t.leaves - 1) * t.params.leaf_server_ports, n);
    EXPECT_LT(t.leaf_of(n - 1), t.leaves);
  }
}

TEST(SpineLeaf, PathsCrossSpineOnlyBetweenLeaves) {
  const auto t = build_spine_leaf(200);
  auto p = spine_leaf_path(t, 0, 1);
  EXPECT_EQ(p.count(ElementKind::SpineSwitch), 0u);
  p = spine_leaf_path(t, 0, 150);
  EXPECT_EQ(p.count(ElementKind::SpineSwitch), 1u);
  EXPECT_EQ(p.count(ElementKind::LeafSwitch), 2u);
}

TEST(TopologyExport, JsonShape) {
  const auto j = to_json(build_fog_topology(TopologyParams{}));
  EXPECT_EQ(j["servers"], 96);
  EXPECT_EQ(j["awgr_links"].size(), 15u);
  EXPECT_EQ(j["cell_list"][1]["groups"][0]["label"], "G3");
  EXPECT_EQ(j["awg_uplinks"][0]["to"], "OLT");
  // Stable key order.
  EXPECT_EQ(j.begin().key(), "cells");
}

TEST(TopologyExport, Dot) {
  const auto dot = to_dot(build_fog_topology(TopologyParams{}));
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("AWGR3 -> AWGR5"), std::string::npos);
  EXPECT_NE(dot.find("AWGR6 -> OLT"), std::string::npos);
}
