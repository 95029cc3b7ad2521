#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mapd;

TEST(ParseMap, SmallestMap) {
  const GridMap m = parse_map("1 1\n.\n");
  EXPECT_EQ(m.vertex_count(), 1);
  EXPECT_EQ(m.edge_count(), 0);
  EXPECT_TRUE(m.endpoints().empty());
}

TEST(ParseMap, OpenBlock) {
  const GridMap m = parse_map("2 2\n..\n..\n");
  EXPECT_EQ(m.vertex_count(), 4);
  EXPECT_EQ(m.edge_count(), 4);
}

TEST(ParseMap, BlockedCenter) {
  const GridMap m = parse_map("3 3\n...\n.@.\n...\n");
  EXPECT_EQ(m.vertex_count(), 8);
  EXPECT_EQ(m.edge_count(), 8);
}

TEST(ParseMap, EndpointLegend) {
  const GridMap m = parse_map("2 3\nr.e\n@er\n");
  EXPECT_EQ(m.task_endpoints(), (std::vector<CellId>{2, 4}));
  EXPECT_EQ(m.nontask_endpoints(), (std::vector<CellId>{0, 5}));
  EXPECT_EQ(m.endpoints(), (std::vector<CellId>{0, 2, 4, 5}));
  EXPECT_FALSE(m.passable(3));
}

TEST(ParseMap, ToleratesCrlfAndTrailingBlankLine) {
  const GridMap m = parse_map("1 2\r\n.e\r\n\n");
  EXPECT_EQ(m.task_endpoints(), (std::vector<CellId>{1}));
}

TEST(ParseMap, ErrorsNameTheLocation) {
  auto message = [](const char* text) {
    try {
      parse_map(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("").find("line 1"), std::string::npos);
  EXPECT_NE(message("2 x\n..\n..\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("2 2 2\n..\n..\n").find("malformed header"), std::string::npos);
  EXPECT_NE(message("2 2\n..\n...\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("2 2\n..\n").find("expected 2 grid rows"), std::string::npos);
  const std::string unknown = message("2 3\n...\n.x.\n");
  EXPECT_NE(unknown.find("line 3, column 2"), std::string::npos);
  EXPECT_NE(unknown.find("'x'"), std::string::npos);
  EXPECT_NE(message("1 1\n.\nextra\n").find("line 3"), std::string::npos);
}

TEST(ParseMap, RoundTripsByteIdentically) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const std::string text = oracle::random_map_text(rng, 1 + rng() % 9, 1 + rng() % 9, 20, 20);
    EXPECT_EQ(to_text(parse_map(text)), text);
  }
}

TEST(Neighbors, Counts) {
  const GridMap open2 = parse_map("2 2\n..\n..\n");
  EXPECT_EQ(open2.neighbors(0).size(), 2u);
  const GridMap open3 = parse_map("3 3\n...\n...\n...\n");
  EXPECT_EQ(open3.neighbors(4).size(), 4u);
  const GridMap ring = parse_map("3 3\n...\n.@.\n...\n");
  // (0,1) touches the blocked center: left, right, and nothing below.
  EXPECT_EQ(ring.neighbors(1), (std::vector<CellId>{0, 2}));
  EXPECT_EQ(ring.neighbors(0).size(), 2u);
  const GridMap line = parse_map("1 3\n...\n");
  EXPECT_EQ(line.neighbors(1), (std::vector<CellId>{0, 2}));
}

TEST(Neighbors, CellNextToBlockedCenterOfFourByThree) {
  // Middle cell of an edge row next to a blocked interior cell: 3 of 4.
  const GridMap m = parse_map("3 4\n....\n.@..\n....\n");
  EXPECT_EQ(m.neighbors(m.id(1, 2)).size(), 3u);
  EXPECT_EQ(m.neighbors(m.id(1, 0)).size(), 2u);
}

TEST(Neighbors, NeverIncludesSelf) {
  const GridMap m = parse_map("3 3\n...\n...\n...\n");
  for (CellId c = 0; c < m.size(); ++c)
    for (CellId n : m.neighbors(c)) EXPECT_NE(n, c);
}

TEST(Neighbors, BlockedOrOutOfBoundsIsAnError) {
  const GridMap m = parse_map("3 3\n...\n.@.\n...\n");
  EXPECT_THROW(m.neighbors(4), ConfigError);
  EXPECT_THROW(m.neighbors(-1), ConfigError);
  EXPECT_THROW(m.neighbors(9), ConfigError);
}

TEST(Heuristics, OpenGridIsManhattan) {
  const GridMap m = parse_map("3 3\ne..\n...\n..e\n");
  const HeuristicTable h = precompute_heuristics(m);
  EXPECT_EQ(h.distance(m.id(0, 0), m.id(2, 2)), 4);
  for (CellId e : m.endpoints()) EXPECT_EQ(h.distance(e, e), 0);
}

TEST(Heuristics, WallWithGapMatchesBfsOracle) {
  const std::vector<std::string> rows{"e.@.e", "..@..", "....e"};
  std::string text = "3 5\n";
  for (const auto& r : rows) text += r + "\n";
  const GridMap m = parse_map(text);
  const HeuristicTable h(m);
  // Frozen: (0,0) -> (0,4) must go down through the gap in row 2.
  EXPECT_EQ(h.distance(m.id(0, 0), m.id(0, 4)), 8);
  for (CellId e : m.endpoints()) {
    const Coord ec = m.coord(e);
    const auto expect = oracle::grid_bfs(rows, ec.row, ec.col);
    for (CellId c = 0; c < m.size(); ++c) {
      if (!m.passable(c)) continue;
      EXPECT_EQ(h.distance(c, e), expect[c] == oracle::kUnreachable ? kInfinity : expect[c]);
    }
  }
}

TEST(Heuristics, RandomMapsMatchBfsOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const std::string text = oracle::random_map_text(rng, 2 + rng() % 9, 2 + rng() % 9, 25, 15);
    const GridMap m = parse_map(text);
    std::vector<std::string> rows;
    for (int r = 0; r < m.rows(); ++r) {
      std::string row;
      for (int c = 0; c < m.cols(); ++c) row += static_cast<char>(m.kind(m.id(r, c)));
      rows.push_back(row);
    }
    const HeuristicTable h(m);
    for (CellId e : m.endpoints()) {
      const Coord ec = m.coord(e);
      const auto expect = oracle::grid_bfs(rows, ec.row, ec.col);
      for (CellId c = 0; c < m.size(); ++c) {
        if (!m.passable(c)) continue;
        ASSERT_EQ(h.distance(c, e), expect[c] == oracle::kUnreachable ? kInfinity : expect[c])
            << text << " cell " << c << " endpoint " << e;
      }
      // Consistency: neighbors differ by at most one.
      for (CellId c = 0; c < m.size(); ++c) {
        if (!m.passable(c) || h.distance(c, e) >= kInfinity) continue;
        for (CellId n : m.neighbors(c)) EXPECT_LE(std::abs(h.distance(c, e) - h.distance(n, e)), 1);
      }
    }
  }
}

TEST(Heuristics, MissingTargetIsAnError) {
  const GridMap m = parse_map("1 3\ne..\n");
  const HeuristicTable h(m);
  EXPECT_FALSE(h.has_target(2));
  EXPECT_THROW(h.to(2), ConfigError);
}

TEST(WellFormed, LeftAnalogIsWellFormed) {
  const auto inst = fixtures::wf_spread();
  const auto report = check_well_formed(inst);
  EXPECT_TRUE(report.well_formed());
}

TEST(WellFormed, CenterAnalogViolatesOnlyB) {
  const auto inst = fixtures::wf_short_parking();
  const auto report = check_well_formed(inst);
  EXPECT_TRUE(report.violates('b'));
  EXPECT_FALSE(report.violates('a'));
  EXPECT_FALSE(report.violates('c'));
  EXPECT_NE(report.violations.front().detail.find("2 agents but only 1"), std::string::npos);
}

TEST(WellFormed, RightAnalogViolatesC) {
  const auto inst = fixtures::wf_dead_end();
  const auto report = check_well_formed(inst);
  EXPECT_TRUE(report.violates('c'));
  EXPECT_FALSE(report.violates('b'));
  const GridMap& m = inst.map;
  const CellId e2 = m.id(2, 1);
  const CellId e3 = m.id(2, 3);
  bool pair_reported = false;
  for (const auto& v : report.violations)
    if (v.condition == 'c' && v.first == e2 && v.second == e3) pair_reported = true;
  EXPECT_TRUE(pair_reported);
  // Restoring connectivity around the middle endpoint fixes it.
  EXPECT_FALSE(oracle::endpoints_pairwise_connected(m, {e2, m.id(2, 2), e3}));
  EXPECT_TRUE(oracle::endpoints_pairwise_connected(m, {e2, e3}));
}

TEST(WellFormed, UnboundedTaskSourceViolatesA) {
  const auto inst = fixtures::wf_spread();
  const auto report = check_well_formed(inst.map, inst.agent_starts, std::nullopt);
  EXPECT_TRUE(report.violates('a'));
  EXPECT_FALSE(report.violates('b'));
}

TEST(WellFormed, AgreesWithPairwiseDeletionOracle) {
  std::mt19937_64 rng(99);
  int accepted = 0;
  for (int i = 0; i < 300; ++i) {
    const GridMap m = parse_map(oracle::random_map_text(rng, 2 + rng() % 6, 2 + rng() % 6, 15, 25));
    const auto report = check_well_formed(m, {}, 0);
    EXPECT_EQ(!report.violates('c'), oracle::endpoints_pairwise_connected(m, m.endpoints()));
    if (report.well_formed()) {
      ++accepted;
      // Removing any single endpoint never disconnects another pair.
      for (CellId gone : m.endpoints()) {
        std::vector<CellId> rest;
        for (CellId e : m.endpoints())
          if (e != gone) rest.push_back(e);
        EXPECT_TRUE(oracle::endpoints_pairwise_connected(m, rest));
      }
    }
  }
  EXPECT_GT(accepted, 20);
}

TEST(WellFormed, StartsOffEndpointsCountAsEndpoints) {
  // A start on a plain cell in the middle of the only corridor separates
  // the two task endpoints.
  const GridMap m = parse_map("1 5\ne.r.e\n");
  EXPECT_TRUE(check_well_formed(m, {m.id(0, 2)}, 1).violates('c'));
  const GridMap m2 = parse_map("1 5\ne...e\n");
  const auto report = check_well_formed(m2, {m2.id(0, 2)}, 1);
  EXPECT_TRUE(report.violates('c'));
}

TEST(ValidateInstance, RejectsBadStartsAndTasks) {
  const GridMap m = parse_map("2 3\nr.e\n@er\n");
  MapdInstance inst{m, {0, 0}, {}};
  EXPECT_THROW(validate_instance(inst, false), ConfigError);
  inst.agent_starts = {3};
  EXPECT_THROW(validate_instance(inst, false), ConfigError);
  inst.agent_starts = {1};
  EXPECT_NO_THROW(validate_instance(inst, false));
  EXPECT_THROW(validate_instance(inst, true), ConfigError);
  inst.agent_starts = {0, 5};
  Task t;
  t.id = 0;
  t.pickup = 1;
  t.delivery = 2;
  inst.tasks = {t};
  EXPECT_THROW(validate_instance(inst, true), ConfigError);
}
