#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mapd;

namespace {

struct Scene {
  GridMap map;
  HeuristicTable h;
  std::vector<Task> tasks;
  TaskSet taskset;
  CentralState state;
  EventLog log;

  Scene(const std::string& text, const std::vector<CellId>& starts, std::vector<Task> ts)
      : map(parse_map(text)), h(map), tasks(std::move(ts)), state(starts) {
    for (auto& t : tasks) {
      t.make_pending();
      taskset.insert(t.id);
    }
  }

  CentralContext ctx(Timestep t = 0) { return {map, h, tasks, taskset, t, CbsOptions{}, &log}; }
};

}  // namespace

TEST(Promote, NobodyOnAPickup) {
  Scene s("1 7\ne.e.e.e\n", {2, 6}, {fixtures::make_task(0, 0, 4, 0)});
  auto ctx = s.ctx();
  EXPECT_TRUE(promote_agents(s.state, ctx).empty());
  EXPECT_EQ(s.tasks[0].state, TaskState::kPending);
}

TEST(Promote, RestingOnPickupWithFreeDelivery) {
  Scene s("1 7\ne.e.e.e\n", {0, 6}, {fixtures::make_task(0, 0, 4, 0)});
  auto ctx = s.ctx(3);
  s.state.paths[0] = rest_path(0, 3);
  EXPECT_EQ(promote_agents(s.state, ctx), (std::vector<AgentId>{0}));
  EXPECT_TRUE(s.state.occupied(0));
  EXPECT_EQ(s.state.endpoint[0], 4);
  EXPECT_EQ(s.state.task[0], 0);
  EXPECT_EQ(s.tasks[0].state, TaskState::kExecuting);
  EXPECT_EQ(s.tasks[0].pickup_time, 3);
  EXPECT_TRUE(s.taskset.empty());
}

TEST(Promote, SharedDeliveryPromotesLowerIdOnly) {
  Scene s("1 7\ne.e.e.e\n", {0, 4}, {fixtures::make_task(0, 4, 2, 0), fixtures::make_task(1, 0, 2, 0)});
  auto ctx = s.ctx();
  EXPECT_EQ(promote_agents(s.state, ctx), (std::vector<AgentId>{0}));
  EXPECT_EQ(s.state.task[0], 1);
  EXPECT_FALSE(s.state.occupied(1));
  EXPECT_TRUE(s.taskset.contains(0));
}

TEST(Promote, MovingAgentsAreNotPromoted) {
  Scene s("1 7\ne.e.e.e\n", {0, 6}, {fixtures::make_task(0, 0, 4, 0)});
  s.state.paths[0] = Path{0, {0, 1, 0}};
  auto ctx = s.ctx();
  EXPECT_TRUE(promote_agents(s.state, ctx).empty());
}

TEST(Promote, DeliveryClaimedByAnotherAgentsEndpoint) {
  Scene s("1 7\ne.e.e.e\n", {0, 6}, {fixtures::make_task(0, 0, 4, 0)});
  s.state.endpoint[1] = 4;  // agent 1 is heading for 4
  auto ctx = s.ctx();
  EXPECT_TRUE(promote_agents(s.state, ctx).empty());
}

TEST(CandidateSet, NoTasksParksAtNearestDistinctEndpoints) {
  Scene s("1 7\nr.e.e.r\n", {0, 6}, {});
  auto ctx = s.ctx();
  const std::vector<std::vector<int>> costs{{0, 2, 4, 6}, {6, 4, 2, 0}};
  const auto x = build_candidate_set(s.state, ctx, {0, 1}, costs);
  EXPECT_TRUE(x.tasks.empty());
  EXPECT_EQ(x.endpoints, (std::vector<CellId>{0, 6}));
  EXPECT_EQ(x.kinds, (std::vector<EndpointKind>{EndpointKind::kParking, EndpointKind::kParking}));
  // Both agents closest to the same endpoint: the second takes the next one.
  const auto y = build_candidate_set(s.state, ctx, {0, 1}, {{0, 2, 4, 6}, {1, 3, 5, 7}});
  EXPECT_EQ(y.endpoints, (std::vector<CellId>{0, 2}));
}

TEST(CandidateSet, SharedPickupKeepsEarlierTask) {
  Scene s("1 7\nr.e.e.e\n", {0}, {fixtures::make_task(0, 2, 4, 0), fixtures::make_task(1, 2, 6, 1)});
  auto ctx = s.ctx();
  const auto x = build_candidate_set(s.state, ctx, {0}, {{0, 2, 4, 6}});
  EXPECT_EQ(x.tasks, (std::vector<TaskId>{0}));
  EXPECT_EQ(x.endpoints, (std::vector<CellId>{2}));
}

TEST(CandidateSet, EnoughPickupsMeansNoParking) {
  Scene s("1 7\nr.e.e.e\n", {0}, {fixtures::make_task(0, 2, 4, 0), fixtures::make_task(1, 6, 0, 0)});
  auto ctx = s.ctx();
  const auto x = build_candidate_set(s.state, ctx, {0}, {{0, 2, 4, 6}});
  EXPECT_EQ(x.tasks, (std::vector<TaskId>{0, 1}));
  EXPECT_EQ(x.kinds, (std::vector<EndpointKind>{EndpointKind::kPickup, EndpointKind::kPickup}));
}

TEST(CandidateSet, OccupiedEndpointsAreExcluded) {
  Scene s("1 7\nr.e.e.e\n", {0, 6}, {fixtures::make_task(0, 2, 4, 0)});
  s.state.status[1] = AgentStatus::kOccupied;
  s.state.endpoint[1] = 4;
  auto ctx = s.ctx();
  const auto x = build_candidate_set(s.state, ctx, {0}, {{0, 2, 4, 6}});
  EXPECT_TRUE(x.tasks.empty());
  EXPECT_EQ(x.endpoints, (std::vector<CellId>{0}));
}

TEST(CandidateSet, NoReachableParkingIsAnError) {
  Scene s("1 3\nr.e\n", {0}, {});
  auto ctx = s.ctx();
  EXPECT_THROW(build_candidate_set(s.state, ctx, {0}, {{kInfinity, kInfinity}}), SimulationError);
}

TEST(CentralStep, ExampleAssignsByTotalPickupDistance) {
  const auto inst = fixtures::two_agent();
  Scene s(to_text(inst.map), inst.agent_starts, inst.tasks);
  auto ctx = s.ctx();
  central_step(s.state, ctx);
  const GridMap& m = s.map;
  // 2 + 2 beats 5 + 1.
  EXPECT_EQ(s.state.endpoint, (std::vector<CellId>{m.id(0, 2), m.id(2, 3)}));
  EXPECT_EQ(s.state.paths[0].end_time(), 2);
  EXPECT_EQ(s.state.paths[1].end_time(), 2);
  EXPECT_TRUE(find_collisions(m, s.state.paths, 0).empty());
  ASSERT_EQ(s.log.events().size(), 2u);
  EXPECT_EQ(s.log.events()[0], (Event{0, 0, "assign_pickup", 0, 2}));
  EXPECT_EQ(s.log.events()[1], (Event{0, 1, "assign_pickup", 1, 2}));
  // At t=2 both agents rest on their pickups, which are also the deliveries.
  auto later = s.ctx(2);
  const auto stats = central_step(s.state, later);
  EXPECT_EQ(stats.promoted, (std::vector<AgentId>{0, 1}));
  EXPECT_EQ(s.tasks[0].service_time(), 2);
  EXPECT_EQ(s.tasks[1].service_time(), 2);
  EXPECT_FALSE(s.state.occupied(0));
  EXPECT_FALSE(s.state.occupied(1));
}

TEST(CentralStep, PromotedAgentReplansToDelivery) {
  const auto inst = fixtures::corridor();
  Scene s(to_text(inst.map), inst.agent_starts, inst.tasks);
  s.state.paths[0] = rest_path(s.tasks[0].pickup, 2);
  auto ctx = s.ctx(2);
  const auto stats = central_step(s.state, ctx);
  EXPECT_EQ(stats.promoted, (std::vector<AgentId>{0}));
  EXPECT_TRUE(s.state.occupied(0));
  EXPECT_EQ(s.state.paths[0], (Path{2, {2, 3, 4}}));
}

TEST(CentralStep, InvariantsOnRandomWellFormedInstances) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 15; ++i) {
    const auto inst = oracle::random_well_formed(rng, 8, 2, 4, 4, 10, Frequency::parse("1/2"));
    Scene s(to_text(inst.map), inst.agent_starts, {});
    s.tasks = inst.tasks;
    const auto n = static_cast<AgentId>(inst.agent_starts.size());
    int finished = 0;
    for (Timestep t = 0; t < 400 && finished < static_cast<int>(s.tasks.size()); ++t) {
      release_due(s.tasks, t, s.taskset);
      for (AgentId a = 0; a < n; ++a) {
        if (!s.state.occupied(a) || s.state.paths[a].at(t) != s.tasks[s.state.task[a]].delivery) continue;
        s.tasks[s.state.task[a]].finish(t);
        s.state.status[a] = AgentStatus::kFree;
        s.state.task[a] = kNoTask;
        ++finished;
      }
      auto ctx = s.ctx(t);
      const auto stats = central_step(s.state, ctx);
      for (AgentId a : stats.promoted)
        if (!s.state.occupied(a)) ++finished;
      std::set<CellId> ends(s.state.endpoint.begin(), s.state.endpoint.end());
      ASSERT_EQ(ends.size(), static_cast<std::size_t>(n)) << "instance " << i << " t=" << t;
      for (AgentId a = 0; a < n; ++a) {
        EXPECT_EQ(s.state.paths[a].last(), s.state.endpoint[a]);
        if (s.state.occupied(a)) {
          EXPECT_EQ(s.state.endpoint[a], s.tasks[s.state.task[a]].delivery);
        }
      }
      ASSERT_TRUE(find_collisions(s.map, s.state.paths, t).empty()) << "instance " << i << " t=" << t;
    }
    EXPECT_EQ(finished, static_cast<int>(s.tasks.size())) << "instance " << i;
  }
}
