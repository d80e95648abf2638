#include <gtest/gtest.h>

#include "nurse/corpus.hpp"
#include "nurse/generator.hpp"
#include "nurse/oracle.hpp"
#include "support/brute.hpp"

using namespace nurse;

namespace {

Nurse make_nurse(int grade, int days, int nights, int m) {
  Nurse n;
  n.grade = grade;
  n.days = days;
  n.nights = nights;
  n.costs.assign(m, 0);
  n.unavailable.assign(m, false);
  return n;
}

}  // namespace

TEST(Oracle, ZeroDemandIsSeparable) {
  GenParams g;
  g.nurses = 6;
  g.tightness = 0;
  g.cost_model = CostModel::uniform;
  auto inst = generate(g);
  long expect = 0;
  for (int i = 0; i < inst.nurse_count(); ++i) {
    int best = kMaxCost;
    for (int j : brute::allowed(inst, i)) best = std::min(best, inst.nurse(i).costs[j]);
    expect += best;
  }
  const auto r = solve_exact(inst);
  ASSERT_EQ(r.status, OracleStatus::optimal);
  EXPECT_EQ(*r.optimal_cost, expect);
}

TEST(Oracle, ImpossibleGradeOneDemand) {
  std::vector<ShiftPattern> pats{ShiftPattern::parse("11000000000000"), ShiftPattern::parse("00110000000000")};
  std::vector<int> demand(28, 0);
  demand[0 * 2 + 0] = 2;  // two grade-1 nurses on Sunday, only one exists
  demand[0 * 2 + 1] = 2;
  Instance inst("imp", 2, demand, pats, {make_nurse(1, 2, 0, 2), make_nurse(2, 2, 0, 2)});
  const auto r = solve_exact(inst);
  EXPECT_EQ(r.status, OracleStatus::infeasible);
  EXPECT_FALSE(brute::optimum(inst).cost);
}

TEST(Oracle, NodeLimitReported) {
  GenParams g;
  g.nurses = 12;
  auto inst = generate(g);
  const auto r = solve_exact(inst, 50);
  EXPECT_EQ(r.status, OracleStatus::limit_exceeded);
}

TEST(Oracle, MatchesEnumeration) {
  int compared = 0;
  for (std::uint64_t seed = 1; compared < 30 && seed < 400; ++seed) {
    GenParams g;
    g.seed = seed;
    g.nurses = 4 + static_cast<int>(seed % 2);
    g.universe = UniversePolicy::sampled;
    g.sampled_per_size = 4;
    g.combined_per_split = 6;
    g.demand = seed % 3 == 0 ? DemandMode::random : DemandMode::planted;
    g.tightness = 0.5 + 0.1 * static_cast<double>(seed % 5);
    auto inst = generate(g);
    if (brute::assignment_count(inst) > 1e5) continue;
    const auto ref = brute::optimum(inst);
    const auto r = solve_exact(inst);
    ASSERT_NE(r.status, OracleStatus::limit_exceeded);
    EXPECT_EQ(r.status == OracleStatus::optimal, ref.cost.has_value()) << inst.name() << " seed " << seed;
    if (ref.cost) {
      EXPECT_EQ(*r.optimal_cost, *ref.cost);
      EXPECT_TRUE(audit(r.optimal_schedule, inst).empty());
      EXPECT_EQ(recompute_cost(r.optimal_schedule, inst), *ref.cost);
    }
    ++compared;
  }
  EXPECT_EQ(compared, 30);
}

TEST(Oracle, PlantedSmallWardsAreFeasible) {
  for (const auto& params : small_corpus(10)) {
    auto gen = generate_with_plant(params);
    const auto r = solve_exact(gen.instance);
    ASSERT_EQ(r.status, OracleStatus::optimal);
    EXPECT_LE(*r.optimal_cost, recompute_cost(*gen.planted, gen.instance));
  }
}

TEST(Audit, PlantedScheduleIsClean) {
  GenParams g;
  auto gen = generate_with_plant(g);
  EXPECT_TRUE(audit(*gen.planted, gen.instance).empty());
}

TEST(Audit, OneMissingGradeOneNight) {
  std::vector<ShiftPattern> pats{ShiftPattern::parse("00000001000000"), ShiftPattern::parse("00000000100000")};
  std::vector<int> demand(42, 0);
  for (int s = 0; s < 3; ++s) demand[7 * 3 + s] = 1;  // Sunday night, grade 1 and below
  demand[8 * 3 + 2] = 1;                            // Monday night, grade 3
  Instance inst("a", 3, demand, pats, {make_nurse(2, 0, 1, 2), make_nurse(3, 0, 1, 2)});
  const auto report = audit(Schedule{{0, 1}}, inst);
  ASSERT_EQ(report.undercover.size(), 1u);
  EXPECT_EQ(report.undercover[0], (UndercoverEntry{7, 0, 1}));
  EXPECT_TRUE(report.misassigned.empty());
}

TEST(Audit, FlagsPatternsOutsideF) {
  std::vector<ShiftPattern> pats{ShiftPattern::parse("10000000000000"), ShiftPattern::parse("00000001000000")};
  Instance inst("m", 1, std::vector<int>(14, 0), pats, {make_nurse(1, 1, 0, 2)});
  const auto report = audit(Schedule{{1}}, inst);
  ASSERT_EQ(report.misassigned.size(), 1u);
  EXPECT_EQ(report.misassigned[0].pattern, 1);
}

TEST(Audit, TotalsMatchFitnessPenalty) {
  auto rng = make_stream({9});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenParams g;
    g.seed = seed;
    auto inst = generate(g);
    for (int t = 0; t < 10; ++t) {
      Schedule s{std::vector<int>(inst.nurse_count())};
      for (int i = 0; i < inst.nurse_count(); ++i) {
        auto f = inst.feasible(i);
        s.assignment[i] = f[uniform_below(rng, f.size())];
      }
      const auto report = audit(s, inst);
      EXPECT_DOUBLE_EQ((fitness(s, inst, 20.0) - solution_cost(s, inst)) / 20.0,
                       static_cast<double>(report.total_undercover()));
      EXPECT_EQ(recompute_cost(s, inst), solution_cost(s, inst));
    }
  }
}
