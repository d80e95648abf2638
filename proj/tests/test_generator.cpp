#include <gtest/gtest.h>

#include "nurse/corpus.hpp"
#include "nurse/generator.hpp"
#include "nurse/instance_io.hpp"
#include "nurse/oracle.hpp"
#include "support/brute.hpp"

using namespace nurse;

TEST(Generator, PlantedScheduleCoversDemand) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    for (auto model : {CostModel::uniform, CostModel::requests}) {
      GenParams g;
      g.seed = seed;
      g.cost_model = model;
      g.universe = seed % 2 ? UniversePolicy::sampled : UniversePolicy::all_subsets;
      auto gen = generate_with_plant(g);
      ASSERT_TRUE(gen.planted);
      const auto report = audit(*gen.planted, gen.instance);
      EXPECT_TRUE(report.empty()) << "seed " << seed;
      EXPECT_TRUE(is_feasible(*gen.planted, gen.instance));
    }
}

TEST(Generator, ZeroTightnessGivesZeroDemand) {
  GenParams g;
  g.tightness = 0;
  const auto inst = generate(g);
  for (int k = 0; k < kSlots; ++k)
    for (int s = 0; s < inst.grades(); ++s) EXPECT_EQ(inst.demand(k, s), 0);
}

TEST(Generator, DefaultUniverseSize) {
  const auto inst = generate(GenParams{});
  EXPECT_GE(inst.pattern_count(), 100);
  EXPECT_LE(inst.pattern_count(), 500);
}

TEST(Generator, Deterministic) {
  GenParams g;
  g.seed = 12;
  EXPECT_EQ(write_instance(generate(g)), write_instance(generate(g)));
  auto h = g;
  h.seed = 13;
  EXPECT_NE(write_instance(generate(g)), write_instance(generate(h)));
}

TEST(Generator, EveryNurseHasAFeasiblePattern) {
  for (const auto& params : full_corpus()) {
    const auto inst = generate(params);
    EXPECT_EQ(inst.nurse_count(), 30);
    EXPECT_EQ(inst.grades(), 3);
    for (int i = 0; i < inst.nurse_count(); ++i) {
      EXPECT_FALSE(inst.feasible(i).empty());
      EXPECT_EQ(inst.feasible(i).size(), brute::allowed(inst, i).size());
    }
  }
}

TEST(Generator, SmallCorpusIsEnumerable) {
  const auto recipe = small_corpus();
  ASSERT_EQ(recipe.size(), 50u);
  for (const auto& params : recipe) {
    const auto inst = generate(params);
    EXPECT_LE(inst.nurse_count(), 6);
    for (int i = 0; i < inst.nurse_count(); ++i) EXPECT_LE(inst.feasible(i).size(), 20u);
  }
}

TEST(Generator, CostsWithinRange) {
  GenParams g;
  g.seed = 5;
  const auto inst = generate(g);
  for (int i = 0; i < inst.nurse_count(); ++i)
    for (int j = 0; j < inst.pattern_count(); ++j) {
      EXPECT_GE(inst.nurse(i).costs[j], 0);
      EXPECT_LE(inst.nurse(i).costs[j], kMaxCost);
    }
}

TEST(Generator, RandomDemandIsClampedAndCumulative) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenParams g;
    g.seed = seed;
    g.demand = DemandMode::random;
    g.tightness = 0.8;
    auto gen = generate_with_plant(g);
    EXPECT_FALSE(gen.planted);
    const auto& inst = gen.instance;
    for (int k = 0; k < kSlots; ++k)
      for (int s = 0; s < inst.grades(); ++s) {
        int reach = 0;
        for (int i = 0; i < inst.nurse_count(); ++i) {
          if (!inst.nurse(i).qualifies(s)) continue;
          for (int j : inst.feasible(i))
            if (inst.pattern(j).covers(k)) {
              ++reach;
              break;
            }
        }
        EXPECT_LE(inst.demand(k, s), reach);
        if (s > 0) {
          EXPECT_GE(inst.demand(k, s), inst.demand(k, s - 1));
        }
      }
  }
}

TEST(Generator, RejectsBadParams) {
  GenParams g;
  g.nurses = 0;
  EXPECT_THROW(generate(g), ConfigInvalid);
  g = GenParams{};
  g.grade_mix = {1.0};
  EXPECT_THROW(generate(g), ConfigInvalid);
  g = GenParams{};
  g.tightness = 1.5;
  EXPECT_THROW(generate(g), ConfigInvalid);
  g = GenParams{};
  g.contracts = {{0, 0, 1.0}};
  EXPECT_THROW(generate(g), ConfigInvalid);
  g = GenParams{};
  g.off_side_max = 200;
  EXPECT_THROW(generate(g), ConfigInvalid);
}
