#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nurse/corpus.hpp"
#include "nurse/generator.hpp"
#include "nurse/genetic.hpp"
#include "nurse/oracle.hpp"
#include "support/brute.hpp"

using namespace nurse;

namespace {

GaConfig combined_pux(std::uint64_t seed, bool bound = false) {
  GaConfig c;
  c.decoder = DecoderKind::combined;
  c.ordering = OrderingKind::biased;
  c.crossover = CrossoverKind::pux;
  c.bound_active = bound;
  c.seed = seed;
  return c;
}

Individual with_fitness(double f, int born = 0) {
  Individual x;
  x.fitness = f;
  x.born = born;
  return x;
}

}  // namespace

TEST(Config, Defaults) {
  GaConfig c;
  EXPECT_EQ(c.population_size, 100);
  EXPECT_DOUBLE_EQ(c.mutation_rate, 0.015);
  EXPECT_DOUBLE_EQ(c.penalty_weight, 20.0);
  EXPECT_EQ(c.stop_after_no_improvement, 30);
  EXPECT_EQ(c.elite_count(), 10);
  c.population_size = 15;
  EXPECT_EQ(c.elite_count(), 2);
  c.population_size = 1;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  GaConfig bad;
  bad.mutation_rate = 2;
  EXPECT_THROW(bad.validate(), ConfigInvalid);
}

TEST(Selection, PopulationOfTwo) {
  auto rng = make_stream({1});
  int best = 0;
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) best += select_rank(2, rng) == 0;
  EXPECT_NEAR(static_cast<double>(best) / draws, 2.0 / 3.0, 0.01);
}

TEST(Selection, RankLaw) {
  const std::size_t n = 20;
  const int draws = 100000;
  auto rng = make_stream({2});
  std::vector<int> hits(n, 0);
  for (int t = 0; t < draws; ++t) ++hits[select_rank(n, rng)];
  const double total = n * (n + 1) / 2.0;
  double chi2 = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const double expect = draws * (n - r) / total;
    EXPECT_NEAR(hits[r] / static_cast<double>(draws), (n - r) / total, 0.01);
    chi2 += (hits[r] - expect) * (hits[r] - expect) / expect;
  }
  EXPECT_LT(chi2, 43.8);  // 19 degrees of freedom, p = 0.001
}

TEST(Selection, EqualFitnessKeepsRankWeights) {
  std::vector<Individual> pop;
  for (int x = 0; x < 5; ++x) {
    auto ind = with_fitness(1.0);
    ind.genotype = {x};
    pop.push_back(ind);
  }
  rank_population(pop);
  for (int x = 0; x < 5; ++x) EXPECT_EQ(pop[x].genotype[0], x);
}

TEST(Replacement, ElitesSurvive) {
  std::vector<Individual> old, children;
  for (int x = 0; x < 10; ++x) old.push_back(with_fitness(x));
  for (int x = 0; x < 9; ++x) children.push_back(with_fitness(100 + x, 1));
  auto next = replace_generation(old, children, 1);
  ASSERT_EQ(next.size(), 10u);
  EXPECT_DOUBLE_EQ(next.front().fitness, 0.0);
  EXPECT_DOUBLE_EQ(std::min_element(next.begin(), next.end(), [](auto& a, auto& b) { return a.fitness < b.fitness; })
                       ->fitness,
                   0.0);
}

TEST(InitialPopulation, SharedAcrossCrossovers) {
  auto a = initial_population(30, 100, 9);
  EXPECT_EQ(a, initial_population(30, 100, 9));
  EXPECT_NE(a, initial_population(30, 100, 10));
  for (const auto& g : a) EXPECT_TRUE(brute::is_permutation(g));
}

TEST(Run, DeterministicAndMonotone) {
  GenParams g;
  g.seed = 3;
  auto inst = generate(g);
  for (bool bound : {false, true}) {
    const auto cfg = combined_pux(5, bound);
    const auto r1 = run(inst, cfg);
    const auto r2 = run(inst, cfg);
    EXPECT_EQ(r1.best_schedule, r2.best_schedule);
    EXPECT_EQ(r1.best_feasible_cost, r2.best_feasible_cost);
    EXPECT_EQ(r1.generations, r2.generations);
    EXPECT_EQ(r1.best_fitness_history, r2.best_fitness_history);
    for (std::size_t x = 1; x < r1.best_cost_history.size(); ++x) {
      if (r1.best_cost_history[x - 1]) {
        ASSERT_TRUE(r1.best_cost_history[x]);
        EXPECT_LE(*r1.best_cost_history[x], *r1.best_cost_history[x - 1]);
      }
    }
    if (!bound) {
      for (std::size_t x = 1; x < r1.best_fitness_history.size(); ++x)
        EXPECT_LE(r1.best_fitness_history[x], r1.best_fitness_history[x - 1]);
    }
  }
}

TEST(Run, StopsAfterStallWindow) {
  GenParams g;
  g.seed = 4;
  g.nurses = 10;
  auto inst = generate(g);
  auto cfg = combined_pux(1);
  const auto r = run(inst, cfg);
  const auto& h = r.best_fitness_history;
  ASSERT_GE(h.size(), 31u);
  // The last strict improvement is exactly 30 generations before the end.
  std::size_t last = 0;
  for (std::size_t x = 1; x < h.size(); ++x)
    if (h[x] < h[x - 1]) last = x;
  EXPECT_EQ(h.size() - 1 - last, 30u);
}

TEST(Run, ResultConsistentWithSchedule) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GenParams g;
    g.seed = seed;
    auto inst = generate(g);
    const auto r = run(inst, combined_pux(seed, true));
    ASSERT_TRUE(r.best_schedule.complete());
    if (r.feasible_found) {
      EXPECT_TRUE(is_feasible(r.best_schedule, inst));
      EXPECT_EQ(solution_cost(r.best_schedule, inst), *r.best_feasible_cost);
      EXPECT_DOUBLE_EQ(r.censored_cost(), static_cast<double>(*r.best_feasible_cost));
    } else {
      EXPECT_DOUBLE_EQ(r.censored_cost(), 100.0);
    }
  }
}

TEST(Run, SingleNurseOptimalAtStart) {
  GenParams g;
  g.nurses = 1;
  g.grade_mix = {1, 0, 0};
  g.special_probability = 0;
  auto inst = generate(g);
  const auto r = run(inst, combined_pux(1));
  const auto opt = solve_exact(inst);
  ASSERT_TRUE(opt.optimal_cost);
  ASSERT_TRUE(r.best_cost_history.front());
  EXPECT_EQ(*r.best_cost_history.front(), *opt.optimal_cost);
}

TEST(Run, ZeroDemandReachesSeparableMinimum) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GenParams g;
    g.seed = seed;
    g.nurses = 5;
    g.tightness = 0;
    auto inst = generate(g);
    long floor = 0;
    for (int i = 0; i < inst.nurse_count(); ++i) {
      int best = kMaxCost;
      for (int j : inst.feasible(i)) best = std::min(best, inst.cost(i, j));
      floor += best;
    }
    const auto r = run(inst, combined_pux(seed));
    EXPECT_TRUE(r.feasible_found);
    ASSERT_TRUE(r.best_cost_history.front());
    EXPECT_EQ(*r.best_feasible_cost, floor);
  }
}

TEST(Run, FindsOptimumOnSmallPlantedWard) {
  GenParams g = small_corpus(1).front();
  g.nurses = 6;
  g.sampled_per_size = 5;
  g.seed = 31;
  auto inst = generate(g);
  for (int i = 0; i < inst.nurse_count(); ++i) ASSERT_LE(inst.feasible(i).size(), 10u);
  const auto opt = brute::optimum(inst);
  ASSERT_TRUE(opt.cost);
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = run(inst, combined_pux(seed, true));
    if (r.best_feasible_cost) {
      EXPECT_GE(*r.best_feasible_cost, *opt.cost);
      hits += *r.best_feasible_cost == *opt.cost;
    }
  }
  EXPECT_GE(hits, 10);
}

TEST(Run, BoundNeverExceedsBestFeasible) {
  GenParams g;
  g.seed = 8;
  auto inst = generate(g);
  const auto r = run(inst, combined_pux(2, true));
  ASSERT_TRUE(r.feasible_found);
  EXPECT_EQ(r.best_cost_history.back(), r.best_feasible_cost);
}

TEST(RandomSearch, CountsSamples) {
  GenParams g;
  g.seed = 2;
  g.nurses = 8;
  auto inst = generate(g);
  auto cfg = combined_pux(3);
  const auto r = random_search(inst, cfg, 500);
  EXPECT_EQ(r.decodes, 500);
  const auto again = random_search(inst, cfg, 500);
  EXPECT_EQ(r.best_schedule, again.best_schedule);
}
