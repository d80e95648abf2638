#pragma once

// Generational GA over nurse permutations. Each genotype is decoded into a
// schedule and scored by preference cost plus a penalty per uncovered shift.
// Parents are drawn by linear rank roulette, children are produced by one
// crossover plus per-gene swap mutation, and the best 10% survive unchanged.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "nurse/crossover.hpp"
#include "nurse/decoders.hpp"
#include "nurse/model.hpp"
#include "nurse/rng.hpp"

namespace nurse {

inline constexpr double kCensoredCost = 100.0;

struct GaConfig {
  int population_size = 100;
  double mutation_rate = 0.015;
  double elite_fraction = 0.10;
  int stop_after_no_improvement = 30;
  double penalty_weight = 20.0;
  CrossoverKind crossover = CrossoverKind::order;
  double pux_p = 0.66;
  DecoderKind decoder = DecoderKind::combined;
  std::optional<ScoreWeights> weights;  // per-decoder defaults when unset
  OrderingKind ordering = OrderingKind::lexico;
  bool bound_active = false;
  std::uint64_t seed = 1;
  int max_generations = 10000;

  ScoreWeights resolved_weights(int grades) const {
    return weights ? *weights : ScoreWeights::defaults(decoder, grades);
  }

  int elite_count() const {
    // ceil with a guard so that 0.10 * 100 does not round up to 11
    const double raw = elite_fraction * population_size;
    return std::min(population_size, static_cast<int>(std::ceil(raw - 1e-9)));
  }

  void validate() const {
    if (population_size < 2) throw ConfigInvalid("population size must be at least 2");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(mutation_rate) || !prob(elite_fraction) || !prob(pux_p))
      throw ConfigInvalid("probabilities must lie in [0, 1]");
    if (elite_count() >= population_size) throw ConfigInvalid("elite fraction leaves no room for children");
    if (stop_after_no_improvement < 1) throw ConfigInvalid("stopping window must be positive");
    if (!(penalty_weight >= 0)) throw ConfigInvalid("penalty weight must be nonnegative");
    if (max_generations < 0) throw ConfigInvalid("generation cap must be nonnegative");
    if (weights) weights->validate(static_cast<int>(weights->grade.size()));
  }
};

struct Individual {
  Genotype genotype;
  double fitness = std::numeric_limits<double>::infinity();
  bool feasible = false;
  long cost = 0;
  int born = 0;                         // generation of creation
  std::optional<long> evaluated_under;  // C* in force when last decoded
};

inline Individual newborn(Genotype genes, int generation) {
  Individual ind;
  ind.genotype = std::move(genes);
  ind.born = generation;
  return ind;
}

struct RunResult {
  bool feasible_found = false;
  std::optional<long> best_feasible_cost;
  double best_fitness = std::numeric_limits<double>::infinity();
  Schedule best_schedule;  // best feasible if any, else best fitness
  int generations = 0;
  long decodes = 0;
  long bound_fallbacks = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> best_fitness_history;         // per generation, best ever
  std::vector<std::optional<long>> best_cost_history;  // per generation, best feasible ever

  /// Best feasible cost, or the censor value when none was found.
  double censored_cost(double censor = kCensoredCost) const {
    return best_feasible_cost ? static_cast<double>(*best_feasible_cost) : censor;
  }
};

namespace detail {
inline constexpr std::uint64_t kInitSalt = 0x494e4954ULL;
inline constexpr std::uint64_t kEvolveSalt = 0x45564f4cULL;
}  // namespace detail

/// Generation 0: `size` uniform random permutations drawn from a stream that
/// depends only on the seed, so configurations sharing a seed share it.
inline std::vector<Genotype> initial_population(int nurses, int size, std::uint64_t seed) {
  auto rng = make_stream({seed, detail::kInitSalt});
  std::vector<Genotype> out(size, Genotype(nurses));
  for (auto& g : out) {
    std::iota(g.begin(), g.end(), 0);
    shuffle(std::span<int>(g), rng);
  }
  return out;
}

/// Rank-roulette draw over a population sorted best-first: rank r (0 = best)
/// has weight N - r.
inline std::size_t select_rank(std::size_t population, Rng& rng) {
  const std::uint64_t n = population;
  std::uint64_t ticket = uniform_below(rng, n * (n + 1) / 2);
  for (std::size_t r = 0; r < population; ++r) {
    const std::uint64_t w = n - r;
    if (ticket < w) return r;
    ticket -= w;
  }
  return population - 1;
}

inline const Individual& select_parent(std::span<const Individual> ranked, Rng& rng) {
  return ranked[select_rank(ranked.size(), rng)];
}

/// Best-first order: fitness, then older first, then position.
inline void rank_population(std::vector<Individual>& pop) {
  std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return a.born < b.born;
  });
}

/// The `elites` best of `old` followed by the first children, keeping the
/// population size.
inline std::vector<Individual> replace_generation(std::vector<Individual> old, std::vector<Individual> children,
                                                  int elites) {
  const auto size = old.size();
  rank_population(old);
  old.resize(std::min<std::size_t>(elites, size));
  for (auto& c : children) {
    if (old.size() == size) break;
    old.push_back(std::move(c));
  }
  return old;
}

class GeneticAlgorithm {
 public:
  GeneticAlgorithm(const Instance& inst, GaConfig config)
      : inst_(&inst), config_((config.validate(), std::move(config))),
        decoder_(inst, config_.decoder, config_.resolved_weights(inst.grades()),
                 SearchOrdering::build(config_.ordering, inst, config_.seed)) {}

  const Decoder& decoder() const { return decoder_; }

  RunResult run() {
    const auto start = std::chrono::steady_clock::now();
    result_ = RunResult{};
    result_.seed = config_.seed;
    bound_ = SimpleBound{config_.bound_active, std::nullopt};
    auto rng = make_stream({config_.seed, detail::kEvolveSalt});

    std::vector<Individual> population;
    for (auto& g : initial_population(inst_->nurse_count(), config_.population_size, config_.seed))
      population.push_back(newborn(std::move(g), 0));
    for (auto& ind : population) evaluate(ind);
    rank_population(population);
    record_generation();

    const int elites = config_.elite_count();
    const int child_count = config_.population_size - elites;
    double best = result_.best_fitness;
    int stale = 0;
    int generation = 0;
    while (stale < config_.stop_after_no_improvement && generation < config_.max_generations) {
      tighten_bound();
      std::vector<Individual> children;
      children.reserve(child_count);
      for (int c = 0; c < child_count; ++c) {
        const auto& pa = select_parent(population, rng);
        const auto& pb = select_parent(population, rng);
        auto genes = crossover(config_.crossover, pa.genotype, pb.genotype, config_.pux_p, rng);
        mutate_swap(genes, config_.mutation_rate, rng);
        children.push_back(newborn(std::move(genes), generation + 1));
      }
      ++generation;
      for (std::size_t e = 0; e < population.size(); ++e) {
        auto& ind = population[e];
        if (ind.evaluated_under == bound_.best_feasible_cost) continue;
        // stale caches: elites are re-decoded under the new C*, the rest are
        // about to be replaced and must not outrank them
        if (e < static_cast<std::size_t>(elites))
          evaluate(ind);
        else
          ind.fitness = std::numeric_limits<double>::infinity();
      }
      for (auto& c : children) evaluate(c);
      population = replace_generation(std::move(population), std::move(children), elites);
      rank_population(population);
      record_generation();

      if (result_.best_fitness < best) {
        best = result_.best_fitness;
        stale = 0;
      } else {
        ++stale;
      }
    }

    result_.generations = generation;
    result_.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(result_);
  }

  /// Decoder-only baseline: decode `samples` random permutations, no evolution.
  RunResult random_search(long samples) {
    const auto start = std::chrono::steady_clock::now();
    result_ = RunResult{};
    result_.seed = config_.seed;
    bound_ = SimpleBound{};
    auto rng = make_stream({config_.seed, detail::kInitSalt});
    auto ind = newborn(Genotype(inst_->nurse_count()), 0);
    for (long s = 0; s < samples; ++s) {
      std::iota(ind.genotype.begin(), ind.genotype.end(), 0);
      shuffle(std::span<int>(ind.genotype), rng);
      evaluate(ind);
    }
    record_generation();
    result_.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(result_);
  }

 private:
  void evaluate(Individual& ind) {
    auto dec = decoder_.decode(ind.genotype, bound_);
    ++result_.decodes;
    result_.bound_fallbacks += dec.bound_fallbacks;
    ind.cost = dec.cost;
    ind.feasible = dec.feasible();
    ind.fitness = dec.fitness(config_.penalty_weight);
    ind.evaluated_under = bound_.best_feasible_cost;
    if (ind.feasible && (!result_.best_feasible_cost || dec.cost < *result_.best_feasible_cost)) {
      result_.feasible_found = true;
      result_.best_feasible_cost = dec.cost;
      result_.best_schedule = dec.schedule;
    }
    if (ind.fitness < result_.best_fitness) {
      result_.best_fitness = ind.fitness;
      if (!result_.feasible_found) result_.best_schedule = dec.schedule;
    }
  }

  // C* changes between generations only, so every decode within a
  // generation sees the same bound.
  void tighten_bound() {
    if (bound_.active) bound_.best_feasible_cost = result_.best_feasible_cost;
  }

  void record_generation() {
    result_.best_fitness_history.push_back(result_.best_fitness);
    result_.best_cost_history.push_back(result_.best_feasible_cost);
  }

  const Instance* inst_;
  GaConfig config_;
  Decoder decoder_;
  SimpleBound bound_;
  RunResult result_;
};

inline RunResult run(const Instance& inst, const GaConfig& config) { return GeneticAlgorithm(inst, config).run(); }

inline RunResult random_search(const Instance& inst, const GaConfig& config, long samples = 10000) {
  return GeneticAlgorithm(inst, config).random_search(samples);
}

}  // namespace nurse
