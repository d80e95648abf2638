#pragma once

// Synthetic ward generator. In planted mode a random schedule is drawn first
// and the demand is thinned from its qualified cover, so the planted schedule
// is feasible by construction. In random mode demand is drawn per (slot,
// grade) and clamped by the counting bound (qualified nurses that could work
// the slot), scaled by the tightness.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nurse/decoders.hpp"
#include "nurse/errors.hpp"
#include "nurse/model.hpp"
#include "nurse/rng.hpp"

namespace nurse {

struct Contract {
  int days = 0;
  int nights = 0;
  double weight = 1.0;
};

enum class UniversePolicy { all_subsets, sampled };
enum class DemandMode { planted, random };

// uniform: independent integer draws per pattern, cheaper on the preferred side.
// requests: a flat penalty for the non-preferred side plus weighted day-off
// requests, so many patterns share a cost.
enum class CostModel { uniform, requests };

struct GenParams {
  std::string name = "synthetic";
  int nurses = 30;
  int grades = 3;
  std::vector<double> grade_mix{0.25, 0.35, 0.40};
  std::vector<Contract> contracts{{5, 4, 0.45}, {4, 3, 0.25}, {3, 3, 0.15}, {2, 2, 0.15}};
  double special_probability = 0.1;
  std::vector<Contract> special_splits{{3, 1, 1.0}, {2, 2, 1.0}};
  UniversePolicy universe = UniversePolicy::all_subsets;
  int sampled_per_size = 6;     // sampled policy: patterns per (side, shift count)
  int combined_per_split = 12;  // combined patterns per special split; 0 = all
  double day_share = 0.75;      // planted side choice for standard nurses
  CostModel cost_model = CostModel::requests;
  double zero_cost_fraction = 0.08;    // uniform model
  double preferred_match = 0.95;       // requests model: planted side is the preferred side
  int off_side_min = 20;
  int off_side_max = 60;
  int max_requests = 3;
  int max_request_weight = 10;
  double request_honoured = 0.8;       // request falls on a day the planted pattern leaves free
  double blocked_day_probability = 0.3;
  double unavailable_fraction = 0.05;
  DemandMode demand = DemandMode::planted;
  double tightness = 0.9;
  bool discount_planted = true;
  std::uint64_t seed = 1;

  void validate() const {
    if (nurses < 1) throw ConfigInvalid("need at least one nurse");
    if (grades < 1) throw ConfigInvalid("need at least one grade");
    if (static_cast<int>(grade_mix.size()) != grades) throw ConfigInvalid("grade mix needs one share per grade");
    auto weights_ok = [](const std::vector<double>& w) {
      return !w.empty() && std::all_of(w.begin(), w.end(), [](double x) { return x >= 0; }) &&
             std::accumulate(w.begin(), w.end(), 0.0) > 0;
    };
    if (!weights_ok(grade_mix)) throw ConfigInvalid("grade mix must be nonnegative with positive sum");
    auto contract_ok = [](const Contract& c) {
      return c.days >= 0 && c.days <= kDays && c.nights >= 0 && c.nights <= kDays && c.weight >= 0;
    };
    if (contracts.empty() || !std::all_of(contracts.begin(), contracts.end(), contract_ok))
      throw ConfigInvalid("contract menu must be nonempty with shift counts in 0..7");
    for (const auto& c : contracts)
      if (c.days == 0 && c.nights == 0) throw ConfigInvalid("a contract must work some shifts");
    if (!(special_probability >= 0 && special_probability <= 1))
      throw ConfigInvalid("special probability must lie in [0, 1]");
    if (special_probability > 0) {
      if (special_splits.empty()) throw ConfigInvalid("special nurses need at least one combined split");
      for (const auto& c : special_splits)
        if (!contract_ok(c) || c.days < 1 || c.nights < 1 || c.days + c.nights > kDays)
          throw ConfigInvalid("combined splits need 1+ days, 1+ nights, at most 7 shifts");
    }
    if (sampled_per_size < 1 || combined_per_split < 0) throw ConfigInvalid("pattern sample sizes must be positive");
    auto prob = [](double p) { return p >= 0 && p <= 1; };
    if (!prob(day_share) || !prob(zero_cost_fraction) || !prob(unavailable_fraction) || !prob(tightness) ||
        !prob(preferred_match) || !prob(request_honoured) || !prob(blocked_day_probability))
      throw ConfigInvalid("fractions and tightness must lie in [0, 1]");
    if (off_side_min < 0 || off_side_max < off_side_min || off_side_max > kMaxCost || max_requests < 0 ||
        max_request_weight < 1 || max_request_weight > kMaxCost)
      throw ConfigInvalid("cost model bounds must lie in [0, 100]");
  }
};

struct Generated {
  Instance instance;
  std::optional<Schedule> planted;
};

namespace detail {

inline std::size_t draw_weighted(Rng& rng, const std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double u = uniform_unit(rng) * total;
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (u < w[x]) return x;
    u -= w[x];
  }
  return w.size() - 1;
}

inline std::vector<std::uint16_t> subsets_of_week(int count) {
  std::vector<std::uint16_t> out;
  for (unsigned m = 1; m < (1u << kDays); ++m)
    if (std::popcount(m) == count) out.push_back(static_cast<std::uint16_t>(m));
  std::sort(out.begin(), out.end(), sunday_first_less);
  return out;
}

// Days of the week touched by a pattern, either shift.
inline unsigned days_of(const ShiftPattern& pattern) {
  return (pattern.mask() | pattern.mask() >> kDays) & ShiftPattern::kDayMask;
}

inline std::vector<std::uint16_t> sample(std::vector<std::uint16_t> pool, int k, Rng& rng) {
  if (k <= 0 || static_cast<std::size_t>(k) >= pool.size()) return pool;
  shuffle(std::span<std::uint16_t>(pool), rng);
  pool.resize(k);
  std::sort(pool.begin(), pool.end(), sunday_first_less);
  return pool;
}

}  // namespace detail

inline Generated generate_with_plant(const GenParams& params) {
  params.validate();
  auto rng = make_stream({params.seed, 0x47454eULL});
  const int n = params.nurses;
  const int p = params.grades;

  // Nurses and contracts.
  std::vector<Nurse> nurses(n);
  std::vector<double> contract_w, split_w;
  for (const auto& c : params.contracts) contract_w.push_back(c.weight);
  for (const auto& c : params.special_splits) split_w.push_back(c.weight);
  for (auto& nurse : nurses) {
    nurse.grade = 1 + static_cast<int>(detail::draw_weighted(rng, params.grade_mix));
    if (params.special_probability > 0 && bernoulli(rng, params.special_probability)) {
      const auto& c = params.special_splits[detail::draw_weighted(rng, split_w)];
      nurse.days = c.days;
      nurse.nights = c.nights;
      nurse.both = c.days + c.nights;
    } else {
      const auto& c = params.contracts[detail::draw_weighted(rng, contract_w)];
      nurse.days = c.days;
      nurse.nights = c.nights;
    }
  }

  // Pattern universe: day patterns, then night patterns, then combined.
  std::set<int> day_sizes, night_sizes;
  std::set<std::pair<int, int>> splits;
  for (const auto& nurse : nurses) {
    if (nurse.both) {
      splits.insert({nurse.days, nurse.nights});
    } else {
      if (nurse.days > 0) day_sizes.insert(nurse.days);
      if (nurse.nights > 0) night_sizes.insert(nurse.nights);
    }
  }
  const int per_size = params.universe == UniversePolicy::sampled ? params.sampled_per_size : 0;
  std::vector<ShiftPattern> patterns;
  for (int d : day_sizes)
    for (auto m : detail::sample(detail::subsets_of_week(d), per_size, rng)) patterns.emplace_back(m);
  for (int c : night_sizes)
    for (auto m : detail::sample(detail::subsets_of_week(c), per_size, rng))
      patterns.emplace_back(static_cast<std::uint16_t>(m << kDays));
  for (auto [d, c] : splits) {
    std::vector<std::uint16_t> pool;
    for (auto dm : detail::subsets_of_week(d))
      for (auto nm : detail::subsets_of_week(c))
        if ((dm & nm) == 0) pool.push_back(static_cast<std::uint16_t>(dm | (nm << kDays)));
    if (pool.empty()) throw ConfigInvalid("combined split admits no pattern");
    auto chosen = detail::sample(std::move(pool), params.combined_per_split, rng);
    std::sort(chosen.begin(), chosen.end(), [](auto a, auto b) {
      if ((a & ShiftPattern::kDayMask) != (b & ShiftPattern::kDayMask)) return detail::sunday_first_less(a, b);
      return a < b;
    });
    for (auto m : chosen) patterns.emplace_back(m);
  }
  const int m = static_cast<int>(patterns.size());

  // Contract-feasible sets, planted choice, availability and costs.
  std::vector<int> planted(n, kUnassigned);
  for (int i = 0; i < n; ++i) {
    auto& nurse = nurses[i];
    nurse.costs.assign(m, 0);
    nurse.unavailable.assign(m, false);
    const auto contract = feasible_patterns(nurse, patterns);  // throws if empty

    std::vector<int> day_side, night_side;
    for (int j : contract) (patterns[j].kind() == PatternKind::night ? night_side : day_side).push_back(j);
    const bool plant_day = night_side.empty() || (!day_side.empty() && bernoulli(rng, params.day_share));
    const auto& pool = plant_day ? day_side : night_side;
    planted[i] = pool[uniform_below(rng, pool.size())];

    if (params.cost_model == CostModel::uniform) {
      // One side is preferred: cheaper draws there. Ties resolve to day.
      const bool likes_day = bernoulli(rng, 0.6);
      for (int j : contract) {
        if (j != planted[i] && bernoulli(rng, params.unavailable_fraction)) {
          nurse.unavailable[j] = true;
          continue;
        }
        if (bernoulli(rng, params.zero_cost_fraction)) continue;
        const bool preferred_side = (patterns[j].kind() == PatternKind::night) != likes_day ||
                                    patterns[j].kind() == PatternKind::combined;
        const int lo = preferred_side ? 1 : 20;
        const int hi = preferred_side ? 60 : kMaxCost;
        nurse.costs[j] = lo + static_cast<int>(uniform_below(rng, hi - lo + 1));
      }
      if (params.discount_planted)
        nurse.costs[planted[i]] = bernoulli(rng, 0.7) ? 0 : 1 + static_cast<int>(uniform_below(rng, 5));
    } else {
      const auto planted_days = detail::days_of(patterns[planted[i]]);
      const bool planted_night = patterns[planted[i]].kind() == PatternKind::night;
      const bool likes_night = bernoulli(rng, params.preferred_match) ? planted_night : !planted_night;
      const int off_side = params.off_side_min +
                           static_cast<int>(uniform_below(rng, params.off_side_max - params.off_side_min + 1));
      std::array<int, kDays> request{};
      const int requests = static_cast<int>(uniform_below(rng, params.max_requests + 1));
      for (int r = 0; r < requests; ++r) {
        const bool honoured = planted_days != 0x7F && bernoulli(rng, params.request_honoured);
        int day;
        do day = static_cast<int>(uniform_below(rng, kDays));
        while (honoured && (planted_days >> day & 1));
        request[day] += 1 + static_cast<int>(uniform_below(rng, params.max_request_weight));
      }
      int blocked = -1;
      if (planted_days != 0x7F && bernoulli(rng, params.blocked_day_probability)) {
        do blocked = static_cast<int>(uniform_below(rng, kDays));
        while (planted_days >> blocked & 1);
      }
      for (int j : contract) {
        const auto days = detail::days_of(patterns[j]);
        if (j != planted[i] && ((blocked >= 0 && (days >> blocked & 1)) ||
                                bernoulli(rng, params.unavailable_fraction))) {
          nurse.unavailable[j] = true;
          continue;
        }
        int c = patterns[j].kind() == PatternKind::combined ||
                        (patterns[j].kind() == PatternKind::night) == likes_night
                    ? 0
                    : off_side;
        for (int d = 0; d < kDays; ++d)
          if (days >> d & 1) c += request[d];
        nurse.costs[j] = std::min(c, kMaxCost);
      }
    }

    double sum[2] = {0, 0};
    int count[2] = {0, 0};
    for (int j : contract) {
      if (nurse.unavailable[j]) continue;
      const int side = patterns[j].kind() == PatternKind::night ? 1 : 0;
      sum[side] += nurse.costs[j];
      ++count[side];
    }
    if (count[0] && count[1])
      nurse.preference = sum[1] / count[1] < sum[0] / count[0] ? Side::night : Side::day;
    else
      nurse.preference = count[1] ? Side::night : Side::day;
  }

  // Demand.
  std::vector<int> demand(static_cast<std::size_t>(kSlots) * p, 0);
  if (params.demand == DemandMode::planted) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < kSlots; ++k) {
        if (!patterns[planted[i]].covers(k)) continue;
        if (!bernoulli(rng, params.tightness)) continue;
        for (int s = nurses[i].grade - 1; s < p; ++s) ++demand[k * p + s];
      }
  } else {
    for (int k = 0; k < kSlots; ++k) {
      int floor_prev = 0;
      for (int s = 0; s < p; ++s) {
        int reach = 0;
        for (int i = 0; i < n; ++i) {
          if (nurses[i].grade - 1 > s) continue;
          for (int j = 0; j < m; ++j)
            if (!nurses[i].unavailable[j] && patterns[j].covers(k) && contract_allows(nurses[i], patterns[j])) {
              ++reach;
              break;
            }
        }
        const int cap = static_cast<int>(params.tightness * reach);
        const int r = std::max(floor_prev, static_cast<int>(uniform_below(rng, cap + 1)));
        demand[k * p + s] = std::min(r, cap);
        floor_prev = demand[k * p + s];
      }
    }
  }

  Instance inst(params.name, p, std::move(demand), std::move(patterns), std::move(nurses));
  std::optional<Schedule> plant;
  if (params.demand == DemandMode::planted) plant = Schedule{planted};
  return {std::move(inst), std::move(plant)};
}

inline Instance generate(const GenParams& params) { return generate_with_plant(params).instance; }

}  // namespace nurse
