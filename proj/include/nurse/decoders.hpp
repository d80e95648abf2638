#pragma once

// Schedule builders: turn a permutation of nurses into a complete schedule by
// assigning each nurse, in permutation order, one pattern from its feasible
// set. Three rules are provided:
//
//   cover         pick the slots with the largest undercover, then the
//                 pattern covering exactly those slots
//   contribution  highest score, where a pattern earns w_s for every
//                 still-needed (slot, grade) it covers
//   combined      as contribution, but each covered slot earns w_s times the
//                 number of uncovered shifts there
//
// Score of pattern j for nurse i:
//   s_ij = w_p (100 - p_ij) + sum_s w_s q_is sum_k a_jk d_ks

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nurse/errors.hpp"
#include "nurse/model.hpp"
#include "nurse/rng.hpp"

namespace nurse {

enum class DecoderKind { cover, contribution, combined };
enum class OrderingKind { lexico, rand_order, biased, rand_cost, cheapest };

inline const char* to_string(DecoderKind k) {
  switch (k) {
    case DecoderKind::cover: return "cover";
    case DecoderKind::contribution: return "contribution";
    case DecoderKind::combined: return "combined";
  }
  return "?";
}

inline const char* to_string(OrderingKind k) {
  switch (k) {
    case OrderingKind::lexico: return "lexico";
    case OrderingKind::rand_order: return "rand_order";
    case OrderingKind::biased: return "biased";
    case OrderingKind::rand_cost: return "rand_cost";
    case OrderingKind::cheapest: return "cheapest";
  }
  return "?";
}

inline DecoderKind parse_decoder(std::string_view s) {
  if (s == "cover") return DecoderKind::cover;
  if (s == "contribution") return DecoderKind::contribution;
  if (s == "combined") return DecoderKind::combined;
  throw ConfigInvalid("unknown decoder '" + std::string(s) + "'");
}

inline OrderingKind parse_ordering(std::string_view s) {
  if (s == "lexico") return OrderingKind::lexico;
  if (s == "rand_order") return OrderingKind::rand_order;
  if (s == "biased") return OrderingKind::biased;
  if (s == "rand_cost") return OrderingKind::rand_cost;
  if (s == "cheapest") return OrderingKind::cheapest;
  throw ConfigInvalid("unknown search ordering '" + std::string(s) + "'");
}

struct ScoreWeights {
  std::vector<double> grade{8.0, 2.0, 1.0};  // w_s, one per grade
  double preference = 1.0;                   // w_p

  /// 8:2:1 grade weights (trailing grades beyond three weigh 1), w_p = 1 for
  /// contribution and 0.5 for combined.
  static ScoreWeights defaults(DecoderKind kind, int grades = 3) {
    ScoreWeights w;
    w.grade.resize(std::max(grades, 1), 1.0);
    w.preference = kind == DecoderKind::combined ? 0.5 : 1.0;
    return w;
  }

  void validate(int grades) const {
    if (static_cast<int>(grade.size()) < grades)
      throw ConfigInvalid("need one grade weight per grade");
    if (!(preference >= 0) || std::any_of(grade.begin(), grade.end(), [](double w) { return !(w >= 0); }))
      throw ConfigInvalid("score weights must be nonnegative");
  }
};

/// C*: once a feasible schedule of cost C* is known, no nurse may be given a
/// pattern costing more than C*.
struct SimpleBound {
  bool active = false;
  std::optional<long> best_feasible_cost;

  bool prunes(int cost) const { return active && best_feasible_cost && cost > *best_feasible_cost; }
};

namespace detail {
inline constexpr std::uint64_t kOrderingSalt = 0x4f52444552ULL;

// Sunday-first order on slot sets: compare the sorted slot lists
// lexicographically, e.g. {0,1,2} < {0,1,3} < {1,2,3}.
inline bool sunday_first_less(std::uint16_t a, std::uint16_t b) {
  while (a && b) {
    const int ka = std::countr_zero(a), kb = std::countr_zero(b);
    if (ka != kb) return ka < kb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}
}  // namespace detail

/// Rotate `xs` so that element `offset` comes first (circular list).
inline std::vector<int> rotate_circular(std::vector<int> xs, std::size_t offset) {
  if (!xs.empty()) std::rotate(xs.begin(), xs.begin() + (offset % xs.size()), xs.end());
  return xs;
}

/// Visit order over F(i) for one nurse. Randomised kinds draw from `rng`.
inline std::vector<int> build_ordering(OrderingKind kind, const Instance& inst, int i, Rng& rng) {
  std::vector<int> order(inst.feasible(i).begin(), inst.feasible(i).end());
  auto by_cost = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return inst.cost(i, a) < inst.cost(i, b); });
  };
  switch (kind) {
    case OrderingKind::lexico:
      break;
    case OrderingKind::cheapest:
      by_cost();
      break;
    case OrderingKind::rand_cost:
      by_cost();
      order = rotate_circular(std::move(order), uniform_below(rng, order.size()));
      break;
    case OrderingKind::rand_order:
    case OrderingKind::biased: {
      std::vector<int> days, nights;
      for (int j : order)
        (inst.pattern(j).kind() == PatternKind::night ? nights : days).push_back(j);
      shuffle(std::span<int>(days), rng);
      shuffle(std::span<int>(nights), rng);
      const bool day_first = kind == OrderingKind::rand_order || bernoulli(rng, 0.75);
      order.clear();
      auto& first = day_first ? days : nights;
      auto& second = day_first ? nights : days;
      order.insert(order.end(), first.begin(), first.end());
      order.insert(order.end(), second.begin(), second.end());
      break;
    }
  }
  return order;
}

/// Per-nurse visit orders, drawn once per run and reused by every decode.
struct SearchOrdering {
  OrderingKind kind = OrderingKind::lexico;
  std::vector<std::vector<int>> visit;

  /// Draws are keyed by (seed, nurse) so the same run seed reproduces them.
  static SearchOrdering build(OrderingKind kind, const Instance& inst, std::uint64_t seed) {
    SearchOrdering o{kind, {}};
    o.visit.reserve(inst.nurse_count());
    for (int i = 0; i < inst.nurse_count(); ++i) {
      auto rng = make_stream({seed, detail::kOrderingSalt, static_cast<std::uint64_t>(i)});
      o.visit.push_back(build_ordering(kind, inst, i, rng));
    }
    return o;
  }
};

/// s_ij for an explicit need matrix `need` (slot-major, 14 x grades).
inline double pattern_score(const Instance& inst, int i, int j, std::span<const double> need,
                            const ScoreWeights& w) {
  const auto& nurse = inst.nurse(i);
  const int p = inst.grades();
  double cover = 0.0;
  for (int s = 0; s < p; ++s) {
    if (!nurse.qualifies(s)) continue;
    double hits = 0.0;
    for (int k = 0; k < kSlots; ++k)
      if (inst.pattern(j).covers(k)) hits += need[k * p + s];
    cover += w.grade[s] * hits;
  }
  return w.preference * (kMaxCost - inst.cost(i, j)) + cover;
}

/// Need matrix d_ks from the current undercover: 0/1 indicators for
/// contribution, raw counts for combined.
inline std::vector<double> need_matrix(const CoverageState& state, DecoderKind kind) {
  auto u = state.undercover_matrix();
  std::vector<double> d(u.size());
  for (std::size_t x = 0; x < u.size(); ++x)
    d[x] = kind == DecoderKind::contribution ? (u[x] > 0 ? 1.0 : 0.0) : static_cast<double>(u[x]);
  return d;
}

namespace detail {

// Effective undercover for a nurse of tier `g` over the slots in `slots`:
// the first tier at or below the nurse's own that still has undercover
// somewhere in `slots` is the only one counted.
inline std::array<int, kSlots> effective_undercover(const CoverageState& state, int g,
                                                    std::uint16_t slots) {
  std::array<int, kSlots> out{};
  const int p = state.instance().grades();
  for (int t = g; t < p; ++t) {
    bool any = false;
    for (int k = 0; k < kSlots; ++k) {
      if (!((slots >> k) & 1u)) continue;
      out[k] = state.undercover(k, t);
      any = any || out[k] > 0;
    }
    if (any) return out;
  }
  out.fill(0);
  return out;
}

// The `count` slots of `side` with the largest value, ties Sunday-first.
inline std::uint16_t top_slots(const std::array<int, kSlots>& value, std::uint16_t side, int count) {
  std::vector<int> slots;
  for (int k = 0; k < kSlots; ++k)
    if ((side >> k) & 1u) slots.push_back(k);
  std::stable_sort(slots.begin(), slots.end(), [&](int a, int b) { return value[a] > value[b]; });
  std::uint16_t mask = 0;
  for (int x = 0; x < count && x < static_cast<int>(slots.size()); ++x)
    mask |= static_cast<std::uint16_t>(1u << slots[x]);
  return mask;
}

}  // namespace detail

/// Cover rule for nurse i. `candidates` is the (possibly bound-filtered)
/// subset of F(i) to choose from; it must be nonempty.
inline int cover_select(const Instance& inst, int i, const CoverageState& state,
                        std::span<const int> candidates) {
  const auto& nurse = inst.nurse(i);
  const int g = nurse.tier();
  constexpr auto kDay = ShiftPattern::kDayMask;
  constexpr auto kNight = ShiftPattern::kNightMask;

  std::uint16_t target = 0;
  std::optional<PatternKind> want;
  if (nurse.worker_type() == WorkerType::special) {
    target = detail::top_slots(detail::effective_undercover(state, g, kDay), kDay, nurse.days) |
             detail::top_slots(detail::effective_undercover(state, g, kNight), kNight, nurse.nights);
  } else {
    bool has_day = false, has_night = false;
    for (int j : candidates) {
      const auto kind = inst.pattern(j).kind();
      has_day = has_day || kind == PatternKind::day;
      has_night = has_night || kind == PatternKind::night;
    }
    Side side = nurse.preference;
    if (has_day && has_night) {
      const auto all = detail::effective_undercover(state, g, kDay | kNight);
      const int best_day = *std::max_element(all.begin(), all.begin() + kDays);
      const int best_night = *std::max_element(all.begin() + kDays, all.end());
      if (best_day != best_night) side = best_day > best_night ? Side::day : Side::night;
    } else {
      side = has_day ? Side::day : Side::night;
    }
    const auto side_mask = side == Side::day ? kDay : kNight;
    const int count = side == Side::day ? nurse.days : nurse.nights;
    target = detail::top_slots(detail::effective_undercover(state, g, side_mask), side_mask, count);
    want = side == Side::day ? PatternKind::day : PatternKind::night;
  }

  // Exact match, else the pattern of the chosen kind with the largest
  // overlap, ties Sunday-first.
  int best = -1;
  int best_overlap = -1;
  for (int j : candidates) {
    const auto& pat = inst.pattern(j);
    if (pat.mask() == target) return j;
    if (want && pat.kind() != *want) continue;
    const int overlap = std::popcount(static_cast<unsigned>(pat.mask() & target));
    if (overlap > best_overlap ||
        (overlap == best_overlap && detail::sunday_first_less(pat.mask(), inst.pattern(best).mask()))) {
      best = j;
      best_overlap = overlap;
    }
  }
  return best >= 0 ? best : candidates.front();
}

struct DecodeResult {
  Schedule schedule;
  long cost = 0;
  long undercover = 0;
  int bound_fallbacks = 0;  // nurses for which the bound pruned all of F(i)

  bool feasible() const { return undercover == 0; }
  double fitness(double w_demand) const { return nurse::fitness(cost, undercover, w_demand); }
};

/// Reusable decoder bound to one instance, rule, weight set and ordering draw.
class Decoder {
 public:
  Decoder(const Instance& inst, DecoderKind kind, ScoreWeights weights, SearchOrdering ordering)
      : inst_(&inst), kind_(kind), weights_(std::move(weights)), ordering_(std::move(ordering)) {
    weights_.validate(inst.grades());
    if (ordering_.visit.size() != static_cast<std::size_t>(inst.nurse_count()))
      throw ConfigInvalid("search ordering does not match the instance");
    visit_.resize(inst.nurse_count());
    for (int i = 0; i < inst.nurse_count(); ++i)
      for (int j : ordering_.visit[i])
        visit_[i].push_back({j, inst.pattern(j).mask(), inst.cost(i, j)});
  }

  DecoderKind kind() const { return kind_; }
  const ScoreWeights& weights() const { return weights_; }
  const SearchOrdering& ordering() const { return ordering_; }
  const Instance& instance() const { return *inst_; }

  DecodeResult decode(std::span<const int> permutation, const SimpleBound& bound = {}) const {
    const int n = inst_->nurse_count();
    if (permutation.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("permutation length does not match nurse count");
    DecodeResult out{Schedule::empty(n), 0, 0, 0};
    CoverageState state(*inst_);
    for (int i : permutation) {
      if (i < 0 || i >= n || out.schedule.assignment[i] != kUnassigned)
        throw std::invalid_argument("decode input is not a permutation");
      const int j = select(i, state, bound, out.bound_fallbacks);
      out.schedule.assignment[i] = j;
      out.cost += inst_->cost(i, j);
      state.add(i, j);
    }
    out.undercover = state.total_undercover();
    return out;
  }

  /// Pattern chosen for nurse i given the current coverage.
  int select(int i, const CoverageState& state, const SimpleBound& bound, int& fallbacks) const {
    if (kind_ == DecoderKind::cover) return select_cover(i, state, bound, fallbacks);
    return select_greedy(i, state, bound, fallbacks);
  }

 private:
  struct Option {
    int pattern;
    std::uint16_t mask;
    int cost;
  };

  int select_cover(int i, const CoverageState& state, const SimpleBound& bound, int& fallbacks) const {
    auto feasible = inst_->feasible(i);
    if (!bound.active || !bound.best_feasible_cost) return cover_select(*inst_, i, state, feasible);
    std::vector<int> allowed;
    for (int j : feasible)
      if (!bound.prunes(inst_->cost(i, j))) allowed.push_back(j);
    if (allowed.empty()) {
      ++fallbacks;
      return cover_select(*inst_, i, state, feasible);
    }
    return cover_select(*inst_, i, state, allowed);
  }

  int select_greedy(int i, const CoverageState& state, const SimpleBound& bound, int& fallbacks) const {
    const int p = inst_->grades();
    const int g = inst_->nurse(i).tier();
    const auto under = state.undercover_matrix();
    std::array<double, kSlots> slot_value{};
    for (int k = 0; k < kSlots; ++k) {
      double v = 0.0;
      for (int s = g; s < p; ++s) {
        const int u = under[k * p + s];
        if (u > 0) v += weights_.grade[s] * (kind_ == DecoderKind::contribution ? 1.0 : u);
      }
      slot_value[k] = v;
    }
    auto best_of = [&](bool use_bound) {
      int best = -1;
      double best_score = 0.0;
      for (const auto& opt : visit_[i]) {
        if (use_bound && bound.prunes(opt.cost)) continue;
        double score = weights_.preference * (kMaxCost - opt.cost);
        unsigned m = opt.mask;
        while (m) {
          score += slot_value[std::countr_zero(m)];
          m &= m - 1;
        }
        if (best < 0 || score > best_score) {
          best = opt.pattern;
          best_score = score;
        }
      }
      return best;
    };
    int j = best_of(true);
    if (j < 0) {
      ++fallbacks;
      j = best_of(false);
    }
    return j;
  }

  const Instance* inst_;
  DecoderKind kind_;
  ScoreWeights weights_;
  SearchOrdering ordering_;
  std::vector<std::vector<Option>> visit_;
};

}  // namespace nurse
