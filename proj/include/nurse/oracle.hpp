#pragma once

// Exact reference solver and schedule auditor for small instances.
//
// solve_exact is a depth-first branch-and-bound over nurses in index order.
// Each nurse branches over F(i) cheapest first. A node is pruned when
//   - its cost plus the sum of per-nurse minimum costs of the nurses still
//     to be placed cannot beat the incumbent, or
//   - some (slot, grade) residual demand exceeds the number of remaining
//     qualified nurses that have any feasible pattern covering that slot.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nurse/model.hpp"

namespace nurse {

enum class OracleStatus { optimal, infeasible, limit_exceeded };

inline const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::optimal: return "optimal";
    case OracleStatus::infeasible: return "infeasible";
    case OracleStatus::limit_exceeded: return "limit_exceeded";
  }
  return "?";
}

struct OracleResult {
  OracleStatus status = OracleStatus::limit_exceeded;
  std::optional<long> optimal_cost;
  Schedule optimal_schedule;
  long nodes_explored = 0;
};

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const Instance& inst, long node_limit) : inst_(inst), limit_(node_limit) {
    const int n = inst.nurse_count();
    const int p = inst.grades();
    options_.resize(n);
    min_suffix_.assign(n + 1, 0);
    supply_suffix_.assign(static_cast<std::size_t>(n + 1) * kSlots * p, 0);
    for (int i = n - 1; i >= 0; --i) {
      auto& opts = options_[i];
      opts.assign(inst.feasible(i).begin(), inst.feasible(i).end());
      std::stable_sort(opts.begin(), opts.end(), [&](int a, int b) { return inst.cost(i, a) < inst.cost(i, b); });
      min_suffix_[i] = min_suffix_[i + 1] + inst.cost(i, opts.front());
      std::uint16_t reach = 0;
      for (int j : opts) reach |= inst.pattern(j).mask();
      for (int k = 0; k < kSlots; ++k)
        for (int s = 0; s < p; ++s)
          supply(i, k, s) = supply(i + 1, k, s) + ((((reach >> k) & 1u) && inst.nurse(i).qualifies(s)) ? 1 : 0);
    }
    residual_.assign(inst.demand_matrix().begin(), inst.demand_matrix().end());
    current_ = Schedule::empty(n);
  }

  OracleResult solve() {
    OracleResult out;
    const bool finished = descend(0, 0);
    out.nodes_explored = nodes_;
    if (!finished) {
      out.status = OracleStatus::limit_exceeded;
      out.optimal_cost = incumbent_;
      out.optimal_schedule = best_;
    } else if (incumbent_) {
      out.status = OracleStatus::optimal;
      out.optimal_cost = incumbent_;
      out.optimal_schedule = best_;
    } else {
      out.status = OracleStatus::infeasible;
    }
    return out;
  }

 private:
  int& supply(int depth, int k, int s) {
    return supply_suffix_[(static_cast<std::size_t>(depth) * kSlots + k) * inst_.grades() + s];
  }

  // false when the node limit was hit
  bool descend(int depth, long cost) {
    if (++nodes_ > limit_) return false;
    const int n = inst_.nurse_count();
    const int p = inst_.grades();
    if (incumbent_ && cost + min_suffix_[depth] >= *incumbent_) return true;
    for (int k = 0; k < kSlots; ++k)
      for (int s = 0; s < p; ++s)
        if (residual_[k * p + s] > supply(depth, k, s)) return true;
    if (depth == n) {
      incumbent_ = cost;
      best_ = current_;
      return true;
    }
    const int g = inst_.nurse(depth).tier();
    for (int j : options_[depth]) {
      const unsigned mask = inst_.pattern(j).mask();
      std::vector<std::pair<int, bool>> undo;
      for (int k = 0; k < kSlots; ++k) {
        if (!((mask >> k) & 1u)) continue;
        for (int s = g; s < p; ++s) {
          int& r = residual_[k * p + s];
          undo.emplace_back(k * p + s, r > 0);
          if (r > 0) --r;
        }
      }
      current_.assignment[depth] = j;
      const bool ok = descend(depth + 1, cost + inst_.cost(depth, j));
      for (auto [idx, dec] : undo)
        if (dec) ++residual_[idx];
      current_.assignment[depth] = kUnassigned;
      if (!ok) return false;
    }
    return true;
  }

  const Instance& inst_;
  long limit_;
  long nodes_ = 0;
  std::vector<std::vector<int>> options_;
  std::vector<long> min_suffix_;
  std::vector<int> supply_suffix_;
  std::vector<int> residual_;
  Schedule current_;
  Schedule best_;
  std::optional<long> incumbent_;
};

}  // namespace detail

inline OracleResult solve_exact(const Instance& inst, long node_limit = 50'000'000) {
  return detail::ExactSearch(inst, node_limit).solve();
}

struct UndercoverEntry {
  int slot = 0;  // 0-based
  int tier = 0;  // grade - 1
  int amount = 0;
  friend bool operator==(const UndercoverEntry&, const UndercoverEntry&) = default;
};

struct Misassignment {
  int nurse = 0;
  int pattern = 0;
};

struct AuditReport {
  std::vector<UndercoverEntry> undercover;
  std::vector<Misassignment> misassigned;

  bool empty() const { return undercover.empty() && misassigned.empty(); }
  long total_undercover() const {
    long t = 0;
    for (const auto& u : undercover) t += u.amount;
    return t;
  }
};

/// Recounts coverage straight from the instance data, independently of
/// CoverageState. Patterns outside F(i) are reported and still counted.
inline AuditReport audit(const Schedule& schedule, const Instance& inst) {
  AuditReport report;
  const int p = inst.grades();
  std::vector<int> supplied(static_cast<std::size_t>(kSlots) * p, 0);
  for (int i = 0; i < inst.nurse_count(); ++i) {
    const int j = i < static_cast<int>(schedule.assignment.size()) ? schedule.assignment[i] : kUnassigned;
    if (!inst.is_feasible_for(i, j)) report.misassigned.push_back({i, j});
    if (j < 0 || j >= inst.pattern_count()) continue;
    for (int k = 0; k < kSlots; ++k)
      for (int s = 0; s < p; ++s)
        if (inst.pattern(j).covers(k) && inst.nurse(i).grade <= s + 1) ++supplied[k * p + s];
  }
  for (int k = 0; k < kSlots; ++k)
    for (int s = 0; s < p; ++s) {
      const int gap = inst.demand(k, s) - supplied[k * p + s];
      if (gap > 0) report.undercover.push_back({k, s, gap});
    }
  return report;
}

/// Plain sum of p_ij over assigned nurses, no validation.
inline long recompute_cost(const Schedule& schedule, const Instance& inst) {
  long total = 0;
  for (int i = 0; i < inst.nurse_count(); ++i) total += inst.nurse(i).costs.at(schedule.assignment.at(i));
  return total;
}

}  // namespace nurse
