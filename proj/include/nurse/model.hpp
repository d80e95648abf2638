#pragma once

// Problem data model for the weekly nurse rostering problem: shift patterns,
// nurses and their contracts, the demand matrix, schedules, coverage and the
// penalised fitness used by the GA.
//
// Slot indexing is 0-based in code: slots 0..6 are the Sunday..Saturday day
// shifts, 7..13 the Sunday..Saturday night shifts. Grades are 1-based with 1
// the most qualified; matrices are indexed by tier = grade - 1.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nurse/errors.hpp"

namespace nurse {

inline constexpr int kSlots = 14;
inline constexpr int kDays = 7;
inline constexpr int kMaxCost = 100;
inline constexpr int kUnassigned = -1;

enum class PatternKind { day, night, combined };
enum class Side { day, night };
enum class WorkerType { standard, special };

inline const char* to_string(Side s) { return s == Side::day ? "day" : "night"; }

class ShiftPattern {
 public:
  static constexpr std::uint16_t kDayMask = 0x007F;
  static constexpr std::uint16_t kNightMask = 0x3F80;

  explicit ShiftPattern(std::uint16_t cover) : cover_(cover) {
    if (cover == 0 || (cover & ~(kDayMask | kNightMask)) != 0)
      throw InstanceInvalid("shift pattern must cover at least one of 14 slots");
  }

  /// Parses a 14-character 0/1 string; character 0 is the Sunday day shift.
  static ShiftPattern parse(std::string_view text) {
    if (text.size() != kSlots) throw InstanceInvalid("shift pattern must have 14 characters");
    std::uint16_t cover = 0;
    for (int k = 0; k < kSlots; ++k) {
      if (text[k] == '1')
        cover |= static_cast<std::uint16_t>(1u << k);
      else if (text[k] != '0')
        throw InstanceInvalid("shift pattern may only contain '0' and '1'");
    }
    return ShiftPattern(cover);
  }

  std::string str() const {
    std::string s(kSlots, '0');
    for (int k = 0; k < kSlots; ++k)
      if (covers(k)) s[k] = '1';
    return s;
  }

  std::uint16_t mask() const { return cover_; }
  bool covers(int slot) const { return (cover_ >> slot) & 1u; }
  int day_count() const { return std::popcount(static_cast<unsigned>(cover_ & kDayMask)); }
  int night_count() const { return std::popcount(static_cast<unsigned>(cover_ & kNightMask)); }
  int size() const { return std::popcount(static_cast<unsigned>(cover_)); }

  PatternKind kind() const {
    if ((cover_ & kNightMask) == 0) return PatternKind::day;
    if ((cover_ & kDayMask) == 0) return PatternKind::night;
    return PatternKind::combined;
  }

  friend bool operator==(const ShiftPattern&, const ShiftPattern&) = default;

 private:
  std::uint16_t cover_;
};

struct Nurse {
  int grade = 1;
  int days = 0;                // D_i
  int nights = 0;              // N_i
  std::optional<int> both;     // B_i, present only for special nurses
  Side preference = Side::day;
  std::vector<int> costs;      // p_ij, one per pattern in the universe
  std::vector<bool> unavailable;

  WorkerType worker_type() const { return both ? WorkerType::special : WorkerType::standard; }
  int tier() const { return grade - 1; }
  /// q_is: a nurse counts towards demand of its own grade and every lower one.
  bool qualifies(int tier_index) const { return tier() <= tier_index; }

  friend bool operator==(const Nurse&, const Nurse&) = default;
};

/// True when the pattern's shift counts match the nurse's contract: day or
/// night patterns with D_i / N_i shifts for standard nurses, combined
/// patterns with the exact day/night split for special nurses.
inline bool contract_allows(const Nurse& nurse, const ShiftPattern& pat) {
  switch (pat.kind()) {
    case PatternKind::day:
      return !nurse.both && pat.day_count() == nurse.days;
    case PatternKind::night:
      return !nurse.both && pat.night_count() == nurse.nights;
    case PatternKind::combined:
      return nurse.both && pat.size() == *nurse.both && pat.day_count() == nurse.days &&
             pat.night_count() == nurse.nights;
  }
  return false;
}

/// F(i): patterns allowed by the contract, minus the ones marked
/// unavailable. Throws InstanceInvalid when the set is empty.
inline std::vector<int> feasible_patterns(const Nurse& nurse, std::span<const ShiftPattern> patterns) {
  if (patterns.empty()) throw InstanceInvalid("pattern universe is empty");
  std::vector<int> out;
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    if (j < nurse.unavailable.size() && nurse.unavailable[j]) continue;
    if (contract_allows(nurse, patterns[j])) out.push_back(static_cast<int>(j));
  }
  if (out.empty()) throw InstanceInvalid("nurse has no feasible shift pattern");
  return out;
}

class Instance {
 public:
  Instance(std::string name, int grades, std::vector<int> demand, std::vector<ShiftPattern> patterns,
           std::vector<Nurse> nurses)
      : name_(std::move(name)),
        grades_(grades),
        demand_(std::move(demand)),
        patterns_(std::move(patterns)),
        nurses_(std::move(nurses)) {
    validate();
  }

  const std::string& name() const { return name_; }
  int grades() const { return grades_; }
  int nurse_count() const { return static_cast<int>(nurses_.size()); }
  int pattern_count() const { return static_cast<int>(patterns_.size()); }
  const Nurse& nurse(int i) const { return nurses_[i]; }
  std::span<const Nurse> nurses() const { return nurses_; }
  const ShiftPattern& pattern(int j) const { return patterns_[j]; }
  std::span<const ShiftPattern> patterns() const { return patterns_; }

  /// R_ks, slot 0..13, tier 0..p-1. Demand for nurses of that grade or better.
  int demand(int slot, int tier) const { return demand_[slot * grades_ + tier]; }
  std::span<const int> demand_matrix() const { return demand_; }

  std::span<const int> feasible(int i) const { return feasible_[i]; }
  bool is_feasible_for(int i, int j) const {
    return j >= 0 && j < pattern_count() && feasible_mask_[i][j];
  }
  int cost(int i, int j) const { return nurses_[i].costs[j]; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name_ == b.name_ && a.grades_ == b.grades_ && a.demand_ == b.demand_ &&
           a.patterns_ == b.patterns_ && a.nurses_ == b.nurses_;
  }

 private:
  void validate() {
    if (grades_ < 1) throw InstanceInvalid("instance needs at least one grade");
    if (demand_.size() != static_cast<std::size_t>(kSlots * grades_))
      throw InstanceInvalid("demand matrix must be 14 x grades");
    if (std::any_of(demand_.begin(), demand_.end(), [](int r) { return r < 0; }))
      throw InstanceInvalid("demand must be nonnegative");
    if (patterns_.empty()) throw InstanceInvalid("pattern universe is empty");
    const auto m = patterns_.size();
    feasible_.reserve(nurses_.size());
    feasible_mask_.reserve(nurses_.size());
    for (std::size_t i = 0; i < nurses_.size(); ++i) {
      auto& n = nurses_[i];
      const auto who = "nurse " + std::to_string(i) + ": ";
      if (n.grade < 1 || n.grade > grades_) throw InstanceInvalid(who + "grade out of range");
      if (n.days < 0 || n.nights < 0) throw InstanceInvalid(who + "negative shift count");
      if (n.both && *n.both != n.days + n.nights)
        throw InstanceInvalid(who + "combined contract must split into days + nights");
      if (n.costs.empty()) n.costs.assign(m, 0);
      if (n.unavailable.empty()) n.unavailable.assign(m, false);
      if (n.costs.size() != m || n.unavailable.size() != m)
        throw InstanceInvalid(who + "cost vector does not match the pattern universe");
      if (std::any_of(n.costs.begin(), n.costs.end(), [](int c) { return c < 0 || c > kMaxCost; }))
        throw InstanceInvalid(who + "preference cost outside [0, 100]");
      try {
        feasible_.push_back(feasible_patterns(n, patterns_));
      } catch (const InstanceInvalid& e) {
        throw InstanceInvalid(who + e.what());
      }
      std::vector<bool> mask(m, false);
      for (int j : feasible_.back()) mask[j] = true;
      feasible_mask_.push_back(std::move(mask));
    }
  }

  std::string name_;
  int grades_;
  std::vector<int> demand_;
  std::vector<ShiftPattern> patterns_;
  std::vector<Nurse> nurses_;
  std::vector<std::vector<int>> feasible_;
  std::vector<std::vector<bool>> feasible_mask_;
};

/// One pattern index per nurse; kUnassigned marks a nurse not yet scheduled.
struct Schedule {
  std::vector<int> assignment;

  static Schedule empty(int nurses) { return {std::vector<int>(nurses, kUnassigned)}; }
  bool complete() const {
    return std::none_of(assignment.begin(), assignment.end(), [](int j) { return j == kUnassigned; });
  }
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Qualified supply and residual undercover per (slot, tier).
class CoverageState {
 public:
  explicit CoverageState(const Instance& inst)
      : inst_(&inst),
        supplied_(inst.demand_matrix().size(), 0),
        undercover_(inst.demand_matrix().begin(), inst.demand_matrix().end()) {
    for (int r : undercover_) total_ += r;
  }

  /// Adds nurse i working pattern j. The caller guarantees j is in F(i).
  void add(int i, int j) {
    const int p = inst_->grades();
    const int first = inst_->nurse(i).tier();
    unsigned mask = inst_->pattern(j).mask();
    while (mask) {
      const int k = std::countr_zero(mask);
      mask &= mask - 1;
      int* sup = &supplied_[k * p];
      int* under = &undercover_[k * p];
      for (int s = first; s < p; ++s) {
        ++sup[s];
        if (under[s] > 0) {
          --under[s];
          --total_;
        }
      }
    }
  }

  int supplied(int slot, int tier) const { return supplied_[slot * inst_->grades() + tier]; }
  int undercover(int slot, int tier) const { return undercover_[slot * inst_->grades() + tier]; }
  std::span<const int> undercover_matrix() const { return undercover_; }
  std::span<const int> supplied_matrix() const { return supplied_; }
  long total_undercover() const { return total_; }
  const Instance& instance() const { return *inst_; }

  friend bool operator==(const CoverageState& a, const CoverageState& b) {
    return a.supplied_ == b.supplied_ && a.undercover_ == b.undercover_;
  }

 private:
  const Instance* inst_;
  std::vector<int> supplied_;
  std::vector<int> undercover_;
  long total_ = 0;
};

inline void check_schedule(const Schedule& schedule, const Instance& inst, bool require_complete) {
  if (schedule.assignment.size() != static_cast<std::size_t>(inst.nurse_count()))
    throw ScheduleInvalid("schedule length does not match nurse count");
  for (int i = 0; i < inst.nurse_count(); ++i) {
    const int j = schedule.assignment[i];
    if (j == kUnassigned) {
      if (require_complete) throw ScheduleInvalid("nurse " + std::to_string(i) + " is unassigned");
      continue;
    }
    if (!inst.is_feasible_for(i, j))
      throw ScheduleInvalid("nurse " + std::to_string(i) + " assigned pattern " + std::to_string(j) +
                            " outside its feasible set");
  }
}

/// Coverage of a complete or partial schedule (unassigned nurses are skipped).
inline CoverageState coverage(const Schedule& schedule, const Instance& inst) {
  check_schedule(schedule, inst, false);
  CoverageState state(inst);
  for (int i = 0; i < inst.nurse_count(); ++i)
    if (schedule.assignment[i] != kUnassigned) state.add(i, schedule.assignment[i]);
  return state;
}

inline long solution_cost(const Schedule& schedule, const Instance& inst) {
  check_schedule(schedule, inst, true);
  long total = 0;
  for (int i = 0; i < inst.nurse_count(); ++i) total += inst.cost(i, schedule.assignment[i]);
  return total;
}

inline double fitness(long cost, long undercover, double w_demand) {
  return static_cast<double>(cost) + w_demand * static_cast<double>(undercover);
}

/// Preference cost plus w_demand per uncovered (slot, grade) shift.
inline double fitness(const Schedule& schedule, const Instance& inst, double w_demand) {
  if (!(w_demand >= 0)) throw ConfigInvalid("penalty weight must be nonnegative");
  const long cost = solution_cost(schedule, inst);
  return fitness(cost, coverage(schedule, inst).total_undercover(), w_demand);
}

inline bool is_feasible(const Schedule& schedule, const Instance& inst) {
  check_schedule(schedule, inst, true);
  return coverage(schedule, inst).total_undercover() == 0;
}

}  // namespace nurse
