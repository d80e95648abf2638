#pragma once

// Experiment grids, the line-delimited results format and the summaries
// built from it.
//
// A results file holds one JSON object per line. Run records carry
// "type":"run"; oracle records carry "type":"oracle". Summaries are always
// recomputed from the raw lines:
//
//   feasibility  per instance, the fraction of runs that found any feasible
//                schedule, averaged over instances
//   cost         per instance, the best feasible cost over its runs (the
//                censor value, 100 by default, when no run was feasible),
//                averaged over instances

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nurse/genetic.hpp"
#include "nurse/oracle.hpp"

namespace nurse {

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Cell {
  GaConfig config;  // the seed is replaced per run
  bool random_baseline = false;
  long random_samples = 10000;

  double preference_weight(int grades = 3) const { return config.resolved_weights(grades).preference; }

  std::string operator_label() const {
    if (random_baseline) return "random";
    if (config.crossover == CrossoverKind::pux)
      return "pux" + std::to_string(static_cast<int>(std::lround(config.pux_p * 100)));
    return to_string(config.crossover);
  }

  std::string label() const {
    std::string s = std::string(to_string(config.decoder)) + "/" + to_string(config.ordering) + "/" +
                    operator_label() + "/wp=" + format_number(preference_weight());
    if (config.bound_active) s += "/bound";
    return s;
  }
};

inline Cell make_cell(DecoderKind decoder, OrderingKind ordering, CrossoverKind crossover, double pux_p = 0.66,
                      bool bound = false, std::optional<double> w_p = std::nullopt) {
  Cell c;
  c.config.decoder = decoder;
  c.config.ordering = ordering;
  c.config.crossover = crossover;
  c.config.pux_p = pux_p;
  c.config.bound_active = bound;
  if (w_p) {
    auto w = ScoreWeights::defaults(decoder);
    w.preference = *w_p;
    c.config.weights = w;
  }
  return c;
}

inline Cell random_baseline_cell(DecoderKind decoder, OrderingKind ordering, long samples = 10000) {
  Cell c = make_cell(decoder, ordering, CrossoverKind::order);
  c.random_baseline = true;
  c.random_samples = samples;
  return c;
}

struct BenchSpec {
  std::vector<Cell> cells;
  int runs = 20;
  std::uint64_t base_seed = 1;
  double censor = kCensoredCost;
  bool timing = false;  // wall time makes results files non-reproducible

  /// Every cell uses the same seeds, hence the same initial populations.
  std::vector<std::uint64_t> seeds() const {
    std::vector<std::uint64_t> s;
    for (int r = 0; r < runs; ++r) s.push_back(base_seed + static_cast<std::uint64_t>(r));
    return s;
  }
};

/// Decoders x {random, C1, order, uniform, PMX}, then combined/biased with
/// PUX at 50/66/80/90 and PUX 66 with the simple bound.
inline std::vector<Cell> decoder_grid() {
  std::vector<Cell> cells;
  const std::pair<DecoderKind, OrderingKind> rows[] = {{DecoderKind::cover, OrderingKind::lexico},
                                                       {DecoderKind::contribution, OrderingKind::lexico},
                                                       {DecoderKind::combined, OrderingKind::lexico},
                                                       {DecoderKind::contribution, OrderingKind::biased}};
  for (auto [d, o] : rows) {
    cells.push_back(random_baseline_cell(d, o));
    for (auto x : {CrossoverKind::c1, CrossoverKind::order, CrossoverKind::uniform_order, CrossoverKind::pmx})
      cells.push_back(make_cell(d, o, x));
  }
  for (double p : {0.5, 0.66, 0.8, 0.9})
    cells.push_back(make_cell(DecoderKind::combined, OrderingKind::biased, CrossoverKind::pux, p));
  cells.push_back(make_cell(DecoderKind::combined, OrderingKind::biased, CrossoverKind::pux, 0.66, true));
  return cells;
}

/// Contribution decoder under each search ordering.
inline std::vector<Cell> ordering_grid(CrossoverKind crossover = CrossoverKind::pmx) {
  std::vector<Cell> cells;
  for (auto o : {OrderingKind::lexico, OrderingKind::rand_order, OrderingKind::biased, OrderingKind::rand_cost,
                 OrderingKind::cheapest})
    cells.push_back(make_cell(DecoderKind::contribution, o, crossover));
  return cells;
}

/// Combined/biased decoder across preference weights.
inline std::vector<Cell> preference_sweep_grid(const std::vector<double>& weights = {0.1, 0.25, 0.5, 1.0, 2.0},
                                               CrossoverKind crossover = CrossoverKind::pmx) {
  std::vector<Cell> cells;
  for (double w : weights)
    cells.push_back(make_cell(DecoderKind::combined, OrderingKind::biased, crossover, 0.66, false, w));
  return cells;
}

struct RunRecord {
  std::string cell;
  std::string instance;
  std::string decoder;
  std::string ordering;
  std::string op;  // crossover label or "random"
  double pux_p = 0;
  double w_p = 0;
  bool bound = false;
  std::uint64_t seed = 0;
  bool feasible = false;
  std::optional<long> best_cost;
  double best_fitness = 0;
  int generations = 0;
  long decodes = 0;
  long bound_fallbacks = 0;
  std::optional<double> wall_ms;
};

struct OracleRecord {
  std::string instance;
  std::string status;
  std::optional<long> cost;
  long nodes = 0;
};

inline RunRecord make_record(const Cell& cell, const Instance& inst, const RunResult& r, bool timing) {
  RunRecord rec;
  rec.cell = cell.label();
  rec.instance = inst.name();
  rec.decoder = to_string(cell.config.decoder);
  rec.ordering = to_string(cell.config.ordering);
  rec.op = cell.operator_label();
  rec.pux_p = cell.config.pux_p;
  rec.w_p = cell.config.resolved_weights(inst.grades()).preference;
  rec.bound = cell.config.bound_active;
  rec.seed = r.seed;
  rec.feasible = r.feasible_found;
  rec.best_cost = r.best_feasible_cost;
  rec.best_fitness = r.best_fitness;
  rec.generations = r.generations;
  rec.decodes = r.decodes;
  rec.bound_fallbacks = r.bound_fallbacks;
  if (timing) rec.wall_ms = std::round(r.wall_ms * 1000.0) / 1000.0;
  return rec;
}

inline OracleRecord make_record(const Instance& inst, const OracleResult& r) {
  return {inst.name(), to_string(r.status), r.status == OracleStatus::optimal ? r.optimal_cost : std::nullopt,
          r.nodes_explored};
}

inline std::string to_line(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "run";
  j["cell"] = r.cell;
  j["instance"] = r.instance;
  j["decoder"] = r.decoder;
  j["ordering"] = r.ordering;
  j["operator"] = r.op;
  j["pux_p"] = r.pux_p;
  j["w_p"] = r.w_p;
  j["bound"] = r.bound;
  j["seed"] = r.seed;
  j["feasible"] = r.feasible;
  j["best_cost"] = r.best_cost ? nlohmann::ordered_json(*r.best_cost) : nlohmann::ordered_json(nullptr);
  j["best_fitness"] = r.best_fitness;
  j["generations"] = r.generations;
  j["decodes"] = r.decodes;
  j["bound_fallbacks"] = r.bound_fallbacks;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j.dump();
}

inline std::string to_line(const OracleRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "oracle";
  j["instance"] = r.instance;
  j["status"] = r.status;
  j["cost"] = r.cost ? nlohmann::ordered_json(*r.cost) : nlohmann::ordered_json(nullptr);
  j["nodes"] = r.nodes;
  return j.dump();
}

struct Results {
  std::vector<RunRecord> runs;
  std::vector<OracleRecord> oracles;
};

inline Results parse_results(std::istream& in) {
  Results out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "oracle") {
        OracleRecord r;
        r.instance = j.at("instance").get<std::string>();
        r.status = j.at("status").get<std::string>();
        if (!j.at("cost").is_null()) r.cost = j.at("cost").get<long>();
        r.nodes = j.at("nodes").get<long>();
        out.oracles.push_back(std::move(r));
      } else if (type == "run") {
        RunRecord r;
        r.cell = j.at("cell").get<std::string>();
        r.instance = j.at("instance").get<std::string>();
        r.decoder = j.at("decoder").get<std::string>();
        r.ordering = j.at("ordering").get<std::string>();
        r.op = j.at("operator").get<std::string>();
        r.pux_p = j.at("pux_p").get<double>();
        r.w_p = j.at("w_p").get<double>();
        r.bound = j.at("bound").get<bool>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.feasible = j.at("feasible").get<bool>();
        if (!j.at("best_cost").is_null()) r.best_cost = j.at("best_cost").get<long>();
        r.best_fitness = j.at("best_fitness").get<double>();
        r.generations = j.at("generations").get<int>();
        r.decodes = j.at("decodes").get<long>();
        r.bound_fallbacks = j.value("bound_fallbacks", 0L);
        if (j.contains("wall_ms")) r.wall_ms = j.at("wall_ms").get<double>();
        out.runs.push_back(std::move(r));
      } else {
        throw ParseError("unknown record type '" + type + "'", number);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad results record: ") + e.what(), number);
    }
  }
  return out;
}

inline Results read_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open results file '" + path + "'");
  return parse_results(in);
}

/// Runs every (cell, instance, seed) triple, fanning out over `threads`
/// workers. Records reach `sink` in task order regardless of completion
/// order. Triples listed in `done` (cell label, instance, seed) are skipped.
inline void run_bench(const BenchSpec& spec, const std::vector<Instance>& instances,
                      const std::function<void(const RunRecord&)>& sink, unsigned threads = 1,
                      const std::set<std::tuple<std::string, std::string, std::uint64_t>>& done = {}) {
  struct Task {
    const Cell* cell;
    const Instance* inst;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& cell : spec.cells) {
    cell.config.validate();
    const auto label = cell.label();
    for (const auto& inst : instances)
      for (auto seed : spec.seeds())
        if (!done.count({label, inst.name(), seed})) tasks.push_back({&cell, &inst, seed});
  }

  std::vector<std::optional<RunRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::size_t flushed = 0;
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        auto config = tasks[t].cell->config;
        config.seed = tasks[t].seed;
        const auto result = tasks[t].cell->random_baseline
                                ? random_search(*tasks[t].inst, config, tasks[t].cell->random_samples)
                                : run(*tasks[t].inst, config);
        auto rec = make_record(*tasks[t].cell, *tasks[t].inst, result, spec.timing);
        std::lock_guard lock(mu);
        slots[t] = std::move(rec);
        while (flushed < slots.size() && slots[flushed]) {
          sink(*slots[flushed]);
          slots[flushed].reset();
          ++flushed;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
        return;
      }
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct InstanceSummary {
  std::string instance;
  int runs = 0;
  int feasible_runs = 0;
  std::optional<long> best_cost;
  std::optional<long> optimum;
  int optimal_hits = 0;  // runs whose best cost equals the optimum
  int within3 = 0;       // runs within three units of the optimum

  double feasibility() const { return runs ? static_cast<double>(feasible_runs) / runs : 0.0; }
  double censored_cost(double censor) const { return best_cost ? static_cast<double>(*best_cost) : censor; }
};

struct CellSummary {
  std::string cell;
  std::string decoder;
  std::string ordering;
  std::string op;
  double w_p = 0;
  bool bound = false;
  int runs = 0;
  double feasibility = 0;  // fraction in [0, 1]
  double cost = 0;
  std::optional<double> mean_ms;
  double mean_decodes = 0;
  int instances_at_optimum = 0;
  int instances_with_optimum = 0;
  std::vector<InstanceSummary> instances;
};

/// Per-cell summaries in order of first appearance in the results.
inline std::vector<CellSummary> summarize(const Results& results, double censor = kCensoredCost) {
  std::map<std::string, long> optimum;
  for (const auto& o : results.oracles)
    if (o.status == "optimal" && o.cost) optimum[o.instance] = *o.cost;

  std::vector<CellSummary> cells;
  std::map<std::string, std::size_t> cell_index;
  std::vector<std::map<std::string, std::size_t>> inst_index;
  std::vector<double> ms_total, decode_total;
  std::vector<int> ms_count;
  for (const auto& r : results.runs) {
    auto [it, fresh] = cell_index.try_emplace(r.cell, cells.size());
    if (fresh) {
      CellSummary c;
      c.cell = r.cell;
      c.decoder = r.decoder;
      c.ordering = r.ordering;
      c.op = r.op;
      c.w_p = r.w_p;
      c.bound = r.bound;
      cells.push_back(std::move(c));
      inst_index.emplace_back();
      ms_total.push_back(0);
      decode_total.push_back(0);
      ms_count.push_back(0);
    }
    const std::size_t ci = it->second;
    auto& cell = cells[ci];
    auto [jt, new_inst] = inst_index[ci].try_emplace(r.instance, cell.instances.size());
    if (new_inst) {
      InstanceSummary s;
      s.instance = r.instance;
      if (auto o = optimum.find(r.instance); o != optimum.end()) s.optimum = o->second;
      cell.instances.push_back(std::move(s));
    }
    auto& inst = cell.instances[jt->second];
    ++inst.runs;
    ++cell.runs;
    decode_total[ci] += static_cast<double>(r.decodes);
    if (r.wall_ms) {
      ms_total[ci] += *r.wall_ms;
      ++ms_count[ci];
    }
    if (r.feasible && r.best_cost) {
      ++inst.feasible_runs;
      if (!inst.best_cost || *r.best_cost < *inst.best_cost) inst.best_cost = r.best_cost;
      if (inst.optimum) {
        if (*r.best_cost == *inst.optimum) ++inst.optimal_hits;
        if (*r.best_cost <= *inst.optimum + 3) ++inst.within3;
      }
    }
  }
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    auto& cell = cells[ci];
    double feas = 0, cost = 0;
    for (const auto& inst : cell.instances) {
      feas += inst.feasibility();
      cost += inst.censored_cost(censor);
      if (inst.optimum) {
        ++cell.instances_with_optimum;
        if (inst.best_cost && *inst.best_cost == *inst.optimum) ++cell.instances_at_optimum;
      }
    }
    const auto count = static_cast<double>(cell.instances.size());
    cell.feasibility = count ? feas / count : 0;
    cell.cost = count ? cost / count : 0;
    cell.mean_decodes = cell.runs ? decode_total[ci] / cell.runs : 0;
    if (ms_count[ci]) cell.mean_ms = ms_total[ci] / ms_count[ci];
  }
  return cells;
}

namespace detail {
inline std::string fixed(double x, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}
}  // namespace detail

/// Text report: the full cell table, a decoder x operator pivot, and one
/// sweep table per group of cells that differ only in w_p.
inline void write_report(const std::vector<CellSummary>& cells, std::ostream& out) {
  using detail::fixed;
  using detail::pad;
  out << pad("cell", 44, true) << pad("runs", 6) << pad("feasible%", 11) << pad("cost", 9) << pad("time_ms", 10)
      << pad("decodes", 10) << pad("optimal", 9) << "\n";
  for (const auto& c : cells) {
    out << pad(c.cell, 44, true) << pad(std::to_string(c.runs), 6) << pad(fixed(100 * c.feasibility, 1), 11)
        << pad(fixed(c.cost, 1), 9) << pad(c.mean_ms ? fixed(*c.mean_ms, 1) : "-", 10)
        << pad(fixed(c.mean_decodes, 0), 10)
        << pad(c.instances_with_optimum
                   ? std::to_string(c.instances_at_optimum) + "/" + std::to_string(c.instances_with_optimum)
                   : "-",
               9)
        << "\n";
  }

  // decoder x operator pivot
  std::vector<std::string> rows, cols;
  std::map<std::pair<std::string, std::string>, const CellSummary*> grid;
  for (const auto& c : cells) {
    const auto row = c.decoder + "/" + c.ordering + (c.bound ? "/bound" : "");
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    if (std::find(cols.begin(), cols.end(), c.op) == cols.end()) cols.push_back(c.op);
    grid.try_emplace({row, c.op}, &c);
  }
  out << "\nfeasible% / cost by decoder and operator\n" << pad("decoder", 30, true);
  for (const auto& col : cols) out << pad(col, 14);
  out << "\n";
  for (const auto& row : rows) {
    out << pad(row, 30, true);
    for (const auto& col : cols) {
      auto it = grid.find({row, col});
      out << pad(it == grid.end() ? "-"
                                  : fixed(100 * it->second->feasibility, 1) + "/" + fixed(it->second->cost, 1),
                 14);
    }
    out << "\n";
  }

  std::map<std::string, std::vector<const CellSummary*>> sweeps;
  std::vector<std::string> sweep_order;
  for (const auto& c : cells) {
    const auto key = c.decoder + "/" + c.ordering + "/" + c.op + (c.bound ? "/bound" : "");
    if (!sweeps.count(key)) sweep_order.push_back(key);
    sweeps[key].push_back(&c);
  }
  for (const auto& key : sweep_order) {
    auto& group = sweeps[key];
    if (group.size() < 2) continue;
    std::stable_sort(group.begin(), group.end(), [](auto* a, auto* b) { return a->w_p < b->w_p; });
    out << "\nw_p sweep: " << key << "\n" << pad("w_p", 8, true) << pad("feasible%", 11) << pad("cost", 9) << "\n";
    for (const auto* c : group)
      out << pad(format_number(c->w_p), 8, true) << pad(fixed(100 * c->feasibility, 1), 11)
          << pad(fixed(c->cost, 1), 9) << "\n";
  }
}

inline void write_summary_csv(const std::vector<CellSummary>& cells, std::ostream& out) {
  out << "cell,decoder,ordering,operator,w_p,bound,runs,feasibility,cost,mean_ms,mean_decodes,"
         "instances_at_optimum,instances_with_optimum\n";
  for (const auto& c : cells)
    out << c.cell << ',' << c.decoder << ',' << c.ordering << ',' << c.op << ',' << format_number(c.w_p) << ','
        << (c.bound ? 1 : 0) << ',' << c.runs << ',' << detail::fixed(c.feasibility, 4) << ','
        << detail::fixed(c.cost, 3) << ',' << (c.mean_ms ? detail::fixed(*c.mean_ms, 3) : "") << ','
        << detail::fixed(c.mean_decodes, 1) << ',' << c.instances_at_optimum << ',' << c.instances_with_optimum
        << "\n";
}

/// Per-instance rows: the optimal / within-three / infeasible breakdown.
inline void write_detail_csv(const std::vector<CellSummary>& cells, std::ostream& out, double censor = kCensoredCost) {
  out << "cell,instance,runs,feasible_runs,infeasible_runs,best_cost,censored_cost,optimum,optimal_hits,within3\n";
  for (const auto& c : cells)
    for (const auto& i : c.instances)
      out << c.cell << ',' << i.instance << ',' << i.runs << ',' << i.feasible_runs << ','
          << (i.runs - i.feasible_runs) << ',' << (i.best_cost ? std::to_string(*i.best_cost) : "") << ','
          << format_number(i.censored_cost(censor)) << ',' << (i.optimum ? std::to_string(*i.optimum) : "") << ','
          << i.optimal_hits << ',' << i.within3 << "\n";
}

}  // namespace nurse
