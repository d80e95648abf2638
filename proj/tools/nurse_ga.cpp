// nurse_ga: command-line front end for the indirect GA nurse rostering solver.
//
//   nurse_ga generate  --out ward.json [generator flags]
//   nurse_ga generate  --corpus full --out-dir corpus/
//   nurse_ga solve     --instance ward.json [GA flags] --out run.jsonl --schedule best.txt
//   nurse_ga bench     --instances corpus/ --grid decoders --runs 20 --out results.jsonl
//   nurse_ga oracle    --instance small.json --out results.jsonl
//   nurse_ga report    --results results.jsonl --csv summary.csv

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nurse/bench.hpp"
#include "nurse/corpus.hpp"
#include "nurse/generator.hpp"
#include "nurse/genetic.hpp"
#include "nurse/instance_io.hpp"
#include "nurse/oracle.hpp"

namespace fs = std::filesystem;
using namespace nurse;

namespace {

struct GaFlags {
  std::string decoder = "combined";
  std::string ordering = "biased";
  std::string crossover = "pux";
  double pux_p = 0.66;
  std::optional<double> w_p;
  std::vector<double> grade_weights;
  double penalty = 20.0;
  int population = 100;
  double mutation = 0.015;
  double elite = 0.10;
  int stall = 30;
  int max_generations = 10000;
  bool bound = false;

  void attach(CLI::App* app) {
    app->add_option("--decoder", decoder, "cover | contribution | combined")->capture_default_str();
    app->add_option("--ordering", ordering, "lexico | rand_order | biased | rand_cost | cheapest")
        ->capture_default_str();
    app->add_option("--crossover", crossover, "pmx | order | c1 | uniform | pux")->capture_default_str();
    app->add_option("--pux-p", pux_p, "PUX template probability")->capture_default_str();
    app->add_option("--w-p", w_p, "preference weight (default 1 contribution, 0.5 combined)");
    app->add_option("--grade-weights", grade_weights, "per-grade weights (default 8 2 1)");
    app->add_option("--penalty", penalty, "penalty per uncovered shift")->capture_default_str();
    app->add_option("--population", population)->capture_default_str();
    app->add_option("--mutation", mutation, "per-gene swap probability")->capture_default_str();
    app->add_option("--elite", elite, "fraction kept unchanged")->capture_default_str();
    app->add_option("--stall", stall, "stop after this many generations without improvement")
        ->capture_default_str();
    app->add_option("--max-generations", max_generations)->capture_default_str();
    app->add_flag("--bound", bound, "enable the simple bound");
  }

  GaConfig config(int grades) const {
    GaConfig c;
    c.decoder = parse_decoder(decoder);
    c.ordering = parse_ordering(ordering);
    c.crossover = parse_crossover(crossover);
    c.pux_p = pux_p;
    c.penalty_weight = penalty;
    c.population_size = population;
    c.mutation_rate = mutation;
    c.elite_fraction = elite;
    c.stop_after_no_improvement = stall;
    c.max_generations = max_generations;
    c.bound_active = bound;
    if (w_p || !grade_weights.empty()) {
      auto w = ScoreWeights::defaults(c.decoder, grades);
      if (w_p) w.preference = *w_p;
      if (!grade_weights.empty()) w.grade = grade_weights;
      c.weights = w;
    }
    c.validate();
    return c;
  }
};

std::vector<Instance> load_instances(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".json") found.push_back(e.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      if (!fs::exists(p)) throw Error("instance file not found: " + p);
      files.push_back(p);
    }
  }
  if (files.empty()) throw Error("no instances given");
  std::vector<Instance> out;
  for (const auto& f : files) out.push_back(read_instance_file(f));
  return out;
}

void write_schedule(std::ostream& out, const Instance& inst, const Schedule& s) {
  const auto report = audit(s, inst);
  out << "# instance " << inst.name() << "\n";
  if (!s.complete()) {
    out << "# no schedule\n";
    return;
  }
  out << "# cost " << recompute_cost(s, inst) << " undercover " << report.total_undercover() << " feasible "
      << (report.empty() ? "yes" : "no") << "\n";
  out << "nurse,grade,pattern,shifts,cost\n";
  for (int i = 0; i < inst.nurse_count(); ++i) {
    const int j = s.assignment[i];
    out << i << ',' << inst.nurse(i).grade << ',' << j << ',' << inst.pattern(j).str() << ',' << inst.cost(i, j)
        << "\n";
  }
  out << "# audit (slots 1-7 days Sun-Sat, 8-14 nights Sun-Sat)\n";
  if (report.empty()) out << "ok\n";
  for (const auto& u : report.undercover)
    out << "undercover slot=" << u.slot + 1 << " grade=" << u.tier + 1 << " amount=" << u.amount << "\n";
  for (const auto& m : report.misassigned)
    out << "misassigned nurse=" << m.nurse << " pattern=" << m.pattern << "\n";
}

std::ofstream open_out(const std::string& path, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indirect genetic algorithm for nurse rostering"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate synthetic instances");
  GenParams gp;
  std::string gen_out, gen_dir, corpus, planted_out, universe = "all", demand_mode = "planted";
  std::uint64_t corpus_seed = 0;
  gen->add_option("--out", gen_out, "instance file to write");
  gen->add_option("--corpus", corpus, "write a corpus recipe instead: full | small")
      ->check(CLI::IsMember({"full", "small"}));
  gen->add_option("--out-dir", gen_dir, "directory for --corpus");
  gen->add_option("--corpus-seed", corpus_seed, "corpus seed (default per recipe)");
  gen->add_option("--name", gp.name)->capture_default_str();
  gen->add_option("--nurses", gp.nurses)->capture_default_str();
  gen->add_option("--grades", gp.grades)->capture_default_str();
  gen->add_option("--grade-mix", gp.grade_mix, "share of nurses per grade");
  gen->add_option("--special-prob", gp.special_probability)->capture_default_str();
  gen->add_option("--universe", universe, "all | sampled")->check(CLI::IsMember({"all", "sampled"}));
  gen->add_option("--sampled-per-size", gp.sampled_per_size)->capture_default_str();
  gen->add_option("--combined-per-split", gp.combined_per_split)->capture_default_str();
  gen->add_option("--zero-cost", gp.zero_cost_fraction, "fraction of zero-cost patterns")->capture_default_str();
  gen->add_option("--unavailable", gp.unavailable_fraction)->capture_default_str();
  gen->add_option("--demand", demand_mode, "planted | random")->check(CLI::IsMember({"planted", "random"}));
  gen->add_option("--tightness", gp.tightness)->capture_default_str();
  gen->add_option("--seed", gp.seed)->capture_default_str();
  gen->add_option("--planted-out", planted_out, "write the planted schedule here");

  // solve
  auto* solve = app.add_subcommand("solve", "one GA run on one instance");
  GaFlags solve_flags;
  solve_flags.attach(solve);
  std::string solve_instance, solve_out, solve_schedule;
  std::uint64_t solve_seed = 1;
  bool solve_timing = false, solve_oracle = false;
  long solve_nodes = 50'000'000;
  solve->add_option("--instance", solve_instance)->required();
  solve->add_option("--seed", solve_seed)->capture_default_str();
  solve->add_option("--out", solve_out, "results file (one run record, plus oracle record with --oracle)");
  solve->add_option("--schedule", solve_schedule, "write the best schedule and its audit here");
  solve->add_flag("--timing", solve_timing, "record wall time (results then differ between replays)");
  solve->add_flag("--oracle", solve_oracle, "also solve exactly and report the gap");
  solve->add_option("--node-limit", solve_nodes)->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "run an experiment grid");
  GaFlags bench_flags;
  bench_flags.attach(bench);
  std::vector<std::string> bench_instances;
  std::string bench_grid = "decoders", bench_out;
  std::vector<double> sweep_values{0.1, 0.25, 0.5, 1.0, 2.0};
  BenchSpec spec;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool bench_oracle = false, resume = false;
  long bench_nodes = 5'000'000;
  bench->add_option("--instances", bench_instances, "instance files or directories")->required();
  bench->add_option("--grid", bench_grid, "decoders | orderings | wp-sweep | single | random")
      ->check(CLI::IsMember({"decoders", "orderings", "wp-sweep", "single", "random"}))
      ->capture_default_str();
  bench->add_option("--sweep", sweep_values, "w_p values for --grid wp-sweep");
  bench->add_option("--runs", spec.runs)->capture_default_str();
  bench->add_option("--seed", spec.base_seed, "first seed; runs use seed, seed+1, ...")->capture_default_str();
  bench->add_option("--censor", spec.censor)->capture_default_str();
  bench->add_option("--out", bench_out)->required();
  bench->add_option("--threads", threads)->capture_default_str();
  bench->add_flag("--timing", spec.timing, "record wall time per run");
  bench->add_flag("--oracle", bench_oracle, "solve each instance exactly first (small instances)");
  bench->add_option("--node-limit", bench_nodes)->capture_default_str();
  bench->add_flag("--resume", resume, "append to --out, skipping runs already recorded");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact branch-and-bound on small instances");
  std::vector<std::string> oracle_instances;
  std::string oracle_out, oracle_schedule;
  long oracle_nodes = 50'000'000;
  oracle->add_option("--instance", oracle_instances)->required();
  oracle->add_option("--node-limit", oracle_nodes)->capture_default_str();
  oracle->add_option("--out", oracle_out, "results file for oracle records (default stdout)");
  oracle->add_option("--schedule", oracle_schedule, "write the optimal schedule (single instance)");

  // report
  auto* report = app.add_subcommand("report", "summarise a results file");
  std::string report_in, report_csv, report_detail;
  double report_censor = kCensoredCost;
  report->add_option("--results", report_in)->required();
  report->add_option("--csv", report_csv, "write the per-cell summary as CSV");
  report->add_option("--detail-csv", report_detail, "write per-instance rows as CSV");
  report->add_option("--censor", report_censor)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gp.universe = universe == "sampled" ? UniversePolicy::sampled : UniversePolicy::all_subsets;
      gp.demand = demand_mode == "random" ? DemandMode::random : DemandMode::planted;
      if (!corpus.empty()) {
        if (gen_dir.empty()) throw ConfigInvalid("--corpus needs --out-dir");
        fs::create_directories(gen_dir);
        const auto recipe = corpus == "full" ? (corpus_seed ? full_corpus(corpus_seed) : full_corpus())
                                             : (corpus_seed ? small_corpus(50, corpus_seed) : small_corpus());
        for (const auto& params : recipe)
          write_instance_file(generate(params), (fs::path(gen_dir) / (params.name + ".json")).string());
        std::cout << "wrote " << recipe.size() << " instances to " << gen_dir << "\n";
      } else {
        if (gen_out.empty()) throw ConfigInvalid("generate needs --out or --corpus");
        auto g = generate_with_plant(gp);
        write_instance_file(g.instance, gen_out);
        if (!planted_out.empty()) {
          if (!g.planted) throw ConfigInvalid("random demand mode has no planted schedule");
          auto out = open_out(planted_out);
          write_schedule(out, g.instance, *g.planted);
        }
      }
    } else if (solve->parsed()) {
      const auto inst = read_instance_file(solve_instance);
      auto config = solve_flags.config(inst.grades());
      config.seed = solve_seed;
      Cell cell{config};
      const auto result = run(inst, config);
      const auto rec = make_record(cell, inst, result, solve_timing);
      std::optional<OracleRecord> orec;
      if (solve_oracle) orec = make_record(inst, solve_exact(inst, solve_nodes));
      if (!solve_out.empty()) {
        auto out = open_out(solve_out);
        if (orec) out << to_line(*orec) << "\n";
        out << to_line(rec) << "\n";
      }
      std::cout << "instance " << inst.name() << "  feasible " << (result.feasible_found ? "yes" : "no")
                << "  cost " << format_number(result.censored_cost()) << "  generations " << result.generations
                << "  decodes " << result.decodes << "\n";
      if (orec && orec->cost && result.best_feasible_cost)
        std::cout << "optimum " << *orec->cost << "  gap " << (*result.best_feasible_cost - *orec->cost) << "\n";
      if (!solve_schedule.empty()) {
        auto out = open_out(solve_schedule);
        write_schedule(out, inst, result.best_schedule);
      }
    } else if (bench->parsed()) {
      const auto instances = load_instances(bench_instances);
      if (bench_grid == "decoders") spec.cells = decoder_grid();
      else if (bench_grid == "orderings") spec.cells = ordering_grid(parse_crossover(bench_flags.crossover));
      else if (bench_grid == "wp-sweep") spec.cells = preference_sweep_grid(sweep_values, parse_crossover(bench_flags.crossover));
      else {
        Cell cell{bench_flags.config(instances.front().grades())};
        cell.random_baseline = bench_grid == "random";
        spec.cells = {cell};
      }
      std::set<std::tuple<std::string, std::string, std::uint64_t>> done;
      std::set<std::string> solved;
      if (resume && fs::exists(bench_out)) {
        const auto prior = read_results_file(bench_out);
        for (const auto& r : prior.runs) done.insert({r.cell, r.instance, r.seed});
        for (const auto& o : prior.oracles) solved.insert(o.instance);
      }
      auto out = open_out(bench_out, resume);
      if (bench_oracle)
        for (const auto& inst : instances)
          if (!solved.count(inst.name())) out << to_line(make_record(inst, solve_exact(inst, bench_nodes))) << "\n";
      long written = 0;
      run_bench(
          spec, instances,
          [&](const RunRecord& r) {
            out << to_line(r) << "\n";
            out.flush();
            ++written;
          },
          threads, done);
      std::cout << "wrote " << written << " run records to " << bench_out << "\n";
    } else if (oracle->parsed()) {
      const auto instances = load_instances(oracle_instances);
      std::ofstream file;
      if (!oracle_out.empty()) file = open_out(oracle_out, true);
      std::ostream& out = oracle_out.empty() ? std::cout : file;
      for (const auto& inst : instances) {
        const auto r = solve_exact(inst, oracle_nodes);
        out << to_line(make_record(inst, r)) << "\n";
        if (!oracle_schedule.empty() && r.status == OracleStatus::optimal) {
          auto sched = open_out(oracle_schedule);
          write_schedule(sched, inst, r.optimal_schedule);
        }
      }
    } else if (report->parsed()) {
      const auto cells = summarize(read_results_file(report_in), report_censor);
      write_report(cells, std::cout);
      if (!report_csv.empty()) {
        auto out = open_out(report_csv);
        write_summary_csv(cells, out);
      }
      if (!report_detail.empty()) {
        auto out = open_out(report_detail);
        write_detail_csv(cells, out, report_censor);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "nurse_ga: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
