#include <gtest/gtest.h>

#include <sstream>

#include "nurse/bench.hpp"
#include "nurse/corpus.hpp"
#include "nurse/generator.hpp"

using namespace nurse;

namespace {

RunRecord record(const std::string& cell, const std::string& inst, std::optional<long> cost, std::uint64_t seed = 1) {
  RunRecord r;
  r.cell = cell;
  r.instance = inst;
  r.decoder = "combined";
  r.ordering = "biased";
  r.op = "pmx";
  r.w_p = 0.5;
  r.seed = seed;
  r.feasible = cost.has_value();
  r.best_cost = cost;
  r.best_fitness = cost ? static_cast<double>(*cost) : 60.0;
  r.generations = 31;
  r.decodes = 3100;
  return r;
}

std::string run_to_text(const BenchSpec& spec, const std::vector<Instance>& instances, unsigned threads = 1) {
  std::ostringstream out;
  run_bench(spec, instances, [&](const RunRecord& r) { out << to_line(r) << "\n"; }, threads);
  return out.str();
}

std::vector<Instance> tiny_instances(int count) {
  std::vector<Instance> out;
  for (int x = 0; x < count; ++x) {
    GenParams g;
    g.name = indexed_name("tiny", x);
    g.nurses = 8;
    g.seed = 40 + static_cast<std::uint64_t>(x);
    out.push_back(generate(g));
  }
  return out;
}

}  // namespace

TEST(Summary, AllInfeasibleCellIsCensored) {
  Results res;
  for (std::uint64_t s = 1; s <= 5; ++s) res.runs.push_back(record("c", "w", std::nullopt, s));
  const auto cells = summarize(res);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_DOUBLE_EQ(cells[0].feasibility, 0.0);
  EXPECT_DOUBLE_EQ(cells[0].cost, 100.0);
}

TEST(Summary, SingleRun) {
  Results res;
  res.runs.push_back(record("c", "w", 7));
  const auto cells = summarize(res);
  EXPECT_DOUBLE_EQ(cells[0].feasibility, 1.0);
  EXPECT_DOUBLE_EQ(cells[0].cost, 7.0);
  EXPECT_EQ(cells[0].runs, 1);
}

TEST(Summary, FeasibilityAveragedPerInstance) {
  Results res;
  res.runs.push_back(record("c", "a", 10, 1));
  res.runs.push_back(record("c", "a", std::nullopt, 2));
  res.runs.push_back(record("c", "b", 4, 1));
  res.runs.push_back(record("c", "b", 6, 2));
  res.oracles.push_back({"a", "optimal", 10, 5});
  res.oracles.push_back({"b", "optimal", 3, 5});
  const auto cells = summarize(res);
  EXPECT_DOUBLE_EQ(cells[0].feasibility, 0.75);
  EXPECT_DOUBLE_EQ(cells[0].cost, 7.0);  // best per instance: 10 and 4
  EXPECT_EQ(cells[0].instances_with_optimum, 2);
  EXPECT_EQ(cells[0].instances_at_optimum, 1);
  EXPECT_EQ(cells[0].instances[1].within3, 2);
}

TEST(Report, EmptyResultsPrintHeader) {
  std::ostringstream out;
  write_report(summarize(Results{}), out);
  EXPECT_EQ(out.str().rfind("cell", 0), 0u);
  EXPECT_NE(out.str().find("feasible%"), std::string::npos);
}

TEST(Report, PivotHasOneCellPerOperator) {
  Results res;
  auto a = record("combined/biased/pmx/wp=0.5", "w", 5);
  auto b = record("combined/biased/order/wp=0.5", "w", std::nullopt);
  b.op = "order";
  res.runs = {a, b};
  std::ostringstream out;
  write_report(summarize(res), out);
  const auto text = out.str();
  const auto pivot = text.find("by decoder and operator");
  ASSERT_NE(pivot, std::string::npos);
  EXPECT_NE(text.find("100.0/5.0", pivot), std::string::npos);
  EXPECT_NE(text.find("0.0/100.0", pivot), std::string::npos);
}

TEST(Report, SweepTableHasOneRowPerWeight) {
  Results res;
  const std::vector<double> weights{0, 0.25, 0.5, 1, 2};
  for (double w : weights) {
    auto r = record("sweep/wp=" + format_number(w), "w", 5);
    r.w_p = w;
    res.runs.push_back(r);
  }
  std::ostringstream out;
  write_report(summarize(res), out);
  const auto text = out.str();
  const auto sweep = text.find("w_p sweep: combined/biased/pmx");
  ASSERT_NE(sweep, std::string::npos);
  std::istringstream lines(text.substr(sweep));
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line) && !line.empty()) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Results, RoundTrip) {
  auto r = record("c", "w", 12, 3);
  r.wall_ms = 1.5;
  auto f = record("c", "w", std::nullopt, 4);
  OracleRecord o{"w", "optimal", 11, 123};
  std::stringstream text;
  text << to_line(r) << "\n\n" << to_line(o) << "\n" << to_line(f) << "\n";
  const auto back = parse_results(text);
  ASSERT_EQ(back.runs.size(), 2u);
  ASSERT_EQ(back.oracles.size(), 1u);
  EXPECT_EQ(to_line(back.runs[0]), to_line(r));
  EXPECT_EQ(to_line(back.runs[1]), to_line(f));
  EXPECT_EQ(to_line(back.oracles[0]), to_line(o));
}

TEST(Results, BadLineReportsNumber) {
  std::stringstream text;
  text << to_line(record("c", "w", 1)) << "\n{\"type\": \"run\"}\n";
  try {
    parse_results(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::stringstream unknown("{\"type\": \"other\"}\n");
  EXPECT_THROW(parse_results(unknown), ParseError);
}

TEST(Bench, CellsShareSeeds) {
  BenchSpec spec;
  spec.runs = 3;
  spec.base_seed = 5;
  spec.cells = {make_cell(DecoderKind::combined, OrderingKind::lexico, CrossoverKind::c1),
                make_cell(DecoderKind::combined, OrderingKind::lexico, CrossoverKind::pmx)};
  std::vector<RunRecord> recs;
  run_bench(spec, tiny_instances(1), [&](const RunRecord& r) { recs.push_back(r); });
  ASSERT_EQ(recs.size(), 6u);
  for (int r = 0; r < 3; ++r) {
    EXPECT_EQ(recs[r].seed, 5u + r);
    EXPECT_EQ(recs[r].seed, recs[3 + r].seed);
  }
}

TEST(Bench, ReplayIsByteIdentical) {
  BenchSpec spec;
  spec.runs = 2;
  spec.cells = {make_cell(DecoderKind::combined, OrderingKind::biased, CrossoverKind::pux, 0.66, true),
                make_cell(DecoderKind::contribution, OrderingKind::rand_cost, CrossoverKind::order),
                random_baseline_cell(DecoderKind::cover, OrderingKind::lexico, 200)};
  const auto inst = tiny_instances(2);
  const auto first = run_to_text(spec, inst);
  EXPECT_EQ(first, run_to_text(spec, inst));
  EXPECT_EQ(first, run_to_text(spec, inst, 3));
  EXPECT_EQ(first.find("wall_ms"), std::string::npos);
}

TEST(Bench, RandomBaselineCell) {
  BenchSpec spec;
  spec.runs = 1;
  spec.cells = {random_baseline_cell(DecoderKind::combined, OrderingKind::lexico, 300)};
  std::vector<RunRecord> recs;
  run_bench(spec, tiny_instances(1), [&](const RunRecord& r) { recs.push_back(r); });
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].op, "random");
  EXPECT_EQ(recs[0].decodes, 300);
  EXPECT_EQ(recs[0].generations, 0);
}

TEST(Bench, ResumeSkipsDoneTriples) {
  BenchSpec spec;
  spec.runs = 2;
  spec.cells = {make_cell(DecoderKind::combined, OrderingKind::lexico, CrossoverKind::order)};
  const auto inst = tiny_instances(1);
  std::vector<RunRecord> recs;
  run_bench(spec, inst, [&](const RunRecord& r) { recs.push_back(r); }, 1,
            {{spec.cells[0].label(), inst[0].name(), 1}});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].seed, 2u);
}

TEST(Grids, Shapes) {
  EXPECT_EQ(decoder_grid().size(), 25u);
  EXPECT_EQ(ordering_grid().size(), 5u);
  const auto sweep = preference_sweep_grid();
  ASSERT_EQ(sweep.size(), 5u);
  EXPECT_DOUBLE_EQ(sweep[0].preference_weight(), 0.1);
  EXPECT_DOUBLE_EQ(sweep[4].preference_weight(), 2.0);
  EXPECT_EQ(make_cell(DecoderKind::combined, OrderingKind::biased, CrossoverKind::pux, 0.66, true).label(),
            "combined/biased/pux66/wp=0.5/bound");
}
