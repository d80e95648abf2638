#include <gtest/gtest.h>

#include <filesystem>

#include "nurse/corpus.hpp"
#include "nurse/generator.hpp"
#include "nurse/instance_io.hpp"

using namespace nurse;

namespace {
const std::string kData = NURSE_TEST_DATA;
}

TEST(InstanceIo, TwoNurseFixture) {
  const auto inst = read_instance_file(kData + "/two_nurses.json");
  EXPECT_EQ(inst.name(), "two-nurse fixture");
  EXPECT_EQ(inst.grades(), 2);
  EXPECT_EQ(inst.nurse_count(), 2);
  EXPECT_EQ(inst.pattern_count(), 4);
  EXPECT_EQ(inst.demand(0, 0), 1);
  EXPECT_EQ(inst.demand(1, 1), 1);
  EXPECT_EQ(inst.demand(13, 1), 1);
  EXPECT_EQ(inst.demand(13, 0), 0);
  EXPECT_EQ(inst.pattern(2).kind(), PatternKind::night);
  EXPECT_EQ(inst.pattern(3).kind(), PatternKind::combined);

  const auto& a = inst.nurse(0);
  EXPECT_EQ(a.grade, 1);
  EXPECT_EQ(a.worker_type(), WorkerType::standard);
  EXPECT_EQ(a.costs, (std::vector<int>{0, 15, 60, 0}));
  EXPECT_EQ(std::vector<int>(inst.feasible(0).begin(), inst.feasible(0).end()), (std::vector<int>{0, 1, 2}));

  const auto& b = inst.nurse(1);
  EXPECT_EQ(b.worker_type(), WorkerType::special);
  EXPECT_EQ(b.both, 2);
  EXPECT_EQ(b.preference, Side::night);
  EXPECT_EQ(b.costs, (std::vector<int>{0, 0, 0, 4}));
  EXPECT_EQ(std::vector<int>(inst.feasible(1).begin(), inst.feasible(1).end()), (std::vector<int>{3}));
}

TEST(InstanceIo, MalformedDemandRowReportsLine) {
  try {
    read_instance_file(kData + "/bad_demand_row.json");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 9u);
    EXPECT_NE(std::string(e.what()).find("demand row 4"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 9"), std::string::npos);
  }
}

TEST(InstanceIo, SyntaxErrorReportsLine) {
  const std::string text = "{\n  \"grades\": 1,\n  \"demand\": [\n    [0,\n  ]\n}\n";
  try {
    parse_instance(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 4u);
  }
}

TEST(InstanceIo, RejectsBadFields) {
  EXPECT_THROW(parse_instance("[]"), ParseError);
  EXPECT_THROW(parse_instance("{\"grades\": 0}"), ParseError);
  auto inst = generate(GenParams{});
  auto text = write_instance(inst);
  auto broken = text;
  broken.replace(broken.find("\"patterns\": [\n    \"") + 19, 1, "2");
  EXPECT_THROW(parse_instance(broken), ParseError);
  EXPECT_THROW(read_instance_file(kData + "/missing.json"), Error);
}

TEST(InstanceIo, RoundTripGeneratedCorpus) {
  auto recipe = full_corpus();
  auto small = small_corpus(10);
  recipe.insert(recipe.end(), small.begin(), small.end());
  for (const auto& params : recipe) {
    const auto inst = generate(params);
    const auto text = write_instance(inst);
    const auto back = parse_instance(text);
    EXPECT_TRUE(back == inst) << params.name;
    EXPECT_EQ(write_instance(back), text);
  }
}

TEST(InstanceIo, FileRoundTrip) {
  const auto inst = generate(GenParams{});
  const auto path = (std::filesystem::temp_directory_path() / "nurse_io_roundtrip.json").string();
  write_instance_file(inst, path);
  EXPECT_TRUE(read_instance_file(path) == inst);
  std::filesystem::remove(path);
}
