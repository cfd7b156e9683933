#include "cli.hpp"

#include <filesystem>
#include <sstream>

#include "gtest/gtest.h"
#include "iqgal/survey.hpp"
#include "json.hpp"

namespace iqgal::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "iqgal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(CliTest, Classify) {
  const auto r = invoke({"classify", "-d", "-20"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("verdict: MINIMAL"), std::string::npos);

  const auto r107 = invoke({"classify", "-d", "-107"});
  EXPECT_EQ(r107.code, kOk);
  EXPECT_NE(r107.out.find("NOT_MINIMAL"), std::string::npos);
  EXPECT_NE(r107.out.find("p = 3: noninjective"), std::string::npos);

  EXPECT_EQ(invoke({"classify", "--disc", "107", "--abs"}).out, r107.out);
}

TEST(CliTest, ClassifyErrors) {
  EXPECT_EQ(invoke({"classify", "-d", "-12"}).code, kBadDiscriminant);
  EXPECT_EQ(invoke({"classify", "-d", "20"}).code, kBadDiscriminant);
  EXPECT_EQ(invoke({"classify"}).code, kUsage);
  EXPECT_EQ(invoke({"classify", "-d", "abc"}).code, kUsage);
  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kUsage);
}

TEST(CliTest, ClassifyJsonRoundTrips) {
  const auto r = invoke({"classify", "-d", "-3299", "--json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["D"], -3299);
  EXPECT_EQ(j["class_group"], (std::vector<i64>{3, 9}));
  EXPECT_EQ(record_from_json(r.out), classify(-3299, {.short_circuit = false}));
}

TEST(CliTest, Tables) {
  const auto r = invoke({"tables", "--table", "1", "--bound", "6000"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("859, 1163, 2707, 5107"), std::string::npos);
  EXPECT_NE(r.out.find("107, 331, 643"), std::string::npos);

  const auto csv = invoke({"tables", "--table", "1", "--bound", "1000", "--p", "3", "--csv"});
  EXPECT_EQ(csv.out, "p,count,nonsplit,split\n3,16,13,107 331 643\n");

  EXPECT_EQ(invoke({"tables", "--table", "4"}).code, kUsage);
  EXPECT_EQ(invoke({"tables", "--table", "2"}).code, kUsage);
  EXPECT_EQ(invoke({"tables", "--table", "2", "--p", "3", "--N", "0"}).code, kOk);  // 0 selects the default size

  const auto t3 = invoke({"tables", "--table", "3", "--p", "3", "--N", "30", "--B", "1000"});
  EXPECT_EQ(t3.code, kOk);
  EXPECT_NE(t3.out.find("ramified"), std::string::npos);
  const auto probe = invoke({"tables", "--table", "2", "--p", "3", "--independence", "5", "--N", "20", "--B", "1000"});
  EXPECT_EQ(probe.code, kOk);
  EXPECT_NE(probe.out.find("joint"), std::string::npos);
}

TEST(CliTest, Survey) {
  const auto r = invoke({"survey", "--min", "3", "--max", "500", "--mode", "table1", "--primes", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 18);

  const auto dir = std::filesystem::temp_directory_path() / "iqgal_cli_survey";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto out = (dir / "rows.jsonl").string();
  const auto s = invoke({"survey", "--max", "2000", "--format", "json", "--out", out, "--checkpoint",
                         (dir / "ckpt").string(), "--workers", "2"});
  EXPECT_EQ(s.code, kOk) << s.err;
  EXPECT_EQ(load_rows(out, RowFormat::Json).size(), scan(SurveyConfig{.d_min = 3, .d_max = 2000}).size());
  std::filesystem::remove_all(dir);

  EXPECT_EQ(invoke({"survey", "--mode", "nope"}).code, kUsage);
  EXPECT_EQ(invoke({"survey", "--format", "xml"}).code, kUsage);
  EXPECT_EQ(invoke({"survey", "--primes", "4"}).code, kUsage);
  EXPECT_EQ(invoke({"survey", "--checkpoint", "x"}).code, kUsage);
  EXPECT_NE(invoke({"survey", "--max", "100", "--out", "/nonexistent/dir/x.csv"}).code, kOk);
}

TEST(CliTest, Verify) {
  EXPECT_EQ(invoke({"verify", "--suite", "forms"}).code, kOk);
  EXPECT_EQ(invoke({"verify", "--suite", "local"}).code, kOk);
  const auto two = invoke({"verify", "--suite", "two", "--bound", "5000"});
  EXPECT_EQ(two.code, kOk);
  EXPECT_NE(two.out.find("two: ok"), std::string::npos);
  EXPECT_EQ(invoke({"verify", "--suite", "everything"}).code, kUsage);
}

}  // namespace
}  // namespace iqgal::cli
