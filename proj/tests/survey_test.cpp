#include "iqgal/survey.hpp"

#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

namespace iqgal {
namespace {

namespace fs = std::filesystem;

class SurveyTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("iqgal_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  fs::path dir_;
};

SurveyConfig raw(i64 lo, i64 hi) {
  SurveyConfig c;
  c.d_min = lo;
  c.d_max = hi;
  return c;
}

TEST_F(SurveyTest, TableOneModeExamples) {
  SurveyConfig c = raw(3, 500);
  c.mode = SurveyMode::Table1;
  c.primes = {2};
  const auto rows = scan(c);
  EXPECT_EQ(rows.size(), 18u);
  int noninjective = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r.record.h, 2);
    noninjective += r.record.status_at(2) == InjectivityStatus::Noninjective;
  }
  EXPECT_EQ(noninjective, 10);

  c.d_max = 1000;
  c.primes = {3};
  EXPECT_EQ(scan(c).size(), 16u);
}

TEST_F(SurveyTest, EmptyRange) {
  EXPECT_TRUE(scan(raw(500, 499)).empty());
  EXPECT_TRUE(scan(raw(12, 12)).empty());  // -12 is not fundamental
}

TEST_F(SurveyTest, RawScanCoversEveryFundamentalDiscriminant) {
  const auto rows = scan(raw(3, 2000));
  i64 expected = 0;
  for (i64 n = 3; n <= 2000; ++n) expected += is_fundamental(-n);
  ASSERT_EQ(static_cast<i64>(rows.size()), expected);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].record.discriminant, rows[i - 1].record.discriminant);
  }
  for (const auto& row : rows) {
    const auto fd = FundamentalDiscriminant::validate(row.record.discriminant);
    for (const auto& tag : row.local) EXPECT_EQ(tag.behavior, kronecker_at(fd, tag.p));
    for (const auto& ps : row.record.per_prime) EXPECT_NE(ps.status, InjectivityStatus::Skipped);
  }
}

TEST_F(SurveyTest, ModesFilterByClassNumber) {
  SurveyConfig c = raw(3, 3000);
  c.mode = SurveyMode::Table2;
  c.primes = {3};
  c.single_factor = true;
  for (const auto& r : scan(c)) {
    EXPECT_EQ(r.record.h % 3, 0);
    EXPECT_NE(r.record.h % 9, 0);
    ASSERT_EQ(r.local.size(), 1u);
    EXPECT_EQ(r.local[0].p, 3);
  }
  EXPECT_TRUE(survey_keeps(c, 6));
  EXPECT_FALSE(survey_keeps(c, 9));
  EXPECT_FALSE(survey_keeps(c, 4));
}

TEST_F(SurveyTest, WorkerCountDoesNotChangeOutput) {
  SurveyConfig c = raw(3, 6000);
  c.block_size = 700;
  const auto one = scan(c);
  c.workers = 4;
  EXPECT_EQ(scan(c), one);
  c.workers = 1;
  scan_to_file(c, dir_ / "a.csv", RowFormat::Csv);
  c.workers = 3;
  scan_to_file(c, dir_ / "b.csv", RowFormat::Csv);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(SurveyTest, ResumeIsByteIdentical) {
  for (RowFormat format : {RowFormat::Csv, RowFormat::Json}) {
    SurveyConfig c = raw(3, 5000);
    c.block_size = 500;
    scan_to_file(c, dir_ / "full.out", format);

    c.checkpoint_path = dir_ / "scan.ckpt";
    fs::remove(c.checkpoint_path);
    scan_to_file(c, dir_ / "part.out", format, 3);
    const std::string partial = slurp(dir_ / "part.out");
    EXPECT_LT(partial.size(), slurp(dir_ / "full.out").size());
    // Simulate a crash that left half a block behind.
    {
      std::ofstream out(dir_ / "part.out", std::ios::app);
      out << "-9999,garbage";
    }
    c.workers = 2;
    scan_to_file(c, dir_ / "part.out", format, 2);
    scan_to_file(c, dir_ / "part.out", format);
    EXPECT_EQ(slurp(dir_ / "part.out"), slurp(dir_ / "full.out"));
    // Resuming a finished scan is a no-op.
    scan_to_file(c, dir_ / "part.out", format);
    EXPECT_EQ(slurp(dir_ / "part.out"), slurp(dir_ / "full.out"));
  }
}

TEST_F(SurveyTest, CheckpointMismatchIsAnError) {
  SurveyConfig c = raw(3, 3000);
  c.block_size = 500;
  c.checkpoint_path = dir_ / "scan.ckpt";
  scan_to_file(c, dir_ / "out.csv", RowFormat::Csv, 1);
  SurveyConfig other = c;
  other.d_max = 4000;
  EXPECT_THROW(scan_to_file(other, dir_ / "out.csv", RowFormat::Csv), PersistError);
  // A corrupted output file no longer matches the recorded digest.
  {
    std::fstream f(dir_ / "out.csv", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(60);
    f.put('#');
  }
  EXPECT_THROW(scan_to_file(c, dir_ / "out.csv", RowFormat::Csv), PersistError);
}

TEST_F(SurveyTest, CsvFormat) {
  SurveyConfig c = raw(20, 23);
  const auto rows = scan(c);
  ASSERT_EQ(rows.size(), 2u);  // -21 and -22 are not discriminants
  persist(rows, dir_ / "rows.csv", RowFormat::Csv);
  const std::string text = slurp(dir_ / "rows.csv");
  EXPECT_EQ(text,
            "D,h,class_group,two_rank,p,local_behavior,status,verdict,assumes_converse\n"
            "-20,2,2,1,2,ramified,injective,MINIMAL,false\n"
            "-23,3,3,0,3,split,injective,MINIMAL,false\n");
}

TEST_F(SurveyTest, CsvTrivialGroupLine) {
  SurveyRow row{classify(-7), {}};
  EXPECT_EQ(csv_lines(row), (std::vector<std::string>{"-7,1,1,0,,,,MINIMAL,false"}));
}

TEST_F(SurveyTest, RoundTrip) {
  SurveyConfig c = raw(3, 3000);
  const auto rows = scan(c);
  for (RowFormat format : {RowFormat::Csv, RowFormat::Json}) {
    persist(rows, dir_ / "rows.out", format);
    EXPECT_EQ(load_rows(dir_ / "rows.out", format), rows);
  }
  for (const auto& row : rows) EXPECT_EQ(record_from_json(record_to_json(row.record)), row.record);
}

TEST_F(SurveyTest, PersistErrors) {
  EXPECT_THROW(persist({}, dir_ / "missing" / "dir" / "x.csv", RowFormat::Csv), PersistError);
  EXPECT_THROW(load_rows(dir_ / "nothing.csv", RowFormat::Csv), PersistError);
  {
    std::ofstream out(dir_ / "bad.csv");
    out << "not,a,header\n";
  }
  EXPECT_THROW(load_rows(dir_ / "bad.csv", RowFormat::Csv), PersistError);
  EXPECT_THROW(record_from_json("{\"D\": -20}"), PersistError);
  EXPECT_THROW(row_format_from_string("xml"), InvalidConfig);
}

TEST_F(SurveyTest, ConfigValidation) {
  SurveyConfig c;
  c.n_p = 0;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = SurveyConfig{};
  c.primes = {4};
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = SurveyConfig{};
  c.d_min = 0;
  EXPECT_THROW(c.validate(), InvalidConfig);
  EXPECT_EQ(survey_mode_from_string("TABLE2"), SurveyMode::Table2);
  EXPECT_THROW(survey_mode_from_string("table9"), InvalidConfig);
}

TEST_F(SurveyTest, TableOne) {
  const auto rows = table1(7, 6000);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].p, 3);
  EXPECT_EQ(rows[1].count, 16);
  EXPECT_EQ(rows[1].nonsplit, 13);
  EXPECT_EQ(rows[1].split, (std::vector<i64>{107, 331, 643}));
  EXPECT_EQ(rows[2].count, 25);
  EXPECT_EQ(rows[2].nonsplit, 19);
  EXPECT_EQ(rows[2].split, (std::vector<i64>{347, 443, 739, 1051, 1123, 1723}));
  EXPECT_EQ(rows[3].count, 31);
  EXPECT_EQ(rows[3].nonsplit, 27);
  EXPECT_EQ(rows[3].split, (std::vector<i64>{859, 1163, 2707, 5107}));
  EXPECT_EQ(table1(7, 6000, 3).back().split, rows.back().split);
}

TEST_F(SurveyTest, TableOneSplitListsAreNotMinimalRows) {
  SurveyConfig c = raw(3, 3000);
  c.mode = SurveyMode::Table1;
  c.primes = {5};
  std::vector<i64> not_minimal;
  for (const auto& r : scan(c)) {
    if (r.record.verdict == Verdict::NotMinimal) not_minimal.push_back(-r.record.discriminant);
  }
  EXPECT_EQ(not_minimal, table1(5, 3000)[2].split);
}

TEST_F(SurveyTest, SplittingFractions) {
  EXPECT_THROW(table2(3, 0, 1000), InvalidConfig);
  EXPECT_THROW(table2(4, 10, 1000), InvalidConfig);

  const auto t = table3(3, 60, 1000);
  EXPECT_EQ(t.n, 60);
  EXPECT_GT(t.last_abs_disc, 1000);
  EXPECT_EQ(t.stratum_size[0] + t.stratum_size[1] + t.stratum_size[2], 60);
  EXPECT_EQ(t.stratum_noninjective[0] + t.stratum_noninjective[1] + t.stratum_noninjective[2], t.noninjective);
  EXPECT_DOUBLE_EQ(t.p_f, 3.0 * t.noninjective / 60.0);
  EXPECT_EQ(table2(3, 60, 1000, 4).noninjective, t.noninjective);

  // One sample leaves two strata empty; they are absent rather than zero.
  const auto tiny = table3(3, 1, 1000);
  int absent = 0;
  for (const auto& v : tiny.stratum_p_f) absent += !v.has_value();
  EXPECT_EQ(absent, 2);
}

TEST_F(SurveyTest, IndependenceProbe) {
  const auto probe = independence_probe(3, 5, 40, 1000);
  EXPECT_EQ(probe.n, 40);
  EXPECT_NEAR(probe.product, probe.f_p * probe.f_q, 1e-12);
  EXPECT_GT(probe.std_error, 0);
  EXPECT_THROW(independence_probe(3, 3, 10, 1000), InvalidConfig);
}

}  // namespace
}  // namespace iqgal
