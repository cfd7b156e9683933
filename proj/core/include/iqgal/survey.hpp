#pragma once

// Range scans over imaginary quadratic discriminants, the three splitting
// tables, and row persistence (CSV / JSON lines) with resumable checkpoints.

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iqgal/classify.hpp"

namespace iqgal {

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PersistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SurveyMode { Table1, Table2, Table3, Raw };

std::string to_string(SurveyMode m);
SurveyMode survey_mode_from_string(const std::string& s);

struct SurveyConfig {
  i64 d_min = 3;  // bounds on |D|, inclusive
  i64 d_max = 1000;
  std::vector<i64> primes;
  SurveyMode mode = SurveyMode::Raw;
  i64 n_p = 1;
  i64 b_p = 0;
  bool single_factor = false;
  int workers = 1;
  std::filesystem::path checkpoint_path;
  i64 block_size = 10'000;

  /// Throws InvalidConfig.
  void validate() const;
};

struct LocalTag {
  i64 p = 0;
  LocalBehavior behavior = LocalBehavior::Inert;
  friend bool operator==(const LocalTag&, const LocalTag&) = default;
};

struct SurveyRow {
  ClassificationRecord record;
  std::vector<LocalTag> local;  // one per reported prime
  friend bool operator==(const SurveyRow&, const SurveyRow&) = default;
};

/// Whether a field with class number h is kept under the config's mode.
bool survey_keeps(const SurveyConfig& config, i64 h);

/// Classifies every fundamental discriminant with d_min <= |D| <= d_max kept
/// by the mode, ascending |D|. Output does not depend on the worker count.
std::vector<SurveyRow> scan(const SurveyConfig& config);

/// Streaming form: `sink` is called on the calling thread, in |D| order.
void scan(const SurveyConfig& config, const std::function<void(const SurveyRow&)>& sink);

enum class RowFormat { Csv, Json };

RowFormat row_format_from_string(const std::string& s);

inline constexpr const char* kCsvHeader = "D,h,class_group,two_rank,p,local_behavior,status,verdict,assumes_converse";

/// CSV lines for one row (one per reported prime), without trailing newline.
std::vector<std::string> csv_lines(const SurveyRow& row);
std::string json_line(const SurveyRow& row);

std::string record_to_json(const ClassificationRecord& r, int indent = -1);
ClassificationRecord record_from_json(const std::string& text);

void persist(const std::vector<SurveyRow>& rows, const std::filesystem::path& path, RowFormat format);
std::vector<SurveyRow> load_rows(const std::filesystem::path& path, RowFormat format);

/// Scans straight to `out`, one block at a time. With a checkpoint path the
/// scan resumes after the last completed block of a previous run with the
/// same configuration, and the final file is byte-identical to an
/// uninterrupted run. `stop_after_blocks` (> 0) stops early, for testing.
void scan_to_file(const SurveyConfig& config, const std::filesystem::path& out, RowFormat format,
                  i64 stop_after_blocks = 0);

struct Table1Row {
  i64 p = 0;
  i64 count = 0;
  i64 nonsplit = 0;
  std::vector<i64> split;  // -D, ascending
};

/// Fields with prime class number h = p <= max_p and |D| <= bound.
std::vector<Table1Row> table1(i64 max_p, i64 bound, int workers = 1);

struct SplittingFractions {
  i64 p = 0;
  i64 n = 0;
  i64 b = 0;
  i64 noninjective = 0;
  double f = 0;  // fraction of sampled fields with phi_p not injective
  double p_f = 0;
  // Per local behavior of p (split, inert, ramified): sample size, count,
  // and p * fraction when the stratum is non-empty.
  std::array<i64, 3> stratum_size{};
  std::array<i64, 3> stratum_noninjective{};
  std::array<std::optional<double>, 3> stratum_p_f{};
  i64 last_abs_disc = 0;
};

/// The first n fields with |D| > b whose class number is divisible by p
/// exactly once.
SplittingFractions table2(i64 p, i64 n, i64 b, int workers = 1);
SplittingFractions table3(i64 p, i64 n, i64 b, int workers = 1);

struct IndependenceProbe {
  i64 p = 0, q = 0, n = 0;
  double f_p = 0, f_q = 0, joint = 0;
  double product = 0;
  double std_error = 0;
  bool within_three_sigma() const;
};

/// Fields with p and q both dividing h exactly once: compares the joint
/// non-injectivity fraction against the product of the marginals.
IndependenceProbe independence_probe(i64 p, i64 q, i64 n, i64 b, int workers = 1);

}  // namespace iqgal
