#include "cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "iqgal/classify.hpp"
#include "iqgal/survey.hpp"
#include "verify.hpp"

namespace iqgal::cli {

namespace {

int default_workers() {
  if (const char* env = std::getenv("IQGAL_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Sample sizes and lower bounds used for the splitting-fraction tables.
struct FullScale {
  i64 n, b;
};

const std::map<i64, FullScale>& full_scale() {
  static const std::map<i64, FullScale> table = {
      {3, {300, 10'000'000}},   {5, {500, 10'000'000}},   {7, {700, 10'000'000}},   {11, {1100, 10'000'000}},
      {13, {1300, 10'000'000}}, {17, {1700, 10'000'000}}, {19, {1900, 10'000'000}}, {23, {2300, 10'000'000}},
      {29, {2900, 1'000'000}},  {31, {3100, 1'000'000}},  {37, {3700, 1'000'000}},  {41, {4100, 1'000'000}},
      {43, {2150, 1'000'000}},  {47, {470, 10'000'000}},  {53, {530, 100'000}},     {59, {590, 1'000'000}},
      {61, {1830, 100'000}},    {67, {670, 1'000'000}},   {71, {1000, 100'000}},    {73, {3650, 100'000}},
      {79, {1399, 10'000'000}}, {83, {1660, 100'000}},    {89, {890, 100'000}},     {97, {970, 100'000'000}},
  };
  return table;
}

std::vector<i64> parse_primes(const std::string& s) {
  std::vector<i64> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(std::stoll(part));
  }
  return out;
}

void print_record(std::ostream& out, const ClassificationRecord& r) {
  out << "D = " << r.discriminant << "\n";
  out << "h = " << r.h << "\n";
  out << "class group: ";
  if (r.class_group.empty()) out << "trivial";
  for (std::size_t i = 0; i < r.class_group.size(); ++i) out << (i ? " x " : "") << "Z/" << r.class_group[i];
  out << "\n2-rank: " << r.two_rank << "\n";
  for (const auto& ps : r.per_prime) out << "p = " << ps.p << ": " << to_string(ps.status) << "\n";
  out << "verdict: " << to_string(r.verdict) << (r.assumes_converse ? " (assumes converse)" : "") << "\n";
  out << verdict_description(r) << "\n";
}

void print_table1(std::ostream& out, const std::vector<Table1Row>& rows, bool csv) {
  if (csv) {
    out << "p,count,nonsplit,split\n";
    for (const auto& r : rows) {
      out << r.p << "," << r.count << "," << r.nonsplit << ",";
      for (std::size_t i = 0; i < r.split.size(); ++i) out << (i ? " " : "") << r.split[i];
      out << "\n";
    }
    return;
  }
  out << std::setw(4) << "p" << std::setw(8) << "count" << std::setw(10) << "nonsplit"
      << "  split -D\n";
  for (const auto& r : rows) {
    out << std::setw(4) << r.p << std::setw(8) << r.count << std::setw(10) << r.nonsplit << "  ";
    for (std::size_t i = 0; i < r.split.size(); ++i) out << (i ? ", " : "") << r.split[i];
    out << "\n";
  }
}

std::string fraction(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << *v;
  return os.str();
}

void print_fractions(std::ostream& out, const SplittingFractions& s, bool stratified, bool csv) {
  if (csv) {
    out << "p,N,B,noninjective,p_f";
    if (stratified) out << ",split,inert,ramified";
    out << "\n" << s.p << "," << s.n << "," << s.b << "," << s.noninjective << "," << fraction(s.p_f);
    if (stratified) {
      for (const auto& v : s.stratum_p_f) out << "," << (v ? fraction(v) : "");
    }
    out << "\n";
    return;
  }
  out << std::setw(4) << "p" << std::setw(8) << "N" << std::setw(12) << "B" << std::setw(8) << "p*f_p";
  if (stratified) out << std::setw(8) << "split" << std::setw(8) << "inert" << std::setw(10) << "ramified";
  out << "\n"
      << std::setw(4) << s.p << std::setw(8) << s.n << std::setw(12) << s.b << std::setw(8) << fraction(s.p_f);
  if (stratified) {
    out << std::setw(8) << fraction(s.stratum_p_f[0]) << std::setw(8) << fraction(s.stratum_p_f[1]) << std::setw(10)
        << fraction(s.stratum_p_f[2]);
  }
  out << "\n";
  if (stratified) {
    out << "stratum sizes: " << s.stratum_size[0] << " split, " << s.stratum_size[1] << " inert, "
        << s.stratum_size[2] << " ramified\n";
  }
  out << "last |D| sampled: " << s.last_abs_disc << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimality of the absolute abelian Galois group of imaginary quadratic fields"};
  app.name("iqgal");
  app.require_subcommand(1, 1);

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Classify one field by its discriminant");
  i64 disc = 0;
  bool abs_flag = false, json_flag = false;
  classify_cmd->add_option("-d,--disc", disc, "Fundamental discriminant D < 0")->required()->allow_extra_args(false);
  classify_cmd->add_flag("--abs", abs_flag, "Read the value given to -d as |D|");
  classify_cmd->add_flag("--json", json_flag, "Print the record as JSON");

  // survey
  auto* survey_cmd = app.add_subcommand("survey", "Classify a range of discriminants");
  SurveyConfig config;
  config.workers = default_workers();
  std::string primes_arg, mode_arg = "raw", format_arg = "csv", out_path, checkpoint;
  survey_cmd->add_option("--min", config.d_min, "Smallest |D|")->capture_default_str();
  survey_cmd->add_option("--max", config.d_max, "Largest |D|")->capture_default_str();
  survey_cmd->add_option("--primes", primes_arg, "Tracked primes, comma separated");
  survey_cmd->add_option("--mode", mode_arg, "table1, table2, table3 or raw")->capture_default_str();
  survey_cmd->add_flag("--single-factor", config.single_factor, "Require p || h in table2/table3 modes");
  survey_cmd->add_option("--out", out_path, "Output file (standard output when absent)");
  survey_cmd->add_option("--format", format_arg, "csv or json")->capture_default_str();
  survey_cmd->add_option("--workers", config.workers, "Worker threads (default from IQGAL_WORKERS)");
  survey_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file; requires --out");
  survey_cmd->add_option("--block-size", config.block_size, "Discriminants per work block")->capture_default_str();

  // tables
  auto* tables_cmd = app.add_subcommand("tables", "Print class number and splitting tables");
  int table_id = 0;
  i64 p = 0, n_p = 0, b_p = 100'000, bound = 1000, max_p = 7, q_indep = 0;
  bool csv_flag = false, full_flag = false;
  int table_workers = default_workers();
  tables_cmd->add_option("--table", table_id, "1, 2 or 3")->required();
  tables_cmd->add_option("--p", p, "Prime (table 1: a single row)");
  tables_cmd->add_option("--N", n_p, "Sample size (default 100 p)");
  tables_cmd->add_option("--B", b_p, "Lower bound on |D|")->capture_default_str();
  tables_cmd->add_option("--bound", bound, "Table 1: largest |D|")->capture_default_str();
  tables_cmd->add_option("--max-p", max_p, "Table 1: largest class number")->capture_default_str();
  tables_cmd->add_option("--independence", q_indep, "Table 2: probe independence against a second prime q");
  tables_cmd->add_flag("--full-scale", full_flag, "Use the full-size N and B for p (tables 2 and 3)");
  tables_cmd->add_flag("--csv", csv_flag, "CSV instead of aligned text");
  tables_cmd->add_option("--workers", table_workers, "Worker threads (default from IQGAL_WORKERS)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run oracle cross-check suites");
  std::string suite = "all";
  i64 verify_bound = 100'000;
  verify_cmd->add_option("--suite", suite, "forms, local, two or all")
      ->check(CLI::IsMember({"forms", "local", "two", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--bound", verify_bound, "Largest |D| for the two suite")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "iqgal: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (classify_cmd->parsed()) {
      const i64 d = abs_flag ? -disc : disc;
      ClassificationRecord r;
      try {
        r = classify(d, {.short_circuit = false});
      } catch (const DiscriminantError& e) {
        err << "iqgal: " << e.what() << "\n";
        return kBadDiscriminant;
      }
      if (json_flag) {
        out << record_to_json(r, 2) << "\n";
      } else {
        print_record(out, r);
      }
      return kOk;
    }

    if (survey_cmd->parsed()) {
      try {
        config.primes = parse_primes(primes_arg);
        config.mode = survey_mode_from_string(mode_arg);
      } catch (const std::exception& e) {
        err << "iqgal: " << e.what() << "\n";
        return kUsage;
      }
      RowFormat format;
      try {
        format = row_format_from_string(format_arg);
      } catch (const InvalidConfig& e) {
        err << "iqgal: " << e.what() << "\n";
        return kUsage;
      }
      config.checkpoint_path = checkpoint;
      if (!checkpoint.empty() && out_path.empty()) {
        err << "iqgal: --checkpoint requires --out\n";
        return kUsage;
      }
      if (!out_path.empty()) {
        scan_to_file(config, out_path, format);
        return kOk;
      }
      if (format == RowFormat::Csv) out << kCsvHeader << "\n";
      scan(config, [&](const SurveyRow& row) {
        if (format == RowFormat::Json) {
          out << json_line(row) << "\n";
        } else {
          for (const auto& line : csv_lines(row)) out << line << "\n";
        }
      });
      return kOk;
    }

    if (tables_cmd->parsed()) {
      if (table_id < 1 || table_id > 3) {
        err << "iqgal: --table must be 1, 2 or 3\n";
        return kUsage;
      }
      if (table_id == 1) {
        if (p != 0) {
          if (!is_prime(p)) {
            err << "iqgal: --p must be prime\n";
            return kUsage;
          }
          max_p = p;
        }
        auto rows = table1(max_p, bound, table_workers);
        if (p != 0) std::erase_if(rows, [&](const Table1Row& r) { return r.p != p; });
        print_table1(out, rows, csv_flag);
        return kOk;
      }
      if (p == 0 || !is_prime(p)) {
        err << "iqgal: tables 2 and 3 need a prime --p\n";
        return kUsage;
      }
      if (full_flag) {
        const auto it = full_scale().find(p);
        if (it == full_scale().end()) {
          err << "iqgal: no full-size parameters for p = " << p << "\n";
          return kUsage;
        }
        if (n_p == 0) n_p = it->second.n;
        b_p = it->second.b;
      }
      if (n_p == 0) n_p = 100 * p;
      if (q_indep != 0) {
        const IndependenceProbe probe = independence_probe(p, q_indep, n_p, b_p, table_workers);
        out << std::fixed << std::setprecision(4) << "p = " << probe.p << ", q = " << probe.q << ", N = " << probe.n
            << "\nf_p = " << probe.f_p << ", f_q = " << probe.f_q << "\njoint = " << probe.joint
            << ", product = " << probe.product << ", standard error = " << probe.std_error << "\n"
            << (probe.within_three_sigma() ? "consistent with independence" : "outside three standard errors")
            << "\n";
        return kOk;
      }
      const SplittingFractions s = table_id == 2 ? table2(p, n_p, b_p, table_workers) : table3(p, n_p, b_p, table_workers);
      print_fractions(out, s, table_id == 3, csv_flag);
      return kOk;
    }

    if (verify_cmd->parsed()) {
      std::vector<VerifyReport> reports;
      if (suite == "forms" || suite == "all") reports.push_back(verify_forms());
      if (suite == "local" || suite == "all") reports.push_back(verify_local());
      if (suite == "two" || suite == "all") reports.push_back(verify_two(verify_bound));
      bool ok = true;
      for (const auto& r : reports) {
        print_report(out, r);
        ok &= r.ok;
      }
      return ok ? kOk : kDisagreement;
    }
  } catch (const InvalidConfig& e) {
    err << "iqgal: " << e.what() << "\n";
    return kUsage;
  } catch (const DiscriminantError& e) {
    err << "iqgal: " << e.what() << "\n";
    return kBadDiscriminant;
  } catch (const std::exception& e) {
    err << "iqgal: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace iqgal::cli
