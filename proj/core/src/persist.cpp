#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "iqgal/survey.hpp"
#include "parallel.hpp"

namespace iqgal {

namespace {

using nlohmann::json;

std::string group_string(const std::vector<i64>& factors) {
  if (factors.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "x" : "") + std::to_string(factors[i]);
  return s;
}

std::vector<i64> parse_group(const std::string& s) {
  std::vector<i64> out;
  if (s == "1") return out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, 'x')) out.push_back(std::stoll(part));
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

json row_to_json(const SurveyRow& row) {
  const ClassificationRecord& r = row.record;
  json j;
  j["D"] = r.discriminant;
  j["h"] = r.h;
  j["class_group"] = r.class_group;
  j["two_rank"] = r.two_rank;
  j["per_prime"] = json::array();
  for (const auto& ps : r.per_prime) j["per_prime"].push_back({{"p", ps.p}, {"status", to_string(ps.status)}});
  j["verdict"] = to_string(r.verdict);
  j["assumes_converse"] = r.assumes_converse;
  j["torsion"] = {{"w", r.torsion.w},
                  {"special_case", r.torsion.special_case},
                  {"excluded_summands", r.torsion.excluded_summands},
                  {"shape", r.torsion.describe()}};
  if (!row.local.empty()) {
    j["local"] = json::array();
    for (const auto& t : row.local) j["local"].push_back({{"p", t.p}, {"behavior", to_string(t.behavior)}});
  }
  return j;
}

ClassificationRecord record_from(const json& j) {
  ClassificationRecord r;
  r.discriminant = j.at("D").get<i64>();
  r.h = j.at("h").get<i64>();
  r.class_group = j.at("class_group").get<std::vector<i64>>();
  r.two_rank = j.at("two_rank").get<int>();
  for (const auto& ps : j.at("per_prime")) {
    r.per_prime.push_back({ps.at("p").get<i64>(), injectivity_status_from_string(ps.at("status").get<std::string>())});
  }
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.assumes_converse = j.at("assumes_converse").get<bool>();
  r.torsion = torsion_descriptor(FundamentalDiscriminant::validate(r.discriminant));
  return r;
}

// FNV-1a, 64 bit.
struct Digest {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void update(const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
  }
};

std::string block_text(const std::vector<SurveyRow>& rows, RowFormat format) {
  std::string text;
  for (const auto& row : rows) {
    if (format == RowFormat::Json) {
      text += json_line(row) + "\n";
    } else {
      for (const auto& line : csv_lines(row)) text += line + "\n";
    }
  }
  return text;
}

std::string fingerprint(const SurveyConfig& c, RowFormat format) {
  std::ostringstream os;
  os << c.d_min << ':' << c.d_max << ':' << to_string(c.mode) << ':' << c.n_p << ':' << c.b_p << ':'
     << c.single_factor << ':' << c.block_size << ':' << (format == RowFormat::Json ? "json" : "csv") << ':';
  for (i64 p : c.primes) os << p << ';';
  return os.str();
}

struct Checkpoint {
  std::string config;
  i64 block = -1;  // last completed block
  std::uintmax_t bytes = 0;
  std::string digest;
};

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  Checkpoint cp;
  std::string magic, key;
  int version = 0;
  if (!(in >> magic >> version) || magic != "iqgal-checkpoint" || version != 1) {
    throw PersistError("unreadable checkpoint: " + path.string());
  }
  if (!(in >> key >> cp.config) || key != "config" || !(in >> key >> cp.block) || key != "block" ||
      !(in >> key >> cp.bytes) || key != "bytes" || !(in >> key >> cp.digest) || key != "digest") {
    throw PersistError("corrupt checkpoint: " + path.string());
  }
  return cp;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "iqgal-checkpoint 1\nconfig " << cp.config << "\nblock " << cp.block << "\nbytes " << cp.bytes
        << "\ndigest " << cp.digest << "\n";
    if (!out) throw PersistError("cannot write checkpoint: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Digest of the first `bytes` bytes of a file, or nullopt if it is shorter.
std::optional<Digest> digest_prefix(const std::filesystem::path& path, std::uintmax_t bytes) {
  std::error_code ec;
  if (std::filesystem::file_size(path, ec) < bytes || ec) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  std::string buf(bytes, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(bytes));
  Digest d;
  d.update(buf);
  return d;
}

}  // namespace

RowFormat row_format_from_string(const std::string& s) {
  if (s == "csv") return RowFormat::Csv;
  if (s == "json" || s == "jsonl") return RowFormat::Json;
  throw InvalidConfig("unknown output format: " + s);
}

std::vector<std::string> csv_lines(const SurveyRow& row) {
  const ClassificationRecord& r = row.record;
  const std::string head = std::to_string(r.discriminant) + "," + std::to_string(r.h) + "," +
                           group_string(r.class_group) + "," + std::to_string(r.two_rank) + ",";
  const std::string tail = "," + to_string(r.verdict) + "," + (r.assumes_converse ? "true" : "false");
  std::vector<std::string> lines;
  if (row.local.empty()) {
    lines.push_back(head + ",," + tail);
    return lines;
  }
  for (const auto& t : row.local) {
    lines.push_back(head + std::to_string(t.p) + "," + to_string(t.behavior) + "," + to_string(r.status_at(t.p)) +
                    tail);
  }
  return lines;
}

std::string json_line(const SurveyRow& row) { return row_to_json(row).dump(); }

std::string record_to_json(const ClassificationRecord& r, int indent) {
  json j = row_to_json({r, {}});
  j.erase("local");
  return j.dump(indent);
}

ClassificationRecord record_from_json(const std::string& text) {
  try {
    return record_from(json::parse(text));
  } catch (const json::exception& e) {
    throw PersistError(std::string("bad record: ") + e.what());
  }
}

void persist(const std::vector<SurveyRow>& rows, const std::filesystem::path& path, RowFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistError("cannot open " + path.string());
  if (format == RowFormat::Csv) out << kCsvHeader << "\n";
  out << block_text(rows, format);
  if (!out) throw PersistError("write failed: " + path.string());
}

std::vector<SurveyRow> load_rows(const std::filesystem::path& path, RowFormat format) {
  std::ifstream in(path);
  if (!in) throw PersistError("cannot open " + path.string());
  std::vector<SurveyRow> rows;
  std::string line;
  if (format == RowFormat::Json) {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        SurveyRow row{record_from(j), {}};
        if (j.contains("local")) {
          for (const auto& t : j["local"]) {
            row.local.push_back({t.at("p").get<i64>(), local_behavior_from_string(t.at("behavior").get<std::string>())});
          }
        }
        rows.push_back(std::move(row));
      } catch (const json::exception& e) {
        throw PersistError(std::string("bad JSON row: ") + e.what());
      }
    }
    return rows;
  }

  if (!std::getline(in, line) || line != kCsvHeader) throw PersistError("missing CSV header in " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 9) throw PersistError("bad CSV row: " + line);
    try {
      const i64 d = std::stoll(cells[0]);
      if (rows.empty() || rows.back().record.discriminant != d) {
        SurveyRow row;
        ClassificationRecord& r = row.record;
        r.discriminant = d;
        r.h = std::stoll(cells[1]);
        r.class_group = parse_group(cells[2]);
        r.two_rank = std::stoi(cells[3]);
        r.verdict = verdict_from_string(cells[7]);
        r.assumes_converse = cells[8] == "true";
        r.torsion = torsion_descriptor(FundamentalDiscriminant::validate(d));
        rows.push_back(std::move(row));
      }
      SurveyRow& row = rows.back();
      if (cells[4].empty()) continue;
      const i64 p = std::stoll(cells[4]);
      row.local.push_back({p, local_behavior_from_string(cells[5])});
      if (row.record.h % p == 0) row.record.per_prime.push_back({p, injectivity_status_from_string(cells[6])});
    } catch (const std::logic_error&) {
      throw PersistError("bad CSV row: " + line);
    }
  }
  return rows;
}

void scan_to_file(const SurveyConfig& config, const std::filesystem::path& out, RowFormat format,
                  i64 stop_after_blocks) {
  config.validate();
  const i64 blocks =
      config.d_min > config.d_max ? 0 : (config.d_max - config.d_min + config.block_size) / config.block_size;
  const bool checkpointing = !config.checkpoint_path.empty();

  Checkpoint cp{fingerprint(config, format), -1, 0, Digest{}.hex()};
  Digest digest;
  if (checkpointing) {
    if (auto prev = read_checkpoint(config.checkpoint_path)) {
      if (prev->config != cp.config) throw PersistError("checkpoint belongs to a different survey configuration");
      auto d = digest_prefix(out, prev->bytes);
      if (!d || d->hex() != prev->digest) throw PersistError("output file does not match checkpoint");
      std::filesystem::resize_file(out, prev->bytes);
      cp = *prev;
      digest = *d;
    }
  }

  std::ofstream file;
  if (cp.block < 0) {
    file.open(out, std::ios::binary | std::ios::trunc);
    if (format == RowFormat::Csv) {
      const std::string header = std::string(kCsvHeader) + "\n";
      file << header;
      digest.update(header);
      cp.bytes = header.size();
    }
  } else {
    file.open(out, std::ios::binary | std::ios::app);
  }
  if (!file) throw PersistError("cannot open " + out.string());

  i64 written = 0;
  std::function<std::vector<SurveyRow>(i64)> compute = [&](i64 b) {
    std::vector<SurveyRow> rows;
    const i64 lo = config.d_min + b * config.block_size;
    SurveyConfig slice = config;
    slice.d_min = lo;
    slice.d_max = std::min(config.d_max, lo + config.block_size - 1);
    slice.workers = 1;
    scan(slice, [&](const SurveyRow& r) { rows.push_back(r); });
    return rows;
  };
  std::function<bool(i64, std::vector<SurveyRow>&&)> consume = [&](i64 b, std::vector<SurveyRow>&& rows) {
    const std::string text = block_text(rows, format);
    file << text;
    file.flush();
    if (!file) throw PersistError("write failed: " + out.string());
    digest.update(text);
    cp.block = b;
    cp.bytes += text.size();
    cp.digest = digest.hex();
    if (checkpointing) write_checkpoint(config.checkpoint_path, cp);
    ++written;
    return stop_after_blocks <= 0 || written < stop_after_blocks;
  };
  detail::ordered_blocks<std::vector<SurveyRow>>(cp.block + 1, blocks, config.workers, compute, consume);
}

}  // namespace iqgal
