#include "iqgal/survey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace iqgal {

namespace {

constexpr i64 kUnbounded = std::numeric_limits<i64>::max() / 4;

std::optional<SurveyRow> survey_row(i64 n, const SurveyConfig& config) {
  const i64 d = -n;
  if (!is_fundamental(d)) return std::nullopt;
  if (config.mode != SurveyMode::Raw && !survey_keeps(config, class_number(d))) return std::nullopt;

  const FundamentalDiscriminant fd = FundamentalDiscriminant::validate(d);
  const ClassGroupStructure cg = class_group(fd, default_backend(d));
  if (!survey_keeps(config, cg.h)) return std::nullopt;

  SurveyRow row;
  row.record = classify(fd, cg, {.short_circuit = false});
  const std::vector<i64> reported =
      !config.primes.empty() ? config.primes : (cg.h > 1 ? prime_divisors(cg.h) : std::vector<i64>{});
  for (i64 p : reported) row.local.push_back({p, kronecker_at(fd, p)});
  return row;
}

// An empty range (d_min > d_max) has no blocks.
i64 block_count(const SurveyConfig& c) {
  return c.d_min > c.d_max ? 0 : (c.d_max - c.d_min + c.block_size) / c.block_size;
}

std::vector<SurveyRow> scan_block(i64 block, const SurveyConfig& c) {
  std::vector<SurveyRow> rows;
  const i64 lo = c.d_min + block * c.block_size;
  const i64 hi = std::min(c.d_max, lo + c.block_size - 1);
  for (i64 n = lo; n <= hi; ++n) {
    if (auto row = survey_row(n, c)) rows.push_back(std::move(*row));
  }
  return rows;
}

struct FieldSample {
  i64 abs_disc = 0;
  LocalBehavior behavior = LocalBehavior::Inert;
  InjectivityStatus status = InjectivityStatus::Skipped;
  InjectivityStatus status_q = InjectivityStatus::Skipped;
};

bool single_factor(i64 h, i64 p) { return h % p == 0 && (h / p) % p != 0; }

bool not_injective(InjectivityStatus s) {
  return s == InjectivityStatus::Noninjective || s == InjectivityStatus::RankOverflow;
}

// First n fields with |D| > b and p exactly dividing h (and q, when q > 0).
std::vector<FieldSample> sample_fields(i64 p, i64 q, i64 n, i64 b, int workers) {
  if (n < 1) throw InvalidConfig("sample size must be at least 1");
  if (!is_prime(p) || (q != 0 && !is_prime(q))) throw InvalidConfig("sampling primes must be prime");
  constexpr i64 kBlock = 2'000;
  std::vector<FieldSample> out;
  std::function<std::vector<FieldSample>(i64)> compute = [&](i64 block) {
    std::vector<FieldSample> found;
    const i64 lo = b + 1 + block * kBlock;
    for (i64 m = lo; m < lo + kBlock; ++m) {
      const i64 d = -m;
      if (!is_fundamental(d)) continue;
      const i64 h = class_number(d);
      if (!single_factor(h, p) || (q != 0 && !single_factor(h, q))) continue;
      const FundamentalDiscriminant fd = FundamentalDiscriminant::validate(d);
      const ClassGroupStructure cg = class_group(fd, default_backend(d));
      FieldSample s{m, kronecker_at(fd, p), prime_status(fd, cg, p), InjectivityStatus::Skipped};
      if (q != 0) s.status_q = prime_status(fd, cg, q);
      found.push_back(s);
    }
    return found;
  };
  std::function<bool(i64, std::vector<FieldSample>&&)> consume = [&](i64, std::vector<FieldSample>&& found) {
    for (const auto& s : found) {
      if (static_cast<i64>(out.size()) >= n) break;
      out.push_back(s);
    }
    return static_cast<i64>(out.size()) < n;
  };
  detail::ordered_blocks<std::vector<FieldSample>>(0, kUnbounded, workers, compute, consume);
  return out;
}

}  // namespace

std::string to_string(SurveyMode m) {
  switch (m) {
    case SurveyMode::Table1: return "table1";
    case SurveyMode::Table2: return "table2";
    case SurveyMode::Table3: return "table3";
    case SurveyMode::Raw: return "raw";
  }
  return "?";
}

SurveyMode survey_mode_from_string(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (t == "table1") return SurveyMode::Table1;
  if (t == "table2") return SurveyMode::Table2;
  if (t == "table3") return SurveyMode::Table3;
  if (t == "raw") return SurveyMode::Raw;
  throw InvalidConfig("unknown survey mode: " + s);
}

void SurveyConfig::validate() const {
  if (d_min < 1 || d_max < 1) throw InvalidConfig("discriminant bounds must be positive");
  if (n_p < 1) throw InvalidConfig("N_p must be at least 1");
  if (block_size < 1) throw InvalidConfig("block size must be positive");
  for (i64 p : primes) {
    if (!is_prime(p)) throw InvalidConfig("tracked value " + std::to_string(p) + " is not prime");
  }
}

bool survey_keeps(const SurveyConfig& config, i64 h) {
  switch (config.mode) {
    case SurveyMode::Raw: return true;
    case SurveyMode::Table1:
      if (!is_prime(h)) return false;
      return config.primes.empty() || std::find(config.primes.begin(), config.primes.end(), h) != config.primes.end();
    case SurveyMode::Table2:
    case SurveyMode::Table3:
      if (config.primes.empty()) return h > 1;
      return std::any_of(config.primes.begin(), config.primes.end(), [&](i64 p) {
        return config.single_factor ? single_factor(h, p) : h % p == 0;
      });
  }
  return false;
}

void scan(const SurveyConfig& config, const std::function<void(const SurveyRow&)>& sink) {
  config.validate();
  std::function<std::vector<SurveyRow>(i64)> compute = [&](i64 b) { return scan_block(b, config); };
  std::function<bool(i64, std::vector<SurveyRow>&&)> consume = [&](i64, std::vector<SurveyRow>&& rows) {
    for (const auto& r : rows) sink(r);
    return true;
  };
  detail::ordered_blocks<std::vector<SurveyRow>>(0, block_count(config), config.workers, compute, consume);
}

std::vector<SurveyRow> scan(const SurveyConfig& config) {
  std::vector<SurveyRow> rows;
  scan(config, [&](const SurveyRow& r) { rows.push_back(r); });
  return rows;
}

std::vector<Table1Row> table1(i64 max_p, i64 bound, int workers) {
  struct Hit {
    i64 abs_disc, h;
    InjectivityStatus status;
  };
  constexpr i64 kBlock = 5'000;
  std::function<std::vector<Hit>(i64)> compute = [&](i64 block) {
    std::vector<Hit> hits;
    const i64 lo = std::max<i64>(3, block * kBlock);
    const i64 hi = std::min(bound, block * kBlock + kBlock - 1);
    for (i64 m = lo; m <= hi; ++m) {
      if (!is_fundamental(-m)) continue;
      const i64 h = class_number(-m);
      if (h > max_p || !is_prime(h)) continue;
      const FundamentalDiscriminant fd = FundamentalDiscriminant::validate(-m);
      const ClassGroupStructure cg = class_group(fd, default_backend(-m));
      hits.push_back({m, h, prime_status(fd, cg, h)});
    }
    return hits;
  };
  std::vector<Table1Row> rows;
  for (i64 p : primes_up_to(max_p)) rows.push_back({p, 0, 0, {}});
  std::function<bool(i64, std::vector<Hit>&&)> consume = [&](i64, std::vector<Hit>&& hits) {
    for (const Hit& hit : hits) {
      auto it = std::find_if(rows.begin(), rows.end(), [&](const Table1Row& r) { return r.p == hit.h; });
      ++it->count;
      if (not_injective(hit.status)) {
        it->split.push_back(hit.abs_disc);
      } else {
        ++it->nonsplit;
      }
    }
    return true;
  };
  detail::ordered_blocks<std::vector<Hit>>(0, bound / kBlock + 1, workers, compute, consume);
  return rows;
}

SplittingFractions table2(i64 p, i64 n, i64 b, int workers) {
  const std::vector<FieldSample> sample = sample_fields(p, 0, n, b, workers);
  SplittingFractions out;
  out.p = p;
  out.n = static_cast<i64>(sample.size());
  out.b = b;
  for (const auto& s : sample) {
    const auto k = static_cast<std::size_t>(s.behavior);
    ++out.stratum_size[k];
    if (not_injective(s.status)) {
      ++out.noninjective;
      ++out.stratum_noninjective[k];
    }
    out.last_abs_disc = s.abs_disc;
  }
  out.f = out.n > 0 ? static_cast<double>(out.noninjective) / static_cast<double>(out.n) : 0.0;
  out.p_f = static_cast<double>(p) * out.f;
  for (std::size_t k = 0; k < 3; ++k) {
    if (out.stratum_size[k] > 0) {
      out.stratum_p_f[k] = static_cast<double>(p) * static_cast<double>(out.stratum_noninjective[k]) /
                           static_cast<double>(out.stratum_size[k]);
    }
  }
  return out;
}

SplittingFractions table3(i64 p, i64 n, i64 b, int workers) { return table2(p, n, b, workers); }

bool IndependenceProbe::within_three_sigma() const { return std::abs(joint - product) <= 3 * std_error; }

IndependenceProbe independence_probe(i64 p, i64 q, i64 n, i64 b, int workers) {
  if (p == q) throw InvalidConfig("independence probe needs two distinct primes");
  const std::vector<FieldSample> sample = sample_fields(p, q, n, b, workers);
  IndependenceProbe out;
  out.p = p;
  out.q = q;
  out.n = static_cast<i64>(sample.size());
  i64 cp = 0, cq = 0, both = 0;
  for (const auto& s : sample) {
    const bool sp = not_injective(s.status), sq = not_injective(s.status_q);
    cp += sp;
    cq += sq;
    both += sp && sq;
  }
  const auto nn = static_cast<double>(out.n);
  out.f_p = cp / nn;
  out.f_q = cq / nn;
  out.joint = both / nn;
  out.product = out.f_p * out.f_q;
  out.std_error = std::sqrt(std::max(out.product * (1 - out.product), 1e-12) / nn);
  return out;
}

}  // namespace iqgal
