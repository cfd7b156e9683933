#include "iqgal/classify.hpp"

#include <algorithm>
#include <sstream>

namespace iqgal {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Minimal: return "MINIMAL";
    case Verdict::NotMinimal: return "NOT_MINIMAL";
    case Verdict::Exceptional: return "EXCEPTIONAL";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "MINIMAL") return Verdict::Minimal;
  if (s == "NOT_MINIMAL") return Verdict::NotMinimal;
  if (s == "EXCEPTIONAL") return Verdict::Exceptional;
  throw std::invalid_argument("unknown verdict: " + s);
}

InjectivityStatus ClassificationRecord::status_at(i64 p) const {
  for (const auto& ps : per_prime) {
    if (ps.p == p) return ps.status;
  }
  return InjectivityStatus::Skipped;
}

InjectivityStatus prime_status(const FundamentalDiscriminant& d, const ClassGroupStructure& cg, i64 p) {
  const int rank = cg.p_rank(p);
  if (rank == 0) return InjectivityStatus::Skipped;
  if (rank >= 3) return InjectivityStatus::RankOverflow;
  if (p == 2) return two_classification(d, rank);

  const LocalContext ctx = build_context(d, p);
  std::vector<QuadraticInteger> alphas;
  std::vector<PhiImage> images;
  for (const QuadForm& f : p_torsion_basis(cg, p)) {
    alphas.push_back(torsion_generator(f, p).alpha);
    images.push_back(phi_image(ctx, alphas.back()));
  }
  return injectivity_test(ctx, images, alphas) ? InjectivityStatus::Injective : InjectivityStatus::Noninjective;
}

ClassificationRecord classify(const FundamentalDiscriminant& d, const ClassGroupStructure& cg,
                              ClassifyOptions options) {
  ClassificationRecord r;
  r.discriminant = d.value();
  r.h = cg.h;
  r.class_group = cg.invariant_factors;
  r.two_rank = genus_two_rank(d);
  r.torsion = torsion_descriptor(d);
  if (cg.p_rank(2) != r.two_rank) throw std::logic_error("class group 2-rank disagrees with genus theory");

  if (d.value() == -4 || d.value() == -8) {
    r.verdict = Verdict::Exceptional;
    return r;
  }

  const std::vector<i64> primes = cg.h > 1 ? prime_divisors(cg.h) : std::vector<i64>{};
  for (i64 p : primes) r.per_prime.push_back({p, InjectivityStatus::Skipped});

  bool failed = false;
  // A p-rank of 3 or more makes phi_p non-injective before any local work.
  for (auto& ps : r.per_prime) {
    if (cg.p_rank(ps.p) >= 3) {
      ps.status = InjectivityStatus::RankOverflow;
      failed = true;
      if (options.short_circuit) break;
    }
  }
  for (auto& ps : r.per_prime) {
    if (failed && options.short_circuit) break;
    if (ps.status == InjectivityStatus::RankOverflow) continue;
    ps.status = prime_status(d, cg, ps.p);
    if (ps.status != InjectivityStatus::Injective) failed = true;
  }

  r.verdict = failed ? Verdict::NotMinimal : Verdict::Minimal;
  // Only "totally nonsplit => minimal" is proved; the converse is assumed.
  r.assumes_converse = failed;
  return r;
}

ClassificationRecord classify(i64 d, ClassifyOptions options) {
  const FundamentalDiscriminant fd = FundamentalDiscriminant::validate(d);
  return classify(fd, class_group(fd, default_backend(d)), options);
}

std::string verdict_description(const ClassificationRecord& r) {
  std::ostringstream os;
  switch (r.verdict) {
    case Verdict::Minimal:
      os << "A_K ≅ Ẑ^2 × ∏_{n≥1} Z/nZ (minimal group G)";
      break;
    case Verdict::Exceptional:
      os << "A_K ≇ G: U_K ≅ Ẑ^2 × " << r.torsion.describe() << ", w = " << r.torsion.w;
      break;
    case Verdict::NotMinimal: {
      os << "sequence splits over a subgroup of order";
      bool first = true;
      for (const auto& ps : r.per_prime) {
        if (ps.status != InjectivityStatus::Noninjective && ps.status != InjectivityStatus::RankOverflow) continue;
        os << (first ? " " : ", ") << ps.p;
        if (ps.status == InjectivityStatus::RankOverflow) os << " (" << ps.p << "-rank >= 3)";
        first = false;
      }
      os << "; A_K ≇ G assuming the converse of the nonsplit criterion";
      break;
    }
  }
  return os.str();
}

}  // namespace iqgal
