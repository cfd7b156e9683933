#pragma once

#include <string>
#include <vector>

#include "iqgal/discriminant.hpp"
#include "iqgal/localtest.hpp"
#include "iqgal/quadform.hpp"

namespace iqgal {

enum class Verdict { Minimal, NotMinimal, Exceptional };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct PrimeStatus {
  i64 p = 0;
  InjectivityStatus status = InjectivityStatus::Skipped;
  friend bool operator==(const PrimeStatus&, const PrimeStatus&) = default;
};

struct ClassificationRecord {
  i64 discriminant = 0;
  i64 h = 1;
  std::vector<i64> class_group;  // invariant factors
  int two_rank = 0;
  std::vector<PrimeStatus> per_prime;  // primes dividing h, ascending
  Verdict verdict = Verdict::Minimal;
  bool assumes_converse = false;
  TorsionDescriptor torsion;

  /// Status at p; Skipped for primes not dividing h.
  InjectivityStatus status_at(i64 p) const;
  friend bool operator==(const ClassificationRecord&, const ClassificationRecord&) = default;
};

struct ClassifyOptions {
  /// Stop at the first prime where phi_p fails; remaining primes are marked
  /// skipped. When false every prime dividing h is decided.
  bool short_circuit = true;
};

/// Injectivity of phi_p on Cl_K[p] for one prime p dividing h.
InjectivityStatus prime_status(const FundamentalDiscriminant& d, const ClassGroupStructure& cg, i64 p);

ClassificationRecord classify(i64 d, ClassifyOptions options = {});
ClassificationRecord classify(const FundamentalDiscriminant& d, const ClassGroupStructure& cg,
                              ClassifyOptions options = {});

std::string verdict_description(const ClassificationRecord& r);

}  // namespace iqgal
