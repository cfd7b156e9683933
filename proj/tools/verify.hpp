#pragma once

#include <ostream>
#include <string>

#include "iqgal/arith.hpp"

namespace iqgal::cli {

struct VerifyReport {
  std::string suite;
  i64 checks = 0;
  bool ok = true;
  std::string first_disagreement;  // inputs needed to reproduce
};

/// Group laws on reduced forms and enumerate/BSGS agreement for |D| <= bound.
VerifyReport verify_forms(i64 bound = 3000);

/// Closed-form local coordinates against the generic engine, `samples`
/// random units per (p, splitting type).
VerifyReport verify_local(int samples = 100, unsigned seed = 20240601);

/// Closed-form 2-classification against the direct computation mod 8.
VerifyReport verify_two(i64 bound = 100000);

void print_report(std::ostream& os, const VerifyReport& r);

}  // namespace iqgal::cli
