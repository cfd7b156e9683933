#include "iqgal/discriminant.hpp"

#include <sstream>

namespace iqgal {

namespace {

std::string error_message(DiscriminantError::Kind kind, i64 value) {
  std::ostringstream os;
  if (kind == DiscriminantError::Kind::NotImaginary) {
    os << value << " is not negative";
  } else {
    os << value << " is not a fundamental discriminant";
  }
  return os.str();
}

bool squarefree(i64 n) {
  for (const auto& pp : factorize(n)) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

}  // namespace

DiscriminantError::DiscriminantError(Kind kind, i64 value)
    : std::invalid_argument(error_message(kind, value)), kind_(kind), value_(value) {}

bool is_fundamental(i64 d) {
  if (d == 0 || d == 1) return false;
  i64 r = mod(d, 4);
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  i64 q = mod(d / 4, 4);
  if (q != 2 && q != 3) return false;
  return squarefree(d / 4);
}

FundamentalDiscriminant FundamentalDiscriminant::validate(i64 d) {
  if (d >= 0) throw DiscriminantError(DiscriminantError::Kind::NotImaginary, d);
  if (!is_fundamental(d)) throw DiscriminantError(DiscriminantError::Kind::NotFundamental, d);
  return FundamentalDiscriminant(d, factorize(d));
}

int genus_two_rank(const FundamentalDiscriminant& d) { return d.num_prime_divisors() - 1; }

TorsionDescriptor torsion_descriptor(const FundamentalDiscriminant& d) {
  // Odd primes are never exceptional for an imaginary quadratic field; the
  // prime 2 is exceptional only for Q(i) and Q(sqrt -2).
  if (d.value() == -4) return {4, false, {2}, TorsionShape::Generic};
  if (d.value() == -8) return {8, true, {4}, TorsionShape::Special2};
  return {};
}

std::string TorsionDescriptor::describe() const {
  std::ostringstream os;
  if (shape == TorsionShape::Special2) {
    os << "prod_{n>=1} (Z/2Z x Z/" << w << "nZ)";
  } else if (w == 1) {
    os << "prod_{n>=1} Z/nZ";
  } else {
    os << "prod_{n>=1} Z/" << w << "nZ";
  }
  if (!excluded_summands.empty()) {
    os << " (no cyclic summands of order";
    for (std::size_t i = 0; i < excluded_summands.size(); ++i) {
      os << (i ? ", " : " ") << excluded_summands[i];
    }
    os << ")";
  }
  return os.str();
}

std::string to_string(LocalBehavior b) {
  switch (b) {
    case LocalBehavior::Split: return "split";
    case LocalBehavior::Inert: return "inert";
    case LocalBehavior::Ramified: return "ramified";
  }
  return "?";
}

LocalBehavior local_behavior_from_string(const std::string& s) {
  if (s == "split") return LocalBehavior::Split;
  if (s == "inert") return LocalBehavior::Inert;
  if (s == "ramified") return LocalBehavior::Ramified;
  throw std::invalid_argument("unknown local behavior: " + s);
}

LocalBehavior kronecker_at(const FundamentalDiscriminant& d, i64 p) {
  if (d.value() % p == 0) return LocalBehavior::Ramified;
  return kronecker(d.value(), p) == 1 ? LocalBehavior::Split : LocalBehavior::Inert;
}

}  // namespace iqgal
