#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "iqgal/arith.hpp"

namespace iqgal {

class DiscriminantError : public std::invalid_argument {
 public:
  enum class Kind { NotFundamental, NotImaginary };

  DiscriminantError(Kind kind, i64 value);

  Kind kind() const noexcept { return kind_; }
  i64 value() const noexcept { return value_; }

 private:
  Kind kind_;
  i64 value_;
};

/// A validated discriminant D < 0 of an imaginary quadratic field, together
/// with the factorization of |D|.
class FundamentalDiscriminant {
 public:
  /// Throws DiscriminantError if D >= 0 or D is not fundamental.
  static FundamentalDiscriminant validate(i64 d);

  i64 value() const noexcept { return value_; }
  const std::vector<PrimePower>& prime_factors() const noexcept { return factors_; }
  int num_prime_divisors() const noexcept { return static_cast<int>(factors_.size()); }

  /// D = -3 or D = -4: the unit group is larger than {+-1}.
  bool has_extra_units() const noexcept { return value_ == -3 || value_ == -4; }

  /// 0 if D is odd, 1 otherwise; the trace of omega = (delta + sqrt D) / 2.
  int delta() const noexcept { return value_ % 2 == 0 ? 0 : 1; }

  friend bool operator==(const FundamentalDiscriminant& a, const FundamentalDiscriminant& b) {
    return a.value_ == b.value_;
  }

 private:
  FundamentalDiscriminant(i64 value, std::vector<PrimePower> factors)
      : value_(value), factors_(std::move(factors)) {}

  i64 value_;
  std::vector<PrimePower> factors_;
};

/// Congruence and squarefreeness test without building a record.
bool is_fundamental(i64 d);

/// Genus theory: the 2-rank of Cl_K is t - 1.
int genus_two_rank(const FundamentalDiscriminant& d);

enum class TorsionShape {
  Generic,   // prod_n Z/(n w)Z
  Special2,  // prod_n (Z/2 x Z/(n w)Z)
};

/// Shape of the closure of the torsion subgroup of the inertial part U_K
/// of the abelian Galois group, up to noncanonical isomorphism.
struct TorsionDescriptor {
  int w = 1;
  bool special_case = false;
  std::vector<i64> excluded_summands;
  TorsionShape shape = TorsionShape::Generic;

  std::string describe() const;
  friend bool operator==(const TorsionDescriptor&, const TorsionDescriptor&) = default;
};

TorsionDescriptor torsion_descriptor(const FundamentalDiscriminant& d);

enum class LocalBehavior { Split, Inert, Ramified };

std::string to_string(LocalBehavior b);
LocalBehavior local_behavior_from_string(const std::string& s);

/// Decomposition type of the rational prime p in Q(sqrt D).
LocalBehavior kronecker_at(const FundamentalDiscriminant& d, i64 p);

}  // namespace iqgal
