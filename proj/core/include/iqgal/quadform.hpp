#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "iqgal/arith.hpp"
#include "iqgal/discriminant.hpp"

namespace iqgal {

class DiscriminantMismatch : public std::invalid_argument {
 public:
  DiscriminantMismatch(i64 d1, i64 d2);
};

/// Raised by p_torsion_basis when Cl_K[p] has rank >= 3.
class RankOverflow : public std::runtime_error {
 public:
  RankOverflow(i64 p, int rank);
  i64 prime() const noexcept { return p_; }
  int rank() const noexcept { return rank_; }

 private:
  i64 p_;
  int rank_;
};

/// Positive definite binary quadratic form a x^2 + b x y + c y^2.
///
/// Coefficients are kept in 64 bits; every product formed during reduction
/// and composition is evaluated in 128 bits, which is ample for |D| < 2^62.
struct QuadForm {
  i64 a = 1;
  i64 b = 1;
  i64 c = 1;

  i64 disc() const { return b * b - 4 * a * c; }
  bool is_primitive() const { return gcd(gcd(a, b), c) == 1; }
  bool is_reduced() const;
  bool is_principal() const { return a == 1; }

  /// The class of (a, -b, c).
  QuadForm inverse() const { return {a, -b, c}; }

  /// (1, delta, (delta - D)/4).
  static QuadForm principal(i64 d);

  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

std::ostream& operator<<(std::ostream& os, const QuadForm& f);

/// Unique reduced form in the SL2(Z)-class of f (f positive definite, primitive).
QuadForm reduce(QuadForm f);

/// Dirichlet composition followed by reduction.
QuadForm compose(const QuadForm& f, const QuadForm& g);

/// Reduced representative of f^e; negative exponents use the inverse.
QuadForm power(const QuadForm& f, i64 e);

/// Order of the class of f; `multiple` must be a known multiple of it.
i64 order_dividing(const QuadForm& f, i64 multiple);

/// All reduced forms of discriminant D < 0, in ascending (a, |b|, b) order.
std::vector<QuadForm> reduced_forms(i64 d);

/// Number of reduced primitive forms of discriminant D.
i64 count_reduced_forms(i64 d);

/// Reduced prime form of norm q for a prime q that is split or ramified in
/// Q(sqrt D); nullopt when q is inert.
std::optional<QuadForm> prime_form(i64 d, i64 q);

struct QuadFormHash {
  std::size_t operator()(const QuadForm& f) const noexcept {
    std::size_t h = std::hash<i64>{}(f.a);
    h ^= std::hash<i64>{}(f.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

enum class ClassGroupBackend {
  Enumerate,  // reduced-form enumeration, all forms as candidate generators
  Bsgs,       // prime forms + baby-step giant-step orders, no enumeration
};

/// Invariant factor decomposition Cl_K = Z/d_1 x ... x Z/d_r with
/// 1 < d_1 | d_2 | ... | d_r and one generator per factor.
struct ClassGroupStructure {
  i64 discriminant = 0;
  i64 h = 1;
  std::vector<i64> invariant_factors;
  std::vector<QuadForm> generators;

  /// Number of invariant factors divisible by p.
  int p_rank(i64 p) const;
  /// Invariant factors joined by "x", "1" for the trivial group.
  std::string factors_string() const;
};

ClassGroupStructure class_group(const FundamentalDiscriminant& d,
                                ClassGroupBackend backend = ClassGroupBackend::Enumerate);

/// Backend used by default for |D|: enumeration below 10^6, BSGS above.
ClassGroupBackend default_backend(i64 d);

/// Class number by the default backend's fastest route.
i64 class_number(i64 d);

/// Basis { g_i^(d_i / p) : p | d_i } of Cl_K[p]. Throws RankOverflow when the
/// p-rank is at least 3.
std::vector<QuadForm> p_torsion_basis(const ClassGroupStructure& cg, i64 p);

/// An equivalent form whose first coefficient is coprime to p. Throws
/// std::invalid_argument for imprimitive f.
QuadForm coprime_representative(const QuadForm& f, i64 p);

}  // namespace iqgal
