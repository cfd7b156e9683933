#pragma once

// The local map phi_p : Cl_K[p] -> O_p^* / T_p (O_p^*)^p, where O_p = O_K (x) Z_p
// and T_p is its torsion subgroup. Elements are handled modulo p^2 for odd p
// and modulo 8 for p = 2; at that precision the kernel of reduction already
// lies in the p-th powers.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iqgal/discriminant.hpp"
#include "iqgal/idealgen.hpp"

namespace iqgal {

class NotLocalUnit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GroupTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class InjectivityStatus { Injective, Noninjective, RankOverflow, Skipped };

std::string to_string(InjectivityStatus s);
InjectivityStatus injectivity_status_from_string(const std::string& s);

/// O_K / N O_K with elements written x + y omega, 0 <= x, y < N.
class ResidueRing {
 public:
  struct Elt {
    i64 x = 0;
    i64 y = 0;
    friend bool operator==(const Elt&, const Elt&) = default;
  };

  ResidueRing(i64 disc, i64 modulus, i64 prime);

  i64 modulus() const noexcept { return n_; }
  i64 prime() const noexcept { return p_; }
  i64 size() const noexcept { return n_ * n_; }

  Elt one() const { return {1 % n_, 0}; }
  Elt make(i64 x, i64 y) const { return {mod(x, n_), mod(y, n_)}; }
  Elt mul(const Elt& a, const Elt& b) const;
  Elt pow(Elt a, i64 e) const;
  i64 norm(const Elt& a) const;
  bool is_unit(const Elt& a) const { return norm(a) % p_ != 0; }
  Elt reduce(const QuadraticInteger& alpha) const;

  i64 index(const Elt& a) const { return a.x * n_ + a.y; }
  Elt element(i64 idx) const { return {idx / n_, idx % n_}; }

 private:
  i64 n_;
  i64 p_;
  int delta_;
  i64 k_;  // omega^2 = delta omega + k
};

struct LocalContext {
  i64 p = 0;
  i64 disc = 0;
  LocalBehavior splitting = LocalBehavior::Inert;
  int precision_exponent = 2;
  i64 modulus = 0;
  /// Split primes: r with r^2 = D (mod p^k).
  std::optional<i64> root;
  /// Ramified p = 3 with D/(-3) = 1 (mod 3): a local primitive cube root of unity.
  std::optional<ResidueRing::Elt> local_zeta_p;
  /// p-power torsion of O_p^* that is not already a p-th power, as residues.
  std::vector<ResidueRing::Elt> torsion_generators;

  ResidueRing ring() const { return ResidueRing(disc, modulus, p); }
  /// The closed-form coordinates cannot be used (p = 2 or a local zeta_p).
  bool needs_generic_engine() const { return p == 2 || local_zeta_p.has_value(); }
};

/// Precision p^2 for odd p, 8 for p = 2.
LocalContext build_context(const FundamentalDiscriminant& d, i64 p);

/// Class of alpha in O_p^*/T_p (O_p^*)^p. `coords` are F_p-coordinates in the
/// quotient (Z/p)^2 when the closed form applies; otherwise only `trivial`.
struct PhiImage {
  std::optional<std::array<i64, 2>> coords;
  bool trivial = true;
};

PhiImage phi_image(const LocalContext& ctx, const QuadraticInteger& alpha);

/// Brute-force realization of the quotient: the subgroup H = G^p * <torsion>
/// of G = (O/NO)^*, stored as a membership bitmap.
class GenericEngine {
 public:
  static constexpr i64 kMaxOddPrime = 23;

  explicit GenericEngine(const LocalContext& ctx);

  const LocalContext& context() const noexcept { return ctx_; }
  bool contains(const ResidueRing::Elt& e) const { return member_[static_cast<std::size_t>(ring_.index(e))] != 0; }
  bool contains(const QuadraticInteger& alpha) const;
  i64 group_order() const noexcept { return group_order_; }
  i64 subgroup_order() const noexcept { return subgroup_order_; }
  i64 index() const noexcept { return group_order_ / subgroup_order_; }

  /// The subgroup generated by H and alpha.
  GenericEngine extended(const QuadraticInteger& alpha) const;
  PhiImage image(const QuadraticInteger& alpha) const;

 private:
  void close_under(const std::vector<ResidueRing::Elt>& gens);
  ResidueRing::Elt checked_unit(const QuadraticInteger& alpha) const;

  LocalContext ctx_;
  ResidueRing ring_;
  std::vector<std::uint8_t> member_;
  i64 group_order_ = 0;
  i64 subgroup_order_ = 0;
};

PhiImage generic_membership(const LocalContext& ctx, const QuadraticInteger& alpha);

/// Whether phi_p is injective on the span of a basis of Cl_K[p] (one or two
/// elements) given their images. With coordinates: nonzero / independent
/// over F_p. Without: membership tests in the generic engine, which needs the
/// generators themselves in `alphas`.
bool injectivity_test(const LocalContext& ctx, std::span<const PhiImage> images,
                      std::span<const QuadraticInteger> alphas = {});

/// Closed-form decision at p = 2 for a field with 2-rank `two_rank`.
InjectivityStatus two_classification(const FundamentalDiscriminant& d, int two_rank);

/// Direct computation of phi_2 in (O/8O)^*; requires even h and cyclic 2-part.
InjectivityStatus two_direct_check(const FundamentalDiscriminant& d, const ClassGroupStructure& cg);
InjectivityStatus two_direct_check(const FundamentalDiscriminant& d);

}  // namespace iqgal
