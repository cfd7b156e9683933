#pragma once

// Ideals of the maximal order O_K = Z[omega], omega = (delta + sqrt D)/2, as
// rank-2 Z-lattices in Hermite normal form. Coordinates of lattice vectors are
// always taken with respect to the basis (1, omega).

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

#include "iqgal/arith.hpp"
#include "iqgal/quadform.hpp"

namespace iqgal {

class NotPrincipal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// alpha = (u + v sqrt D) / 2 in O_K, so u = v D (mod 2).
struct QuadraticInteger {
  mpz_class u{0};
  mpz_class v{0};
  i64 disc = 0;

  mpz_class norm() const;
  QuadraticInteger operator*(const QuadraticInteger& other) const;
  static QuadraticInteger from_integer(const mpz_class& n, i64 disc) { return {2 * n, 0, disc}; }
  static QuadraticInteger one(i64 disc) { return from_integer(1, disc); }

  /// Coordinates (x, y) with alpha = x + y omega.
  std::pair<mpz_class, mpz_class> omega_coords() const;
  static QuadraticInteger from_omega_coords(const mpz_class& x, const mpz_class& y, i64 disc);

  friend bool operator==(const QuadraticInteger& a, const QuadraticInteger& b) {
    return a.disc == b.disc && a.u == b.u && a.v == b.v;
  }
};

std::ostream& operator<<(std::ostream& os, const QuadraticInteger& x);

/// The ideal scale * (Z norm_a + Z (b + sqrt D)/2), with b^2 = D (mod 4 norm_a)
/// and b normalized into (-norm_a, norm_a]. The representation is canonical,
/// so lattice equality is field-wise equality.
struct QuadIdeal {
  mpz_class scale{1};
  mpz_class norm_a{1};
  mpz_class b{1};
  i64 disc = 0;

  /// Index [O_K : I] = scale^2 * norm_a.
  mpz_class norm() const { return scale * scale * norm_a; }
  bool is_unit_ideal() const { return scale == 1 && norm_a == 1; }

  static QuadIdeal unit(i64 disc);

  friend bool operator==(const QuadIdeal& x, const QuadIdeal& y) {
    return x.disc == y.disc && x.scale == y.scale && x.norm_a == y.norm_a && x.b == y.b;
  }
};

std::ostream& operator<<(std::ostream& os, const QuadIdeal& ideal);

/// f = (a, b, c) maps to Z a + Z (b + sqrt D)/2.
QuadIdeal form_to_ideal(const QuadForm& f);

/// Inverse correspondence on the primitive part: (norm_a, b, (b^2 - D)/(4 norm_a)).
QuadForm ideal_to_form(const QuadIdeal& ideal);

QuadIdeal ideal_multiply(const QuadIdeal& x, const QuadIdeal& y);
QuadIdeal ideal_power(const QuadIdeal& x, i64 e);

/// The principal ideal alpha O_K.
QuadIdeal principal_ideal(const QuadraticInteger& alpha);

/// A generator of the principal ideal I (D < -4), found as the shortest
/// vector of I under the norm form by Lagrange-Gauss reduction. The sign is
/// normalized to u > 0, or v > 0 when u = 0. Throws NotPrincipal.
QuadraticInteger principal_generator(const QuadIdeal& ideal);

/// For a class [f] of order p: an ideal a in the class with N(a) coprime to p,
/// its p-th power, and a generator alpha of a^p.
struct TorsionGenerator {
  QuadForm representative;
  QuadIdeal ideal;
  QuadIdeal power;
  QuadraticInteger alpha;
};

TorsionGenerator torsion_generator(const QuadForm& f, i64 p);

}  // namespace iqgal
