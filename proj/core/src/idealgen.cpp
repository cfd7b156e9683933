#include "iqgal/idealgen.hpp"

#include <array>
#include <optional>
#include <vector>

namespace iqgal {

namespace {

struct Vec2 {
  mpz_class x, y;
};

int delta_of(i64 d) { return d % 2 == 0 ? 0 : 1; }

// (x1 + y1 w)(x2 + y2 w) with w^2 = delta w + (D - delta)/4.
Vec2 omega_mul(const Vec2& p, const Vec2& q, i64 d) {
  const int delta = delta_of(d);
  const mpz_class k = mpz_class((d - delta) / 4);
  return {p.x * q.x + p.y * q.y * k, p.x * q.y + q.x * p.y + delta * p.y * q.y};
}

mpz_class floor_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Hermite normal form {(A, 0), (B, C)}, A, C > 0, 0 <= B < A, of the lattice
// spanned by the given vectors (assumed full rank).
struct Hnf {
  mpz_class A, B, C;
};

Hnf hermite(const std::vector<Vec2>& gens) {
  std::optional<Vec2> pivot;
  mpz_class a_gcd = 0;
  for (const Vec2& v : gens) {
    if (v.y == 0) {
      a_gcd = gcd(a_gcd, v.x);
      continue;
    }
    if (!pivot) {
      pivot = v;
      continue;
    }
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), pivot->y.get_mpz_t(), v.y.get_mpz_t());
    Vec2 combined{s * pivot->x + t * v.x, g};
    mpz_class cp = v.y / g, cv = pivot->y / g;
    a_gcd = gcd(a_gcd, mpz_class(cp * pivot->x - cv * v.x));
    pivot = combined;
  }
  if (!pivot || a_gcd == 0) throw std::logic_error("lattice is not of full rank");
  Hnf h;
  h.A = abs(a_gcd);
  h.C = pivot->y;
  h.B = pivot->x;
  if (h.C < 0) {
    h.C = -h.C;
    h.B = -h.B;
  }
  h.B = h.B - floor_div(h.B, h.A) * h.A;
  return h;
}

QuadIdeal from_hnf(const Hnf& h, i64 d) {
  if (h.A % h.C != 0 || h.B % h.C != 0) throw std::logic_error("lattice is not an O_K-ideal");
  QuadIdeal out;
  out.disc = d;
  out.scale = h.C;
  out.norm_a = h.A / h.C;
  mpz_class b = 2 * (h.B / h.C) + delta_of(d);
  // b into (-a, a]
  const mpz_class two_a = 2 * out.norm_a;
  b -= floor_div(b + out.norm_a - 1, two_a) * two_a;
  out.b = b;
  return out;
}

std::array<Vec2, 2> ideal_basis(const QuadIdeal& ideal) {
  const int delta = delta_of(ideal.disc);
  return {Vec2{ideal.scale * ideal.norm_a, 0}, Vec2{ideal.scale * ((ideal.b - delta) / 2), ideal.scale}};
}

}  // namespace

mpz_class QuadraticInteger::norm() const { return (u * u - mpz_class(disc) * v * v) / 4; }

QuadraticInteger QuadraticInteger::operator*(const QuadraticInteger& o) const {
  return {(u * o.u + mpz_class(disc) * v * o.v) / 2, (u * o.v + o.u * v) / 2, disc};
}

std::pair<mpz_class, mpz_class> QuadraticInteger::omega_coords() const {
  return {(u - delta_of(disc) * v) / 2, v};
}

QuadraticInteger QuadraticInteger::from_omega_coords(const mpz_class& x, const mpz_class& y, i64 disc) {
  return {2 * x + delta_of(disc) * y, y, disc};
}

std::ostream& operator<<(std::ostream& os, const QuadraticInteger& x) {
  return os << "(" << x.u << " + " << x.v << "*sqrt(" << x.disc << "))/2";
}

std::ostream& operator<<(std::ostream& os, const QuadIdeal& ideal) {
  if (ideal.scale != 1) os << ideal.scale << "*";
  return os << "[" << ideal.norm_a << ", (" << ideal.b << " + sqrt(" << ideal.disc << "))/2]";
}

QuadIdeal QuadIdeal::unit(i64 disc) { return {1, 1, delta_of(disc), disc}; }

QuadIdeal form_to_ideal(const QuadForm& f) {
  QuadIdeal out{1, f.a, f.b, f.disc()};
  const mpz_class two_a = 2 * out.norm_a;
  out.b -= floor_div(out.b + out.norm_a - 1, two_a) * two_a;
  return out;
}

QuadForm ideal_to_form(const QuadIdeal& ideal) {
  const mpz_class c = (ideal.b * ideal.b - ideal.disc) / (4 * ideal.norm_a);
  if (!ideal.norm_a.fits_slong_p() || !ideal.b.fits_slong_p() || !c.fits_slong_p()) {
    throw std::overflow_error("ideal too large for a word-size form");
  }
  return {ideal.norm_a.get_si(), ideal.b.get_si(), c.get_si()};
}

QuadIdeal ideal_multiply(const QuadIdeal& x, const QuadIdeal& y) {
  if (x.disc != y.disc) throw DiscriminantMismatch(x.disc, y.disc);
  const auto bx = ideal_basis(x);
  const auto by = ideal_basis(y);
  std::vector<Vec2> gens;
  for (const Vec2& p : bx) {
    for (const Vec2& q : by) gens.push_back(omega_mul(p, q, x.disc));
  }
  return from_hnf(hermite(gens), x.disc);
}

QuadIdeal ideal_power(const QuadIdeal& x, i64 e) {
  if (e < 0) throw std::invalid_argument("ideal_power: negative exponent");
  QuadIdeal result = QuadIdeal::unit(x.disc);
  QuadIdeal base = x;
  while (e > 0) {
    if (e & 1) result = ideal_multiply(result, base);
    e >>= 1;
    if (e > 0) base = ideal_multiply(base, base);
  }
  return result;
}

QuadIdeal principal_ideal(const QuadraticInteger& alpha) {
  auto [x, y] = alpha.omega_coords();
  const Vec2 a{x, y};
  return from_hnf(hermite({a, omega_mul(a, Vec2{0, 1}, alpha.disc)}), alpha.disc);
}

QuadraticInteger principal_generator(const QuadIdeal& ideal) {
  const i64 d = ideal.disc;
  if (d >= -4) throw std::invalid_argument("principal_generator requires D < -4");
  const int delta = delta_of(d);
  const mpz_class k = mpz_class((delta - d) / 4);
  auto q = [&](const Vec2& v) -> mpz_class { return v.x * v.x + delta * v.x * v.y + k * v.y * v.y; };
  auto b2 = [&](const Vec2& v, const Vec2& w) -> mpz_class {
    return 2 * v.x * w.x + delta * (v.x * w.y + w.x * v.y) + 2 * k * v.y * w.y;
  };

  auto [v1, v2] = ideal_basis(ideal);
  mpz_class q1 = q(v1), q2 = q(v2);
  for (;;) {
    if (q2 < q1) {
      std::swap(v1, v2);
      std::swap(q1, q2);
    }
    // m = round(B(v1, v2) / Q(v1)) with B = b2 / 2
    const mpz_class m = floor_div(b2(v1, v2) + q1, 2 * q1);
    if (m == 0) break;
    v2.x -= m * v1.x;
    v2.y -= m * v1.y;
    q2 = q(v2);
  }

  if (q1 != ideal.norm()) throw NotPrincipal("ideal is not principal: shortest vector has norm " + q1.get_str());
  QuadraticInteger alpha = QuadraticInteger::from_omega_coords(v1.x, v1.y, d);
  if (alpha.u < 0 || (alpha.u == 0 && alpha.v < 0)) {
    alpha.u = -alpha.u;
    alpha.v = -alpha.v;
  }
  if (!(principal_ideal(alpha) == ideal)) throw std::logic_error("generator does not reproduce the ideal");
  return alpha;
}

TorsionGenerator torsion_generator(const QuadForm& f, i64 p) {
  TorsionGenerator out;
  out.representative = coprime_representative(f, p);
  out.ideal = form_to_ideal(out.representative);
  out.power = ideal_power(out.ideal, p);
  out.alpha = principal_generator(out.power);
  return out;
}

}  // namespace iqgal
