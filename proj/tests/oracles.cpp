#include "oracles.hpp"

#include <set>

namespace iqgal::oracle {

int legendre_euler(i64 a, i64 p) {
  const i64 r = pow_mod(mod(a, p), (p - 1) / 2, p);
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

std::vector<i64> sqrt_mod_brute(i64 a, i64 m) {
  std::vector<i64> out;
  for (i64 x = 0; x < m; ++x) {
    if (mod(x * x - a, m) == 0) out.push_back(x);
  }
  return out;
}

bool squarefree(i64 n) {
  n = n < 0 ? -n : n;
  for (i64 q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
  }
  return true;
}

bool is_fundamental_brute(i64 d) {
  if (d == 0 || d == 1) return false;
  if (mod(d, 4) == 1) return squarefree(d);
  if (mod(d, 4) != 0) return false;
  const i64 m = d / 4;
  return (mod(m, 4) == 2 || mod(m, 4) == 3) && squarefree(m);
}

QuadForm transform(const QuadForm& f, i64 a, i64 b, i64 c, i64 d) {
  // f(ax + by, cx + dy)
  return {f.a * a * a + f.b * a * c + f.c * c * c, 2 * f.a * a * b + f.b * (a * d + b * c) + 2 * f.c * c * d,
          f.a * b * b + f.b * b * d + f.c * d * d};
}

QuadForm scramble(const QuadForm& f, std::mt19937_64& rng, int steps) {
  QuadForm g = f;
  for (int i = 0; i < steps; ++i) {
    switch (rng() % 3) {
      case 0: g = transform(g, 0, -1, 1, 0); break;
      case 1: g = transform(g, 1, 1, 0, 1); break;
      default: g = transform(g, 1, -1, 0, 1); break;
    }
    // Keep coefficients small enough for 64-bit arithmetic.
    if (std::abs(g.b) > (i64{1} << 20) || std::abs(g.a) > (i64{1} << 20) || std::abs(g.c) > (i64{1} << 20)) g = f;
  }
  return g;
}

i64 class_number_brute(i64 d) {
  i64 count = 0;
  for (i64 a = 1; 3 * a * a <= -d; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      ++count;
    }
  }
  return count;
}

i64 ambiguous_forms(i64 d) {
  i64 count = 0;
  for (const QuadForm& f : reduced_forms(d)) {
    if (f.b == 0 || f.b == f.a || f.a == f.c) ++count;
  }
  return count;
}

QuadraticInteger power(QuadraticInteger a, i64 e) {
  QuadraticInteger r = QuadraticInteger::one(a.disc);
  for (i64 i = 0; i < e; ++i) r = r * a;
  return r;
}

std::optional<QuadraticInteger> generator_brute(const QuadIdeal& ideal) {
  // N(alpha) = (u^2 - D v^2) / 4 = n bounds |v| and |u|.
  const mpz_class n = ideal.norm();
  const i64 d = ideal.disc;
  const mpz_class four_n = 4 * n;
  for (mpz_class v = 0; v * v * (-d) <= four_n; ++v) {
    const mpz_class rest = four_n + d * v * v;
    if (rest < 0 || !mpz_perfect_square_p(rest.get_mpz_t())) continue;
    mpz_class u = sqrt(rest);
    for (int su = 0; su < 2; ++su) {
      for (int sv = 0; sv < 2; ++sv) {
        QuadraticInteger a{su ? mpz_class(-u) : u, sv ? mpz_class(-v) : v, d};
        if (mpz_class((a.u - a.v * d) % 2) != 0) continue;
        if (principal_ideal(a) == ideal) return a;
      }
    }
  }
  return std::nullopt;
}

bool is_pth_power(const QuadraticInteger& alpha, i64 p) {
  // beta^p = +-alpha forces N(beta)^p = N(alpha).
  const mpz_class n = alpha.norm();
  mpz_class root;
  if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p)) == 0) return false;
  const i64 d = alpha.disc;
  const mpz_class four_n = 4 * root;
  for (mpz_class v = 0; v * v * (-d) <= four_n; ++v) {
    const mpz_class rest = four_n + d * v * v;
    if (rest < 0 || !mpz_perfect_square_p(rest.get_mpz_t())) continue;
    const mpz_class u = sqrt(rest);
    for (int su = 0; su < 2; ++su) {
      QuadraticInteger b{su ? mpz_class(-u) : u, v, d};
      if (mpz_class((b.u - b.v * d) % 2) != 0) continue;
      const QuadraticInteger bp = power(b, p);
      if (bp == alpha) return true;
      if (bp.u == -alpha.u && bp.v == -alpha.v) return true;
    }
  }
  return false;
}

bool locally_trivial_brute(const QuadraticInteger& alpha, i64 p) {
  const i64 m = p * p * p;
  const ResidueRing ring(alpha.disc, m, p);
  std::set<i64> powers;
  std::vector<ResidueRing::Elt> roots;
  for (i64 i = 0; i < ring.size(); ++i) {
    const auto e = ring.element(i);
    if (!ring.is_unit(e)) continue;
    const auto ep = ring.pow(e, p);
    powers.insert(ring.index(ep));
    if (ep == ring.one()) roots.push_back(e);
  }
  const auto a = ring.reduce(alpha);
  for (const auto& t : roots) {
    if (powers.contains(ring.index(ring.mul(a, t)))) return true;
  }
  return false;
}

QuadraticInteger random_unit(std::mt19937_64& rng, i64 d, i64 p, i64 range) {
  std::uniform_int_distribution<i64> dist(-range, range);
  for (;;) {
    i64 u = dist(rng);
    const i64 v = dist(rng);
    if (mod(u - v * d, 2) != 0) ++u;
    QuadraticInteger a{u, v, d};
    if (a.norm() != 0 && (p == 1 || mpz_class(a.norm() % p) != 0)) return a;
  }
}

i64 discriminant_with(i64 p, LocalBehavior behavior, bool local_zeta, i64 start) {
  for (i64 n = start;; ++n) {
    if (!is_fundamental_brute(-n)) continue;
    const int k = p == 2 ? kronecker(-n, 2) : legendre_euler(-n, p);
    const bool ramified = n % p == 0;
    const LocalBehavior b = ramified ? LocalBehavior::Ramified : (k == 1 ? LocalBehavior::Split : LocalBehavior::Inert);
    if (b != behavior) continue;
    if (p == 3 && ramified && ((n / 3) % 3 == 1) != local_zeta) continue;
    return -n;
  }
}

}  // namespace iqgal::oracle
