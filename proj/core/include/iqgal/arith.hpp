#pragma once

// Word-size integer helpers shared by the class group and local computations.
// All functions take and return int64_t; intermediate products use __int128.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace iqgal {

using i64 = std::int64_t;
__extension__ typedef __int128 i128;

struct PrimePower {
  i64 prime = 0;
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Non-negative residue of a modulo m (m > 0).
constexpr i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 gcd(i64 a, i64 b);

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct ExtGcd {
  i64 g, x, y;
};
ExtGcd ext_gcd(i64 a, i64 b);

i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 base, i64 exp, i64 m);

/// Inverse of a modulo m; nullopt when gcd(a, m) != 1.
std::optional<i64> inverse_mod(i64 a, i64 m);

/// floor(sqrt(n)) for n >= 0.
i64 isqrt(i64 n);
bool is_square(i64 n);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(i64 n);

/// Prime factorization of |n| (n != 0), ascending primes. Trial division
/// up to 10^6, Pollard rho (Brent) for the remaining cofactor.
std::vector<PrimePower> factorize(i64 n);

/// Distinct prime divisors of |n|, ascending.
std::vector<i64> prime_divisors(i64 n);

/// Kronecker symbol (a | n) for n > 0.
int kronecker(i64 a, i64 n);

/// A square root of a modulo the odd prime p, or nullopt if a is a non-residue.
std::optional<i64> sqrt_mod_prime(i64 a, i64 p);

/// Hensel-lifts a square root r of a modulo p (p odd, p does not divide a)
/// to a square root modulo p^k.
i64 hensel_lift_sqrt(i64 a, i64 r, i64 p, int k);

/// All primes up to n (inclusive).
std::vector<i64> primes_up_to(i64 n);

/// Divisors of n > 0 in ascending order.
std::vector<i64> divisors(i64 n);

}  // namespace iqgal
