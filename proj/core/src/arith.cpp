#include "iqgal/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>

namespace iqgal {

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

ExtGcd ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b;
  i64 old_s = 1, s = 0;
  i64 old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 mul_mod(i64 a, i64 b, i64 m) {
  i128 r = static_cast<i128>(a) * b % m;
  if (r < 0) r += m;
  return static_cast<i64>(r);
}

i64 pow_mod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::optional<i64> inverse_mod(i64 a, i64 m) {
  auto [g, x, y] = ext_gcd(mod(a, m), m);
  (void)y;
  if (g != 1) return std::nullopt;
  return mod(x, m);
}

i64 isqrt(i64 n) {
  if (n < 0) throw std::domain_error("isqrt of negative number");
  auto r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n) {
  if (n < 0) return false;
  i64 r = isqrt(n);
  return r * r == n;
}

namespace {

bool miller_rabin_witness(i64 n, i64 a, i64 d, int s) {
  i64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

i64 pollard_brent(i64 n) {
  if (n % 2 == 0) return 2;
  for (i64 c = 1;; ++c) {
    i64 y = 2, m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](i64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (i64 i = 0; i < r; ++i) y = f(y);
      i64 k = 0;
      do {
        ys = y;
        for (i64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, std::abs(x - y), n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(std::abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(i64 n, std::map<i64, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  i64 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

std::vector<PrimePower> factorize(i64 n) {
  if (n == 0) throw std::domain_error("factorize(0)");
  n = std::abs(n);
  std::map<i64, int> found;
  constexpr i64 kTrialBound = 1'000'000;
  for (i64 p = 2; p <= kTrialBound && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ++found[p];
      n /= p;
    }
  }
  if (n > 1) factor_rec(n, found);
  std::vector<PrimePower> result;
  for (auto [p, e] : found) result.push_back({p, e});
  return result;
}

std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  for (const auto& pp : factorize(n)) out.push_back(pp.prime);
  return out;
}

int kronecker(i64 a, i64 n) {
  if (n <= 0) throw std::domain_error("kronecker: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    i64 r = mod(a, 8);
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (a | n) for odd n.
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::optional<i64> sqrt_mod_prime(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) return 0;
  if (p == 2) return a;
  if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  // Tonelli-Shanks.
  i64 q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  i64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  i64 m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p), r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 i = 0, tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

i64 hensel_lift_sqrt(i64 a, i64 r, i64 p, int k) {
  i64 modulus = p;
  for (int j = 1; j < k; ++j) {
    i64 next = modulus * p;
    // r <- r - (r^2 - a) / (2r) mod next
    i64 f = mod(mul_mod(r, r, next) - a, next);
    i64 inv = *inverse_mod(mod(2 * r, next), next);
    r = mod(r - mul_mod(f, inv, next), next);
    modulus = next;
  }
  return mod(r, modulus);
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (i64 i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (const auto& [p, e] : factorize(n)) {
    std::size_t size = out.size();
    i64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace iqgal
