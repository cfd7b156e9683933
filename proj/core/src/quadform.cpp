#include "iqgal/quadform.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>

namespace iqgal {

namespace {

std::string mismatch_message(i64 d1, i64 d2) {
  std::ostringstream os;
  os << "discriminant mismatch: " << d1 << " vs " << d2;
  return os.str();
}

std::string overflow_message(i64 p, int rank) {
  std::ostringstream os;
  os << "class group has " << p << "-rank " << rank << " >= 3";
  return os.str();
}

i64 floor_div(i128 n, i128 d) {
  i128 q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return static_cast<i64>(q);
}

// Translate b into (-a, a] keeping the discriminant.
void normalize(i128& a, i128& b, i128& c) {
  if (-a < b && b <= a) return;
  i128 r = floor_div(a - b, 2 * a);
  i128 nb = b + 2 * r * a;
  c = a * r * r + b * r + c;
  b = nb;
}

}  // namespace

DiscriminantMismatch::DiscriminantMismatch(i64 d1, i64 d2)
    : std::invalid_argument(mismatch_message(d1, d2)) {}

RankOverflow::RankOverflow(i64 p, int rank)
    : std::runtime_error(overflow_message(p, rank)), p_(p), rank_(rank) {}

bool QuadForm::is_reduced() const {
  if (!(std::abs(b) <= a && a <= c)) return false;
  if ((std::abs(b) == a || a == c) && b < 0) return false;
  return true;
}

QuadForm QuadForm::principal(i64 d) {
  i64 delta = d % 2 == 0 ? 0 : 1;
  return {1, delta, (delta - d) / 4};
}

std::ostream& operator<<(std::ostream& os, const QuadForm& f) {
  return os << '(' << f.a << ',' << f.b << ',' << f.c << ')';
}

QuadForm reduce(QuadForm f) {
  i128 a = f.a, b = f.b, c = f.c;
  normalize(a, b, c);
  while (a > c) {
    std::swap(a, c);
    b = -b;
    normalize(a, b, c);
  }
  if (a == c && b < 0) b = -b;
  return {static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)};
}

QuadForm compose(const QuadForm& f, const QuadForm& g) {
  const i64 d = f.disc();
  if (g.disc() != d) throw DiscriminantMismatch(d, g.disc());

  QuadForm f1 = f, f2 = g;
  if (f1.a > f2.a) std::swap(f1, f2);
  const i64 s = (f1.b + f2.b) / 2;
  const i64 n = f2.b - s;

  i64 y1, dd;
  if (f2.a % f1.a == 0) {
    y1 = 0;
    dd = f1.a;
  } else {
    auto [g1, u, v] = ext_gcd(f2.a, f1.a);
    (void)v;
    y1 = u;
    dd = g1;
  }

  i64 x2, y2, d1;
  if (s % dd == 0) {
    y2 = -1;
    x2 = 0;
    d1 = dd;
  } else {
    auto [g2, xs, yd] = ext_gcd(s, dd);
    x2 = xs;
    y2 = -yd;
    d1 = g2;
  }

  const i64 v1 = f1.a / d1;
  const i64 v2 = f2.a / d1;
  i128 r = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
  if (r < 0) r += v1;
  const i128 a3 = static_cast<i128>(v1) * v2;
  const i128 b3 = f2.b + 2 * static_cast<i128>(v2) * r;
  const i128 c3 = (b3 * b3 - d) / (4 * a3);

  i128 a = a3, b = b3, c = c3;
  normalize(a, b, c);
  return reduce({static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)});
}

QuadForm power(const QuadForm& f, i64 e) {
  QuadForm base = e < 0 ? reduce(f.inverse()) : reduce(f);
  if (e < 0) e = -e;
  QuadForm result = QuadForm::principal(f.disc());
  while (e > 0) {
    if (e & 1) result = compose(result, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

i64 order_dividing(const QuadForm& f, i64 multiple) {
  i64 ord = multiple;
  for (const auto& [q, e] : factorize(multiple)) {
    for (int j = 0; j < e; ++j) {
      if (power(f, ord / q).is_principal()) {
        ord /= q;
      } else {
        break;
      }
    }
  }
  return ord;
}

std::vector<QuadForm> reduced_forms(i64 d) {
  std::vector<QuadForm> out;
  const i64 n = -d;
  for (i64 a = 1; 3 * a * a <= n; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (mod(b - d, 2) != 0) continue;
      i128 num = static_cast<i128>(b) * b - d;
      if (num % (4 * a) != 0) continue;
      i64 c = static_cast<i64>(num / (4 * a));
      if (c < a || (c == a && b < 0)) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  std::sort(out.begin(), out.end(), [](const QuadForm& x, const QuadForm& y) {
    if (x.a != y.a) return x.a < y.a;
    if (std::abs(x.b) != std::abs(y.b)) return std::abs(x.b) < std::abs(y.b);
    return x.b < y.b;
  });
  return out;
}

i64 count_reduced_forms(i64 d) {
  const i64 n = -d;
  i64 count = 0;
  for (i64 a = 1; 3 * a * a <= n; ++a) {
    const i64 four_a = 4 * a;
    for (i64 b = (n & 1); b <= a; b += 2) {
      i64 num = b * b + n;
      if (num % four_a != 0) continue;
      i64 c = num / four_a;
      if (c < a) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      count += (b == 0 || b == a || a == c) ? 1 : 2;
    }
  }
  return count;
}

std::optional<QuadForm> prime_form(i64 d, i64 q) {
  if (kronecker(d, q) == -1) return std::nullopt;
  i64 b = -1;
  if (q == 2) {
    for (i64 t = 0; t <= 2; ++t) {
      if (mod(t * t - d, 8) == 0) {
        b = t;
        break;
      }
    }
  } else {
    i64 r = *sqrt_mod_prime(d, q);
    if (mod(r - d, 2) != 0) r = q - r;
    b = r;
  }
  if (b < 0) return std::nullopt;
  i128 num = static_cast<i128>(b) * b - d;
  return reduce({q, b, static_cast<i64>(num / (4 * q))});
}

QuadForm coprime_representative(const QuadForm& f, i64 p) {
  if (!f.is_primitive()) throw std::invalid_argument("coprime_representative: form is not primitive");
  auto eval = [&](i64 x, i64 y) {
    return static_cast<i128>(f.a) * x * x + static_cast<i128>(f.b) * x * y +
           static_cast<i128>(f.c) * y * y;
  };
  auto try_vector = [&](i64 x, i64 y) -> std::optional<QuadForm> {
    if (gcd(x, y) != 1) return std::nullopt;
    i128 value = eval(x, y);
    if (value % p == 0) return std::nullopt;
    // Complete (x, y) to a matrix [[x, z], [y, w]] of determinant 1.
    auto [g, s, t] = ext_gcd(x, y);
    (void)g;
    i64 w = s, z = -t;
    i128 a = value;
    i128 b = 2 * static_cast<i128>(f.a) * x * z + static_cast<i128>(f.b) * (static_cast<i128>(x) * w + static_cast<i128>(y) * z) +
             2 * static_cast<i128>(f.c) * y * w;
    i128 c = eval(z, w);
    normalize(a, b, c);
    return QuadForm{static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)};
  };

  if (auto r = try_vector(1, 0)) return *r;
  for (i64 k = 1;; ++k) {
    for (i64 j = 0; j <= k; ++j) {
      // Vectors with max(|x|, |y|) = k, one per sign class.
      const std::pair<i64, i64> candidates[] = {{j, k}, {k, j}, {k, -j}, {j, -k}};
      for (auto [x, y] : candidates) {
        if (auto r = try_vector(x, y)) return *r;
      }
    }
  }
}

}  // namespace iqgal
