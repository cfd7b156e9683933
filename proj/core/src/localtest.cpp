#include "iqgal/localtest.hpp"

#include <sstream>

namespace iqgal {

namespace {

i64 mpz_mod(const mpz_class& a, i64 m) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
  return r.get_si();
}

i64 fermat_quotient(i64 c, i64 p) {
  const i64 p2 = p * p;
  return (pow_mod(c, p - 1, p2) - 1) / p;
}

// Elements x + y sqrt(D) modulo p^2 for odd p.
struct SqrtDElt {
  i64 x, y;
};

SqrtDElt sqrtd_mul(SqrtDElt a, SqrtDElt b, i64 d, i64 m) {
  return {mod(mul_mod(a.x, b.x, m) + mul_mod(mul_mod(d, a.y, m), b.y, m), m),
          mod(mul_mod(a.x, b.y, m) + mul_mod(a.y, b.x, m), m)};
}

SqrtDElt sqrtd_pow(SqrtDElt a, i64 e, i64 d, i64 m) {
  SqrtDElt r{1, 0};
  while (e > 0) {
    if (e & 1) r = sqrtd_mul(r, a, d, m);
    a = sqrtd_mul(a, a, d, m);
    e >>= 1;
  }
  return r;
}

[[noreturn]] void throw_not_unit(const LocalContext& ctx, const QuadraticInteger& alpha) {
  std::ostringstream os;
  os << alpha << " is not a unit at " << ctx.p;
  throw NotLocalUnit(os.str());
}

PhiImage closed_form_split(const LocalContext& ctx, const QuadraticInteger& alpha) {
  const i64 p = ctx.p, m = ctx.modulus;
  const i64 inv2 = (m + 1) / 2;
  const i64 u = mpz_mod(alpha.u, m), v = mpz_mod(alpha.v, m);
  const i64 r = *ctx.root;
  const i64 c1 = mul_mod(mod(u + mul_mod(v, r, m), m), inv2, m);
  const i64 c2 = mul_mod(mod(u - mul_mod(v, r, m), m), inv2, m);
  if (c1 % p == 0 || c2 % p == 0) throw_not_unit(ctx, alpha);
  std::array<i64, 2> coords{fermat_quotient(c1, p), fermat_quotient(c2, p)};
  return {coords, coords[0] == 0 && coords[1] == 0};
}

PhiImage closed_form_inert(const LocalContext& ctx, const QuadraticInteger& alpha) {
  const i64 p = ctx.p;
  const ResidueRing ring = ctx.ring();
  const ResidueRing::Elt a = ring.reduce(alpha);
  if (!ring.is_unit(a)) throw_not_unit(ctx, alpha);
  // beta lies in 1 + pO; its class mod 1 + p^2 O is the coordinate vector.
  const ResidueRing::Elt beta = ring.pow(a, p * p - 1);
  std::array<i64, 2> coords{(beta.x - 1) / p, beta.y / p};
  return {coords, coords[0] == 0 && coords[1] == 0};
}

PhiImage closed_form_ramified(const LocalContext& ctx, const QuadraticInteger& alpha) {
  const i64 p = ctx.p, m = ctx.modulus, d = ctx.disc;
  const i64 inv2 = (m + 1) / 2;
  const SqrtDElt a{mul_mod(mpz_mod(alpha.u, m), inv2, m), mul_mod(mpz_mod(alpha.v, m), inv2, m)};
  if (a.x % p == 0) throw_not_unit(ctx, alpha);
  // alpha^(p-1) = 1 + c1 pi + c2 pi^2 (mod pi^3), pi = sqrt D. Without a local
  // zeta_p the p-th powers of U^(1) fill out U^(3), so (c1, c2) taken in the
  // basis {1 + pi, 1 + pi^2} of U^(1)/U^(3) is the image.
  const SqrtDElt w = sqrtd_pow(a, p - 1, d, m);
  const i64 k = ((w.x - 1) / p) % p;  // x - 1 = p k = pi^2 k / (D/p)
  const i64 unit_part = *inverse_mod(mod(d / p, p), p);
  const i64 e1 = w.y % p;
  const i64 pi2_coeff = mul_mod(k, unit_part, p);
  const i64 e2 = mod(pi2_coeff - e1 * (e1 - 1) / 2, p);
  std::array<i64, 2> coords{e1, e2};
  return {coords, e1 == 0 && e2 == 0};
}

}  // namespace

std::string to_string(InjectivityStatus s) {
  switch (s) {
    case InjectivityStatus::Injective: return "injective";
    case InjectivityStatus::Noninjective: return "noninjective";
    case InjectivityStatus::RankOverflow: return "rank_overflow";
    case InjectivityStatus::Skipped: return "skipped";
  }
  return "?";
}

InjectivityStatus injectivity_status_from_string(const std::string& s) {
  if (s == "injective") return InjectivityStatus::Injective;
  if (s == "noninjective") return InjectivityStatus::Noninjective;
  if (s == "rank_overflow") return InjectivityStatus::RankOverflow;
  if (s == "skipped") return InjectivityStatus::Skipped;
  throw std::invalid_argument("unknown status: " + s);
}

ResidueRing::ResidueRing(i64 disc, i64 modulus, i64 prime)
    : n_(modulus), p_(prime), delta_(disc % 2 == 0 ? 0 : 1), k_(mod((disc - (disc % 2 == 0 ? 0 : 1)) / 4, modulus)) {}

ResidueRing::Elt ResidueRing::mul(const Elt& a, const Elt& b) const {
  const i64 yy = a.y * b.y % n_;
  return {(a.x * b.x + yy * k_) % n_, (a.x * b.y + a.y * b.x + delta_ * yy) % n_};
}

ResidueRing::Elt ResidueRing::pow(Elt a, i64 e) const {
  Elt r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

i64 ResidueRing::norm(const Elt& a) const {
  // N(x + y w) = x^2 + delta x y - k y^2
  return mod(a.x * a.x + delta_ * a.x * a.y - k_ * a.y % n_ * a.y, n_);
}

ResidueRing::Elt ResidueRing::reduce(const QuadraticInteger& alpha) const {
  auto [x, y] = alpha.omega_coords();
  return {mpz_mod(x, n_), mpz_mod(y, n_)};
}

LocalContext build_context(const FundamentalDiscriminant& d, i64 p) {
  if (!is_prime(p)) throw std::invalid_argument("build_context: p must be prime");
  LocalContext ctx;
  ctx.p = p;
  ctx.disc = d.value();
  ctx.splitting = kronecker_at(d, p);
  ctx.precision_exponent = p == 2 ? 3 : 2;
  ctx.modulus = p == 2 ? 8 : p * p;
  const ResidueRing ring = ctx.ring();
  const i64 dv = d.value();

  if (p == 2) {
    ctx.torsion_generators.push_back(ring.make(-1, 0));
    if (ctx.splitting == LocalBehavior::Split) {
      // O/8O = Z/8 x Z/8; add (-1, 1) through a nontrivial idempotent.
      for (i64 idx = 0; idx < ring.size(); ++idx) {
        const auto e = ring.element(idx);
        if (e == ring.make(0, 0) || e == ring.one() || !(ring.mul(e, e) == e)) continue;
        ctx.torsion_generators.push_back(ring.make(1 - 2 * e.x, -2 * e.y));
        break;
      }
      if (auto r = sqrt_mod_prime(dv, 2)) ctx.root = r;
    } else if (ctx.splitting == LocalBehavior::Ramified && dv % 4 == 0 && mod(-dv / 4, 8) == 1) {
      // D = -4m with m = 1 (mod 8): Q_2(sqrt -m) = Q_2(i), i = omega / sqrt(m).
      const i64 m = -dv / 4;
      for (i64 s = 1; s < 8; s += 2) {
        if (mod(s * s - m, 16) == 0) {
          ctx.torsion_generators.push_back(ring.make(0, *inverse_mod(s, 8)));
          break;
        }
      }
    }
    return ctx;
  }

  if (ctx.splitting == LocalBehavior::Split) {
    const i64 r = *sqrt_mod_prime(dv, p);
    ctx.root = hensel_lift_sqrt(mod(dv, ctx.modulus), r, p, 2);
  } else if (ctx.splitting == LocalBehavior::Ramified && p == 3 && mod(dv / -3, 3) == 1) {
    // zeta_3 = (-1 + sqrt(-3))/2 with sqrt(-3) = sqrt(D) / s, s^2 = D/(-3).
    const i64 m9 = ctx.modulus;
    const i64 s = hensel_lift_sqrt(mod(dv / -3, m9), 1, 3, 2);
    const i64 s_inv = *inverse_mod(s, m9);
    const i64 inv2 = (m9 + 1) / 2;
    const int delta = d.delta();
    // sqrt D = 2 omega - delta
    const auto zeta = ring.make(mul_mod(mod(-1 - s_inv * delta, m9), inv2, m9), s_inv);
    ctx.local_zeta_p = zeta;
    ctx.torsion_generators.push_back(zeta);
  }
  return ctx;
}

PhiImage phi_image(const LocalContext& ctx, const QuadraticInteger& alpha) {
  if (ctx.needs_generic_engine()) return generic_membership(ctx, alpha);
  switch (ctx.splitting) {
    case LocalBehavior::Split: return closed_form_split(ctx, alpha);
    case LocalBehavior::Inert: return closed_form_inert(ctx, alpha);
    case LocalBehavior::Ramified: return closed_form_ramified(ctx, alpha);
  }
  throw std::logic_error("unreachable");
}

GenericEngine::GenericEngine(const LocalContext& ctx) : ctx_(ctx), ring_(ctx.ring()) {
  if (ctx.p != 2 && ctx.p > kMaxOddPrime) {
    throw GroupTooLarge("generic engine limited to p <= 23, got " + std::to_string(ctx.p));
  }
  member_.assign(static_cast<std::size_t>(ring_.size()), 0);
  group_order_ = 0;
  for (i64 idx = 0; idx < ring_.size(); ++idx) {
    const auto e = ring_.element(idx);
    if (!ring_.is_unit(e)) continue;
    ++group_order_;
    member_[static_cast<std::size_t>(ring_.index(ring_.pow(e, ctx.p)))] = 1;
  }
  close_under(ctx.torsion_generators);
}

void GenericEngine::close_under(const std::vector<ResidueRing::Elt>& gens) {
  std::vector<i64> frontier;
  for (i64 idx = 0; idx < ring_.size(); ++idx) {
    if (member_[static_cast<std::size_t>(idx)]) frontier.push_back(idx);
  }
  // Closing a finite set containing a subgroup under multiplication by the
  // generators yields the generated subgroup.
  while (!frontier.empty()) {
    std::vector<i64> next;
    for (i64 idx : frontier) {
      const auto e = ring_.element(idx);
      for (const auto& g : gens) {
        const i64 j = ring_.index(ring_.mul(e, g));
        if (!member_[static_cast<std::size_t>(j)]) {
          member_[static_cast<std::size_t>(j)] = 1;
          next.push_back(j);
        }
      }
    }
    frontier = std::move(next);
  }
  subgroup_order_ = 0;
  for (auto m : member_) subgroup_order_ += m;
}

ResidueRing::Elt GenericEngine::checked_unit(const QuadraticInteger& alpha) const {
  const auto e = ring_.reduce(alpha);
  if (!ring_.is_unit(e)) throw_not_unit(ctx_, alpha);
  return e;
}

bool GenericEngine::contains(const QuadraticInteger& alpha) const { return contains(checked_unit(alpha)); }

GenericEngine GenericEngine::extended(const QuadraticInteger& alpha) const {
  GenericEngine out = *this;
  out.close_under({checked_unit(alpha)});
  return out;
}

PhiImage GenericEngine::image(const QuadraticInteger& alpha) const { return {std::nullopt, contains(alpha)}; }

PhiImage generic_membership(const LocalContext& ctx, const QuadraticInteger& alpha) {
  return GenericEngine(ctx).image(alpha);
}

bool injectivity_test(const LocalContext& ctx, std::span<const PhiImage> images,
                      std::span<const QuadraticInteger> alphas) {
  if (images.empty() || images.size() > 2) {
    throw std::invalid_argument("injectivity_test expects one or two images");
  }
  if (images[0].trivial) return false;
  if (images.size() == 1) return true;
  if (images[1].trivial) return false;
  if (images[0].coords && images[1].coords) {
    const auto& x = *images[0].coords;
    const auto& y = *images[1].coords;
    return mod(x[0] * y[1] - x[1] * y[0], ctx.p) != 0;
  }
  if (alphas.size() != 2) {
    throw std::invalid_argument("rank-2 test without coordinates needs both generators");
  }
  return !GenericEngine(ctx).extended(alphas[0]).contains(alphas[1]);
}

InjectivityStatus two_classification(const FundamentalDiscriminant& d, int two_rank) {
  if (two_rank <= 0) return InjectivityStatus::Skipped;
  if (two_rank >= 2) return InjectivityStatus::Noninjective;
  const i64 n = -d.value();
  const auto& f = d.prime_factors();
  bool injective = false;
  if (n % 2 == 1) {
    // -pq with p = 5 and q = 3 (mod 8)
    const i64 r0 = f[0].prime % 8, r1 = f[1].prime % 8;
    injective = (r0 == 5 && r1 == 3) || (r0 == 3 && r1 == 5);
  } else if (n % 8 == 4) {
    injective = (n / 4) % 8 == 5;
  } else {
    const i64 r = (n / 8) % 8;
    injective = r == 3 || r == 5;
  }
  return injective ? InjectivityStatus::Injective : InjectivityStatus::Noninjective;
}

InjectivityStatus two_direct_check(const FundamentalDiscriminant& d, const ClassGroupStructure& cg) {
  if (cg.h % 2 != 0) throw std::invalid_argument("two_direct_check: odd class number");
  const auto basis = p_torsion_basis(cg, 2);
  if (basis.size() != 1) throw std::invalid_argument("two_direct_check: 2-class group is not cyclic");
  const LocalContext ctx = build_context(d, 2);
  const TorsionGenerator tg = torsion_generator(basis[0], 2);
  return GenericEngine(ctx).contains(tg.alpha) ? InjectivityStatus::Noninjective : InjectivityStatus::Injective;
}

InjectivityStatus two_direct_check(const FundamentalDiscriminant& d) {
  return two_direct_check(d, class_group(d, default_backend(d.value())));
}

}  // namespace iqgal
