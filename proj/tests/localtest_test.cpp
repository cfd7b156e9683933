#include "iqgal/localtest.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"
#include "iqgal/classify.hpp"
#include "oracles.hpp"

namespace iqgal {
namespace {

using Behaviors = std::vector<LocalBehavior>;
const Behaviors kAll = {LocalBehavior::Split, LocalBehavior::Inert, LocalBehavior::Ramified};

LocalContext context(i64 d, i64 p) { return build_context(FundamentalDiscriminant::validate(d), p); }

QuadraticInteger qi(i64 u, i64 v, i64 d) { return {mpz_class(static_cast<long>(u)), mpz_class(static_cast<long>(v)), d}; }

TEST(LocalTest, ContextExamples) {
  const LocalContext split = context(-23, 3);
  EXPECT_EQ(split.splitting, LocalBehavior::Split);
  EXPECT_EQ(split.modulus, 9);
  ASSERT_TRUE(split.root.has_value());
  EXPECT_EQ(mod(*split.root * *split.root + 23, 9), 0);
  EXPECT_TRUE(*split.root == 2 || *split.root == 7);

  const LocalContext inert = context(-20, 11);
  EXPECT_EQ(inert.splitting, LocalBehavior::Inert);
  EXPECT_FALSE(inert.root.has_value());

  const LocalContext ram = context(-15, 3);
  EXPECT_EQ(ram.splitting, LocalBehavior::Ramified);
  EXPECT_FALSE(ram.local_zeta_p.has_value());
  EXPECT_FALSE(ram.needs_generic_engine());

  const LocalContext zeta = context(-39, 3);  // -39 / -3 = 13 = 1 mod 3
  ASSERT_TRUE(zeta.local_zeta_p.has_value());
  const ResidueRing ring = zeta.ring();
  const auto z = *zeta.local_zeta_p;
  EXPECT_EQ(ring.mul(ring.mul(z, z), z), ring.one());
  EXPECT_NE(z, ring.one());
  EXPECT_TRUE(zeta.needs_generic_engine());

  EXPECT_EQ(context(-20, 2).modulus, 8);
  EXPECT_THROW(context(-23, 9), std::invalid_argument);
}

TEST(LocalTest, IdentityIsTrivial) {
  for (i64 p : {3, 5, 7}) {
    for (auto b : kAll) {
      const LocalContext ctx = context(oracle::discriminant_with(p, b), p);
      const PhiImage one = phi_image(ctx, QuadraticInteger::one(ctx.disc));
      EXPECT_TRUE(one.trivial);
      ASSERT_TRUE(one.coords.has_value());
      EXPECT_EQ(*one.coords, (std::array<i64, 2>{0, 0}));
      EXPECT_TRUE(generic_membership(ctx, QuadraticInteger::one(ctx.disc)).trivial);
    }
  }
}

TEST(LocalTest, SplitFermatQuotient) {
  // alpha = 2 at a split prime 3: both components are 2, and 2^2 = 4 != 1 mod 9.
  const LocalContext ctx = context(-23, 3);
  const PhiImage img = phi_image(ctx, qi(4, 0, -23));
  EXPECT_FALSE(img.trivial);
  ASSERT_TRUE(img.coords.has_value());
  EXPECT_EQ(*img.coords, (std::array<i64, 2>{1, 1}));
}

TEST(LocalTest, NonUnitsAreRejected) {
  const LocalContext ctx = context(-23, 3);
  EXPECT_THROW(phi_image(ctx, qi(6, 0, -23)), NotLocalUnit);
  EXPECT_THROW(GenericEngine(ctx).contains(qi(6, 0, -23)), NotLocalUnit);
}

TEST(LocalTest, GenericEngineSizeLimit) {
  EXPECT_NO_THROW(GenericEngine(context(-23 * 4 + 1, 23)));
  EXPECT_THROW(GenericEngine(context(oracle::discriminant_with(29, LocalBehavior::Inert), 29)), GroupTooLarge);
}

TEST(LocalTest, ClosedFormAgreesWithGenericEngine) {
  std::mt19937_64 rng(1234);
  for (i64 p : {3, 5, 7, 11, 13}) {
    for (auto b : kAll) {
      const i64 d = oracle::discriminant_with(p, b);
      const LocalContext ctx = context(d, p);
      ASSERT_FALSE(ctx.needs_generic_engine());
      const GenericEngine engine(ctx);
      int nontrivial = 0;
      for (int i = 0; i < 150; ++i) {
        const auto a = oracle::random_unit(rng, d, p, 20 * p * p);
        const PhiImage img = phi_image(ctx, a);
        ASSERT_TRUE(img.coords.has_value());
        ASSERT_EQ(img.trivial, *img.coords == (std::array<i64, 2>{0, 0}));
        ASSERT_EQ(img.trivial, engine.contains(a)) << "D=" << d << " p=" << p << " alpha=" << a;
        nontrivial += !img.trivial;
      }
      EXPECT_GT(nontrivial, 0);
    }
  }
}

TEST(LocalTest, CoordinatesAreHomomorphic) {
  std::mt19937_64 rng(99);
  for (i64 p : {3, 5, 7, 11, 13}) {
    for (auto b : kAll) {
      const i64 d = oracle::discriminant_with(p, b);
      const LocalContext ctx = context(d, p);
      for (int i = 0; i < 100; ++i) {
        const auto x = oracle::random_unit(rng, d, p, 20 * p * p);
        const auto y = oracle::random_unit(rng, d, p, 20 * p * p);
        const auto cx = *phi_image(ctx, x).coords;
        const auto cy = *phi_image(ctx, y).coords;
        const auto cxy = *phi_image(ctx, x * y).coords;
        for (int k = 0; k < 2; ++k) ASSERT_EQ(mod(cx[k] + cy[k] - cxy[k], p), 0) << "D=" << d << " p=" << p;
        // p-th powers die.
        const auto cp = *phi_image(ctx, oracle::power(x, p)).coords;
        ASSERT_EQ(cp, (std::array<i64, 2>{0, 0}));
      }
    }
  }
}

TEST(LocalTest, CoordinatesAreSurjective) {
  std::mt19937_64 rng(3);
  for (i64 p : {3, 5, 7}) {
    for (auto b : kAll) {
      const i64 d = oracle::discriminant_with(p, b);
      const LocalContext ctx = context(d, p);
      std::set<std::array<i64, 2>> seen;
      for (int i = 0; i < 2000 && static_cast<i64>(seen.size()) < p * p; ++i) {
        seen.insert(*phi_image(ctx, oracle::random_unit(rng, d, p, 20 * p * p)).coords);
      }
      EXPECT_EQ(static_cast<i64>(seen.size()), p * p) << "D=" << d << " p=" << p;
    }
  }
}

TEST(LocalTest, QuotientHasOrderPSquared) {
  for (i64 p : {3, 5, 7}) {
    for (auto b : kAll) {
      const GenericEngine engine(context(oracle::discriminant_with(p, b), p));
      EXPECT_EQ(engine.index(), p * p);
    }
  }
  const GenericEngine zeta(context(oracle::discriminant_with(3, LocalBehavior::Ramified, true), 3));
  ASSERT_TRUE(zeta.context().local_zeta_p.has_value());
  EXPECT_EQ(zeta.index(), 9);
}

// Membership decided independently at precision p^3, where the kernel of
// reduction consists of p-th powers.
TEST(LocalTest, EngineAgreesWithHigherPrecisionBruteForce) {
  std::mt19937_64 rng(17);
  struct Case {
    i64 p;
    LocalBehavior b;
    bool zeta;
  };
  const std::vector<Case> cases = {{3, LocalBehavior::Split, false},    {3, LocalBehavior::Inert, false},
                                   {3, LocalBehavior::Ramified, false}, {3, LocalBehavior::Ramified, true},
                                   {5, LocalBehavior::Split, false},    {5, LocalBehavior::Inert, false},
                                   {5, LocalBehavior::Ramified, false}};
  for (const Case& c : cases) {
    for (i64 start : {5, 1000, 100000}) {
      const i64 d = oracle::discriminant_with(c.p, c.b, c.zeta, start);
      const LocalContext ctx = context(d, c.p);
      const GenericEngine engine(ctx);
      for (int i = 0; i < 25; ++i) {
        const auto a = oracle::random_unit(rng, d, c.p, 1000);
        ASSERT_EQ(engine.contains(a), oracle::locally_trivial_brute(a, c.p)) << "D=" << d << " p=" << c.p << " " << a;
      }
    }
  }
}

TEST(LocalTest, ZetaTimesPowersAreTrivial) {
  std::mt19937_64 rng(8);
  const i64 d = oracle::discriminant_with(3, LocalBehavior::Ramified, true, 1000);
  const LocalContext ctx = context(d, 3);
  const GenericEngine engine(ctx);
  const ResidueRing ring = ctx.ring();
  for (int i = 0; i < 50; ++i) {
    const auto beta = ring.reduce(oracle::random_unit(rng, d, 3, 100));
    const auto cube = ring.pow(beta, 3);
    EXPECT_TRUE(engine.contains(cube));
    EXPECT_TRUE(engine.contains(ring.mul(cube, *ctx.local_zeta_p)));
  }
}

TEST(LocalTest, InjectivityTestByDeterminant) {
  const LocalContext ctx = context(-11, 5);
  const std::vector<PhiImage> one = {{std::array<i64, 2>{1, 0}, false}};
  EXPECT_TRUE(injectivity_test(ctx, one));
  const std::vector<PhiImage> dependent = {{std::array<i64, 2>{1, 0}, false}, {std::array<i64, 2>{2, 0}, false}};
  EXPECT_FALSE(injectivity_test(ctx, dependent));
  const std::vector<PhiImage> independent = {{std::array<i64, 2>{1, 2}, false}, {std::array<i64, 2>{0, 3}, false}};
  EXPECT_TRUE(injectivity_test(ctx, independent));
  const std::vector<PhiImage> zero = {{std::array<i64, 2>{0, 0}, true}};
  EXPECT_FALSE(injectivity_test(ctx, zero));
}

TEST(LocalTest, TableOneSplitFieldHasTrivialImage) {
  const auto fd = FundamentalDiscriminant::validate(-107);
  const auto cg = class_group(fd);
  const auto basis = p_torsion_basis(cg, 3);
  ASSERT_EQ(basis.size(), 1u);
  const auto alpha = torsion_generator(basis[0], 3).alpha;
  EXPECT_TRUE(phi_image(context(-107, 3), alpha).trivial);
  EXPECT_TRUE(generic_membership(context(-107, 3), alpha).trivial);
}

TEST(LocalTest, TwoClassificationExamples) {
  auto two = [](i64 d) {
    const auto fd = FundamentalDiscriminant::validate(d);
    return two_classification(fd, genus_two_rank(fd));
  };
  EXPECT_EQ(two(-20), InjectivityStatus::Injective);
  EXPECT_EQ(two(-35), InjectivityStatus::Noninjective);
  EXPECT_EQ(two(-24), InjectivityStatus::Injective);
  EXPECT_EQ(two(-40), InjectivityStatus::Injective);
  EXPECT_EQ(two(-23), InjectivityStatus::Skipped);
  EXPECT_EQ(two(-420), InjectivityStatus::Noninjective);

  EXPECT_EQ(two_direct_check(FundamentalDiscriminant::validate(-20)), InjectivityStatus::Injective);
  EXPECT_EQ(two_direct_check(FundamentalDiscriminant::validate(-35)), InjectivityStatus::Noninjective);
  EXPECT_EQ(two_direct_check(FundamentalDiscriminant::validate(-40)), InjectivityStatus::Injective);
  EXPECT_EQ(two_direct_check(FundamentalDiscriminant::validate(-24)), InjectivityStatus::Injective);
}

TEST(LocalTest, TwoClassificationMatchesDirectCheck) {
  for (i64 n = 3; n <= 20000; ++n) {
    if (n == 4 || n == 8 || !is_fundamental(-n)) continue;
    const auto fd = FundamentalDiscriminant::validate(-n);
    if (genus_two_rank(fd) != 1) continue;
    ASSERT_EQ(two_classification(fd, 1), two_direct_check(fd)) << -n;
  }
}

TEST(LocalTest, StatusStrings) {
  for (auto s : {InjectivityStatus::Injective, InjectivityStatus::Noninjective, InjectivityStatus::RankOverflow,
                 InjectivityStatus::Skipped}) {
    EXPECT_EQ(injectivity_status_from_string(to_string(s)), s);
  }
  EXPECT_EQ(to_string(InjectivityStatus::RankOverflow), "rank_overflow");
}

}  // namespace
}  // namespace iqgal
