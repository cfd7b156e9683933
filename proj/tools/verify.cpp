#include "verify.hpp"

#include <random>
#include <sstream>

#include "iqgal/classify.hpp"
#include "iqgal/localtest.hpp"

namespace iqgal::cli {

namespace {

bool record(VerifyReport& r, bool good, const std::string& what) {
  ++r.checks;
  if (!good && r.ok) {
    r.ok = false;
    r.first_disagreement = what;
  }
  return good;
}

std::string show(const QuadForm& f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

// A fundamental D < -4 in which p has the given behavior; for p = 3 ramified
// the local cube root of unity is avoided unless `with_zeta` is set.
i64 discriminant_for(i64 p, LocalBehavior want, bool with_zeta = false) {
  for (i64 n = 7;; ++n) {
    if (!is_fundamental(-n)) continue;
    const auto fd = FundamentalDiscriminant::validate(-n);
    if (kronecker_at(fd, p) != want) continue;
    if (p == 3 && want == LocalBehavior::Ramified) {
      const bool zeta = mod(-n / -3, 3) == 1;
      if (zeta != with_zeta) continue;
    }
    return -n;
  }
}

QuadraticInteger random_unit(std::mt19937_64& rng, const LocalContext& ctx) {
  const i64 range = 10 * ctx.p * ctx.p;
  std::uniform_int_distribution<i64> dist(-range, range);
  for (;;) {
    i64 u = dist(rng);
    const i64 v = dist(rng);
    if (mod(u, 2) != mod(v * ctx.disc, 2)) ++u;
    QuadraticInteger a{u, v, ctx.disc};
    if (mpz_class(a.norm() % ctx.p) != 0) return a;
  }
}

}  // namespace

VerifyReport verify_forms(i64 bound) {
  VerifyReport r;
  r.suite = "forms";
  for (i64 n = 3; n <= bound; ++n) {
    const i64 d = -n;
    if (!is_fundamental(d)) continue;
    const auto forms = reduced_forms(d);
    const QuadForm e = QuadForm::principal(d);
    const std::string at = "D=" + std::to_string(d);
    record(r, static_cast<i64>(forms.size()) == class_number(d), at + " class number");
    for (const auto& f : forms) {
      if (!record(r, f.is_reduced() && f.disc() == d && f.is_primitive(), at + " f=" + show(f) + " not reduced")) break;
      record(r, compose(f, e) == f, at + " identity f=" + show(f));
      record(r, compose(f, f.inverse()) == e, at + " inverse f=" + show(f));
    }
    const std::size_t k = std::min<std::size_t>(forms.size(), 5);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const QuadForm& f = forms[i];
        const QuadForm& g = forms[j];
        record(r, compose(f, g) == compose(g, f), at + " commutativity " + show(f) + " " + show(g));
        for (std::size_t l = 0; l < k; ++l) {
          const QuadForm& q = forms[l];
          record(r, compose(compose(f, g), q) == compose(f, compose(g, q)),
                 at + " associativity " + show(f) + " " + show(g) + " " + show(q));
        }
      }
    }
    const auto fd = FundamentalDiscriminant::validate(d);
    const auto a = class_group(fd, ClassGroupBackend::Enumerate);
    const auto b = class_group(fd, ClassGroupBackend::Bsgs);
    record(r, a.h == b.h && a.invariant_factors == b.invariant_factors,
           at + " backends " + a.factors_string() + " vs " + b.factors_string());
  }
  return r;
}

VerifyReport verify_local(int samples, unsigned seed) {
  VerifyReport r;
  r.suite = "local";
  std::mt19937_64 rng(seed);
  for (i64 p : {3, 5, 7, 11, 13}) {
    for (auto behavior : {LocalBehavior::Split, LocalBehavior::Inert, LocalBehavior::Ramified}) {
      const i64 d = discriminant_for(p, behavior);
      const LocalContext ctx = build_context(FundamentalDiscriminant::validate(d), p);
      const GenericEngine engine(ctx);
      const std::string at = "D=" + std::to_string(d) + " p=" + std::to_string(p) + " ";
      record(r, engine.index() == p * p, at + "index " + std::to_string(engine.index()));
      for (int i = 0; i < samples; ++i) {
        const QuadraticInteger a = random_unit(rng, ctx);
        const QuadraticInteger b = random_unit(rng, ctx);
        const PhiImage ia = phi_image(ctx, a);
        std::ostringstream os;
        os << at << "alpha=" << a << " beta=" << b;
        record(r, ia.coords.has_value(), os.str() + " no closed form");
        if (!ia.coords) continue;
        record(r, ia.trivial == engine.contains(a), os.str() + " trivial-set mismatch");
        const PhiImage ib = phi_image(ctx, b);
        const PhiImage iab = phi_image(ctx, a * b);
        bool additive = true;
        for (int c = 0; c < 2; ++c) additive &= mod((*ia.coords)[c] + (*ib.coords)[c] - (*iab.coords)[c], p) == 0;
        record(r, additive, os.str() + " not additive");
      }
    }
  }
  // Ramified p = 3 with a local cube root of unity: only the generic engine applies.
  const i64 d = discriminant_for(3, LocalBehavior::Ramified, true);
  const LocalContext ctx = build_context(FundamentalDiscriminant::validate(d), 3);
  record(r, ctx.local_zeta_p.has_value(), "D=" + std::to_string(d) + " p=3 local zeta missing");
  record(r, GenericEngine(ctx).index() == 9, "D=" + std::to_string(d) + " p=3 zeta case index");
  return r;
}

VerifyReport verify_two(i64 bound) {
  VerifyReport r;
  r.suite = "two";
  for (i64 n = 3; n <= bound; ++n) {
    const i64 d = -n;
    if (d == -4 || d == -8 || !is_fundamental(d)) continue;
    const auto fd = FundamentalDiscriminant::validate(d);
    if (genus_two_rank(fd) != 1) continue;
    const auto cg = class_group(fd, default_backend(d));
    const InjectivityStatus closed = two_classification(fd, 1);
    const InjectivityStatus direct = two_direct_check(fd, cg);
    record(r, closed == direct,
           "D=" + std::to_string(d) + " closed=" + to_string(closed) + " direct=" + to_string(direct));
  }
  return r;
}

void print_report(std::ostream& os, const VerifyReport& r) {
  os << r.suite << ": " << (r.ok ? "ok" : "FAILED") << " (" << r.checks << " checks)\n";
  if (!r.ok) os << "  first disagreement: " << r.first_disagreement << "\n";
}

}  // namespace iqgal::cli
