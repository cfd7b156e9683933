#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "iqgal/quadform.hpp"

namespace iqgal {

namespace {

using ExponentVector = std::vector<i64>;
using SubgroupTable = std::unordered_map<QuadForm, ExponentVector, QuadFormHash>;

// Explicitly enumerated subgroup <g_1, ..., g_k> with each element's exponent
// vector, plus the lower-triangular relation matrix produced while growing it.
struct SubgroupBuilder {
  i64 disc;
  SubgroupTable table;
  std::vector<QuadForm> gens;
  std::vector<std::vector<i64>> relations;

  explicit SubgroupBuilder(i64 d) : disc(d) { table.emplace(QuadForm::principal(d), ExponentVector{}); }

  std::size_t size() const { return table.size(); }

  // Adds g given its relative order e (g^e in the current subgroup, e > 1).
  void extend(const QuadForm& g, i64 e) {
    const QuadForm ge = power(g, e);
    ExponentVector in_s = table.at(ge);
    in_s.resize(gens.size(), 0);

    const std::size_t k = gens.size();
    std::vector<i64> row(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) row[i] = -in_s[i];
    row[k] = e;
    for (auto& r : relations) r.push_back(0);
    relations.push_back(std::move(row));
    gens.push_back(g);

    std::vector<std::pair<QuadForm, ExponentVector>> base(table.begin(), table.end());
    QuadForm gj = g;
    for (i64 j = 1; j < e; ++j) {
      for (const auto& [elt, vec] : base) {
        ExponentVector v = vec;
        v.resize(k + 1, 0);
        v[k] = j;
        table.emplace(compose(elt, gj), std::move(v));
      }
      gj = compose(gj, g);
    }
  }
};

// Smith normal form of the relation lattice, tracking generator changes.
// Entries are kept modulo h, which is valid because h * e_i lies in the
// lattice for every i.
struct SmithResult {
  std::vector<i64> factors;
  std::vector<QuadForm> gens;
};

SmithResult smith_form(std::vector<std::vector<i64>> m, std::vector<QuadForm> gens, i64 h) {
  const std::size_t k = gens.size();
  auto red = [h](i64 x) {
    i64 r = mod(x, h);
    return r > h / 2 ? r - h : r;
  };
  for (auto& row : m) {
    for (auto& x : row) x = red(x);
  }

  std::vector<i64> diag(k, h);
  for (std::size_t t = 0; t < k; ++t) {
    for (;;) {
      // Pivot: smallest nonzero entry of the trailing block.
      std::size_t pi = k, pj = k;
      i64 best = 0;
      for (std::size_t i = t; i < k; ++i) {
        for (std::size_t j = t; j < k; ++j) {
          if (m[i][j] != 0 && (best == 0 || std::abs(m[i][j]) < best)) {
            best = std::abs(m[i][j]);
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == k) break;  // block is zero modulo h
      std::swap(m[t], m[pi]);
      if (pj != t) {
        for (auto& row : m) std::swap(row[t], row[pj]);
        std::swap(gens[t], gens[pj]);
      }

      bool clean = true;
      const i64 piv = m[t][t];
      for (std::size_t i = t + 1; i < k; ++i) {
        if (m[i][t] == 0) continue;
        i64 q = m[i][t] / piv;
        for (std::size_t j = t; j < k; ++j) m[i][j] = red(m[i][j] - q * m[t][j]);
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < k; ++j) {
        if (m[t][j] == 0) continue;
        i64 q = m[t][j] / piv;
        // col_j -= q col_t  <=>  g_t <- g_t * g_j^q
        for (std::size_t i = t; i < k; ++i) m[i][j] = red(m[i][j] - q * m[i][t]);
        gens[t] = compose(gens[t], power(gens[j], q));
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: the pivot must divide the trailing block.
      bool divides = true;
      const i64 g = gcd(piv, h);
      for (std::size_t i = t + 1; i < k && divides; ++i) {
        for (std::size_t j = t + 1; j < k; ++j) {
          if (m[i][j] % g != 0) {
            for (std::size_t c = t; c < k; ++c) m[t][c] = red(m[t][c] + m[i][c]);
            divides = false;
            break;
          }
        }
      }
      if (divides) {
        diag[t] = g;
        break;
      }
    }
  }

  SmithResult out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  for (std::size_t i : idx) {
    if (diag[i] == 1) continue;
    out.factors.push_back(diag[i]);
    out.gens.push_back(gens[i]);
  }
  return out;
}

ClassGroupStructure finish(i64 d, i64 h, const SubgroupBuilder& sb) {
  SmithResult snf = smith_form(sb.relations, sb.gens, h);
  ClassGroupStructure cg;
  cg.discriminant = d;
  cg.h = h;
  cg.invariant_factors = std::move(snf.factors);
  cg.generators = std::move(snf.gens);

  i64 product = 1;
  for (std::size_t i = 0; i < cg.invariant_factors.size(); ++i) {
    const i64 di = cg.invariant_factors[i];
    product *= di;
    if (i > 0 && di % cg.invariant_factors[i - 1] != 0) {
      throw std::logic_error("invariant factors do not form a divisor chain");
    }
    if (order_dividing(cg.generators[i], di) != di) {
      throw std::logic_error("generator order does not match invariant factor");
    }
  }
  if (product != h) throw std::logic_error("invariant factors do not multiply to h");
  return cg;
}

ClassGroupStructure class_group_enumerate(const FundamentalDiscriminant& fd) {
  const i64 d = fd.value();
  const std::vector<QuadForm> forms = reduced_forms(d);
  const i64 h = static_cast<i64>(forms.size());
  SubgroupBuilder sb(d);
  for (const QuadForm& g : forms) {
    if (static_cast<i64>(sb.size()) == h) break;
    if (sb.table.contains(g)) continue;
    i64 e = 1;
    QuadForm ge = g;
    while (!sb.table.contains(ge)) {
      ge = compose(ge, g);
      ++e;
    }
    sb.extend(g, e);
  }
  if (static_cast<i64>(sb.size()) != h) throw std::logic_error("reduced forms do not close to a group");
  return finish(d, h, sb);
}

// Order of g by baby-step giant-step with a doubling search bound.
i64 bsgs_order(const QuadForm& g) {
  const i64 d = g.disc();
  std::unordered_map<QuadForm, i64, QuadFormHash> baby;
  QuadForm cur = QuadForm::principal(d);
  i64 m = 0;
  for (i64 bound = 64;; bound *= 4) {
    const i64 target = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(bound))));
    while (m < target) {
      baby.emplace(cur, m);
      cur = compose(cur, g);
      ++m;
      if (cur.is_principal()) return m;
    }
    // Giant steps g^(m k), k = 1, 2, ...
    const QuadForm giant = power(g, m);
    QuadForm y = giant;
    for (i64 k = 1; k * m <= bound + m; ++k) {
      auto it = baby.find(y);
      if (it != baby.end()) return order_dividing(g, k * m - it->second);
      y = compose(y, giant);
    }
  }
}

ClassGroupStructure class_group_bsgs(const FundamentalDiscriminant& fd) {
  const i64 d = fd.value();
  SubgroupBuilder sb(d);
  // Prime forms of norm up to sqrt(|D|/3) generate Cl_K unconditionally.
  const i64 bound = isqrt(-d / 3);
  for (i64 q : primes_up_to(bound)) {
    auto g = prime_form(d, q);
    if (!g || g->is_principal() || sb.table.contains(*g)) continue;
    const i64 ord = bsgs_order(*g);
    i64 e = ord;
    for (i64 div : divisors(ord)) {
      if (div > 1 && sb.table.contains(power(*g, div))) {
        e = div;
        break;
      }
    }
    sb.extend(*g, e);
  }
  return finish(d, static_cast<i64>(sb.size()), sb);
}

}  // namespace

int ClassGroupStructure::p_rank(i64 p) const {
  return static_cast<int>(std::count_if(invariant_factors.begin(), invariant_factors.end(),
                                        [p](i64 di) { return di % p == 0; }));
}

std::string ClassGroupStructure::factors_string() const {
  if (invariant_factors.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) os << (i ? "x" : "") << invariant_factors[i];
  return os.str();
}

ClassGroupBackend default_backend(i64 d) {
  return std::abs(d) <= 1'000'000 ? ClassGroupBackend::Enumerate : ClassGroupBackend::Bsgs;
}

ClassGroupStructure class_group(const FundamentalDiscriminant& d, ClassGroupBackend backend) {
  ClassGroupStructure cg = backend == ClassGroupBackend::Enumerate ? class_group_enumerate(d)
                                                                   : class_group_bsgs(d);
  // Genus theory: a prime discriminant has odd class number.
  if (d.num_prime_divisors() == 1 && cg.h % 2 == 0) {
    throw std::logic_error("even class number for a prime discriminant");
  }
  return cg;
}

i64 class_number(i64 d) {
  if (default_backend(d) == ClassGroupBackend::Enumerate) return count_reduced_forms(d);
  return class_group(FundamentalDiscriminant::validate(d), ClassGroupBackend::Bsgs).h;
}

std::vector<QuadForm> p_torsion_basis(const ClassGroupStructure& cg, i64 p) {
  const int rank = cg.p_rank(p);
  if (rank >= 3) throw RankOverflow(p, rank);
  std::vector<QuadForm> basis;
  for (std::size_t i = 0; i < cg.invariant_factors.size(); ++i) {
    const i64 di = cg.invariant_factors[i];
    if (di % p == 0) basis.push_back(power(cg.generators[i], di / p));
  }
  return basis;
}

}  // namespace iqgal
