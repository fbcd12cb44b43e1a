#include <doctest.h>

#include <random>

#include "pitower/error.hpp"
#include "pitower/formal_module.hpp"
#include "pitower/modarith.hpp"

using namespace pitower;

namespace {

RingPtr zp(std::uint64_t p, int N = 12) { return make_ring(LocalRingSpec::padic_integers(p, N)); }
RingPtr z4() { return make_ring(LocalRingSpec::unramified(2, {1, 1, 1}, 12)); }
RingPtr z2s2() { return make_ring(LocalRingSpec::pure_root(2, 2, 12)); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Mismatch;
}

// generalized binomial C(a, k) mod m by Pascal's rule
std::uint64_t binom(std::int64_t a, int k, std::uint64_t m) {
  const bool neg = a < 0;
  const std::int64_t top = neg ? -a + k - 1 : a;
  if (top < k) return 0;
  std::vector<std::uint64_t> row{1};
  for (std::int64_t n = 1; n <= top; ++n) {
    std::vector<std::uint64_t> next(row.size() + 1, 0);
    next[0] = 1;
    for (std::size_t i = 1; i < row.size(); ++i) next[i] = (row[i - 1] + row[i]) % m;
    next[row.size()] = 1;
    row = std::move(next);
  }
  const std::uint64_t c = row[k];
  return neg && k % 2 ? (m - c) % m : c;
}

Series1 poly(const RingPtr& r, const std::vector<std::int64_t>& c) {
  std::vector<RingElem> v;
  for (auto x : c) v.push_back(r->from_int(x));
  return Series1::polynomial(r, v);
}

}  // namespace

TEST_CASE("multiplicative law is X + Y + XY") {
  for (std::uint64_t p : {2, 3, 5}) {
    const auto r = zp(p);
    const FormalModuleLaw law = lt_law(gm_series(r), 16);
    CHECK(law.kind() == LawKind::Multiplicative);
    for (int i = 0; i <= 16; ++i)
      for (int j = 0; i + j <= 16; ++j) {
        const bool one = (i + j == 1) || (i == 1 && j == 1);
        CHECK(law.F().coeff(i, j) == (one ? r->one() : r->zero()));
      }
  }
}

TEST_CASE("multiplicative brackets are binomial series") {
  const auto r = zp(3, 10);
  const FormalModuleLaw law = lt_law(gm_series(r), 14);
  for (std::int64_t a : {2, 5, -1, -3, 7}) {
    const Series1 b = law.bracket(r->from_int(a));
    CHECK(b.coeff(0).is_zero());
    for (int k = 1; k <= 14; ++k) CHECK(b.coeff(k) == r->from_coords({binom(a, k, r->modulus())}));
  }
}

TEST_CASE("group law axioms") {
  for (const auto& r : {zp(3), z4(), z2s2()}) {
    const FormalModuleLaw law = lt_law(default_lt_series(r), 10);
    CHECK(law.F().swapped() == law.F());
    for (int i = 0; i <= 10; ++i) {
      CHECK(law.F().coeff(i, 0) == (i == 1 ? r->one() : r->zero()));
    }
    CHECK(law.bracket(law.pi()) == law.frobenius().truncated(10));
    CHECK(law.bracket(r->one()) == Series1::identity(r, 10));
    CHECK(divisibility_check(law));
  }
}

TEST_CASE("shuffled solve order gives the same law") {
  const auto r = z4();
  const FormalModuleLaw base = lt_law(default_lt_series(r), 10);
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    LawOptions o;
    o.shuffle_seed = seed;
    CHECK(lt_law(default_lt_series(r), 10, o).F() == base.F());
    const RingElem a = r->from_int(3) + r->basis_element(1, 0);
    CHECK(solve_bracket(base, a, o) == base.bracket(a));
  }
}

TEST_CASE("LT series validation") {
  const auto r = zp(3);
  CHECK(code_of([&] { validate_lt_series(poly(r, {0, 3, 1})); }) == ErrorCode::NotLTSeries);
  CHECK(code_of([&] { validate_lt_series(poly(r, {0, 9, 0, 1})); }) == ErrorCode::NotLTSeries);
  CHECK(code_of([&] { validate_lt_series(poly(r, {1, 3, 0, 1})); }) == ErrorCode::NotLTSeries);
  CHECK_NOTHROW(validate_lt_series(poly(r, {0, 3, 0, 1})));
  CHECK_NOTHROW(validate_lt_series(poly(r, {0, -3, 6, 1})));
}

TEST_CASE("heights") {
  const HeightResult g = height_of(lt_law(gm_series(zp(3)), 12));
  CHECK(g.kind == HeightResult::Kind::Finite);
  CHECK(g.h == 1);

  const HeightResult q4 = height_of(lt_law(default_lt_series(z4()), 12));
  CHECK(q4.h == 2);
  CHECK(q4.h_r == 1);

  const auto r = z2s2();
  const FormalModuleLaw ram = lt_law(default_lt_series(r), 12);
  CHECK(height_of(ram).h == 1);
  CHECK(zp_height_check(ram) == 2);

  const auto r3 = zp(3, 8);
  LawOptions o;
  o.frobenius_power = 2;
  const FormalModuleLaw h2 = lt_law(default_lt_series(r3, 2), 10, o);
  CHECK(height_of(h2).h == 2);
  CHECK(height_of(h2).h_r == 2);

  const HeightResult add = height_of(additive_law(zp(3), 8));
  CHECK(add.kind == HeightResult::Kind::LowerBound);
}

TEST_CASE("additive law") {
  const auto r = zp(5);
  const FormalModuleLaw law = additive_law(r, 8);
  CHECK(law.F() == Series2::sum_law(r, 8));
  const Series1 b = law.bracket(r->from_int(7));
  CHECK(b.coeff(1) == r->from_int(7));
  for (int k = 2; k <= 8; ++k) CHECK(b.coeff(k).is_zero());
}

TEST_CASE("endomorphisms and homomorphisms") {
  const auto r = zp(3);
  const FormalModuleLaw law = lt_law(gm_series(r), 10);
  CHECK(is_endomorphism(law, law.bracket(r->from_int(4))));
  CHECK(!is_endomorphism(law, poly(r, {0, 1, 1}).truncated(10)));
  CHECK(is_homomorphism(law, law, Series1::identity(r, 10)));
  CHECK(is_homomorphism(law, law, poly(r, {0, 2, 1}).truncated(10)));  // (1+X)^2 - 1
  CHECK(!is_homomorphism(law, law, poly(r, {0, 1, 0, 1}).truncated(10)));
}

TEST_CASE("logarithm of the multiplicative law") {
  const auto r = zp(3, 10);
  const FracSeries1 L = formal_log(lt_law(gm_series(r), 12));
  for (int k = 1; k <= 12; ++k) {
    // (-1)^{k+1}/k = num / 3^den modulo 3^floor
    const int vk = modarith::valuation(k, 3, 64);
    const std::uint64_t mod = modarith::checked_power(3, L.num.prec(k));
    const std::uint64_t unit = modarith::inverse(k / static_cast<int>(modarith::checked_power(3, vk)) % mod, mod);
    const std::uint64_t expect = modarith::mul(k % 2 ? unit : mod - unit,
                                               modarith::checked_power(3, L.den_exp[k] - vk), mod);
    CHECK(L.num.coeff(k).coords()[0] % mod == expect);
  }
}

TEST_CASE("exponential coefficients are 1/k!") {
  const auto r = zp(3, 12);
  const FracSeries1 E = formal_exp(lt_law(gm_series(r), 10));
  std::uint64_t fact = 1;
  for (int k = 1; k <= 10; ++k) {
    fact *= k;
    if (E.floor(k) <= 0) continue;
    const int v = modarith::valuation(fact, 3, 64);
    const std::uint64_t mod = modarith::checked_power(3, E.num.prec(k));
    const std::uint64_t u = modarith::inverse((fact / modarith::checked_power(3, v)) % mod, mod);
    REQUIRE(E.den_exp[k] >= v);
    CHECK(E.num.coeff(k).coords()[0] % mod == modarith::mul(u, modarith::checked_power(3, E.den_exp[k] - v), mod));
  }
}

TEST_CASE("log and exp are mutually inverse") {
  for (const auto& r : {zp(3), z4()}) {
    const FormalModuleLaw law = lt_law(default_lt_series(r), 10);
    const FracSeries1 L = formal_log(law);
    CHECK(L.num.coeff(1) == r->one());
    for (const RingElem& a : {r->from_int(2), r->from_int(3), law.pi()}) CHECK(log_linear_for(law, L, a));
  }
}

TEST_CASE("random associativity and bracket homomorphism") {
  std::mt19937_64 rng(21);
  for (const auto& r : {zp(3), z4(), z2s2()}) {
    const FormalModuleLaw law = lt_law(default_lt_series(r), 10);
    for (int t = 0; t < 5; ++t) {
      const Series1 x = random_series(r, 10, rng), y = random_series(r, 10, rng), z = random_series(r, 10, rng);
      CHECK(associativity_holds(law, x, y, z));
      CHECK(bracket_hom_holds(law, random_element(r, rng), random_element(r, rng)));
    }
  }
}

TEST_CASE("bracket cache is shared between copies") {
  const auto r = zp(5);
  const FormalModuleLaw law = lt_law(default_lt_series(r), 8);
  const FormalModuleLaw copy = law;
  const RingElem two = r->from_int(2);
  (void)law.bracket(two);
  CHECK(copy.cached_brackets().count(std::vector<Coord>(two.coords().begin(), two.coords().end())) == 1);
}

TEST_CASE("law kind names") {
  for (LawKind k : {LawKind::LubinTate, LawKind::Multiplicative, LawKind::Additive})
    CHECK(law_kind_from_string(to_string(k)) == k);
}
