#include <doctest.h>

#include <random>

#include "pitower/error.hpp"
#include "pitower/formal_module.hpp"
#include "pitower/series.hpp"

using namespace pitower;

namespace {

RingPtr z3() { return make_ring(LocalRingSpec::padic_integers(3, 10)); }
RingPtr z2s2() { return make_ring(LocalRingSpec::pure_root(2, 2, 12)); }

Series1 from_ints(const RingPtr& r, int D, const std::vector<std::int64_t>& c) {
  std::vector<RingElem> v;
  for (auto x : c) v.push_back(r->from_int(x));
  return Series1::from_coeffs(r, D, v);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Mismatch;
}

}  // namespace

TEST_CASE("reversion of X + X^2") {
  const auto r = z3();
  const Series1 s = from_ints(r, 3, {0, 1, 1});
  const Series1 inv = reversion(s);
  CHECK(inv == from_ints(r, 3, {0, 1, -1, 2}));
  // Catalan numbers with alternating sign
  const Series1 long_inv = reversion(from_ints(r, 7, {0, 1, 1}));
  const std::vector<std::int64_t> catalan{1, 1, 2, 5, 14, 42, 132};
  for (int k = 1; k <= 7; ++k) CHECK(long_inv.coeff(k) == r->from_int((k % 2 ? 1 : -1) * catalan[k - 1]));
}

TEST_CASE("reversion is a two-sided compositional inverse") {
  std::mt19937_64 rng(2);
  for (const auto& r : {z3(), z2s2()}) {
    for (int t = 0; t < 10; ++t) {
      Series1 s = random_series(r, 10, rng);
      s.set_coeff(1, r->one() + r->uniformizer() * s.coeff(1));
      const Series1 g = reversion(s);
      CHECK(s_compose(s, g) == Series1::identity(r, 10));
      CHECK(s_compose(g, s) == Series1::identity(r, 10));
    }
  }
}

TEST_CASE("reversion rejects a non-unit linear term") {
  const auto r = z3();
  CHECK(code_of([&] { reversion(from_ints(r, 4, {0, 3, 1})); }) == ErrorCode::NonUnitLinearTerm);
  CHECK(code_of([&] { reversion(from_ints(r, 4, {1, 1})); }) == ErrorCode::NonzeroConstantTerm);
}

TEST_CASE("composition is associative") {
  std::mt19937_64 rng(4);
  for (const auto& r : {z3(), z2s2()}) {
    for (int t = 0; t < 10; ++t) {
      const Series1 a = random_series(r, 9, rng), b = random_series(r, 9, rng), c = random_series(r, 9, rng);
      CHECK(s_compose(s_compose(a, b), c) == s_compose(a, s_compose(b, c)));
    }
  }
}

TEST_CASE("composition needs a vanishing constant term") {
  const auto r = z3();
  CHECK(code_of([&] { s_compose(from_ints(r, 3, {0, 1}), from_ints(r, 3, {1, 1})); }) ==
        ErrorCode::NonzeroConstantTerm);
}

TEST_CASE("products and inverses of series") {
  const auto r = z3();
  // (1 - X)^{-1} = Σ X^k
  const Series1 inv = series_inverse(from_ints(r, 8, {1, -1}));
  CHECK(inv == from_ints(r, 8, {1, 1, 1, 1, 1, 1, 1, 1, 1}));
  // (1+X)^2 = 1 + 2X + X^2
  const Series1 a = from_ints(r, 5, {1, 1});
  CHECK(a * a == from_ints(r, 5, {1, 2, 1}));
  CHECK(derivative(from_ints(r, 4, {0, 1, 1, 1, 1})) == from_ints(r, 3, {1, 2, 3, 4}));
}

TEST_CASE("weierstrass degree") {
  const auto r = z3();
  CHECK(weierstrass_degree(from_ints(r, 5, {0, 3, 9, 1})) == 3);
  CHECK(weierstrass_degree(from_ints(r, 5, {0, 1})) == 1);
  CHECK(!weierstrass_degree(from_ints(r, 5, {0, 3, 3})).has_value());
  CHECK(weierstrass_degree(gm_series(r)) == 3);
}

TEST_CASE("two-variable series") {
  const auto r = z3();
  const Series2 s = Series2::sum_law(r, 6);
  CHECK(s.coeff(1, 0) == r->one());
  CHECK(s.coeff(0, 1) == r->one());
  CHECK(s.coeff(1, 1).is_zero());
  Series2 t(r, 6);
  t.set_coeff(2, 1, r->from_int(5));
  CHECK(t.swapped().coeff(1, 2) == r->from_int(5));
  // substitute X = T, Y = T^2 into X + Y + XY
  Series2 g = Series2::sum_law(r, 6);
  g.set_coeff(1, 1, r->one());
  const Series1 x = from_ints(r, 6, {0, 1}), y = from_ints(r, 6, {0, 0, 1});
  CHECK(substitute(g, x, y) == from_ints(r, 6, {0, 1, 1, 1}));
}

TEST_CASE("fraction series floors") {
  const auto r = z3();
  FracSeries1 a = FracSeries1::from_integral(from_ints(r, 3, {0, 1, 1, 1}));
  a.den_exp = {0, 0, 1, 0};
  a.num.set_prec(2, r->N());
  CHECK(a.floor(2) == r->N() - 1);
  CHECK(a.max_den() == 1);
  const Series1 sc = a.scaled(1);
  CHECK(sc.coeff(1) == r->from_int(3));
  CHECK(sc.coeff(2) == r->one());
  CHECK(equal_within_floors(a, a));
}
