#include <doctest.h>

#include <random>

#include "pitower/error.hpp"
#include "pitower/formal_module.hpp"
#include "pitower/local_ring.hpp"
#include "pitower/modarith.hpp"

using namespace pitower;

namespace {

RingPtr z3() { return make_ring(LocalRingSpec::padic_integers(3, 12)); }
RingPtr z9() { return make_ring(LocalRingSpec::unramified(3, {-1, -1, 1}, 8)); }
RingPtr z2s2() { return make_ring(LocalRingSpec::pure_root(2, 2, 16)); }
// ramified over an unramified base: ω^2 = 3u
RingPtr z9_ram() {
  LocalRingSpec s;
  s.p = 3;
  s.f = 2;
  s.N = 6;
  s.unram = {-1, -1, 1};
  s.eis = {{0, -3}, {0, 0}, {1, 0}};
  return make_ring(s);
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

// brute-force irreducibility of a monic polynomial of degree <= 3 mod p: no roots
bool no_roots_mod_p(const std::vector<std::int64_t>& c, std::int64_t p) {
  for (std::int64_t x = 0; x < p; ++x) {
    std::int64_t v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = ((v * x + *it) % p + p) % p;
    if (v == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ring construction") {
  const auto r = z3();
  CHECK(r->degree() == 1);
  CHECK(r->modulus() == 531441);
  CHECK(r->residue_size() == 3);

  REQUIRE(no_roots_mod_p({-1, -1, 1}, 3));
  const auto u = z9();
  CHECK(u->degree() == 2);
  CHECK(u->residue_size() == 9);
  CHECK(u->e() == 1);

  const auto w = z2s2();
  CHECK(w->e() == 2);
  CHECK(w->degree() == 2);

  const auto t = z9_ram();
  CHECK(t->degree() == 4);
  CHECK(t->residue_size() == 9);
}

TEST_CASE("ring construction errors") {
  CHECK(code_of([] { make_ring(LocalRingSpec::padic_integers(4, 5)); }) == ErrorCode::NonPrime);
  CHECK(!no_roots_mod_p({-1, 0, 1}, 3));
  CHECK(code_of([] { make_ring(LocalRingSpec::unramified(3, {-1, 0, 1}, 5)); }) == ErrorCode::ReducibleUnramPoly);
  // (X+1)^3 over F_2
  CHECK(code_of([] { make_ring(LocalRingSpec::unramified(2, {1, 1, 1, 1}, 5)); }) == ErrorCode::ReducibleUnramPoly);
  CHECK(no_roots_mod_p({1, 1, 0, 1}, 2));
  CHECK_NOTHROW(make_ring(LocalRingSpec::unramified(2, {1, 1, 0, 1}, 5)));

  LocalRingSpec s = LocalRingSpec::pure_root(2, 2, 8);
  s.eis = {{-4}, {0}, {1}};
  CHECK(code_of([&] { make_ring(s); }) == ErrorCode::NotEisenstein);
  s.eis = {{-2}, {1}, {1}};
  CHECK(code_of([&] { make_ring(s); }) == ErrorCode::NotEisenstein);
}

TEST_CASE("arithmetic examples") {
  const auto r = z2s2();
  const RingElem w = r->uniformizer();
  CHECK(w * w == r->from_int(2));
  const RingElem one = r->one();
  CHECK((one + w) * (one - w) == r->from_int(-1));
  CHECK(w + r->zero() == w);
  CHECK(code_of([&] { (void)(w + z3()->one()); }) == ErrorCode::SpecMismatch);
}

TEST_CASE("inverse") {
  const auto r = z3();
  CHECK(inv(r->one()) == r->one());
  // geometric series Σ (-3)^k mod 3^12
  const std::int64_t m = 531441;
  std::int64_t s = 0, t = 1;
  for (int k = 0; k < 12; ++k) {
    s = (s + t) % m;
    t = (t * -3) % m;
  }
  CHECK(inv(r->from_int(4)) == r->from_int(s));
  CHECK(code_of([&] { inv(r->uniformizer()); }) == ErrorCode::NonUnit);
  CHECK(code_of([&] { inv(z2s2()->uniformizer()); }) == ErrorCode::NonUnit);
}

TEST_CASE("valuation examples") {
  for (const auto& r : {z3(), z9(), z2s2(), z9_ram()}) {
    CHECK(valuation(r->uniformizer()).value == Rational(1));
    CHECK(valuation(r->from_int(static_cast<std::int64_t>(r->p()))).value == Rational(r->e()));
    CHECK(valuation(r->one() + r->uniformizer()).value == Rational(0));
    CHECK(valuation(r->zero()).infinite);
  }
  // 2×2 determinant by hand for 1 + ω in Z_2[√2]: [[1, 2], [1, 1]] -> det -1
  const auto r = z2s2();
  const auto m = multiplication_matrix(r->one() + r->uniformizer());
  const auto mod = r->modulus();
  const auto det = (modarith::mul(m[0], m[3], mod) + mod - modarith::mul(m[1], m[2], mod)) % mod;
  CHECK(det == mod - 1);
}

TEST_CASE("valuation agrees with the determinant route") {
  std::mt19937_64 rng(7);
  for (const auto& r : {z9(), z2s2(), z9_ram()}) {
    for (int t = 0; t < 40; ++t) {
      const int k = static_cast<int>(rng() % 3);
      RingElem x = random_element(r, rng);
      if (!x.is_unit()) x = x + r->one();
      if (!x.is_unit()) continue;
      x = x * pow(r->uniformizer(), k);
      const auto nv = norm_valuation(x);
      REQUIRE(!nv.infinite);
      CHECK(nv.value == valuation(x).value);
    }
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(11);
  for (const auto& r : {z3(), z9(), z2s2(), z9_ram()}) {
    for (int t = 0; t < 50; ++t) {
      const RingElem a = random_element(r, rng), b = random_element(r, rng), c = random_element(r, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      CHECK((a + b) - b == a);
    }
  }
}

TEST_CASE("valuation is additive below the precision") {
  std::mt19937_64 rng(3);
  for (const auto& r : {z3(), z9(), z2s2(), z9_ram()}) {
    const int cap = r->e() * r->N();
    for (int t = 0; t < 40; ++t) {
      RingElem x = random_element(r, rng), y = random_element(r, rng);
      const auto vx = valuation(x), vy = valuation(y);
      if (vx.infinite || vy.infinite) continue;
      if (vx.value.num() + vy.value.num() >= cap) continue;
      CHECK(valuation(x * y).value == vx.value + vy.value);
    }
  }
}

TEST_CASE("valuation on Z_p is e times v_p") {
  for (const auto& r : {z2s2(), z9_ram(), z9()}) {
    for (std::int64_t n : {1, 2, 5, 12, 18, 45, 81, 250}) {
      const int vp = modarith::valuation(static_cast<std::uint64_t>(n), r->p(), 64);
      if (vp >= r->N()) continue;
      CHECK(valuation(r->from_int(n)).value == Rational(r->e() * vp));
    }
  }
}

TEST_CASE("teichmueller lifts") {
  const auto r = z3();
  CHECK(r->teichmueller(0) == r->one());
  CHECK(r->teichmueller_lift(2) == r->from_int(-1));
  for (const auto& ring : {z3(), z9(), z2s2(), z9_ram()}) {
    const auto q = ring->residue_size();
    for (std::uint64_t k = 0; k + 1 < q; ++k) CHECK(pow(ring->teichmueller(k), q - 1) == ring->one());
  }
  const auto u = z9();
  const RingElem t = u->teichmueller(1);
  CHECK(pow(t, 8) == u->one());
  CHECK(t.coords()[1] != 0);  // not in Z_3
}

TEST_CASE("inverse is two-sided") {
  std::mt19937_64 rng(5);
  for (const auto& r : {z3(), z9(), z2s2(), z9_ram()}) {
    for (int t = 0; t < 30; ++t) {
      const RingElem x = random_element(r, rng);
      if (!x.is_unit()) continue;
      CHECK(x * inv(x) == r->one());
      CHECK(inv(x) * x == r->one());
    }
  }
}

TEST_CASE("lift round trip") {
  const auto r = z9();
  const auto big = r->at_precision(20);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const RingElem x = random_element(r, rng);
    CHECK(lift(lift(x, big), r) == x);
  }
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(48, 81) == Rational(16, 27));
  CHECK(Rational(2, 3).str() == "2/3");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational::parse("-6/8") == Rational(-3, 4));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(Rational(3, -6) == Rational(-1, 2));
}
