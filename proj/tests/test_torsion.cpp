#include <doctest.h>

#include "pitower/error.hpp"
#include "pitower/torsion.hpp"

using namespace pitower;

namespace {

RingPtr zp(std::uint64_t p, int N = 12) { return make_ring(LocalRingSpec::padic_integers(p, N)); }
RingPtr z4() { return make_ring(LocalRingSpec::unramified(2, {1, 1, 1}, 12)); }

Series1 poly(const RingPtr& r, const std::vector<std::int64_t>& c) {
  std::vector<RingElem> v;
  for (auto x : c) v.push_back(r->from_int(x));
  return Series1::polynomial(r, v);
}

std::uint64_t ipow(std::uint64_t b, int k) {
  std::uint64_t r = 1;
  while (k-- > 0) r *= b;
  return r;
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

TEST_CASE("newton polygon examples") {
  const auto r = zp(3);
  const NewtonPolygon np = newton_polygon(poly(r, {0, 3, 0, 1}));
  REQUIRE(np.segments.size() == 1);
  CHECK(np.segments[0].slope == Rational(-1, 2));
  CHECK(np.segments[0].length == 2);
  const auto roots = root_valuations(np, 1);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].v_p == Rational(1, 2));
  CHECK(roots[0].multiplicity == 2);

  // 9X + 3X^2 + X^4: vertices (1,2) (2,1) (4,0)
  const NewtonPolygon two = newton_polygon(poly(r, {0, 9, 3, 0, 1}));
  REQUIRE(two.segments.size() == 2);
  CHECK(two.segments[0].slope == Rational(-1));
  CHECK(two.segments[0].length == 1);
  CHECK(two.segments[1].slope == Rational(-1, 2));
  CHECK(two.segments[1].length == 2);

  CHECK(code_of([&] { newton_polygon(poly(r, {0, 3, 9})); }) == ErrorCode::NoUnitCoefficient);
}

TEST_CASE("root valuations in omega units") {
  const auto r = make_ring(LocalRingSpec::pure_root(2, 2, 10));
  // ωX + X^2 : one root of valuation 1 in ω-units, 1/2 in p-units
  std::vector<RingElem> c{r->zero(), r->uniformizer(), r->one()};
  const auto roots = root_valuations(newton_polygon(Series1::polynomial(r, c)), r->e());
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].v_omega == Rational(1));
  CHECK(roots[0].v_p == Rational(1, 2));
}

TEST_CASE("iterated multiplicative bracket is (1+X)^9 - 1") {
  const auto r = zp(3, 10);
  const FormalModuleLaw law = lt_law(gm_series(r), 12);
  const Series1 it = iterate_bracket(law, 2, 12);
  const std::vector<std::int64_t> b9{1, 9, 36, 84, 126, 126, 84, 36, 9, 1};
  for (int k = 1; k <= 12; ++k) CHECK(it.coeff(k) == r->from_int(k <= 9 ? b9[k] : 0));
}

TEST_CASE("primitive quotient by polynomial division") {
  const auto r = zp(2, 10);
  const FormalModuleLaw law = lt_law(gm_series(r), 8);
  // ((1+X)^4 - 1)/((1+X)^2 - 1) = (1+X)^2 + 1
  const Series1 q = primitive_quotient(law, 2, 8);
  const std::vector<std::int64_t> expect{2, 2, 1};
  for (int k = 0; k <= 8; ++k) CHECK(q.coeff(k) == r->from_int(k < 3 ? expect[k] : 0));
}

TEST_CASE("torsion profiles of the multiplicative law") {
  const auto r = zp(3, 12);
  const FormalModuleLaw law = lt_law(gm_series(r), 12);
  CHECK(torsion_profile(law, 0, 27).order == 1);
  const TorsionProfile t1 = torsion_profile(law, 1, 27);
  CHECK(t1.order == 3);
  CHECK(t1.primitive_degree == 2);
  CHECK(t1.ram_lower_bound == 2);
  const TorsionProfile t2 = torsion_profile(law, 2, 27);
  CHECK(t2.order == 9);
  CHECK(t2.primitive_degree == 6);
  CHECK(t2.ram_lower_bound == 6);
}

TEST_CASE("torsion orders grow by q^h per level") {
  struct Case {
    RingPtr ring;
    int levels;
  };
  for (const auto& c : {Case{zp(2), 4}, Case{zp(3), 3}, Case{z4(), 2}}) {
    const FormalModuleLaw law = lt_law(default_lt_series(c.ring), 8);
    const auto q = c.ring->residue_size();
    const int D = static_cast<int>(ipow(q, c.levels));
    for (int n = 1; n <= c.levels; ++n) {
      const TorsionProfile tp = torsion_profile(law, n, D);
      CHECK(tp.order == ipow(q, n));
      // primitive roots share one valuation 1/((q-1) q^{n-1})
      REQUIRE(tp.roots.size() == 1);
      CHECK(tp.roots[0].v_omega == Rational(1, static_cast<std::int64_t>((q - 1) * ipow(q, n - 1))));
      CHECK(tp.ram_lower_bound == (q - 1) * ipow(q, n - 1));
    }
  }
}

TEST_CASE("truncation too small") {
  const FormalModuleLaw law = lt_law(gm_series(zp(3)), 8);
  CHECK(code_of([&] { torsion_profile(law, 3, 9); }) == ErrorCode::TruncationTooSmall);
}

TEST_CASE("generator bound") {
  CHECK(generator_bound_check(4, 2, 2).pass);
  CHECK(!generator_bound_check(5, 2, 2).pass);
  CHECK(generator_bound_check(1, 1, 1).pass);
}

TEST_CASE("full height towers") {
  const FormalModuleLaw gm = lt_law(gm_series(zp(3)), 12);
  const TowerReport rep = full_height_tower(gm, 2, 27);
  CHECK(rep.all_pass());
  REQUIRE(rep.levels.size() == 2);
  CHECK(rep.levels[0].predicted_degree == 2);
  CHECK(rep.levels[1].predicted_degree == 6);

  const FormalModuleLaw q4 = lt_law(default_lt_series(z4()), 12);
  const TowerReport r4 = full_height_tower(q4, 2, 16);
  CHECK(r4.all_pass());
  CHECK(r4.levels[1].predicted_degree == 12);

  LawOptions o;
  o.frobenius_power = 2;
  const auto r3 = zp(3, 8);
  const FormalModuleLaw h2 = lt_law(default_lt_series(r3, 2), 10, o);
  CHECK(code_of([&] { full_height_tower(h2, 1, 10); }) == ErrorCode::NotFullHeight);
}
