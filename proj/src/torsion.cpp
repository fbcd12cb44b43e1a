#include "pitower/torsion.hpp"

#include <numeric>

#include "pitower/error.hpp"
#include "pitower/modarith.hpp"

namespace pitower {

namespace ma = modarith;

NewtonPolygon newton_polygon(const Series1& s) {
  const auto w = weierstrass_degree(s);
  if (!w) throw Error(ErrorCode::NoUnitCoefficient, "series has no unit coefficient up to its truncation");
  const auto& ring = *s.ring();
  std::vector<std::pair<int, int>> pts;
  for (int i = 0; i <= *w; ++i) {
    const int v = ring.valuation(s.raw(i));
    if (v != LocalRing::kInfiniteValuation) pts.emplace_back(i, v);
  }
  // lower hull, left to right
  NewtonPolygon np;
  auto cross = [](std::pair<int, int> o, std::pair<int, int> a, std::pair<int, int> b) {
    return static_cast<std::int64_t>(a.first - o.first) * (b.second - o.second) -
           static_cast<std::int64_t>(a.second - o.second) * (b.first - o.first);
  };
  for (const auto& pt : pts) {
    while (np.vertices.size() >= 2 && cross(np.vertices[np.vertices.size() - 2], np.vertices.back(), pt) <= 0)
      np.vertices.pop_back();
    np.vertices.push_back(pt);
  }
  for (std::size_t k = 1; k < np.vertices.size(); ++k) {
    const auto [i0, v0] = np.vertices[k - 1];
    const auto [i1, v1] = np.vertices[k];
    np.segments.push_back({Rational(v1 - v0, i1 - i0), i1 - i0});
  }
  return np;
}

std::vector<RootValuation> root_valuations(const NewtonPolygon& np, int e) {
  std::vector<RootValuation> r;
  for (const auto& seg : np.segments) {
    const Rational v = Rational(0) - seg.slope;
    r.push_back({v, v / Rational(e), seg.length});
  }
  return r;
}

namespace {

std::optional<int> finite_height(const FormalModuleLaw& law) {
  if (law.kind() == LawKind::Additive) return std::nullopt;
  const auto h = height_of(law);
  if (h.kind == HeightResult::Kind::Finite) return h.h;
  return std::nullopt;
}

void require_room(const FormalModuleLaw& law, int n, int D) {
  if (n < 0) throw Error(ErrorCode::ValidationError, "negative level");
  if (const auto h = finite_height(law)) {
    const auto need = ma::checked_power(law.ring()->p(), n * *h);
    if (need == 0 || need > static_cast<std::uint64_t>(D))
      throw Error(ErrorCode::TruncationTooSmall,
                  "level " + std::to_string(n) + " needs truncation p^" + std::to_string(n * *h));
  }
}

}  // namespace

Series1 iterate_bracket(const FormalModuleLaw& law, int n, int D) {
  require_room(law, n, D);
  const Series1 f = law.bracket_pi(D);
  Series1 s = Series1::identity(law.ring(), D);
  for (int i = 0; i < n; ++i) s = s_compose(f, s);
  return s;
}

Series1 primitive_quotient(const FormalModuleLaw& law, int n, int D) {
  if (n < 1) throw Error(ErrorCode::ValidationError, "primitive quotient needs n >= 1");
  require_room(law, n, D);
  const Series1 f = law.bracket_pi(D + 1);
  Series1 E(law.ring(), D);
  for (int i = 0; i <= D; ++i) {
    E.set_coeff(i, f.coeff(i + 1));
    E.set_prec(i, f.prec(i + 1));
  }
  E.set_polynomial(f.is_polynomial());
  if (n == 1) return E.truncated(D);
  return s_compose(E, iterate_bracket(law, n - 1, D));
}

TorsionProfile torsion_profile(const FormalModuleLaw& law, int n, int D) {
  TorsionProfile tp;
  tp.n = n;
  if (n == 0) return tp;
  const auto h = finite_height(law);
  if (!h) throw Error(ErrorCode::NoUnitCoefficient, "[π] has no unit coefficient; torsion is not finite");
  const auto& ring = *law.ring();
  const auto w = weierstrass_degree(iterate_bracket(law, n, D));
  const auto expected = ma::checked_power(ring.p(), n * *h);
  if (!w || static_cast<std::uint64_t>(*w) != expected)
    throw Error(ErrorCode::Mismatch, "Weierstrass degree of [π^" + std::to_string(n) + "] is not p^{nh}");
  tp.order = expected;
  tp.primitive_degree = expected - ma::checked_power(ring.p(), (n - 1) * *h);
  tp.polygon = newton_polygon(primitive_quotient(law, n, D));
  tp.roots = root_valuations(tp.polygon, ring.e());
  std::uint64_t total = 0;
  for (const auto& r : tp.roots) {
    total += static_cast<std::uint64_t>(r.multiplicity);
    tp.ram_lower_bound = std::lcm(tp.ram_lower_bound, static_cast<std::uint64_t>(r.v_omega.den()));
  }
  if (total != tp.primitive_degree)
    throw Error(ErrorCode::Mismatch, "root multiplicities do not add up to the primitive degree");
  return tp;
}

BoundCheck generator_bound_check(int d, int h, int m) { return {d, h, m, d <= h * m}; }

bool TowerReport::all_pass() const {
  if (!ratios_ok) return false;
  for (const auto& l : levels)
    if (!l.bound_divides || !l.m_check.pass) return false;
  for (const auto& s : shape_checks)
    if (!s.pass) return false;
  return true;
}

TowerReport full_height_tower(const FormalModuleLaw& law, int levels, int D) {
  const auto& ring = *law.ring();
  const auto hr = height_of(law);
  if (hr.kind != HeightResult::Kind::Finite || hr.h_r != 1)
    throw Error(ErrorCode::NotFullHeight, "tower predictions need a law of height f (π-height 1)");
  TowerReport rep;
  rep.q = ring.residue_size();
  rep.h = hr.h;
  rep.e = ring.e();
  rep.f = ring.f();
  rep.expected_m = *hr.h_r;
  std::uint64_t predicted = rep.q - 1;
  for (int n = 1; n <= levels; ++n) {
    const auto tp = torsion_profile(law, n, D);
    TowerLevel lv;
    lv.n = n;
    lv.torsion_order = tp.order;
    lv.primitive_count = tp.primitive_degree;
    lv.predicted_degree = predicted;
    lv.certified_ram_bound = tp.ram_lower_bound;
    lv.bound_divides = predicted % tp.ram_lower_bound == 0;
    lv.m_check = generator_bound_check(rep.e * rep.f, rep.e * rep.h, 1);
    rep.levels.push_back(lv);
    predicted *= rep.q;
  }
  rep.ratios_ok = true;
  for (std::size_t i = 1; i < rep.levels.size(); ++i)
    rep.ratios_ok = rep.ratios_ok && rep.levels[i].predicted_degree == rep.levels[i - 1].predicted_degree * rep.q;
  for (int k = 1; k <= levels; ++k)
    for (int n = k; n <= std::min(2 * k, levels); ++n) {
      ShapeCheck sc;
      sc.n = n;
      sc.k = k;
      sc.ratio = rep.levels[n - 1].predicted_degree / rep.levels[k - 1].predicted_degree;
      sc.expected = 1;
      for (int t = 0; t < (n - k) * rep.expected_m; ++t) sc.expected *= rep.q;
      sc.pass = sc.ratio == sc.expected;
      rep.shape_checks.push_back(sc);
    }
  return rep;
}

}  // namespace pitower
