// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "pitower/error.hpp"
#include "pitower/report.hpp"

using namespace pitower;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << "[fail] " << what << "; ";
    }
  }
};

RingPtr zp(std::uint64_t p, int N = 12) { return make_ring(LocalRingSpec::padic_integers(p, N)); }
RingPtr z4(int N = 12) { return make_ring(LocalRingSpec::unramified(2, {1, 1, 1}, N)); }
RingPtr pure(std::uint64_t p, int N = 12) { return make_ring(LocalRingSpec::pure_root(p, 2, N)); }

std::uint64_t ipow(std::uint64_t b, int k) {
  std::uint64_t r = 1;
  while (k-- > 0) r *= b;
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void c1(Outcome& o) {
  for (std::uint64_t p : {2, 3, 5}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = zp(p);
    const FormalModuleLaw law = lt_law(gm_series(r), 16);
    Series2 expect = Series2::sum_law(r, 16);
    expect.set_coeff(1, 1, r->one());
    const double t = seconds_since(t0);
    o.require(law.F() == expect, "p=" + std::to_string(p) + " law differs from X+Y+XY");
    o.require(t < 5.0, "p=" + std::to_string(p) + " took " + std::to_string(t) + " s");
    o.detail << "p=" << p << " " << t << "s; ";
  }
}

void c2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const HeightResult a = height_of(lt_law(default_lt_series(zp(3)), 12));
  const HeightResult b = height_of(lt_law(default_lt_series(z4()), 12));
  const HeightResult c = height_of(additive_law(zp(3), 12));
  o.require(a.kind == HeightResult::Kind::Finite && a.h == 1, "q=p height");
  o.require(b.kind == HeightResult::Kind::Finite && b.h == 2, "q=p^2 height");
  o.require(c.kind == HeightResult::Kind::LowerBound, "additive lower bound");
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime");
  o.detail << "h=" << a.h << "," << b.h << ", additive lower bound " << c.h << "; " << t << "s";
}

void c3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t p : {2, 3}) {
    const FormalModuleLaw law = lt_law(default_lt_series(pure(p)), 12);
    const Series1 bp = law.bracket(law.ring()->from_int(static_cast<std::int64_t>(p)));
    const auto w = weierstrass_degree(bp);
    o.require(w && static_cast<std::uint64_t>(*w) == p * p, "wdeg [p] for p=" + std::to_string(p));
    o.require(zp_height_check(law) == 2, "Z_p-height for p=" + std::to_string(p));
    o.detail << "p=" << p << " wdeg " << (w ? *w : -1) << "; ";
  }
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime");
  o.detail << t << "s";
}

void c4(Outcome& o) {
  struct Case {
    RingPtr ring;
    const char* name;
  };
  for (const auto& c : {Case{zp(2), "(2,1)"}, Case{z4(), "(2,2)"}, Case{zp(3), "(3,1)"}}) {
    const FormalModuleLaw law = lt_law(default_lt_series(c.ring), 8);
    const int h = height_of(law).h;
    const std::uint64_t p = c.ring->p();
    int n_max = 0;
    while (ipow(p, (n_max + 1) * h) <= 2500) ++n_max;
    const int D = static_cast<int>(ipow(p, n_max * h));
    const Series1 f = law.bracket_pi(D);
    Series1 s = Series1::identity(c.ring, D);
    for (int n = 1; n <= n_max; ++n) {
      s = s_compose(f, s);
      const auto w = weierstrass_degree(s);
      o.require(w && static_cast<std::uint64_t>(*w) == ipow(p, n * h),
                std::string(c.name) + " n=" + std::to_string(n));
    }
    // the library's own iteration agrees on the first levels
    o.require(iterate_bracket(law, 2, D) == s_compose(f, s_compose(f, Series1::identity(c.ring, D))),
              std::string(c.name) + " iterate_bracket");
    o.detail << c.name << " n<=" << n_max << " D=" << D << "; ";
  }
}

void c5(Outcome& o) {
  struct Case {
    FormalModuleLaw law;
    const char* name;
  };
  const std::vector<Case> cases{{lt_law(default_lt_series(zp(2)), 8), "Z_2"},
                                {lt_law(gm_series(zp(3)), 8), "G_m Z_3"},
                                {lt_law(default_lt_series(zp(3)), 8), "Z_3"},
                                {lt_law(default_lt_series(z4()), 8), "Z_4"}};
  for (const auto& c : cases) {
    const auto q = c.law.ring()->residue_size();
    for (int n = 1; n <= 3; ++n) {
      const TorsionProfile tp = torsion_profile(c.law, n, static_cast<int>(ipow(q, n)));
      const Rational expect(1, static_cast<std::int64_t>(ipow(q, n - 1) * (q - 1)));
      o.require(tp.polygon.segments.size() == 1, std::string(c.name) + " single segment n=" + std::to_string(n));
      o.require(tp.roots.size() == 1 && tp.roots[0].v_omega == expect,
                std::string(c.name) + " slope n=" + std::to_string(n));
    }
    o.detail << c.name << " ok; ";
  }
}

void c6(Outcome& o) {
  struct Case {
    FormalModuleLaw law;
    const char* name;
  };
  const std::vector<Case> cases{{lt_law(gm_series(zp(3)), 12), "G_m Z_3"},
                                {lt_law(default_lt_series(z4()), 12), "Z_4"},
                                {lt_law(default_lt_series(pure(2)), 12), "Z_2[sqrt2]"}};
  for (const auto& c : cases) {
    const auto& r = c.law.ring();
    const FracSeries1 L = formal_log(c.law);
    int min_floor = r->N();
    for (int i = 1; i <= L.D(); ++i) min_floor = std::min(min_floor, L.floor(i));
    o.require(min_floor > 0, std::string(c.name) + " floor reached 0");
    for (const RingElem& a : {r->from_int(2), r->from_int(3), c.law.pi()})
      o.require(log_linear_for(c.law, L, a), std::string(c.name) + " a=" + a.str());
    o.detail << c.name << " min floor " << min_floor << "; ";
  }
}

const CatalogRow* find_row(const CatalogReport& rep, const std::string& label) {
  for (const auto& r : rep.rows)
    if (r.entry.label == label) return &r;
  return nullptr;
}

CatalogReport run_catalog(double& secs) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CatalogRow> rows;
  for (const auto& e : builtin_catalog()) rows.push_back(run_catalog_entry(e, 10'000'000));
  CatalogReport rep = dimension_catalog_check(rows);
  secs = seconds_since(t0);
  return rep;
}

void c7(Outcome& o, const CatalogReport& rep, double secs) {
  const auto* gl2 = find_row(rep, "gl2_z3");
  const auto* z9 = find_row(rep, "z9_units");
  const auto* z2 = find_row(rep, "z2sqrt2_units");
  const auto* z3 = find_row(rep, "z3_units");
  o.require(gl2 && z9 && z2 && z3, "catalog rows present");
  if (!o.pass) return;
  o.require(gl2->fit.d == 4 && gl2->fit.vol == Rational(48, 81), "GL2(Z_3) d=4 vol=48/81");
  o.require(gl2->fit.confirmed_at == 2, "GL2(Z_3) stable from n=2");
  o.require(z9->fit.d == 2 && z9->fit.vol == Rational(8, 9), "Z_9 units d=2 vol=8/9");
  o.require(z2->fit.d == 2, "Z_2[sqrt2] units d=2");
  o.require(z3->fit.d == 1 && z3->fit.vol == Rational(2, 3), "Z_3 units d=1 vol=2/3");
  for (const auto& r : rep.rows) o.require(r.entry.n_max <= 5, r.entry.label + " n_max");
  o.require(secs < 60.0, "runtime");
  o.detail << "GL2(Z_3) " << gl2->fit.d << "," << gl2->fit.vol.str() << "; Z_9 " << z9->fit.d << ","
           << z9->fit.vol.str() << "; Z_2[sqrt2] " << z2->fit.d << "," << z2->fit.vol.str() << "; Z_3 "
           << z3->fit.d << "," << z3->fit.vol.str() << "; " << secs << "s";
}

void c8(Outcome& o, const CatalogReport& rep) {
  bool pair_seen = false;
  for (const auto& r : rep.rows) {
    const int hr = r.entry.spec.h_r;
    o.require(r.e * r.omega.d_A * r.f == r.fit.d, r.entry.label + " e d_A f = d");
    o.require(r.omega.d_A == hr * hr, r.entry.label + " d_A = h_r^2");
  }
  for (const auto& c : rep.checks) {
    if (c.relation != "d_1 = d_2") continue;
    pair_seen = true;
    o.require(c.pass, c.label + " d_1 = d_2");
    o.detail << c.label << " " << c.detail << "; ";
  }
  o.require(pair_seen, "e f = 2, h_r = 1 pair present");
}

void c9(Outcome& o) {
  struct Case {
    FormalModuleLaw law;
    OrderSpec spec;
    int D;
    const char* name;
  };
  const std::vector<Case> cases{
      {lt_law(gm_series(zp(3)), 12), {LocalRingSpec::padic_integers(3, 12), 1}, 27, "G_m p=3"},
      {lt_law(default_lt_series(z4()), 12), {LocalRingSpec::unramified(2, {1, 1, 1}, 12), 1}, 64, "q=4"}};
  for (const auto& c : cases) {
    const TowerReport tower = full_height_tower(c.law, 3, c.D);
    const CountSeries cs = count_series(embed_order(c.spec, 3), 3);
    o.require(tower.levels.size() == 3 && cs.points.size() == 3, std::string(c.name) + " level count");
    if (!o.pass) return;
    for (int n = 0; n < 3; ++n) {
      const auto& l = tower.levels[n];
      o.require(l.predicted_degree == cs.points[n].order, std::string(c.name) + " n=" + std::to_string(n + 1));
      o.require(l.bound_divides && l.predicted_degree % l.certified_ram_bound == 0,
                std::string(c.name) + " ram bound n=" + std::to_string(n + 1));
    }
    o.detail << c.name << " " << tower.levels[0].predicted_degree << "," << tower.levels[1].predicted_degree << ","
             << tower.levels[2].predicted_degree << "; ";
  }
}

void c10(Outcome& o, const std::string& scenario_dir) {
  std::mt19937_64 rng(20240601);
  const std::vector<FormalModuleLaw> laws{lt_law(gm_series(zp(3)), 12), lt_law(default_lt_series(z4()), 12),
                                          lt_law(default_lt_series(pure(2)), 12)};
  int assoc = 0;
  for (int t = 0; t < 50; ++t) {
    const auto& law = laws[t % laws.size()];
    const auto& r = law.ring();
    assoc += associativity_holds(law, random_series(r, 12, rng), random_series(r, 12, rng), random_series(r, 12, rng));
  }
  o.require(assoc == 50, "associativity " + std::to_string(assoc) + "/50");

  int hom = 0;
  for (int t = 0; t < 20; ++t) {
    const auto& law = laws[t % laws.size()];
    hom += bracket_hom_holds(law, random_element(law.ring(), rng), random_element(law.ring(), rng));
  }
  o.require(hom == 20, "bracket homomorphism " + std::to_string(hom) + "/20");

  const OrderSpec spec{LocalRingSpec::padic_integers(3, 3), 2};
  const MatrixGenSet g = embed_order(spec, 3);
  const DimFit base = fit_dimension(count_series(g, 3));
  int conj = 0;
  for (int t = 0; t < 5; ++t)
    conj += fit_dimension(count_series(conjugate(g, random_invertible(g.h, g.p, g.M, rng)), 3)) == base;
  o.require(conj == 5, "conjugation invariance " + std::to_string(conj) + "/5");

  int same = 0;
  for (const char* name : {"gm_p3.json", "lt_q4.json"}) {
    const Scenario s = load_scenario(scenario_dir + "/" + name);
    same += emit(run_scenario(s)) == emit(run_scenario(s));
  }
  o.require(same == 2, "byte-identical reruns " + std::to_string(same) + "/2");
  o.detail << "assoc " << assoc << "/50, hom " << hom << "/20, conj " << conj << "/5, reruns " << same << "/2";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string scenario_dir = argc > 1 ? argv[1] : PITOWER_SCENARIO_DIR;
  int failures = 0;
  auto run = [&](int id, const std::string& title, const std::function<void(Outcome&)>& fn) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << seconds_since(t0)
              << " s) " << o.detail.str() << std::endl;
  };

  run(1, "multiplicative law reconstruction", c1);
  run(2, "height law", c2);
  run(3, "Z_p-height of [p] for pi^2 = p", c3);
  run(4, "torsion orders p^{nh}", c4);
  run(5, "Newton polygon slope law", c5);
  run(6, "formal log linearity", c6);

  double catalog_secs = 0;
  std::optional<CatalogReport> catalog;
  std::string catalog_error;
  try {
    catalog = run_catalog(catalog_secs);
  } catch (const std::exception& e) {
    catalog_error = e.what();
  }
  run(7, "counting law catalog", [&](Outcome& o) {
    if (!catalog) throw std::runtime_error(catalog_error);
    c7(o, *catalog, catalog_secs);
  });
  run(8, "dimension identities", [&](Outcome& o) {
    if (!catalog) throw std::runtime_error(catalog_error);
    c8(o, *catalog);
  });
  run(9, "tower vs counts", c9);
  run(10, "property suites", [&](Outcome& o) { c10(o, scenario_dir); });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
