#include "pitower/report.hpp"

#include <random>

#include "pitower/error.hpp"
#include "pitower/modarith.hpp"

namespace pitower {

namespace ma = modarith;

void RunReport::check(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

bool RunReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::ValidationError, "unknown format '" + s + "'");
}

std::string emit(const RunReport& report) {
  ojson j;
  j["version"] = report.version;
  j["inputs"] = report.inputs;
  j["steps"] = report.steps;
  ojson checks = ojson::array();
  int passed = 0;
  for (const auto& c : report.checks) {
    checks.push_back(ojson{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    passed += c.pass ? 1 : 0;
  }
  j["checks"] = checks;
  j["summary"] = ojson{{"passed", passed},
                       {"failed", static_cast<int>(report.checks.size()) - passed},
                       {"all_pass", report.all_pass()}};
  return j.dump(2) + "\n";
}

std::string emit(const CountSeries& counts, ReportFormat format) {
  if (format == ReportFormat::Csv) return counts_csv(counts);
  return to_json(counts).dump(2) + "\n";
}

RunReport parse_report(const std::string& text) {
  const ojson j = parse_json_text(text);
  if (!j.is_object() || !j.contains("version")) throw Error(ErrorCode::ParseError, "report needs a version field");
  RunReport r;
  r.version = j.at("version").get<std::string>();
  if (j.contains("inputs")) r.inputs = j.at("inputs");
  if (j.contains("steps")) r.steps = j.at("steps");
  if (j.contains("checks"))
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.value("detail", "")});
  return r;
}

// ---- scenarios ----

Scenario scenario_from_json(const ojson& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "scenario must be a JSON object");
  Scenario s;
  try {
    s.name = j.value("name", "scenario");
    if (!j.contains("ring")) throw Error(ErrorCode::ValidationError, "scenario needs a ring");
    s.ring = ring_spec_from_json(j.at("ring"));
    s.law = j.value("law", "default");
    s.frobenius_power = j.value("frobenius_power", 1);
    s.law_degree = j.value("law_degree", 12);
    s.levels = j.value("levels", 1);
    s.D = j.value("D", 0);
    s.nmax = j.value("nmax", 0);
    if (j.contains("catalog"))
      for (const auto& c : j.at("catalog")) s.catalog.push_back(c.get<std::string>());
    if (j.contains("checks")) {
      s.associativity_checks = j.at("checks").value("associativity", s.associativity_checks);
      s.bracket_pairs = j.at("checks").value("bracket_pairs", s.bracket_pairs);
    }
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (s.law != "default" && s.law != "gm" && s.law != "additive")
    throw Error(ErrorCode::ValidationError, "law must be default, gm or additive");
  if (s.levels < 0 || s.law_degree < 2 || s.D < 0 || s.nmax < 0)
    throw Error(ErrorCode::ValidationError, "levels, D and nmax must be non-negative, law_degree >= 2");
  if (s.D == 0) s.D = s.law_degree;
  if (s.nmax == 0) s.nmax = std::max(s.levels, 3);
  if (s.nmax < 3) throw Error(ErrorCode::ValidationError, "nmax must be at least 3 for a fit");
  const auto cat = builtin_catalog();
  for (const auto& name : s.catalog)
    if (std::none_of(cat.begin(), cat.end(), [&](const CatalogEntry& e) { return e.label == name; }))
      throw Error(ErrorCode::ValidationError, "unknown catalog entry '" + name + "'");
  return s;
}

ojson to_json(const Scenario& s) {
  ojson j;
  j["name"] = s.name;
  j["ring"] = to_json(s.ring);
  j["law"] = s.law;
  j["frobenius_power"] = s.frobenius_power;
  j["D"] = s.D;
  j["law_degree"] = s.law_degree;
  j["levels"] = s.levels;
  j["nmax"] = s.nmax;
  j["catalog"] = s.catalog;
  j["checks"] = ojson{{"associativity", s.associativity_checks}, {"bracket_pairs", s.bracket_pairs}};
  return j;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

std::uint64_t scenario_seed(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(s).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

template <class Fn>
auto step(const char* name, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("step '") + name + "': " + e.detail());
  }
}

FormalModuleLaw build_law(const Scenario& s, const RingPtr& ring) {
  if (s.law == "additive") return additive_law(ring, s.law_degree);
  LawOptions opt;
  opt.frobenius_power = s.frobenius_power;
  const Series1 f = s.law == "gm" ? gm_series(ring) : default_lt_series(ring, s.frobenius_power);
  return lt_law(f, s.law_degree, opt);
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
  RunReport rep;
  rep.inputs = to_json(s);
  std::mt19937_64 rng(scenario_seed(s));

  const RingPtr ring = step("ring", [&] { return make_ring(s.ring); });
  rep.steps["ring"] = ojson{{"p", ring->p()}, {"e", ring->e()}, {"f", ring->f()}, {"q", ring->residue_size()},
                            {"N", ring->N()}};

  // construct
  const FormalModuleLaw law = step("law", [&] { return build_law(s, ring); });
  const HeightResult height = step("height", [&] { return height_of(law); });
  {
    ojson j;
    j["kind"] = std::string(to_string(law.kind()));
    j["D"] = law.D();
    j["height"] = to_json(height);
    j["divisible"] = divisibility_check(law);
    rep.steps["law"] = j;
  }
  const bool finite = height.kind == HeightResult::Kind::Finite;
  rep.check("height law", finite || law.kind() == LawKind::Additive,
            finite ? "unit coefficient of [π] at p^" + std::to_string(height.h)
                   : "lower bound " + std::to_string(height.h));
  if (finite) {
    const int eh = step("zp_height", [&] { return zp_height_check(law); });
    rep.steps["law"]["zp_height"] = eh;
    rep.check("Z_p-height = e h", eh == ring->e() * height.h, std::to_string(eh));
  }

  // properties
  step("properties", [&] {
    int ok = 0;
    for (int t = 0; t < s.associativity_checks; ++t) {
      const Series1 x = random_series(ring, law.D(), rng);
      const Series1 y = random_series(ring, law.D(), rng);
      const Series1 z = random_series(ring, law.D(), rng);
      ok += associativity_holds(law, x, y, z) ? 1 : 0;
    }
    rep.check("associativity", ok == s.associativity_checks,
              std::to_string(ok) + "/" + std::to_string(s.associativity_checks));
    ok = 0;
    for (int t = 0; t < s.bracket_pairs; ++t) {
      const RingElem a = random_element(ring, rng);
      const RingElem b = random_element(ring, rng);
      ok += bracket_hom_holds(law, a, b) ? 1 : 0;
    }
    rep.check("bracket homomorphism", ok == s.bracket_pairs, std::to_string(ok) + "/" + std::to_string(s.bracket_pairs));
    return 0;
  });

  step("log", [&] {
    const FracSeries1 L = formal_log(law);
    ojson j = ojson::array();
    bool all = true;
    for (const RingElem& a : {ring->from_int(2), ring->from_int(3), law.pi()}) {
      const bool ok = log_linear_for(law, L, a);
      all = all && ok;
      j.push_back(ojson{{"a", to_json(a)}, {"linear", ok}});
    }
    int min_floor = ring->N();
    for (int i = 1; i <= L.D(); ++i) min_floor = std::min(min_floor, L.floor(i));
    rep.steps["log"] = ojson{{"checks", j}, {"min_floor", min_floor}};
    rep.check("log linearity", all, "a in {2, 3, π}");
    return 0;
  });

  if (!finite) return rep;

  // torsion
  const int h = height.h;
  const auto need = ma::checked_power(ring->p(), s.levels * h);
  if (need == 0 || need > static_cast<std::uint64_t>(s.D))
    throw Error(ErrorCode::ValidationError, "levels inconsistent with D: need p^{levels h} <= D");
  const bool full = height.h_r == 1;
  step("torsion", [&] {
    ojson arr = ojson::array();
    bool orders = true, slopes = true;
    const int vpi = valuation(law.pi()).value.num();
    std::uint64_t qn = ring->residue_size() - 1;
    for (int n = 1; n <= s.levels; ++n) {
      const TorsionProfile tp = torsion_profile(law, n, s.D);
      arr.push_back(to_json(tp));
      orders = orders && tp.order == ma::checked_power(ring->p(), n * h);
      if (full) {
        const bool single = tp.polygon.segments.size() == 1 &&
                            tp.polygon.segments[0].slope == Rational(-vpi, static_cast<std::int64_t>(qn));
        slopes = slopes && single;
      }
      qn *= ring->residue_size();
    }
    rep.steps["torsion"] = arr;
    rep.check("torsion orders p^{nh}", orders, "levels 1.." + std::to_string(s.levels));
    if (full) rep.check("NP single slope", slopes, "slope v(π)/(q^{n-1}(q-1))");
    return 0;
  });

  // tower
  std::optional<TowerReport> tower;
  if (full) {
    tower = step("tower", [&] { return full_height_tower(law, s.levels, s.D); });
    rep.steps["tower"] = to_json(*tower);
    bool divides = true, mb = true;
    for (const auto& l : tower->levels) {
      divides = divides && l.bound_divides;
      mb = mb && l.m_check.pass;
    }
    rep.check("tower ratios", tower->ratios_ok, "q = " + std::to_string(tower->q));
    rep.check("ram bound divides predicted", divides);
    rep.check("d <= h m", mb);
    bool shape = true;
    for (const auto& sc : tower->shape_checks) shape = shape && sc.pass;
    rep.check("G_{n,k} shape", shape);
  }

  // scalar model
  step("count", [&] {
    const OrderSpec spec{s.ring, 1};
    const MatrixGenSet g = embed_order(spec, s.nmax);
    const CountSeries cs = count_series(g, s.nmax);
    const DimFit fit = fit_dimension(cs);
    const CountSeries ocs = omega_count_series(spec, g, s.nmax);
    const OmegaFit ofit = fit_dimension_over_O(ocs, spec, fit);
    rep.steps["scalar_model"] = ojson{{"gens", g.label},
                                      {"counts", to_json(cs)},
                                      {"kernel_indices", cs.kernel_indices()},
                                      {"fit", to_json(fit)},
                                      {"omega_counts", to_json(ocs)},
                                      {"omega_fit", to_json(ofit)}};
    rep.check("scalar d = e f", fit.d == ring->e() * ring->f(), std::to_string(fit.d));
    rep.check("e d_A f = d", ofit.relation_holds);
    rep.check("d_A = h_r^2", ofit.d_A == 1);
    rep.check("series invariants", series_invariants_hold(cs, g.h));
    if (tower) {
      bool same = true;
      for (const auto& l : tower->levels)
        same = same && l.n <= static_cast<int>(ocs.points.size()) && ocs.points[l.n - 1].order == l.predicted_degree;
      rep.check("tower = scalar counts", same);
    }
    return 0;
  });

  if (!s.catalog.empty()) {
    step("catalog", [&] {
      std::vector<CatalogRow> rows;
      for (const auto& e : builtin_catalog())
        if (std::find(s.catalog.begin(), s.catalog.end(), e.label) != s.catalog.end())
          rows.push_back(run_catalog_entry(e));
      const CatalogReport cr = dimension_catalog_check(rows);
      rep.steps["catalog"] = to_json(cr);
      for (const auto& c : cr.checks) rep.check(c.label + ": " + c.relation, c.pass, c.detail);
      return 0;
    });
  }
  return rep;
}

}  // namespace pitower
