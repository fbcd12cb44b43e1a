#include "pitower/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pitower/error.hpp"

namespace pitower {

ojson parse_json_text(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path);
  out << text;
}

namespace {

const ojson& field(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::int64_t as_int(const ojson& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  throw Error(ErrorCode::ParseError, "expected an integer, got " + j.dump());
}

std::uint64_t as_u64(const ojson& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  const auto v = as_int(j);
  if (v < 0) throw Error(ErrorCode::ParseError, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

int as_small(const ojson& j) { return static_cast<int>(as_int(j)); }

const ojson& array_field(const ojson& j, const char* key) {
  const ojson& a = field(j, key);
  if (!a.is_array()) throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be an array");
  return a;
}

std::string dec(std::uint64_t v) { return std::to_string(v); }

}  // namespace

// ---- rings ----

ojson to_json(const LocalRingSpec& spec) {
  ojson j;
  j["p"] = spec.p;
  j["f"] = spec.f;
  j["unram"] = spec.unram;
  ojson eis = ojson::array();
  for (const auto& c : spec.eis) {
    if (spec.f == 1) eis.push_back(c.at(0));
    else eis.push_back(c);
  }
  j["eis"] = eis;
  j["N"] = spec.N;
  return j;
}

LocalRingSpec ring_spec_from_json(const ojson& j) {
  LocalRingSpec s;
  s.p = as_u64(field(j, "p"));
  s.f = j.contains("f") ? as_small(j.at("f")) : 1;
  s.N = j.contains("N") ? as_small(j.at("N")) : 12;
  if (j.contains("unram"))
    for (const auto& c : array_field(j, "unram")) s.unram.push_back(as_int(c));
  for (const auto& c : array_field(j, "eis")) {
    std::vector<std::int64_t> coeff;
    if (c.is_array()) {
      for (const auto& x : c) coeff.push_back(as_int(x));
    } else {
      coeff.push_back(as_int(c));
    }
    coeff.resize(std::max<std::size_t>(coeff.size(), static_cast<std::size_t>(std::max(s.f, 1))), 0);
    s.eis.push_back(std::move(coeff));
  }
  return s;
}

ojson to_json(const RingElem& x) {
  ojson j = ojson::array();
  for (auto c : x.coords()) j.push_back(dec(c));
  return j;
}

RingElem elem_from_json(const RingPtr& ring, const ojson& j) {
  if (!j.is_array()) return ring->from_int(as_int(j));
  std::vector<Coord> c;
  for (const auto& x : j) c.push_back(as_u64(x));
  return ring->from_coords(std::move(c));
}

// ---- series ----

ojson to_json(const Series1& s) {
  ojson j;
  j["D"] = s.D();
  ojson coeffs = ojson::array();
  for (int i = 0; i <= s.D(); ++i) coeffs.push_back(to_json(s.coeff(i)));
  j["coeffs"] = coeffs;
  j["prec"] = s.precs();
  j["polynomial"] = s.is_polynomial();
  return j;
}

Series1 series1_from_json(const RingPtr& ring, const ojson& j) {
  const int D = as_small(field(j, "D"));
  const auto& coeffs = array_field(j, "coeffs");
  if (coeffs.size() > static_cast<std::size_t>(D) + 1) throw Error(ErrorCode::ShapeMismatch, "more coefficients than D+1");
  Series1 s(ring, D);
  for (std::size_t i = 0; i < coeffs.size(); ++i) s.set_coeff(static_cast<int>(i), elem_from_json(ring, coeffs[i]));
  if (j.contains("prec")) {
    const auto& prec = array_field(j, "prec");
    for (std::size_t i = 0; i < prec.size() && i <= static_cast<std::size_t>(D); ++i)
      s.set_prec(static_cast<int>(i), as_small(prec[i]));
  }
  if (j.contains("polynomial")) s.set_polynomial(j.at("polynomial").get<bool>());
  return s;
}

ojson to_json(const Series2& s) {
  ojson j;
  j["D"] = s.D();
  ojson rows = ojson::array();
  for (int i = 0; i <= s.D(); ++i) {
    ojson row = ojson::array();
    for (int k = 0; i + k <= s.D(); ++k) row.push_back(to_json(s.coeff(i, k)));
    rows.push_back(row);
  }
  j["coeffs"] = rows;
  return j;
}

Series2 series2_from_json(const RingPtr& ring, const ojson& j) {
  const int D = as_small(field(j, "D"));
  Series2 s(ring, D);
  const auto& rows = array_field(j, "coeffs");
  if (rows.size() > static_cast<std::size_t>(D) + 1) throw Error(ErrorCode::ShapeMismatch, "too many rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() > static_cast<std::size_t>(D) + 1 - i)
      throw Error(ErrorCode::ShapeMismatch, "row " + std::to_string(i) + " exceeds total degree D");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      s.set_coeff(static_cast<int>(i), static_cast<int>(k), elem_from_json(ring, rows[i][k]));
  }
  return s;
}

// ---- laws ----

ojson to_json(const HeightResult& h) {
  ojson j;
  j["kind"] = h.kind == HeightResult::Kind::Finite ? "finite" : "lower_bound";
  j["h"] = h.h;
  j["h_r"] = h.h_r ? ojson(*h.h_r) : ojson(nullptr);
  return j;
}

ojson law_to_json(const FormalModuleLaw& law) {
  ojson j;
  j["ring"] = to_json(law.ring()->spec());
  j["kind"] = std::string(to_string(law.kind()));
  j["D"] = law.D();
  j["frobenius_power"] = law.frobenius_power();
  j["frobenius"] = to_json(law.frobenius());
  j["F"] = to_json(law.F());
  ojson br = ojson::array();
  for (const auto& [key, s] : law.cached_brackets()) {
    ojson e;
    e["a"] = to_json(law.ring()->from_coords(key));
    e["series"] = to_json(s);
    br.push_back(e);
  }
  j["brackets"] = br;
  j["height"] = to_json(height_of(law));
  return j;
}

FormalModuleLaw law_from_json(const ojson& j) {
  const RingPtr ring = make_ring(ring_spec_from_json(field(j, "ring")));
  const LawKind kind = law_kind_from_string(field(j, "kind").get<std::string>());
  const int power = j.contains("frobenius_power") ? as_small(j.at("frobenius_power")) : 1;
  Series2 F = series2_from_json(ring, field(j, "F"));
  Series1 f = series1_from_json(ring, field(j, "frobenius"));
  const RingElem one = ring->one();
  for (int i = 0; i <= F.D(); ++i) {
    const RingElem want = i == 1 ? one : ring->zero();
    if (!(F.coeff(i, 0) == want) || !(F.coeff(0, i) == want))
      throw Error(ErrorCode::ValidationError, "group law must satisfy F(X,0) = X and F(0,Y) = Y");
  }
  if (kind != LawKind::Additive) validate_lt_series(f, power);
  return FormalModuleLaw(kind, std::move(F), std::move(f), power);
}

// ---- torsion ----

ojson to_json(const NewtonPolygon& np) {
  ojson j;
  ojson v = ojson::array();
  for (const auto& [i, val] : np.vertices) v.push_back(ojson::array({i, val}));
  j["vertices"] = v;
  ojson s = ojson::array();
  for (const auto& seg : np.segments) s.push_back(ojson{{"slope", seg.slope.str()}, {"length", seg.length}});
  j["segments"] = s;
  return j;
}

ojson to_json(const TorsionProfile& tp) {
  ojson j;
  j["n"] = tp.n;
  j["order"] = dec(tp.order);
  j["primitive_degree"] = dec(tp.primitive_degree);
  j["polygon"] = to_json(tp.polygon);
  ojson roots = ojson::array();
  for (const auto& r : tp.roots)
    roots.push_back(ojson{{"v_omega", r.v_omega.str()}, {"v_p", r.v_p.str()}, {"multiplicity", r.multiplicity}});
  j["roots"] = roots;
  j["ram_lower_bound"] = dec(tp.ram_lower_bound);
  return j;
}

ojson to_json(const TowerReport& rep) {
  ojson j;
  j["q"] = dec(rep.q);
  j["h"] = rep.h;
  j["e"] = rep.e;
  j["f"] = rep.f;
  j["expected_m"] = rep.expected_m;
  ojson lv = ojson::array();
  for (const auto& l : rep.levels) {
    ojson x;
    x["n"] = l.n;
    x["torsion_order"] = dec(l.torsion_order);
    x["primitive_count"] = dec(l.primitive_count);
    x["predicted_degree"] = dec(l.predicted_degree);
    x["certified_ram_bound"] = dec(l.certified_ram_bound);
    x["bound_divides"] = l.bound_divides;
    x["m_check"] = ojson{{"d", l.m_check.d}, {"h", l.m_check.h}, {"m", l.m_check.m}, {"pass", l.m_check.pass}};
    lv.push_back(x);
  }
  j["levels"] = lv;
  ojson sc = ojson::array();
  for (const auto& s : rep.shape_checks)
    sc.push_back(ojson{{"n", s.n}, {"k", s.k}, {"ratio", dec(s.ratio)}, {"expected", dec(s.expected)}, {"pass", s.pass}});
  j["shape_checks"] = sc;
  j["ratios_ok"] = rep.ratios_ok;
  j["all_pass"] = rep.all_pass();
  return j;
}

// ---- counting ----

ojson to_json(const MatrixGenSet& g) {
  ojson j;
  j["h"] = g.h;
  j["M"] = g.M;
  j["p"] = g.p;
  ojson gens = ojson::array();
  for (const auto& m : g.gens) {
    ojson rows = ojson::array();
    for (int r = 0; r < g.h; ++r) {
      ojson row = ojson::array();
      for (int c = 0; c < g.h; ++c) row.push_back(m[r * g.h + c]);
      rows.push_back(row);
    }
    gens.push_back(rows);
  }
  j["gens"] = gens;
  if (!g.label.empty()) j["label"] = g.label;
  return j;
}

MatrixGenSet gens_from_json(const ojson& j) {
  MatrixGenSet g;
  g.h = as_small(field(j, "h"));
  g.M = as_small(field(j, "M"));
  g.p = as_u64(field(j, "p"));
  if (j.contains("label")) g.label = j.at("label").get<std::string>();
  for (const auto& m : array_field(j, "gens")) {
    if (!m.is_array() || m.size() != static_cast<std::size_t>(g.h))
      throw Error(ErrorCode::ShapeMismatch, "generator must have h rows");
    Matrix mat;
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(g.h))
        throw Error(ErrorCode::ShapeMismatch, "generator row must have h entries");
      for (const auto& x : row) mat.push_back(as_u64(x));
    }
    g.gens.push_back(std::move(mat));
  }
  g.validate();
  return g;
}

ojson to_json(const CountSeries& cs) {
  ojson j;
  j["p"] = cs.p;
  ojson s = ojson::array();
  for (const auto& pt : cs.points) s.push_back(ojson{{"n", pt.n}, {"order", dec(pt.order)}});
  j["series"] = s;
  return j;
}

CountSeries counts_from_json(const ojson& j) {
  const ojson& src = j.contains("counts") ? j.at("counts") : j;
  CountSeries cs;
  cs.p = as_u64(field(src, "p"));
  for (const auto& pt : array_field(src, "series")) cs.points.push_back({as_small(field(pt, "n")), as_u64(field(pt, "order"))});
  return cs;
}

std::string counts_csv(const CountSeries& cs) {
  std::string out = "n,order\n";
  for (const auto& pt : cs.points) out += std::to_string(pt.n) + "," + dec(pt.order) + "\n";
  return out;
}

ojson to_json(const DimFit& fit) {
  ojson j;
  j["d"] = fit.d;
  j["vol"] = fit.vol.str();
  j["n0"] = fit.n0;
  j["confirmed_at"] = fit.confirmed_at ? ojson(*fit.confirmed_at) : ojson(nullptr);
  j["stable"] = fit.stable;
  return j;
}

ojson to_json(const OmegaFit& fit) {
  ojson j;
  j["fit"] = to_json(fit.fit);
  j["d_A"] = fit.d_A;
  j["e"] = fit.e;
  j["f"] = fit.f;
  j["d"] = fit.d;
  j["relation_holds"] = fit.relation_holds;
  return j;
}

ojson to_json(const CatalogReport& rep) {
  ojson j;
  ojson rows = ojson::array();
  for (const auto& r : rep.rows) {
    ojson x;
    x["label"] = r.entry.label;
    x["ring"] = to_json(r.entry.spec.ring);
    x["e"] = r.e;
    x["f"] = r.f;
    x["h_r"] = r.entry.spec.h_r;
    x["h"] = r.h;
    x["counts"] = to_json(r.counts);
    x["fit"] = to_json(r.fit);
    x["omega_counts"] = to_json(r.omega_counts);
    x["omega"] = to_json(r.omega);
    rows.push_back(x);
  }
  j["rows"] = rows;
  ojson checks = ojson::array();
  for (const auto& c : rep.checks)
    checks.push_back(ojson{{"label", c.label}, {"relation", c.relation}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = checks;
  j["all_pass"] = rep.all_pass();
  return j;
}

}  // namespace pitower
