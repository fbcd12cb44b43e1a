#include "pitower/group_counting.hpp"

#include <bit>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "pitower/error.hpp"
#include "pitower/modarith.hpp"

namespace pitower {

namespace ma = modarith;

std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("PITOWER_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw Error(ErrorCode::ValidationError, "PITOWER_BUDGET must be a positive integer");
  }
  return 10'000'000;
}

// ---- matrices ----

Matrix mat_mul(const Matrix& a, const Matrix& b, int h, std::uint64_t mod) {
  Matrix c(static_cast<std::size_t>(h) * h, 0);
  for (int i = 0; i < h; ++i)
    for (int k = 0; k < h; ++k) {
      const std::uint64_t aik = a[i * h + k];
      if (aik == 0) continue;
      for (int j = 0; j < h; ++j) c[i * h + j] = ma::add(c[i * h + j], ma::mul(aik, b[k * h + j], mod), mod);
    }
  return c;
}

std::optional<Matrix> mat_inverse(const Matrix& a, int h, std::uint64_t p, std::uint64_t mod) {
  Matrix m = a;
  Matrix r(static_cast<std::size_t>(h) * h, 0);
  for (int i = 0; i < h; ++i) r[i * h + i] = 1 % mod;
  for (int col = 0; col < h; ++col) {
    int piv = -1;
    for (int row = col; row < h; ++row)
      if (m[row * h + col] % p != 0) {
        piv = row;
        break;
      }
    if (piv < 0) return std::nullopt;
    for (int j = 0; j < h; ++j) {
      std::swap(m[col * h + j], m[piv * h + j]);
      std::swap(r[col * h + j], r[piv * h + j]);
    }
    const std::uint64_t s = ma::inverse(m[col * h + col], mod);
    for (int j = 0; j < h; ++j) {
      m[col * h + j] = ma::mul(m[col * h + j], s, mod);
      r[col * h + j] = ma::mul(r[col * h + j], s, mod);
    }
    for (int row = 0; row < h; ++row) {
      if (row == col) continue;
      const std::uint64_t t = m[row * h + col];
      if (t == 0) continue;
      for (int j = 0; j < h; ++j) {
        m[row * h + j] = ma::sub(m[row * h + j], ma::mul(t, m[col * h + j], mod), mod);
        r[row * h + j] = ma::sub(r[row * h + j], ma::mul(t, r[col * h + j], mod), mod);
      }
    }
  }
  return r;
}

void MatrixGenSet::validate() const {
  if (h < 1 || M < 1) throw Error(ErrorCode::ValidationError, "matrix size and precision must be positive");
  if (!ma::is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  const std::uint64_t mod = ma::checked_power(p, M);
  if (mod == 0) throw Error(ErrorCode::ValidationError, "p^M does not fit in 62 bits");
  for (const auto& g : gens) {
    if (g.size() != static_cast<std::size_t>(h) * h) throw Error(ErrorCode::ShapeMismatch, "generator is not h×h");
    for (auto x : g)
      if (x >= mod) throw Error(ErrorCode::ValidationError, "generator entry outside [0, p^M)");
    if (!mat_inverse(g, h, p, p)) throw Error(ErrorCode::ValidationError, "generator is not invertible mod p");
  }
}

MatrixGenSet conjugate(const MatrixGenSet& g, const Matrix& P) {
  const std::uint64_t mod = ma::checked_power(g.p, g.M);
  const auto Pinv = mat_inverse(P, g.h, g.p, mod);
  if (!Pinv) throw Error(ErrorCode::NonUnit, "conjugating matrix is not invertible mod p");
  MatrixGenSet r = g;
  for (auto& x : r.gens) x = mat_mul(mat_mul(P, x, g.h, mod), *Pinv, g.h, mod);
  return r;
}

Matrix random_invertible(int h, std::uint64_t p, int M, std::mt19937_64& rng) {
  const std::uint64_t mod = ma::checked_power(p, M);
  std::uniform_int_distribution<std::uint64_t> dist(0, mod - 1);
  for (;;) {
    Matrix m(static_cast<std::size_t>(h) * h);
    for (auto& x : m) x = dist(rng);
    if (mat_inverse(m, h, p, p)) return m;
  }
}

// ---- closure ----

namespace {

// A key keeps selected matrix entries modulo per-entry moduli; it packs into
// 64 bits when the digits fit.
struct KeySchema {
  std::vector<std::pair<int, std::uint64_t>> digits;
  std::vector<int> widths;
  bool packed = true;

  void add(int index, std::uint64_t mod) {
    if (mod <= 1) return;
    digits.emplace_back(index, mod);
    widths.push_back(std::bit_width(mod - 1));
    packed = std::accumulate(widths.begin(), widths.end(), 0) <= 64;
  }
};

class Closure {
 public:
  Closure(const std::vector<Matrix>& gens, int h, std::uint64_t mod, KeySchema schema, std::uint64_t budget)
      : schema_(std::move(schema)) {
    std::vector<Matrix> g;
    for (const auto& x : gens) {
      Matrix r(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] % mod;
      g.push_back(std::move(r));
    }
    Matrix id(static_cast<std::size_t>(h) * h, 0);
    for (int i = 0; i < h; ++i) id[i * h + i] = 1 % mod;
    std::deque<Matrix> queue;
    insert(id);
    queue.push_back(std::move(id));
    while (!queue.empty()) {
      const Matrix x = std::move(queue.front());
      queue.pop_front();
      for (const auto& gen : g) {
        Matrix y = mat_mul(x, gen, h, mod);
        if (!insert(y)) continue;
        if (size() > budget)
          throw Error(ErrorCode::BudgetExceeded, "closure exceeds " + std::to_string(budget) + " elements");
        queue.push_back(std::move(y));
      }
    }
  }

  std::uint64_t size() const { return schema_.packed ? small_.size() : large_.size(); }

  bool contains(const Matrix& m) const {
    return schema_.packed ? small_.count(pack(m)) > 0 : large_.count(bytes(m)) > 0;
  }

 private:
  bool insert(const Matrix& m) {
    return schema_.packed ? small_.insert(pack(m)).second : large_.insert(bytes(m)).second;
  }

  std::uint64_t pack(const Matrix& m) const {
    std::uint64_t key = 0;
    int shift = 0;
    for (std::size_t k = 0; k < schema_.digits.size(); ++k) {
      const auto [idx, mod] = schema_.digits[k];
      key |= (m[idx] % mod) << shift;
      shift += schema_.widths[k];
    }
    return key;
  }

  std::string bytes(const Matrix& m) const {
    std::string s;
    s.reserve(schema_.digits.size() * 8);
    for (const auto& [idx, mod] : schema_.digits) {
      const std::uint64_t v = m[idx] % mod;
      s.append(reinterpret_cast<const char*>(&v), sizeof v);
    }
    return s;
  }

  KeySchema schema_;
  std::unordered_set<std::uint64_t> small_;
  std::unordered_set<std::string> large_;
};

KeySchema full_schema(int h, std::uint64_t mod) {
  KeySchema s;
  for (int i = 0; i < h * h; ++i) s.add(i, mod);
  return s;
}

std::uint64_t level_modulus(std::uint64_t p, int n) {
  const auto mod = ma::checked_power(p, n);
  if (mod == 0) throw Error(ErrorCode::ValidationError, "p^n does not fit in 62 bits");
  return mod;
}

}  // namespace

std::uint64_t image_order(const MatrixGenSet& g, int n, std::uint64_t budget) {
  g.validate();
  if (n < 1) throw Error(ErrorCode::ValidationError, "level must be positive");
  if (n > g.M) throw Error(ErrorCode::PrecisionTooLow, "generators are known only mod p^" + std::to_string(g.M));
  const auto mod = level_modulus(g.p, n);
  return Closure(g.gens, g.h, mod, full_schema(g.h, mod), budget).size();
}

std::vector<std::uint64_t> CountSeries::kernel_indices() const {
  std::vector<std::uint64_t> r;
  for (const auto& pt : points) r.push_back(points.empty() ? 0 : pt.order / points.front().order);
  return r;
}

bool divides_gl_order(std::uint64_t order, int h, std::uint64_t p, int n) {
  if (order == 0) return false;
  std::uint64_t r = order;
  // |GL_h(Z/p^n)| = p^{(n-1)h^2} · Π_{i<h} (p^h - p^i)
  std::uint64_t ph = 1;
  for (int i = 0; i < h; ++i) ph *= p;
  std::uint64_t pi = 1;
  for (int i = 0; i < h; ++i) {
    r /= std::gcd(r, ph - pi);
    pi *= p;
  }
  for (long t = 0; t < static_cast<long>(n - 1) * h * h && r % p == 0; ++t) r /= p;
  return r == 1;
}

bool series_invariants_hold(const CountSeries& cs, int h) {
  for (std::size_t i = 0; i < cs.points.size(); ++i) {
    if (!divides_gl_order(cs.points[i].order, h, cs.p, cs.points[i].n)) return false;
    if (i > 0 && cs.points[i].order % cs.points[i - 1].order != 0) return false;
  }
  return true;
}

CountSeries count_series(const MatrixGenSet& g, int n_max, std::uint64_t budget) {
  if (n_max > g.M) throw Error(ErrorCode::PrecisionTooLow, "n_max exceeds generator precision");
  CountSeries cs;
  cs.p = g.p;
  for (int n = 1; n <= n_max; ++n) cs.points.push_back({n, image_order(g, n, budget)});
  for (std::size_t i = 1; i < cs.points.size(); ++i)
    if (cs.points[i].order % cs.points[i - 1].order != 0)
      throw Error(ErrorCode::NonMultiplicativeSeries, "image orders do not divide along the series");
  return cs;
}

DimFit fit_dimension(const CountSeries& cs) {
  const auto& pts = cs.points;
  if (pts.size() < 3) throw Error(ErrorCode::ValidationError, "fit needs at least three levels");
  // exps[i] = log_p(|I_{n_i}| / |I_{n_{i-1}}|)
  std::vector<int> exps(pts.size(), -1);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].n != pts[i - 1].n + 1) throw Error(ErrorCode::ValidationError, "levels must be consecutive");
    if (pts[i - 1].order == 0 || pts[i].order % pts[i - 1].order != 0)
      throw Error(ErrorCode::NonMultiplicativeSeries, "order at n=" + std::to_string(pts[i].n) + " is not a multiple");
    std::uint64_t r = pts[i].order / pts[i - 1].order;
    int k = 0;
    while (r % cs.p == 0) {
      r /= cs.p;
      ++k;
    }
    if (r != 1) throw Error(ErrorCode::NonMultiplicativeSeries, "ratio is not a power of p");
    exps[i] = k;
  }
  DimFit fit;
  std::size_t confirm = 0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i)
    if (exps[i] == exps[i + 1]) {
      confirm = i;
      break;
    }
  if (confirm) {
    fit.d = exps[confirm];
    fit.confirmed_at = pts[confirm].n;
    fit.stable = true;
    for (std::size_t i = confirm; i < pts.size(); ++i) fit.stable = fit.stable && exps[i] == fit.d;
  } else {
    fit.d = exps.back();
  }
  std::size_t start = pts.size() - 1;
  while (start > 0 && exps[start] == fit.d) --start;
  fit.n0 = pts[start].n;
  const auto scale = ma::checked_power(cs.p, fit.n0 * fit.d);
  if (scale == 0) throw Error(ErrorCode::ValidationError, "p^{n0 d} overflows");
  fit.vol = Rational(static_cast<std::int64_t>(pts[start].order), static_cast<std::int64_t>(scale));
  return fit;
}

// ---- ω-filtration ----

namespace {

void require_block_structure(const OrderSpec& spec, const MatrixGenSet& g) {
  if (g.h != spec.h()) throw Error(ErrorCode::ShapeMismatch, "generator size differs from e·f·h_r");
  if (g.p != spec.ring.p) throw Error(ErrorCode::SpecMismatch, "generator prime differs from the order");
  const RingPtr ring = make_ring(spec.ring.with_precision(g.M));
  const int b = ring->degree();
  for (const auto& m : g.gens)
    for (int L = 0; L < spec.h_r; ++L)
      for (int Lp = 0; Lp < spec.h_r; ++Lp) {
        std::vector<Coord> a(b);
        for (int r = 0; r < b; ++r) a[r] = m[(L * b + r) * g.h + Lp * b];
        const auto mm = multiplication_matrix(ring->from_coords(a));
        for (int r = 0; r < b; ++r)
          for (int c = 0; c < b; ++c)
            if (mm[r * b + c] != m[(L * b + r) * g.h + Lp * b + c])
              throw Error(ErrorCode::ValidationError, "generator is not A-linear");
      }
}

}  // namespace

CountSeries omega_count_series(const OrderSpec& spec, const MatrixGenSet& g, int n_max, std::uint64_t budget) {
  g.validate();
  require_block_structure(spec, g);
  const int e = spec.ring.e();
  const int f = spec.ring.f;
  const int b = e * f;
  CountSeries cs;
  cs.p = g.p;
  for (int n = 1; n <= n_max; ++n) {
    const int s = n / e, r = n % e;
    const int work = (n + e - 1) / e;
    if (work > g.M) throw Error(ErrorCode::PrecisionTooLow, "ω-level exceeds generator precision");
    // A-entries are the first columns of the blocks; ω^n A = p^s ω^r A
    KeySchema schema;
    for (int L = 0; L < spec.h_r; ++L)
      for (int Lp = 0; Lp < spec.h_r; ++Lp)
        for (int c = 0; c < b; ++c) {
          const int j = c / f;
          schema.add((L * b + c) * g.h + Lp * b, level_modulus(g.p, j < r ? s + 1 : s));
        }
    cs.points.push_back({n, Closure(g.gens, g.h, level_modulus(g.p, work), schema, budget).size()});
  }
  return cs;
}

OmegaFit fit_dimension_over_O(const CountSeries& omega, const OrderSpec& spec, const DimFit& qp) {
  OmegaFit r;
  r.fit = fit_dimension(omega);
  r.e = spec.ring.e();
  r.f = spec.ring.f;
  r.d = qp.d;
  if (r.fit.d % r.f != 0) throw Error(ErrorCode::RelationViolated, "ω-side exponent is not a multiple of f");
  r.d_A = r.fit.d / r.f;
  r.relation_holds = r.e * r.d_A * r.f == qp.d;
  if (!r.relation_holds)
    throw Error(ErrorCode::RelationViolated, "e·d_A·f = " + std::to_string(r.e * r.d_A * r.f) + " but d = " +
                                                 std::to_string(qp.d));
  return r;
}

// ---- embeddings ----

std::vector<RingElem> unit_generators(const RingPtr& ring) {
  std::vector<RingElem> gens;
  const RingElem one = ring->one();
  if (ring->residue_size() > 2) gens.push_back(ring->teichmueller(1));
  const RingElem w = ring->uniformizer();
  const int top = std::min(ring->e() * ring->N() - 1, 2 * ring->e());
  for (int j = 1; j <= top; ++j)
    for (int i = 0; i < ring->f(); ++i) {
      const RingElem x = one + ring->basis_element(i, 0) * pow(w, static_cast<std::uint64_t>(j));
      if (!(x == one)) gens.push_back(x);
    }
  if (ring->p() == 2) {
    const RingElem m1 = ring->from_int(-1);
    if (!(m1 == one)) gens.push_back(m1);
  }
  return gens;
}

namespace {

Matrix block_matrix(const std::vector<std::vector<RingElem>>& A, const RingPtr& ring) {
  const int hr = static_cast<int>(A.size());
  const int b = ring->degree();
  const int h = hr * b;
  Matrix m(static_cast<std::size_t>(h) * h, 0);
  for (int L = 0; L < hr; ++L)
    for (int Lp = 0; Lp < hr; ++Lp) {
      const auto mm = multiplication_matrix(A[L][Lp]);
      for (int r = 0; r < b; ++r)
        for (int c = 0; c < b; ++c) m[(L * b + r) * h + Lp * b + c] = mm[r * b + c];
    }
  return m;
}

std::vector<std::vector<RingElem>> identity_A(const RingPtr& ring, int hr) {
  std::vector<std::vector<RingElem>> A(hr, std::vector<RingElem>(hr, ring->zero()));
  for (int i = 0; i < hr; ++i) A[i][i] = ring->one();
  return A;
}

}  // namespace

MatrixGenSet embed_order(const OrderSpec& spec, int M) {
  if (spec.h_r < 1) throw Error(ErrorCode::ValidationError, "rank must be positive");
  const RingPtr ring = make_ring(spec.ring.with_precision(M));
  MatrixGenSet g;
  g.h = spec.h();
  g.M = M;
  g.p = spec.ring.p;
  g.label = spec.h_r == 1 ? "units" : "GL" + std::to_string(spec.h_r);
  g.label += "(p=" + std::to_string(g.p) + ",e=" + std::to_string(ring->e()) + ",f=" + std::to_string(ring->f()) + ")";
  for (const auto& u : unit_generators(ring)) {
    auto A = identity_A(ring, spec.h_r);
    A[0][0] = u;
    g.gens.push_back(block_matrix(A, ring));
  }
  if (spec.h_r >= 2) {
    for (int L = 0; L < spec.h_r; ++L)
      for (int Lp = 0; Lp < spec.h_r; ++Lp) {
        if (L == Lp) continue;
        for (int j = 0; j < ring->e(); ++j)
          for (int i = 0; i < ring->f(); ++i) {
            auto A = identity_A(ring, spec.h_r);
            A[L][Lp] = ring->basis_element(i, j);
            g.gens.push_back(block_matrix(A, ring));
          }
      }
    auto P = identity_A(ring, spec.h_r);
    std::swap(P[0], P[1]);
    g.gens.push_back(block_matrix(P, ring));
  }
  if (g.gens.empty()) {
    auto A = identity_A(ring, spec.h_r);
    g.gens.push_back(block_matrix(A, ring));
  }
  return g;
}

ScalarCheck scalar_subgroup_check(const OrderSpec& spec, const MatrixGenSet& host, int n_check, std::uint64_t budget) {
  host.validate();
  if (host.h != spec.h()) throw Error(ErrorCode::ShapeMismatch, "host size differs from e·f·h_r");
  if (n_check > host.M) throw Error(ErrorCode::PrecisionTooLow, "check level exceeds host precision");
  const RingPtr ring = make_ring(spec.ring.with_precision(host.M));
  const int e = ring->e();
  std::vector<Closure> closures;
  for (int n = 1; n <= n_check; ++n) {
    const auto mod = level_modulus(host.p, n);
    closures.emplace_back(host.gens, host.h, mod, full_schema(host.h, mod), budget);
  }
  const RingElem one = ring->one();
  const RingElem w = ring->uniformizer();
  for (int k = 1; k < e * n_check; ++k) {
    bool all = true;
    for (int j = k; j <= k + 2 * e && all; ++j)
      for (int i = 0; i < ring->f() && all; ++i) {
        auto A = identity_A(ring, spec.h_r);
        const RingElem x = one + ring->basis_element(i, 0) * pow(w, static_cast<std::uint64_t>(j));
        for (int L = 0; L < spec.h_r; ++L) A[L][L] = x;
        const Matrix m = block_matrix(A, ring);
        for (int n = 1; n <= n_check && all; ++n) {
          const auto mod = level_modulus(host.p, n);
          Matrix r(m.size());
          for (std::size_t t = 0; t < m.size(); ++t) r[t] = m[t] % mod;
          all = closures[n - 1].contains(r);
        }
      }
    if (all) return {true, k};
  }
  return {false, 0};
}

// ---- catalog ----

std::vector<CatalogEntry> builtin_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"z3_units", {LocalRingSpec::padic_integers(3, 5), 1}, 5, Rational(2, 3)});
  c.push_back({"gl2_z3", {LocalRingSpec::padic_integers(3, 3), 2}, 3, Rational(48, 81)});
  c.push_back({"z9_units", {LocalRingSpec::unramified(3, {-1, -1, 1}, 5), 1}, 5, Rational(8, 9)});
  c.push_back({"z2sqrt2_units", {LocalRingSpec::pure_root(2, 2, 5), 1}, 5, Rational(1, 2)});
  return c;
}

CatalogRow run_catalog_entry(const CatalogEntry& entry, std::uint64_t budget) {
  CatalogRow row;
  row.entry = entry;
  row.e = entry.spec.ring.e();
  row.f = entry.spec.ring.f;
  row.h = entry.spec.h();
  const MatrixGenSet g = embed_order(entry.spec, entry.n_max);
  row.counts = count_series(g, entry.n_max, budget);
  row.fit = fit_dimension(row.counts);
  row.omega_counts = omega_count_series(entry.spec, g, entry.n_max, budget);
  row.invariants_ok = series_invariants_hold(row.counts, row.h);
  // the relation is judged in the report, not here
  try {
    row.omega = fit_dimension_over_O(row.omega_counts, entry.spec, row.fit);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::RelationViolated) throw;
    row.omega.fit = fit_dimension(row.omega_counts);
    row.omega.e = row.e;
    row.omega.f = row.f;
    row.omega.d = row.fit.d;
    row.omega.d_A = row.omega.fit.d / row.f;
    row.omega.relation_holds = false;
  }
  return row;
}

bool CatalogReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CatalogCheck& c) { return c.pass; });
}

void CatalogReport::require() const {
  std::string failed;
  for (const auto& c : checks)
    if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.label + ": " + c.relation + " (" + c.detail + ")";
  if (!failed.empty()) throw Error(ErrorCode::CatalogViolation, failed);
}

CatalogReport dimension_catalog_check(const std::vector<CatalogRow>& rows) {
  CatalogReport rep;
  rep.rows = rows;
  auto add = [&](const std::string& label, const std::string& rel, bool pass, const std::string& detail) {
    rep.checks.push_back({label, rel, pass, detail});
  };
  for (const auto& r : rows) {
    const auto& lbl = r.entry.label;
    const int hr = r.entry.spec.h_r;
    add(lbl, "stable fit", r.fit.stable, "confirmed at " + (r.fit.confirmed_at ? std::to_string(*r.fit.confirmed_at) : "-"));
    add(lbl, "series invariants", r.invariants_ok, "divisibility in GL_h and along n");
    add(lbl, "d <= h^2", r.fit.d <= r.h * r.h, std::to_string(r.fit.d) + " vs " + std::to_string(r.h * r.h));
    add(lbl, "d = h_r^2 e f", r.fit.d == hr * hr * r.e * r.f,
        std::to_string(r.fit.d) + " vs " + std::to_string(hr * hr * r.e * r.f));
    add(lbl, "d_A = h_r^2", r.omega.d_A == hr * hr, std::to_string(r.omega.d_A) + " vs " + std::to_string(hr * hr));
    add(lbl, "e d_A f = d", r.omega.relation_holds,
        std::to_string(r.e * r.omega.d_A * r.f) + " vs " + std::to_string(r.fit.d));
    if (r.entry.expected_vol)
      add(lbl, "vol", r.fit.vol == *r.entry.expected_vol, r.fit.vol.str() + " vs " + r.entry.expected_vol->str());
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& a = rows[i];
      const auto& b = rows[j];
      if (a.e * a.f != b.e * b.f || a.entry.spec.h_r != b.entry.spec.h_r) continue;
      add(a.entry.label + "~" + b.entry.label, "d_1 = d_2", a.fit.d == b.fit.d,
          std::to_string(a.fit.d) + " vs " + std::to_string(b.fit.d));
    }
  return rep;
}

}  // namespace pitower
