#include "pitower/formal_module.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pitower/error.hpp"
#include "pitower/modarith.hpp"

namespace pitower {

namespace ma = modarith;

std::string_view to_string(LawKind kind) {
  switch (kind) {
    case LawKind::LubinTate: return "lubin_tate";
    case LawKind::Multiplicative: return "multiplicative";
    case LawKind::Additive: return "additive";
  }
  return "?";
}

LawKind law_kind_from_string(std::string_view s) {
  if (s == "lubin_tate") return LawKind::LubinTate;
  if (s == "multiplicative") return LawKind::Multiplicative;
  if (s == "additive") return LawKind::Additive;
  throw Error(ErrorCode::ParseError, "unknown law kind '" + std::string(s) + "'");
}

namespace {

std::uint64_t ipow(std::uint64_t b, int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

Series1 reduce_series(const Series1& s, const RingPtr& target) {
  Series1 r(target, s.D());
  const auto m = target->modulus();
  for (int i = 0; i <= s.D(); ++i)
    for (int c = 0; c < target->degree(); ++c) r.raw(i)[c] = s.raw(i)[c] % m;
  r.set_polynomial(s.is_polynomial());
  return r;
}

Series2 reduce_series(const Series2& s, const RingPtr& target) {
  Series2 r(target, s.D());
  const auto m = target->modulus();
  for (int i = 0; i <= s.D(); ++i)
    for (int j = 0; i + j <= s.D(); ++j)
      for (int c = 0; c < target->degree(); ++c) r.raw(i, j)[c] = s.raw(i, j)[c] % m;
  return r;
}

Series1 lift_series(const Series1& s, const RingPtr& target) {
  Series1 r(target, s.D());
  for (int i = 0; i <= s.D(); ++i) r.set_coeff(i, lift(s.coeff(i), target));
  r.set_polynomial(s.is_polynomial());
  return r;
}

// Working state of the successive-approximation solve in a ring carrying
// `guard` extra p-adic digits. Floors are in ω-units.
struct GuardedSolve {
  RingPtr big;
  int cap = 0;
  int D = 0;
  Series1 f;
  std::vector<int> vc;                 // v(f_m)
  std::vector<std::vector<int>> vpow;  // v([f^i]_a)
  std::vector<RingElem> denom_inv;     // ((π/ω)(1 - π^{k-1}))^{-1}

  GuardedSolve(const Series1& f_small, int D_, int guard) : D(D_) {
    const auto& small = f_small.ring();
    big = make_ring(small->spec().with_precision(small->N() + guard));
    cap = big->e() * big->N();
    Series1 fl = lift_series(f_small, big);
    f = fl.truncated(std::max(D, 1));
    vc.assign(D + 2, cap);
    for (int m = 0; m <= std::min(D + 1, f.D()); ++m) vc[m] = std::min(cap, big->valuation(f.raw(m)));
    vpow.assign(D + 1, std::vector<int>(D + 1, cap));
    Series1 pw(big, D);
    pw.set_coeff(0, big->one());
    for (int i = 0; i <= D; ++i) {
      for (int a = 0; a <= D; ++a) vpow[i][a] = std::min(cap, big->valuation(pw.raw(a)));
      if (i < D) pw = pw * f;
    }
    const RingElem pi = f.coeff(1);
    RingElem pi_unit = big->zero();
    big->divide_by_omega(pi.data(), pi_unit.data());
    denom_inv.assign(D + 1, big->one());
    for (int k = 2; k <= D; ++k) denom_inv[k] = inv(pi_unit * (big->one() - pow(pi, k - 1)));
  }

  // floor contribution of f(G) when G carries the floors `fl` below degree k
  int outer_floor(const std::vector<int>& fl, int k) const {
    int best = cap;
    for (int d = 1; d < k; ++d) {
      if (fl[d] >= cap) continue;
      int vm = cap;
      for (int m = 1; m <= k - d + 1 && m < static_cast<int>(vc.size()); ++m) vm = std::min(vm, vc[m]);
      best = std::min(best, fl[d] + vm);
    }
    return best;
  }

  // (A - B) / (π - π^k); false when the difference is not divisible by ω
  bool finish(const Coord* a, const Coord* b, int k, Coord* out) const {
    std::vector<Coord> diff(big->degree()), q(big->degree());
    big->sub(a, b, diff.data());
    if (big->is_unit(diff.data())) return false;
    big->divide_by_omega(diff.data(), q.data());
    big->mul(q.data(), denom_inv[k].data(), out);
    return true;
  }
};

constexpr int kFirstGuard = 2;

template <class Attempt>
auto with_guards(const RingPtr& ring, Attempt attempt, int first_guard = kFirstGuard) {
  for (int guard = first_guard;; guard *= 2) {
    if (ma::checked_power(ring->p(), ring->N() + guard) == 0)
      throw Error(ErrorCode::PrecisionExhausted, "guard digits exceed the machine modulus");
    auto r = attempt(guard);
    if (r) return *r;
  }
}

std::optional<Series2> try_solve_law(const Series1& f_small, int D, int guard, const LawOptions& opt) {
  GuardedSolve g(f_small, D, guard);
  const auto& big = g.big;
  Series2 F = Series2::sum_law(big, D);
  std::vector<int> fl(D + 1, g.cap);
  std::vector<int> order;
  for (int k = 2; k <= D; ++k) {
    const Series2 Ft = F.truncated(k);
    const Series1 fk = g.f.truncated(k);
    const Series2 A = substitute_xy(Ft, fk, fk);
    const Series2 B = s_compose(fk, Ft);

    int floor_a = g.cap;
    for (int d = 1; d < k; ++d) {
      if (fl[d] >= g.cap) continue;
      int w = g.cap;
      for (int i = 0; i <= d; ++i)
        for (int a = i; a <= k - (d - i); ++a) w = std::min(w, g.vpow[i][a] + g.vpow[d - i][k - a]);
      floor_a = std::min(floor_a, fl[d] + w);
    }
    const int floor_k = std::min({floor_a, g.outer_floor(fl, k), g.cap});

    order.resize(k + 1);
    std::iota(order.begin(), order.end(), 0);
    if (opt.shuffle_seed) {
      std::mt19937_64 rng(*opt.shuffle_seed ^ (0x9e3779b97f4a7c15ULL * k));
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (int i : order) {
      const int j = k - i;
      if (!g.finish(A.raw(i, j), B.raw(i, j), k, F.raw(i, j))) {
        if (floor_k >= 1) throw Error(ErrorCode::NotLTSeries, "f(F) and F(f, f) disagree modulo π");
        return std::nullopt;
      }
    }
    fl[k] = floor_k - 1;
    if (fl[k] < big->e() * f_small.ring()->N()) return std::nullopt;
  }
  return reduce_series(F, f_small.ring());
}

std::optional<Series1> try_solve_bracket(const Series1& f_small, const RingElem& a, int D, int guard,
                                         const LawOptions& opt) {
  GuardedSolve g(f_small, D, guard);
  const auto& big = g.big;
  Series1 phi(big, D);
  if (D >= 1) phi.set_coeff(1, lift(a, big));
  std::vector<int> fl(D + 1, g.cap);
  std::vector<int> order;
  for (int k = 2; k <= D; ++k) order.push_back(k);
  (void)opt;  // a single coefficient per degree, so the order is forced
  for (int k : order) {
    const Series1 pt = phi.truncated(k);
    const Series1 fk = g.f.truncated(k);
    const Series1 A = s_compose(pt, fk);
    const Series1 B = s_compose(fk, pt);
    int floor_a = g.cap;
    for (int d = 1; d < k; ++d)
      if (fl[d] < g.cap) floor_a = std::min(floor_a, fl[d] + g.vpow[d][k]);
    const int floor_k = std::min({floor_a, g.outer_floor(fl, k), g.cap});
    if (!g.finish(A.raw(k), B.raw(k), k, phi.raw(k))) {
      if (floor_k >= 1) throw Error(ErrorCode::NotLTSeries, "bracket does not commute with f modulo π");
      return std::nullopt;
    }
    fl[k] = floor_k - 1;
    if (fl[k] < big->e() * f_small.ring()->N()) return std::nullopt;
  }
  return reduce_series(phi, f_small.ring());
}

}  // namespace

// ---- FormalModuleLaw ----

FormalModuleLaw::FormalModuleLaw(LawKind kind, Series2 F, Series1 frobenius, int frobenius_power)
    : kind_(kind), F_(std::move(F)), frobenius_(std::move(frobenius)), frobenius_power_(frobenius_power) {
  require_same_ring(F_.ring(), frobenius_.ring());
}

Series1 FormalModuleLaw::bracket_pi(int D) const {
  if (D > frobenius_.D() && !frobenius_.is_polynomial())
    throw Error(ErrorCode::TruncationTooSmall, "[π] is only known to degree " + std::to_string(frobenius_.D()));
  return frobenius_.truncated(D);
}

Series1 FormalModuleLaw::bracket(const RingElem& a) const {
  require_same_ring(ring(), a.ring());
  std::vector<Coord> key(a.coords().begin(), a.coords().end());
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }
  Series1 s(ring(), D());
  if (kind_ == LawKind::Additive) {
    if (D() >= 1) s.set_coeff(1, a);
  } else if (a == ring()->one()) {
    s = Series1::identity(ring(), D());
  } else if (a == pi() && (frobenius_.D() >= D() || frobenius_.is_polynomial())) {
    s = frobenius_.truncated(D());
    s.set_polynomial(false);
  } else {
    s = solve_bracket(*this, a);
  }
  std::lock_guard lock(cache_->mu);
  // first writer wins; every writer computed the same series
  return cache_->entries.emplace(std::move(key), std::move(s)).first->second;
}

std::map<std::vector<Coord>, Series1> FormalModuleLaw::cached_brackets() const {
  std::lock_guard lock(cache_->mu);
  return cache_->entries;
}

// ---- construction ----

void validate_lt_series(const Series1& f, int frobenius_power) {
  const auto& ring = *f.ring();
  if (frobenius_power < 1) throw Error(ErrorCode::NotLTSeries, "Frobenius power must be positive");
  const std::uint64_t Q = ipow(ring.residue_size(), frobenius_power);
  if (!ring.is_zero(f.raw(0))) throw Error(ErrorCode::NotLTSeries, "f(0) must vanish");
  if (f.D() < 1 || ring.valuation(f.raw(1)) != 1)
    throw Error(ErrorCode::NotLTSeries, "linear coefficient must be a uniformizer");
  if (static_cast<std::uint64_t>(f.D()) < Q && !f.is_polynomial())
    throw Error(ErrorCode::NotLTSeries, "series is truncated below X^" + std::to_string(Q));
  std::vector<Coord> t(ring.degree());
  const RingElem one = ring.one();
  for (std::uint64_t i = 2; i <= Q; ++i) {
    const Coord* c = i <= static_cast<std::uint64_t>(f.D()) ? f.raw(static_cast<int>(i)) : nullptr;
    if (i < Q) {
      if (c && ring.is_unit(c))
        throw Error(ErrorCode::NotLTSeries, "coefficient of X^" + std::to_string(i) + " is a unit");
    } else {
      if (!c) throw Error(ErrorCode::NotLTSeries, "missing leading X^q term");
      ring.sub(c, one.data(), t.data());
      if (ring.is_unit(t.data()))
        throw Error(ErrorCode::NotLTSeries, "coefficient of X^q is not 1 modulo ω");
    }
  }
}

Series1 default_lt_series(const RingPtr& ring, int frobenius_power) {
  const std::uint64_t Q = ipow(ring->residue_size(), frobenius_power);
  std::vector<RingElem> c(Q + 1, ring->zero());
  c[1] = ring->uniformizer();
  c[Q] = ring->one();
  return Series1::polynomial(ring, c);
}

Series1 gm_series(const RingPtr& ring) {
  const std::uint64_t p = ring->p();
  std::vector<RingElem> c(p + 1, ring->zero());
  std::int64_t binom = 1;
  for (std::uint64_t k = 1; k <= p; ++k) {
    binom = binom * static_cast<std::int64_t>(p - k + 1) / static_cast<std::int64_t>(k);
    c[k] = ring->from_int(binom);
  }
  return Series1::polynomial(ring, c);
}

FormalModuleLaw lt_law(const Series1& f, int D, const LawOptions& options) {
  if (D < 2) throw Error(ErrorCode::ValidationError, "law truncation must be at least 2");
  validate_lt_series(f, options.frobenius_power);
  const auto& ring = f.ring();
  Series2 F = with_guards(ring, [&](int guard) { return try_solve_law(f, D, guard, options); });
  const bool gm = f.is_polynomial() && f.effective_degree() == static_cast<int>(ring->p()) &&
                  f.truncated(f.effective_degree()) == gm_series(ring);
  return FormalModuleLaw(gm ? LawKind::Multiplicative : LawKind::LubinTate, std::move(F), f, options.frobenius_power);
}

FormalModuleLaw additive_law(const RingPtr& ring, int D) {
  return FormalModuleLaw(LawKind::Additive, Series2::sum_law(ring, D),
                         Series1::polynomial(ring, {ring->zero(), ring->uniformizer()}), 0);
}

Series1 lt_bracket(const FormalModuleLaw& law, const RingElem& a) { return law.bracket(a); }

Series1 solve_bracket(const FormalModuleLaw& law, const RingElem& a, const LawOptions& options) {
  const auto& ring = law.ring();
  if (!(a.ring()->spec().with_precision(0) == ring->spec().with_precision(0)))
    throw Error(ErrorCode::SpecMismatch, "bracket argument lives in another tower");
  if (law.kind() == LawKind::Additive) {
    Series1 s(ring, law.D());
    if (law.D() >= 1) s.set_coeff(1, lift(a, ring));
    return s;
  }
  // an argument known beyond p^N is solved without rounding it first
  const int first = std::max(kFirstGuard, a.ring()->N() - ring->N());
  return with_guards(
      ring, [&](int guard) { return try_solve_bracket(law.frobenius(), a, law.D(), guard, options); }, first);
}

// ---- heights ----

HeightResult height_of(const FormalModuleLaw& law) {
  const auto& ring = *law.ring();
  const auto w = weierstrass_degree(law.bracket_pi(law.D()));
  if (!w) {
    int b = 0;
    for (std::uint64_t t = ring.p(); t <= static_cast<std::uint64_t>(law.D()); t *= ring.p()) ++b;
    return {HeightResult::Kind::LowerBound, b, std::nullopt};
  }
  int h = 0;
  std::uint64_t t = 1;
  while (t < static_cast<std::uint64_t>(*w)) {
    t *= ring.p();
    ++h;
  }
  if (t != static_cast<std::uint64_t>(*w))
    throw Error(ErrorCode::NotPPower, "unit coefficient of [π] at index " + std::to_string(*w));
  std::optional<int> h_r;
  if (h % ring.f() == 0) h_r = h / ring.f();
  return {HeightResult::Kind::Finite, h, h_r};
}

int zp_height_check(const FormalModuleLaw& law) {
  const auto& ring = *law.ring();
  const HeightResult hr = height_of(law);
  if (hr.kind != HeightResult::Kind::Finite) throw Error(ErrorCode::Mismatch, "height is not finite at this truncation");
  const int eh = ring.e() * hr.h;
  const std::uint64_t expected = ma::checked_power(ring.p(), eh);
  if (expected == 0 || expected > static_cast<std::uint64_t>(law.D()))
    throw Error(ErrorCode::TruncationTooSmall, "[p] needs truncation at least p^" + std::to_string(eh));
  const auto w = weierstrass_degree(law.bracket(ring.from_int(static_cast<std::int64_t>(ring.p()))));
  if (!w || static_cast<std::uint64_t>(*w) != expected)
    throw Error(ErrorCode::Mismatch, "Weierstrass degree of [p] is " + (w ? std::to_string(*w) : std::string("none")) +
                                         ", expected " + std::to_string(expected));
  return eh;
}

bool divisibility_check(const FormalModuleLaw& law) {
  return weierstrass_degree(law.bracket_pi(law.D())).has_value();
}

// ---- morphisms ----

namespace {

int common_degree(int D, const Series1& g) { return g.is_polynomial() ? D : std::min(D, g.D()); }

}  // namespace

bool is_endomorphism(const FormalModuleLaw& law, const Series1& g) { return is_homomorphism(law, law, g); }

bool is_homomorphism(const FormalModuleLaw& from, const FormalModuleLaw& to, const Series1& g) {
  require_same_ring(from.ring(), to.ring());
  require_same_ring(from.ring(), g.ring());
  const int D = common_degree(std::min(from.D(), to.D()), g);
  const Series2 Ff = from.F().truncated(D);
  const Series2 Ft = to.F().truncated(D);
  const Series1 gd = g.truncated(D);
  return s_compose(gd, Ff) == substitute_xy(Ft, gd, gd);
}

// ---- logarithm ----

FracSeries1 formal_log(const FormalModuleLaw& law) {
  const auto& ring = law.ring();
  const int D = law.D();
  const std::uint64_t p = ring->p();
  // ∂_Y F(T, 0)
  Series1 dF(ring, D - 1);
  for (int i = 0; i <= D - 1; ++i) dF.set_coeff(i, law.F().coeff(i, 1));
  const Series1 g = series_inverse(dF);
  FracSeries1 L{Series1(ring, D), std::vector<int>(D + 1, 0)};
  for (int i = 1; i <= D; ++i) {
    const int v = ma::valuation(static_cast<std::uint64_t>(i), p, 64);
    const std::uint64_t unit = static_cast<std::uint64_t>(i) / ma::checked_power(p, v);
    L.num.set_coeff(i, g.coeff(i - 1) * inv(ring->from_int(static_cast<std::int64_t>(unit))));
    L.num.set_prec(i, g.prec(i - 1));
    L.den_exp[i] = v;
    if (L.floor(i) <= 0)
      throw Error(ErrorCode::PrecisionExhausted, "log coefficient " + std::to_string(i) + " has no known digits");
  }
  return L;
}

FracSeries1 formal_exp(const FormalModuleLaw& law) {
  const FracSeries1 L = formal_log(law);
  const auto& ring = *law.ring();
  const int D = L.D();
  // M(Y) = L(pY)/p is integral with linear coefficient 1
  Series1 M(law.ring(), D);
  for (int i = 1; i <= D; ++i) {
    const int shift = i - 1 - L.den_exp[i];
    const std::uint64_t pk = shift >= ring.N() ? 0 : ma::checked_power(ring.p(), shift);
    ring.scale(L.num.raw(i), pk, M.raw(i));
    M.set_prec(i, std::min(ring.N(), L.num.prec(i) + shift));
  }
  const Series1 R = reversion(M);
  FracSeries1 E{R, std::vector<int>(D + 1, 0)};
  for (int k = 1; k <= D; ++k) E.den_exp[k] = k - 1;
  return E;
}

}  // namespace pitower

namespace pitower {

RingElem random_element(const RingPtr& ring, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coord> dist(0, ring->modulus() - 1);
  std::vector<Coord> c(ring->degree());
  for (auto& x : c) x = dist(rng);
  return ring->from_coords(std::move(c));
}

Series1 random_series(const RingPtr& ring, int D, std::mt19937_64& rng) {
  Series1 s(ring, D);
  for (int i = 1; i <= D; ++i) s.set_coeff(i, random_element(ring, rng));
  return s;
}

bool associativity_holds(const FormalModuleLaw& law, const Series1& x, const Series1& y, const Series1& z) {
  const Series2& F = law.F();
  return substitute(F, substitute(F, x, y), z) == substitute(F, x, substitute(F, y, z));
}

bool bracket_hom_holds(const FormalModuleLaw& law, const RingElem& a, const RingElem& b) {
  const auto& ring = law.ring();
  // [a] mod p^N depends on a beyond p^N, so a+b and ab are formed exactly
  // from the balanced lifts in a wider ring
  int wide = ring->N();
  while (wide < 2 * ring->N() + 4 && ma::checked_power(ring->p(), wide + 1) != 0) ++wide;
  const RingPtr W = ring->at_precision(wide);
  const RingElem aw = lift(a, W);
  const RingElem bw = lift(b, W);
  const Series1 ba = law.bracket(a);
  const Series1 bb = law.bracket(b);
  return solve_bracket(law, aw + bw) == substitute(law.F(), ba, bb) && solve_bracket(law, aw * bw) == s_compose(ba, bb);
}

bool log_linear_for(const FormalModuleLaw& law, const FracSeries1& L, const RingElem& a) {
  return equal_within_floors(L.compose(law.bracket(a)), L.times(a));
}

}  // namespace pitower
