#include "pitower/series.hpp"

#include <algorithm>

#include "pitower/error.hpp"
#include "pitower/modarith.hpp"

namespace pitower {

namespace ma = modarith;

namespace {

void require_shape(const Series1& a, const Series1& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.D() != b.D()) throw Error(ErrorCode::ShapeMismatch, "series truncation orders differ");
}

void require_shape(const Series2& a, const Series2& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.D() != b.D()) throw Error(ErrorCode::ShapeMismatch, "series truncation orders differ");
}

}  // namespace

// ---- Series1 ----

Series1::Series1(RingPtr ring, int D)
    : ring_(std::move(ring)),
      D_(D),
      stride_(ring_->degree()),
      coeffs_(static_cast<std::size_t>(D + 1) * stride_, 0),
      prec_(D + 1, ring_->N()) {
  if (D < 0) throw Error(ErrorCode::ShapeMismatch, "negative truncation order");
}

Series1 Series1::identity(RingPtr ring, int D) {
  Series1 s(ring, D);
  if (D >= 1) s.set_coeff(1, ring->one());
  return s;
}

Series1 Series1::from_coeffs(RingPtr ring, int D, const std::vector<RingElem>& coeffs) {
  Series1 s(ring, D);
  for (std::size_t i = 0; i < coeffs.size() && static_cast<int>(i) <= D; ++i) s.set_coeff(static_cast<int>(i), coeffs[i]);
  return s;
}

Series1 Series1::polynomial(RingPtr ring, const std::vector<RingElem>& coeffs) {
  const int D = std::max<int>(0, static_cast<int>(coeffs.size()) - 1);
  Series1 s = from_coeffs(std::move(ring), D, coeffs);
  s.polynomial_ = true;
  return s;
}

RingElem Series1::coeff(int i) const {
  return RingElem(ring_, std::vector<Coord>(raw(i), raw(i) + stride_));
}

void Series1::set_coeff(int i, const RingElem& c) {
  require_same_ring(ring_, c.ring());
  std::copy(c.coords().begin(), c.coords().end(), raw(i));
}

bool Series1::exact() const {
  const int N = ring_->N();
  return std::all_of(prec_.begin(), prec_.end(), [N](int v) { return v >= N; });
}

bool Series1::degraded() const {
  return std::any_of(prec_.begin(), prec_.end(), [](int v) { return v <= 0; });
}

int Series1::effective_degree() const {
  for (int i = D_; i >= 0; --i)
    if (!ring_->is_zero(raw(i))) return i;
  return -1;
}

Series1 Series1::truncated(int new_D) const {
  if (new_D > D_ && !polynomial_)
    throw Error(ErrorCode::TruncationTooSmall, "cannot extend a truncated series beyond its order");
  Series1 s(ring_, new_D);
  const int m = std::min(new_D, D_);
  std::copy(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(m + 1) * stride_, s.coeffs_.begin());
  std::copy(prec_.begin(), prec_.begin() + m + 1, s.prec_.begin());
  s.polynomial_ = polynomial_ && new_D >= effective_degree();
  return s;
}

bool operator==(const Series1& a, const Series1& b) {
  require_same_ring(a.ring_, b.ring_);
  return a.D_ == b.D_ && a.coeffs_ == b.coeffs_;
}

// ---- Series2 ----

Series2::Series2(RingPtr ring, int D)
    : ring_(std::move(ring)),
      D_(D),
      stride_(ring_->degree()),
      coeffs_(static_cast<std::size_t>(D + 1) * (D + 2) / 2 * stride_, 0) {
  if (D < 0) throw Error(ErrorCode::ShapeMismatch, "negative truncation order");
}

Series2 Series2::sum_law(RingPtr ring, int D) {
  Series2 s(ring, D);
  if (D >= 1) {
    s.set_coeff(1, 0, ring->one());
    s.set_coeff(0, 1, ring->one());
  }
  return s;
}

Series2 Series2::in_x(const Series1& s, int D) {
  Series2 r(s.ring(), D);
  for (int i = 0; i <= std::min(D, s.D()); ++i) std::copy(s.raw(i), s.raw(i) + r.stride_, r.raw(i, 0));
  return r;
}

Series2 Series2::in_y(const Series1& s, int D) {
  Series2 r(s.ring(), D);
  for (int j = 0; j <= std::min(D, s.D()); ++j) std::copy(s.raw(j), s.raw(j) + r.stride_, r.raw(0, j));
  return r;
}

RingElem Series2::coeff(int i, int j) const {
  return RingElem(ring_, std::vector<Coord>(raw(i, j), raw(i, j) + stride_));
}

void Series2::set_coeff(int i, int j, const RingElem& c) {
  require_same_ring(ring_, c.ring());
  std::copy(c.coords().begin(), c.coords().end(), raw(i, j));
}

Series2 Series2::swapped() const {
  Series2 r(ring_, D_);
  for (int i = 0; i <= D_; ++i)
    for (int j = 0; i + j <= D_; ++j) std::copy(raw(i, j), raw(i, j) + stride_, r.raw(j, i));
  return r;
}

Series2 Series2::truncated(int new_D) const {
  if (new_D > D_) throw Error(ErrorCode::TruncationTooSmall, "cannot extend a truncated series");
  Series2 r(ring_, new_D);
  for (int i = 0; i <= new_D; ++i)
    for (int j = 0; i + j <= new_D; ++j) std::copy(raw(i, j), raw(i, j) + stride_, r.raw(i, j));
  return r;
}

bool operator==(const Series2& a, const Series2& b) {
  require_same_ring(a.ring_, b.ring_);
  return a.D_ == b.D_ && a.coeffs_ == b.coeffs_;
}

// ---- arithmetic ----

Series1 s_combine(const Series1& a, const Series1& b, CombineKind kind) {
  require_shape(a, b);
  const auto& ring = *a.ring();
  const int D = a.D();
  Series1 r(a.ring(), D);
  if (kind != CombineKind::Mul) {
    for (int i = 0; i <= D; ++i) {
      if (kind == CombineKind::Add) ring.add(a.raw(i), b.raw(i), r.raw(i));
      else ring.sub(a.raw(i), b.raw(i), r.raw(i));
      r.set_prec(i, std::min(a.prec(i), b.prec(i)));
    }
    r.set_polynomial(a.is_polynomial() && b.is_polynomial());
    return r;
  }
  for (int i = 0; i <= D; ++i) {
    const Coord* ai = a.raw(i);
    if (ring.is_zero(ai)) continue;
    for (int j = 0; i + j <= D; ++j) {
      const Coord* bj = b.raw(j);
      if (ring.is_zero(bj)) continue;
      ring.mul_acc(ai, bj, r.raw(i + j));
    }
  }
  if (!a.exact() || !b.exact()) {
    for (int k = 0; k <= D; ++k) {
      int fl = ring.N();
      for (int i = 0; i <= k; ++i) fl = std::min(fl, std::min(a.prec(i), b.prec(k - i)));
      r.set_prec(k, fl);
    }
  }
  return r;
}

Series2 s_combine(const Series2& a, const Series2& b, CombineKind kind) {
  require_shape(a, b);
  const auto& ring = *a.ring();
  const int D = a.D();
  Series2 r(a.ring(), D);
  if (kind != CombineKind::Mul) {
    for (int i = 0; i <= D; ++i)
      for (int j = 0; i + j <= D; ++j) {
        if (kind == CombineKind::Add) ring.add(a.raw(i, j), b.raw(i, j), r.raw(i, j));
        else ring.sub(a.raw(i, j), b.raw(i, j), r.raw(i, j));
      }
    return r;
  }
  for (int i1 = 0; i1 <= D; ++i1)
    for (int j1 = 0; i1 + j1 <= D; ++j1) {
      const Coord* x = a.raw(i1, j1);
      if (ring.is_zero(x)) continue;
      const int rest = D - i1 - j1;
      for (int i2 = 0; i2 <= rest; ++i2)
        for (int j2 = 0; i2 + j2 <= rest; ++j2) {
          const Coord* y = b.raw(i2, j2);
          if (ring.is_zero(y)) continue;
          ring.mul_acc(x, y, r.raw(i1 + i2, j1 + j2));
        }
    }
  return r;
}

Series1 operator+(const Series1& a, const Series1& b) { return s_combine(a, b, CombineKind::Add); }
Series1 operator-(const Series1& a, const Series1& b) { return s_combine(a, b, CombineKind::Sub); }
Series1 operator*(const Series1& a, const Series1& b) { return s_combine(a, b, CombineKind::Mul); }
Series2 operator+(const Series2& a, const Series2& b) { return s_combine(a, b, CombineKind::Add); }
Series2 operator-(const Series2& a, const Series2& b) { return s_combine(a, b, CombineKind::Sub); }
Series2 operator*(const Series2& a, const Series2& b) { return s_combine(a, b, CombineKind::Mul); }

Series1 scale(const Series1& s, const RingElem& c) {
  require_same_ring(s.ring(), c.ring());
  Series1 r = s;
  for (int i = 0; i <= s.D(); ++i) s.ring()->mul(s.raw(i), c.data(), r.raw(i));
  return r;
}

Series2 scale(const Series2& s, const RingElem& c) {
  require_same_ring(s.ring(), c.ring());
  Series2 r = s;
  for (int i = 0; i <= s.D(); ++i)
    for (int j = 0; i + j <= s.D(); ++j) s.ring()->mul(s.raw(i, j), c.data(), r.raw(i, j));
  return r;
}

namespace {

int outer_degree_for(const Series1& outer, int D) {
  if (outer.D() < D && !outer.is_polynomial())
    throw Error(ErrorCode::TruncationTooSmall, "outer series is truncated below the target order");
  return std::min(outer.effective_degree(), D);
}

}  // namespace

Series1 s_compose(const Series1& outer, const Series1& inner) {
  require_same_ring(outer.ring(), inner.ring());
  if (!inner.ring()->is_zero(inner.raw(0)))
    throw Error(ErrorCode::NonzeroConstantTerm, "inner series must vanish at 0");
  const int D = inner.D();
  const int d = outer_degree_for(outer, D);
  Series1 r(inner.ring(), D);
  if (d < 0) return r;
  r.set_coeff(0, outer.coeff(d));
  r.set_prec(0, outer.prec(d));
  for (int i = d - 1; i >= 0; --i) {
    r = r * inner;
    inner.ring()->add(r.raw(0), outer.raw(i), r.raw(0));
    r.set_prec(0, std::min(r.prec(0), outer.prec(i)));
  }
  return r;
}

Series2 s_compose(const Series1& outer, const Series2& inner) {
  require_same_ring(outer.ring(), inner.ring());
  if (!inner.ring()->is_zero(inner.raw(0, 0)))
    throw Error(ErrorCode::NonzeroConstantTerm, "inner series must vanish at 0");
  const int D = inner.D();
  const int d = outer_degree_for(outer, D);
  Series2 r(inner.ring(), D);
  if (d < 0) return r;
  r.set_coeff(0, 0, outer.coeff(d));
  for (int i = d - 1; i >= 0; --i) {
    r = r * inner;
    inner.ring()->add(r.raw(0, 0), outer.raw(i), r.raw(0, 0));
  }
  return r;
}

Series1 substitute(const Series2& F, const Series1& x, const Series1& y) {
  require_same_ring(F.ring(), x.ring());
  require_same_ring(F.ring(), y.ring());
  const auto& ring = *F.ring();
  if (!ring.is_zero(x.raw(0)) || !ring.is_zero(y.raw(0)))
    throw Error(ErrorCode::NonzeroConstantTerm, "substituted series must vanish at 0");
  const int D = std::min({F.D(), x.D(), y.D()});
  const Series1 xs = x.truncated(D);
  const Series1 ys = y.truncated(D);
  std::vector<Series1> ypow{Series1(F.ring(), D)};
  ypow[0].set_coeff(0, ring.one());
  for (int j = 1; j <= D; ++j) ypow.push_back(ypow.back() * ys);

  // Horner in x over rows Σ_j F_ij y^j
  Series1 result(F.ring(), D);
  for (int i = D; i >= 0; --i) {
    Series1 row(F.ring(), D);
    for (int j = 0; i + j <= D; ++j) {
      const Coord* c = F.raw(i, j);
      if (ring.is_zero(c)) continue;
      for (int t = 0; t <= D; ++t) ring.mul_acc(c, ypow[j].raw(t), row.raw(t));
      for (int t = 0; t <= D; ++t) row.set_prec(t, std::min(row.prec(t), ypow[j].prec(t)));
    }
    result = result * xs + row;
  }
  return result;
}

Series2 substitute_xy(const Series2& F, const Series1& x, const Series1& y) {
  require_same_ring(F.ring(), x.ring());
  require_same_ring(F.ring(), y.ring());
  const auto& ring = *F.ring();
  if (!ring.is_zero(x.raw(0)) || !ring.is_zero(y.raw(0)))
    throw Error(ErrorCode::NonzeroConstantTerm, "substituted series must vanish at 0");
  const int D = F.D();
  const Series1 xs = x.truncated(D);
  const Series1 ys = y.truncated(D);
  std::vector<Series1> xpow{Series1(F.ring(), D)}, ypow{Series1(F.ring(), D)};
  xpow[0].set_coeff(0, ring.one());
  ypow[0].set_coeff(0, ring.one());
  for (int k = 1; k <= D; ++k) {
    xpow.push_back(xpow.back() * xs);
    ypow.push_back(ypow.back() * ys);
  }
  Series2 r(F.ring(), D);
  std::vector<Coord> t(ring.degree());
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j) {
      const Coord* c = F.raw(i, j);
      if (ring.is_zero(c)) continue;
      for (int a = i; a <= D; ++a) {
        const Coord* xa = xpow[i].raw(a);
        if (ring.is_zero(xa)) continue;
        ring.mul(c, xa, t.data());
        for (int b = j; a + b <= D; ++b) ring.mul_acc(t.data(), ypow[j].raw(b), r.raw(a, b));
      }
    }
  return r;
}

std::optional<int> weierstrass_degree(const Series1& s) {
  if (s.degraded()) throw Error(ErrorCode::DegradedSeries, "series has a coefficient with no known digits");
  for (int i = 0; i <= s.D(); ++i)
    if (s.ring()->is_unit(s.raw(i))) return i;
  return std::nullopt;
}

Series1 reversion(const Series1& s) {
  const auto& ring = s.ring();
  if (!ring->is_zero(s.raw(0))) throw Error(ErrorCode::NonzeroConstantTerm, "reversion needs s(0) = 0");
  if (s.D() < 1 || !ring->is_unit(s.raw(1)))
    throw Error(ErrorCode::NonUnitLinearTerm, "reversion needs a unit linear coefficient");
  const RingElem a1_inv = inv(s.coeff(1));
  const Series1 X = Series1::identity(ring, s.D());
  const Series1 work = s.truncated(s.D());  // drop polynomial flag mismatch issues
  Series1 r = scale(X, a1_inv);
  // each pass fixes at least one more degree
  for (int iter = 0; iter < s.D(); ++iter) {
    const Series1 diff = s_compose(work, r) - X;
    if (diff.effective_degree() < 0) break;
    r = r - scale(diff, a1_inv);
  }
  return r;
}

Series1 series_inverse(const Series1& s) {
  const auto& ring = *s.ring();
  if (!ring.is_unit(s.raw(0))) throw Error(ErrorCode::NonUnit, "series inverse needs a unit constant term");
  const int D = s.D();
  Series1 b(s.ring(), D);
  const RingElem b0 = inv(s.coeff(0));
  b.set_coeff(0, b0);
  b.set_prec(0, s.prec(0));
  std::vector<Coord> acc(ring.degree());
  for (int k = 1; k <= D; ++k) {
    std::fill(acc.begin(), acc.end(), 0);
    int fl = s.prec(0);
    for (int i = 1; i <= k; ++i) {
      ring.mul_acc(s.raw(i), b.raw(k - i), acc.data());
      fl = std::min({fl, s.prec(i), b.prec(k - i)});
    }
    ring.mul(acc.data(), b0.data(), b.raw(k));
    ring.neg(b.raw(k), b.raw(k));
    b.set_prec(k, fl);
  }
  return b;
}

Series1 derivative(const Series1& s) {
  const int D = std::max(0, s.D() - 1);
  Series1 r(s.ring(), D);
  for (int i = 1; i <= s.D(); ++i) {
    s.ring()->scale(s.raw(i), static_cast<std::uint64_t>(i), r.raw(i - 1));
    r.set_prec(i - 1, s.prec(i));
  }
  return r;
}

// ---- fraction-field series ----

FracSeries1 FracSeries1::from_integral(const Series1& s) { return {s, std::vector<int>(s.D() + 1, 0)}; }

int FracSeries1::max_den() const { return den_exp.empty() ? 0 : *std::max_element(den_exp.begin(), den_exp.end()); }

Series1 FracSeries1::scaled(int S) const {
  const auto& ring = *num.ring();
  Series1 r(num.ring(), num.D());
  for (int i = 0; i <= num.D(); ++i) {
    const int shift = S - den_exp[i];
    if (shift < 0) throw Error(ErrorCode::ValidationError, "scaling exponent below a denominator");
    const std::uint64_t pk = shift >= ring.N() ? 0 : ma::checked_power(ring.p(), shift);
    ring.scale(num.raw(i), pk, r.raw(i));
    r.set_prec(i, std::min(ring.N(), num.prec(i) + shift));
  }
  return r;
}

FracSeries1 FracSeries1::compose(const Series1& inner) const {
  const int S = max_den();
  Series1 c = s_compose(scaled(S), inner);
  return {std::move(c), std::vector<int>(inner.D() + 1, S)};
}

FracSeries1 FracSeries1::times(const RingElem& c) const { return {scale(num, c), den_exp}; }

bool equal_within_floors(const FracSeries1& a, const FracSeries1& b) {
  require_same_ring(a.num.ring(), b.num.ring());
  const auto& ring = *a.num.ring();
  const int D = std::min(a.D(), b.D());
  std::vector<Coord> x(ring.degree()), y(ring.degree());
  for (int i = 0; i <= D; ++i) {
    const int M = std::max(a.den_exp[i], b.den_exp[i]);
    const int t = std::min({ring.N(), a.floor(i) + M, b.floor(i) + M});
    if (t <= 0) continue;
    const auto pa = ma::checked_power(ring.p(), M - a.den_exp[i]);
    const auto pb = ma::checked_power(ring.p(), M - b.den_exp[i]);
    ring.scale(a.num.raw(i), M - a.den_exp[i] >= ring.N() ? 0 : pa, x.data());
    ring.scale(b.num.raw(i), M - b.den_exp[i] >= ring.N() ? 0 : pb, y.data());
    const std::uint64_t mod_t = ma::checked_power(ring.p(), t);
    for (int k = 0; k < ring.degree(); ++k)
      if (x[k] % mod_t != y[k] % mod_t) return false;
  }
  return true;
}

}  // namespace pitower
