#include "pitower/local_ring.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "pitower/error.hpp"
#include "pitower/modarith.hpp"

namespace pitower {

namespace ma = modarith;

namespace {

constexpr int kMaxDegree = 16;

// ---- polynomials over F_p, low to high ----

using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = ma::inverse(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = ma::mul(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = ma::sub(a[shift + i], ma::mul(c, m[i], p), p);
    trim(a);
  }
  return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = ma::add(r[i + j], ma::mul(a[i], b[j], p), p);
  return poly_mod(std::move(r), m, p);
}

Poly poly_pow_mod(Poly base, std::uint64_t exp, const Poly& m, std::uint64_t p) {
  Poly result{1};
  while (exp) {
    if (exp & 1) result = poly_mul_mod(result, base, m, p);
    base = poly_mul_mod(base, base, m, p);
    exp >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool irreducible_mod_p(const std::vector<std::int64_t>& coeffs, std::uint64_t p) {
  Poly m(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) m[i] = ma::reduce_signed(coeffs[i], p);
  trim(m);
  const int f = static_cast<int>(coeffs.size()) - 1;
  if (static_cast<int>(m.size()) - 1 != f) return false;
  if (f == 1) return true;
  // any factor of degree i < f divides X^{p^i} - X
  Poly x_power{0, 1};
  for (int i = 1; i < f; ++i) {
    x_power = poly_pow_mod(x_power, p, m, p);
    Poly diff = x_power;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ma::sub(diff[1], 1, p);
    trim(diff);
    if (diff.empty()) return false;
    const Poly g = poly_gcd(m, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

int vp_signed(std::int64_t v, std::uint64_t p) {
  if (v == 0) return 1 << 20;
  const std::uint64_t a = static_cast<std::uint64_t>(v < 0 ? -v : v);
  return ma::valuation(a, p, 64);
}

}  // namespace

// ---- spec helpers ----

LocalRingSpec LocalRingSpec::padic_integers(std::uint64_t p, int N) {
  LocalRingSpec s;
  s.p = p;
  s.f = 1;
  s.N = N;
  s.unram = {0, 1};
  s.eis = {{-static_cast<std::int64_t>(p)}, {1}};
  return s;
}

LocalRingSpec LocalRingSpec::unramified(std::uint64_t p, std::vector<std::int64_t> unram, int N) {
  LocalRingSpec s;
  s.p = p;
  s.f = static_cast<int>(unram.size()) - 1;
  s.N = N;
  s.unram = std::move(unram);
  std::vector<std::int64_t> c0(s.f, 0), one(s.f, 0);
  c0[0] = -static_cast<std::int64_t>(p);
  one[0] = 1;
  s.eis = {c0, one};
  return s;
}

LocalRingSpec LocalRingSpec::pure_root(std::uint64_t p, int e, int N) {
  LocalRingSpec s = padic_integers(p, N);
  s.eis.assign(e + 1, {0});
  s.eis[0] = {-static_cast<std::int64_t>(p)};
  s.eis[e] = {1};
  return s;
}

LocalRingSpec LocalRingSpec::with_precision(int new_N) const {
  LocalRingSpec s = *this;
  s.N = new_N;
  return s;
}

// ---- construction ----

LocalRing::LocalRing(LocalRingSpec spec) : spec_(std::move(spec)) {}

RingPtr make_ring(const LocalRingSpec& input) {
  LocalRingSpec spec = input;
  if (spec.p < 2 || spec.p >= (1ULL << 31) || !ma::is_prime(spec.p))
    throw Error(ErrorCode::NonPrime, "p = " + std::to_string(spec.p) + " is not a prime below 2^31");
  if (spec.f < 1) throw Error(ErrorCode::ValidationError, "inertia degree f must be >= 1");
  if (spec.N < 1) throw Error(ErrorCode::ValidationError, "precision N must be >= 1");
  if (ma::checked_power(spec.p, spec.N) == 0)
    throw Error(ErrorCode::ValidationError, "p^N does not fit below 2^62");
  if (spec.unram.empty() && spec.f == 1) spec.unram = {0, 1};
  if (static_cast<int>(spec.unram.size()) != spec.f + 1 || spec.unram.back() != 1)
    throw Error(ErrorCode::ValidationError, "unram must be monic of degree f");
  if (!irreducible_mod_p(spec.unram, spec.p))
    throw Error(ErrorCode::ReducibleUnramPoly, "unramified polynomial is reducible mod p");
  if (spec.eis.size() < 2) throw Error(ErrorCode::NotEisenstein, "Eisenstein polynomial needs degree >= 1");
  for (auto& c : spec.eis) {
    if (static_cast<int>(c.size()) > spec.f) throw Error(ErrorCode::ValidationError, "eis coefficient has more than f coordinates");
    c.resize(spec.f, 0);
  }
  const auto& lead = spec.eis.back();
  if (lead[0] != 1 || std::any_of(lead.begin() + 1, lead.end(), [](auto v) { return v != 0; }))
    throw Error(ErrorCode::NotEisenstein, "Eisenstein polynomial must be monic");
  for (std::size_t k = 0; k + 1 < spec.eis.size(); ++k) {
    int v = 1 << 20;
    for (auto c : spec.eis[k]) v = std::min(v, vp_signed(c, spec.p));
    if (v < 1) throw Error(ErrorCode::NotEisenstein, "non-leading coefficient is a unit");
    if (k == 0 && v != 1) throw Error(ErrorCode::NotEisenstein, "constant term must have valuation exactly 1");
  }
  if (spec.e() * spec.f > kMaxDegree)
    throw Error(ErrorCode::ValidationError, "ring degree e*f above " + std::to_string(kMaxDegree));

  auto ring = std::shared_ptr<LocalRing>(new LocalRing(std::move(spec)));
  ring->build_tables();
  return ring;
}

void LocalRing::build_tables() {
  const int f = spec_.f;
  e_ = spec_.e();
  degree_ = e_ * f;
  modulus_ = ma::checked_power(spec_.p, spec_.N);
  q_ = ma::checked_power(spec_.p, f);
  if (q_ == 0) throw Error(ErrorCode::ValidationError, "residue field too large");

  unram_low_.assign(f, 0);
  for (int i = 0; i < f; ++i) unram_low_[i] = ma::reduce_signed(-spec_.unram[i], modulus_);
  eis_low_.assign(static_cast<std::size_t>(e_) * f, 0);
  for (int k = 0; k < e_; ++k)
    for (int i = 0; i < f; ++i) eis_low_[k * f + i] = ma::reduce_signed(-spec_.eis[k][i], modulus_);

  mono_i_ = 2 * f - 1;
  mono_j_ = 2 * e_ - 1;
  monomials_.assign(static_cast<std::size_t>(mono_i_) * mono_j_ * degree_, 0);

  // u^i in the unramified subring
  std::vector<std::vector<Coord>> upow(mono_i_, std::vector<Coord>(f, 0));
  upow[0][0] = 1 % modulus_;
  std::vector<Coord> u(f, 0);
  if (f > 1) u[1] = 1;
  else u[0] = unram_low_[0];
  for (int i = 1; i < mono_i_; ++i) mul_unram(upow[i - 1].data(), u.data(), upow[i].data());

  std::vector<Coord> tmp(f);
  for (int i = 0; i < mono_i_; ++i) {
    std::vector<Coord> cur(degree_, 0);
    std::copy(upow[i].begin(), upow[i].end(), cur.begin());
    for (int j = 0; j < mono_j_; ++j) {
      std::copy(cur.begin(), cur.end(), monomials_.begin() + (static_cast<std::size_t>(j) * mono_i_ + i) * degree_);
      // cur *= ω
      std::vector<Coord> next(degree_, 0);
      for (int jj = 0; jj + 1 < e_; ++jj)
        std::copy(cur.begin() + jj * f, cur.begin() + (jj + 1) * f, next.begin() + (jj + 1) * f);
      const Coord* top = cur.data() + (e_ - 1) * f;
      for (int k = 0; k < e_; ++k) {
        mul_unram(top, eis_low_.data() + k * f, tmp.data());
        for (int t = 0; t < f; ++t) next[k * f + t] = ma::add(next[k * f + t], tmp[t], modulus_);
      }
      cur = std::move(next);
    }
  }

  // p/ω = -ε^{-1} (ω^{e-1} + Σ_{1<=k<e} E_k ω^{k-1}) with E_0 = p ε
  std::vector<Coord> eps(f, 0);
  for (int i = 0; i < f; ++i) eps[i] = ma::reduce_signed(spec_.eis[0][i] / static_cast<std::int64_t>(spec_.p), modulus_);
  std::vector<Coord> eps_full(degree_, 0);
  std::copy(eps.begin(), eps.end(), eps_full.begin());
  std::vector<Coord> s(degree_, 0);
  s[(e_ - 1) * f] = ma::add(s[(e_ - 1) * f], 1 % modulus_, modulus_);
  for (int k = 1; k < e_; ++k)
    for (int i = 0; i < f; ++i)
      s[(k - 1) * f + i] = ma::add(s[(k - 1) * f + i], ma::reduce_signed(spec_.eis[k][i], modulus_), modulus_);
  const RingElem eps_inv = inv(RingElem(shared_from_this(), eps_full));
  const RingElem ratio = -(eps_inv * RingElem(shared_from_this(), s));
  p_over_omega_.assign(ratio.coords().begin(), ratio.coords().end());
}

RingPtr LocalRing::at_precision(int new_N) const { return make_ring(spec_.with_precision(new_N)); }

// ---- kernels ----

void LocalRing::mul_unram(const Coord* a, const Coord* b, Coord* out) const {
  const int f = spec_.f;
  if (f == 1) {
    out[0] = ma::mul(a[0], b[0], modulus_);
    return;
  }
  std::array<Coord, 2 * kMaxDegree> prod{};
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f; ++j) prod[i + j] = ma::add(prod[i + j], ma::mul(a[i], b[j], modulus_), modulus_);
  }
  for (int k = 2 * f - 2; k >= f; --k) {
    const Coord c = prod[k];
    if (c == 0) continue;
    for (int i = 0; i < f; ++i)
      prod[k - f + i] = ma::add(prod[k - f + i], ma::mul(c, unram_low_[i], modulus_), modulus_);
  }
  std::copy(prod.begin(), prod.begin() + f, out);
}

void LocalRing::add(const Coord* a, const Coord* b, Coord* out) const {
  for (int i = 0; i < degree_; ++i) out[i] = ma::add(a[i], b[i], modulus_);
}

void LocalRing::sub(const Coord* a, const Coord* b, Coord* out) const {
  for (int i = 0; i < degree_; ++i) out[i] = ma::sub(a[i], b[i], modulus_);
}

void LocalRing::neg(const Coord* a, Coord* out) const {
  for (int i = 0; i < degree_; ++i) out[i] = ma::neg(a[i], modulus_);
}

void LocalRing::scale(const Coord* a, std::uint64_t c, Coord* out) const {
  c %= modulus_;
  for (int i = 0; i < degree_; ++i) out[i] = ma::mul(a[i], c, modulus_);
}

void LocalRing::mul(const Coord* a, const Coord* b, Coord* out) const {
  if (degree_ == 1) {
    out[0] = ma::mul(a[0], b[0], modulus_);
    return;
  }
  std::array<Coord, kMaxDegree> acc{};
  mul_acc(a, b, acc.data());
  std::copy(acc.begin(), acc.begin() + degree_, out);
}

void LocalRing::mul_acc(const Coord* a, const Coord* b, Coord* acc) const {
  if (degree_ == 1) {
    acc[0] = static_cast<Coord>((static_cast<ma::u128>(a[0]) * b[0] + acc[0]) % modulus_);
    return;
  }
  const int f = spec_.f;
  std::array<Coord, 4 * kMaxDegree> grid{};
  for (int j1 = 0; j1 < e_; ++j1)
    for (int i1 = 0; i1 < f; ++i1) {
      const Coord x = a[j1 * f + i1];
      if (x == 0) continue;
      for (int j2 = 0; j2 < e_; ++j2)
        for (int i2 = 0; i2 < f; ++i2) {
          const Coord y = b[j2 * f + i2];
          if (y == 0) continue;
          Coord& g = grid[(j1 + j2) * mono_i_ + i1 + i2];
          g = static_cast<Coord>((static_cast<ma::u128>(x) * y + g) % modulus_);
        }
    }
  for (int j = 0; j < mono_j_; ++j)
    for (int i = 0; i < mono_i_; ++i) {
      const Coord g = grid[j * mono_i_ + i];
      if (g == 0) continue;
      if (i < f && j < e_) {
        acc[j * f + i] = ma::add(acc[j * f + i], g, modulus_);
        continue;
      }
      const Coord* row = monomials_.data() + static_cast<std::size_t>(j * mono_i_ + i) * degree_;
      for (int t = 0; t < degree_; ++t)
        if (row[t]) acc[t] = static_cast<Coord>((static_cast<ma::u128>(g) * row[t] + acc[t]) % modulus_);
    }
}

bool LocalRing::is_zero(const Coord* a) const {
  return std::all_of(a, a + degree_, [](Coord c) { return c == 0; });
}

bool LocalRing::equal(const Coord* a, const Coord* b) const { return std::equal(a, a + degree_, b); }

int LocalRing::valuation(const Coord* a) const {
  const int f = spec_.f;
  int best = kInfiniteValuation;
  for (int j = 0; j < e_; ++j) {
    int vj = spec_.N;
    for (int i = 0; i < f; ++i) vj = std::min(vj, ma::valuation(a[j * f + i], spec_.p, spec_.N));
    if (vj < spec_.N) best = std::min(best, e_ * vj + j);
  }
  return best;
}

bool LocalRing::is_unit(const Coord* a) const {
  for (int i = 0; i < spec_.f; ++i)
    if (a[i] % spec_.p != 0) return true;
  return false;
}

void LocalRing::divide_by_omega(const Coord* a, Coord* out) const {
  const int f = spec_.f;
  std::array<Coord, kMaxDegree> c0{};
  for (int i = 0; i < f; ++i) c0[i] = a[i] / spec_.p;
  std::array<Coord, kMaxDegree> result{};
  for (int j = 1; j < e_; ++j)
    for (int i = 0; i < f; ++i) result[(j - 1) * f + i] = a[j * f + i];
  mul_acc(c0.data(), p_over_omega_.data(), result.data());
  std::copy(result.begin(), result.begin() + degree_, out);
}

// ---- element factories ----

RingElem LocalRing::zero() const { return RingElem(shared_from_this(), std::vector<Coord>(degree_, 0)); }

RingElem LocalRing::one() const { return from_int(1); }

RingElem LocalRing::from_int(std::int64_t v) const {
  std::vector<Coord> c(degree_, 0);
  c[0] = ma::reduce_signed(v, modulus_);
  return RingElem(shared_from_this(), std::move(c));
}

RingElem LocalRing::from_coords(std::vector<Coord> coords) const {
  if (static_cast<int>(coords.size()) != degree_)
    throw Error(ErrorCode::ShapeMismatch, "coordinate vector has wrong length");
  for (auto& c : coords) c %= modulus_;
  return RingElem(shared_from_this(), std::move(coords));
}

RingElem LocalRing::basis_element(int i, int j) const {
  std::vector<Coord> c(degree_, 0);
  c[index(i, j)] = 1 % modulus_;
  return RingElem(shared_from_this(), std::move(c));
}

RingElem LocalRing::uniformizer() const {
  if (e_ >= 2) return basis_element(0, 1);
  // e == 1: ω + E_0 = 0
  std::vector<Coord> c(degree_, 0);
  for (int i = 0; i < spec_.f; ++i) c[i] = ma::reduce_signed(-spec_.eis[0][i], modulus_);
  return RingElem(shared_from_this(), std::move(c));
}

RingElem LocalRing::residue_representative(std::uint64_t index) const {
  std::vector<Coord> c(degree_, 0);
  for (int i = 0; i < spec_.f; ++i) {
    c[i] = index % spec_.p;
    index /= spec_.p;
  }
  return RingElem(shared_from_this(), std::move(c));
}

std::vector<std::uint64_t> LocalRing::residue(const RingElem& x) const {
  std::vector<std::uint64_t> r(spec_.f);
  for (int i = 0; i < spec_.f; ++i) r[i] = x.coords()[i] % spec_.p;
  return r;
}

RingElem LocalRing::teichmueller_lift(std::uint64_t residue_index) const {
  RingElem z = residue_representative(residue_index % q_);
  if (z.is_zero()) return z;
  for (int iter = 0; iter <= spec_.N + 2; ++iter) {
    RingElem next = pow(z, q_);
    if (next == z) return z;
    z = std::move(next);
  }
  throw Error(ErrorCode::PrecisionExhausted, "Teichmüller iteration did not stabilize");
}

std::uint64_t LocalRing::residue_generator_index() const {
  if (q_ == 2) return 1;
  const auto primes = ma::prime_factors(q_ - 1);
  const auto one_res = residue(one());
  for (std::uint64_t r = 1; r < q_; ++r) {
    const RingElem z = residue_representative(r);
    bool generator = true;
    for (auto l : primes) {
      if (residue(pow(z, (q_ - 1) / l)) == one_res) {
        generator = false;
        break;
      }
    }
    if (generator) return r;
  }
  throw Error(ErrorCode::ValidationError, "no generator of the residue field unit group");
}

RingElem LocalRing::teichmueller(std::uint64_t k) const {
  return pow(teichmueller_lift(residue_generator_index()), k % (q_ - 1 == 0 ? 1 : q_ - 1));
}

// ---- RingElem ----

RingElem::RingElem(RingPtr ring, std::vector<Coord> coords) : ring_(std::move(ring)), coords_(std::move(coords)) {}

void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (!a || !b) throw Error(ErrorCode::SpecMismatch, "uninitialized ring element");
  if (a != b && !(a->spec() == b->spec())) throw Error(ErrorCode::SpecMismatch, "elements belong to different rings");
}

bool RingElem::is_zero() const { return ring_->is_zero(data()); }
bool RingElem::is_unit() const { return ring_->is_unit(data()); }

RingElem RingElem::operator-() const {
  RingElem r = *this;
  ring_->neg(data(), r.data());
  return r;
}

RingElem operator+(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_);
  RingElem r = a;
  a.ring_->add(a.data(), b.data(), r.data());
  return r;
}

RingElem operator-(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_);
  RingElem r = a;
  a.ring_->sub(a.data(), b.data(), r.data());
  return r;
}

RingElem operator*(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_);
  RingElem r = a;
  a.ring_->mul(a.data(), b.data(), r.data());
  return r;
}

bool operator==(const RingElem& a, const RingElem& b) {
  require_same_ring(a.ring_, b.ring_);
  return a.coords_ == b.coords_;
}

std::string RingElem::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? ", " : "") << ma::balanced(coords_[i], ring_->modulus());
  os << ']';
  return os.str();
}

RingElem pow(const RingElem& x, std::uint64_t k) {
  RingElem result = x.ring()->one();
  RingElem base = x;
  while (k) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

RingElem inv(const RingElem& x) {
  if (!x.is_unit()) throw Error(ErrorCode::NonUnit, "element " + x.str() + " is not a unit");
  const auto& ring = x.ring();
  // x^{q-2} inverts x modulo ω; Newton doubles the ω-adic precision each step
  RingElem y = pow(x, ring->residue_size() - 2);
  const RingElem two = ring->from_int(2);
  const RingElem one = ring->one();
  for (int iter = 0; iter < 80; ++iter) {
    const RingElem xy = x * y;
    if (xy == one) return y;
    y = y * (two - xy);
  }
  throw Error(ErrorCode::PrecisionExhausted, "Newton inversion failed to converge");
}

ValuationValue valuation(const RingElem& x) {
  const int v = x.ring()->valuation(x.data());
  if (v == LocalRing::kInfiniteValuation) return ValuationValue::infinity();
  return {false, Rational(v)};
}

std::vector<Coord> multiplication_matrix(const RingElem& x) {
  const auto& ring = x.ring();
  const int n = ring->degree();
  std::vector<Coord> m(static_cast<std::size_t>(n) * n, 0);
  std::vector<Coord> basis(n, 0), col(n, 0);
  for (int c = 0; c < n; ++c) {
    std::fill(basis.begin(), basis.end(), 0);
    basis[c] = 1 % ring->modulus();
    ring->mul(x.data(), basis.data(), col.data());
    for (int r = 0; r < n; ++r) m[static_cast<std::size_t>(r) * n + c] = col[r];
  }
  return m;
}

ValuationValue norm_valuation(const RingElem& x) {
  const auto& ring = x.ring();
  const int n = ring->degree();
  const std::uint64_t p = ring->p();
  const std::uint64_t mod = ring->modulus();
  std::vector<Coord> m = multiplication_matrix(x);
  auto at = [&](int r, int c) -> Coord& { return m[static_cast<std::size_t>(r) * n + c]; };
  int prec = ring->N();
  int det_val = 0;
  for (int c = 0; c < n; ++c) {
    int best_row = -1, best_v = prec;
    for (int r = c; r < n; ++r) {
      const int v = ma::valuation(at(r, c), p, prec);
      if (v < best_v) {
        best_v = v;
        best_row = r;
      }
    }
    if (best_row < 0) return ValuationValue::infinity();
    if (best_row != c)
      for (int t = 0; t < n; ++t) std::swap(at(best_row, t), at(c, t));
    const std::uint64_t pk = ma::checked_power(p, best_v);
    const std::uint64_t unit_inv = ma::inverse((at(c, c) / pk) % mod, mod);
    for (int r = c + 1; r < n; ++r) {
      if (at(r, c) == 0) continue;
      const std::uint64_t factor = ma::mul(at(r, c) / pk, unit_inv, mod);
      for (int t = c; t < n; ++t) at(r, t) = ma::sub(at(r, t), ma::mul(factor, at(c, t), mod), mod);
    }
    det_val += best_v;
    prec -= best_v;
  }
  return {false, Rational(det_val, ring->f())};
}

RingElem lift(const RingElem& x, const RingPtr& target) {
  const auto& src = x.ring();
  if (!(src->spec().with_precision(0) == target->spec().with_precision(0)))
    throw Error(ErrorCode::SpecMismatch, "lift between different towers");
  std::vector<Coord> c(target->degree());
  for (int i = 0; i < target->degree(); ++i)
    c[i] = ma::reduce_signed(ma::balanced(x.coords()[i], src->modulus()), target->modulus());
  return RingElem(target, std::move(c));
}

}  // namespace pitower
