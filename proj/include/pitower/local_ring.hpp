#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pitower/rational.hpp"

namespace pitower {

using Coord = std::uint64_t;

/// Description of O = Z_p[u][ω] as a two-step tower: u is a root of the monic
/// `unram` polynomial (degree f, irreducible mod p) and ω a root of the monic
/// Eisenstein polynomial `eis` whose coefficients live in Z_p[u]. Elements are
/// stored modulo p^N.
///
/// Coefficients are small signed integers; `eis[k]` is the k-th coefficient of
/// the Eisenstein polynomial written in the basis 1, u, ..., u^{f-1}.
struct LocalRingSpec {
  std::uint64_t p = 0;
  int f = 1;
  int N = 12;
  std::vector<std::int64_t> unram;             // f+1 entries, low to high, monic
  std::vector<std::vector<std::int64_t>> eis;  // e+1 entries, low to high, monic

  int e() const { return static_cast<int>(eis.size()) - 1; }

  /// Z_p at precision p^N (ω = p).
  static LocalRingSpec padic_integers(std::uint64_t p, int N);
  /// Unramified extension of degree f defined by `unram`, uniformizer p.
  static LocalRingSpec unramified(std::uint64_t p, std::vector<std::int64_t> unram, int N);
  /// Z_p[ω] with ω^e = p.
  static LocalRingSpec pure_root(std::uint64_t p, int e, int N);

  /// Same tower at another precision.
  LocalRingSpec with_precision(int new_N) const;

  friend bool operator==(const LocalRingSpec&, const LocalRingSpec&) = default;
};

/// Valuation normalized by v(ω) = 1; `infinite` marks an element that is zero
/// at working precision.
struct ValuationValue {
  bool infinite = false;
  Rational value;

  static ValuationValue infinity() { return {true, Rational(0)}; }
  friend bool operator==(const ValuationValue&, const ValuationValue&) = default;
};

class LocalRing;
using RingPtr = std::shared_ptr<const LocalRing>;
class RingElem;

/// Immutable ring handle. The raw kernels work on coordinate arrays of
/// length degree() laid out as index j*f + i for the basis element u^i ω^j.
class LocalRing : public std::enable_shared_from_this<LocalRing> {
 public:
  static constexpr int kInfiniteValuation = 1 << 29;

  const LocalRingSpec& spec() const { return spec_; }
  std::uint64_t p() const { return spec_.p; }
  int f() const { return spec_.f; }
  int e() const { return e_; }
  int N() const { return spec_.N; }
  int degree() const { return degree_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t residue_size() const { return q_; }
  int index(int i, int j) const { return j * spec_.f + i; }

  void add(const Coord* a, const Coord* b, Coord* out) const;
  void sub(const Coord* a, const Coord* b, Coord* out) const;
  void neg(const Coord* a, Coord* out) const;
  void mul(const Coord* a, const Coord* b, Coord* out) const;
  /// acc += a*b
  void mul_acc(const Coord* a, const Coord* b, Coord* acc) const;
  /// Multiply by the rational integer c.
  void scale(const Coord* a, std::uint64_t c, Coord* out) const;
  bool is_zero(const Coord* a) const;
  bool equal(const Coord* a, const Coord* b) const;
  /// ω-adic valuation, kInfiniteValuation for zero.
  int valuation(const Coord* a) const;
  bool is_unit(const Coord* a) const;
  /// a/ω for a with v(a) >= 1; the top p-adic digit of the ω^0 coordinate is lost.
  void divide_by_omega(const Coord* a, Coord* out) const;

  RingElem zero() const;
  RingElem one() const;
  RingElem uniformizer() const;
  RingElem from_int(std::int64_t v) const;
  RingElem from_coords(std::vector<Coord> coords) const;
  /// Element of the unramified subring with residue digits of `index` in base p.
  RingElem residue_representative(std::uint64_t index) const;
  /// Residue class of x as digits (coefficient of u^i mod p).
  std::vector<std::uint64_t> residue(const RingElem& x) const;

  /// ζ^k where ζ is the Teichmüller lift of the first generator of F_q^×
  /// in residue-index order.
  RingElem teichmueller(std::uint64_t k) const;
  /// Teichmüller lift of the residue with the given index (0 lifts to 0).
  RingElem teichmueller_lift(std::uint64_t residue_index) const;
  /// Residue index of the generator used by teichmueller().
  std::uint64_t residue_generator_index() const;

  /// u^i ω^j as an element.
  RingElem basis_element(int i, int j) const;

  /// Same tower, different precision (fresh handle).
  RingPtr at_precision(int new_N) const;

 private:
  friend RingPtr make_ring(const LocalRingSpec& spec);
  explicit LocalRing(LocalRingSpec spec);
  void build_tables();
  void mul_unram(const Coord* a, const Coord* b, Coord* out) const;

  LocalRingSpec spec_;
  int e_ = 1;
  int degree_ = 1;
  std::uint64_t modulus_ = 0;
  std::uint64_t q_ = 0;
  std::vector<Coord> unram_low_;   // -(unram coefficients 0..f-1), i.e. u^f in basis
  std::vector<Coord> eis_low_;     // e*f coords: -(eis coefficients 0..e-1)
  std::vector<Coord> p_over_omega_;  // p/ω as an element
  // coordinates of u^i ω^j for i < 2f-1, j < 2e-1
  std::vector<Coord> monomials_;
  int mono_i_ = 1;
  int mono_j_ = 1;
};

RingPtr make_ring(const LocalRingSpec& spec);

/// Element of O modulo p^N.
class RingElem {
 public:
  RingElem() = default;
  RingElem(RingPtr ring, std::vector<Coord> coords);

  const RingPtr& ring() const { return ring_; }
  std::span<const Coord> coords() const { return coords_; }
  const Coord* data() const { return coords_.data(); }
  Coord* data() { return coords_.data(); }

  bool is_zero() const;
  bool is_unit() const;

  RingElem operator-() const;
  friend RingElem operator+(const RingElem& a, const RingElem& b);
  friend RingElem operator-(const RingElem& a, const RingElem& b);
  friend RingElem operator*(const RingElem& a, const RingElem& b);
  friend bool operator==(const RingElem& a, const RingElem& b);

  std::string str() const;

 private:
  RingPtr ring_;
  std::vector<Coord> coords_;
};

/// Throws SpecMismatch unless both handles describe the same ring.
void require_same_ring(const RingPtr& a, const RingPtr& b);

RingElem pow(const RingElem& x, std::uint64_t k);
RingElem inv(const RingElem& x);
ValuationValue valuation(const RingElem& x);

/// v_p(det M_x)/f where M_x is multiplication by x over Z_p. Independent of
/// valuation(); INFTY once the elimination runs out of p-adic digits.
ValuationValue norm_valuation(const RingElem& x);

/// Multiplication-by-x matrix over Z/p^N, row-major degree×degree; column c
/// holds the coordinates of x times basis element c.
std::vector<Coord> multiplication_matrix(const RingElem& x);

/// Re-encode x in `target` through balanced integer representatives.
RingElem lift(const RingElem& x, const RingPtr& target);

}  // namespace pitower
