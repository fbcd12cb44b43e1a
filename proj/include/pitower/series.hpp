#pragma once

#include <optional>
#include <vector>

#include "pitower/local_ring.hpp"

namespace pitower {

/// One-variable power series over O truncated after X^D (indices 0..D).
///
/// Each coefficient carries a precision floor in p-adic digits: coefficient i
/// is known modulo p^{prec(i)}. Ring-level arithmetic is exact, so floors only
/// drop below N where a caller divides by p. A series flagged `polynomial` has
/// all coefficients beyond D equal to zero, which lets it act as the outer
/// series of a composition at any truncation.
class Series1 {
 public:
  Series1() = default;
  Series1(RingPtr ring, int D);

  static Series1 identity(RingPtr ring, int D);
  static Series1 from_coeffs(RingPtr ring, int D, const std::vector<RingElem>& coeffs);
  /// Exact polynomial; D is its degree.
  static Series1 polynomial(RingPtr ring, const std::vector<RingElem>& coeffs);

  const RingPtr& ring() const { return ring_; }
  int D() const { return D_; }
  bool is_polynomial() const { return polynomial_; }
  void set_polynomial(bool v) { polynomial_ = v; }

  RingElem coeff(int i) const;
  void set_coeff(int i, const RingElem& c);
  const Coord* raw(int i) const { return coeffs_.data() + static_cast<std::size_t>(i) * stride_; }
  Coord* raw(int i) { return coeffs_.data() + static_cast<std::size_t>(i) * stride_; }

  int prec(int i) const { return prec_[i]; }
  void set_prec(int i, int v) { prec_[i] = v; }
  const std::vector<int>& precs() const { return prec_; }
  bool exact() const;
  bool degraded() const;

  /// Highest index with a nonzero coefficient, -1 for the zero series.
  int effective_degree() const;

  /// Copy truncated to D' <= D, or zero-extended when the series is a polynomial.
  Series1 truncated(int new_D) const;

  /// Coefficientwise equality including D.
  friend bool operator==(const Series1& a, const Series1& b);

 private:
  RingPtr ring_;
  int D_ = 0;
  int stride_ = 1;
  bool polynomial_ = false;
  std::vector<Coord> coeffs_;
  std::vector<int> prec_;
};

/// Two-variable series truncated at total degree D; coefficient (i, j) is the
/// coefficient of X^i Y^j. Never divides by p, so no precision floors.
class Series2 {
 public:
  Series2() = default;
  Series2(RingPtr ring, int D);

  /// X + Y
  static Series2 sum_law(RingPtr ring, int D);
  static Series2 in_x(const Series1& s, int D);
  static Series2 in_y(const Series1& s, int D);

  const RingPtr& ring() const { return ring_; }
  int D() const { return D_; }
  std::size_t offset(int i, int j) const {
    return (static_cast<std::size_t>(i) * (2 * D_ + 3 - i) / 2 + j) * stride_;
  }
  RingElem coeff(int i, int j) const;
  void set_coeff(int i, int j, const RingElem& c);
  const Coord* raw(int i, int j) const { return coeffs_.data() + offset(i, j); }
  Coord* raw(int i, int j) { return coeffs_.data() + offset(i, j); }

  /// F(Y, X)
  Series2 swapped() const;
  Series2 truncated(int new_D) const;

  friend bool operator==(const Series2& a, const Series2& b);

 private:
  RingPtr ring_;
  int D_ = 0;
  int stride_ = 1;
  std::vector<Coord> coeffs_;
};

enum class CombineKind { Add, Sub, Mul };

Series1 s_combine(const Series1& a, const Series1& b, CombineKind kind);
Series2 s_combine(const Series2& a, const Series2& b, CombineKind kind);

Series1 operator+(const Series1& a, const Series1& b);
Series1 operator-(const Series1& a, const Series1& b);
Series1 operator*(const Series1& a, const Series1& b);
Series2 operator+(const Series2& a, const Series2& b);
Series2 operator-(const Series2& a, const Series2& b);
Series2 operator*(const Series2& a, const Series2& b);

Series1 scale(const Series1& s, const RingElem& c);
Series2 scale(const Series2& s, const RingElem& c);

/// outer ∘ inner truncated at inner.D(). The inner series must vanish at 0;
/// outer needs D >= inner.D() unless it is a polynomial.
Series1 s_compose(const Series1& outer, const Series1& inner);
Series2 s_compose(const Series1& outer, const Series2& inner);

/// F(x(T), y(T)) truncated at min(x.D, y.D).
Series1 substitute(const Series2& F, const Series1& x, const Series1& y);
/// F(x(X), y(Y)) as a two-variable series at F.D().
Series2 substitute_xy(const Series2& F, const Series1& x, const Series1& y);

/// Smallest index whose coefficient is a unit; nullopt if none up to D.
std::optional<int> weierstrass_degree(const Series1& s);

/// Compositional inverse of a series with zero constant and unit linear term.
Series1 reversion(const Series1& s);

/// Multiplicative inverse of a series with unit constant term.
Series1 series_inverse(const Series1& s);

/// Formal derivative, truncated at D-1.
Series1 derivative(const Series1& s);

/// Series with coefficients in the fraction field: coefficient i equals
/// num.coeff(i) / p^{den_exp[i]}, known modulo p^{floor(i)}.
struct FracSeries1 {
  Series1 num;
  std::vector<int> den_exp;

  static FracSeries1 from_integral(const Series1& s);

  int D() const { return num.D(); }
  int floor(int i) const { return num.prec(i) - den_exp[i]; }
  int max_den() const;
  /// p^S times the series as an integral series; S >= max_den().
  Series1 scaled(int S) const;

  /// this ∘ inner (inner integral, zero constant term).
  FracSeries1 compose(const Series1& inner) const;
  FracSeries1 times(const RingElem& c) const;
};

/// Coefficientwise agreement modulo the smaller of the two precision floors.
bool equal_within_floors(const FracSeries1& a, const FracSeries1& b);

}  // namespace pitower
