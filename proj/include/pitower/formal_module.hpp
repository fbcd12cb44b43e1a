#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>

#include "pitower/series.hpp"

namespace pitower {

enum class LawKind { LubinTate, Multiplicative, Additive };

std::string_view to_string(LawKind kind);
LawKind law_kind_from_string(std::string_view s);

struct LawOptions {
  /// f ≡ X^{q^k} mod π with k = frobenius_power; k > 1 gives height k·f laws.
  int frobenius_power = 1;
  /// Permutes the order in which coefficients of one total degree are solved.
  std::optional<std::uint64_t> shuffle_seed;
};

/// One-dimensional formal O-module over O itself: the group law F and the
/// series [a](X). Copies share the bracket cache.
class FormalModuleLaw {
 public:
  FormalModuleLaw() = default;
  FormalModuleLaw(LawKind kind, Series2 F, Series1 frobenius, int frobenius_power);

  LawKind kind() const { return kind_; }
  const RingPtr& ring() const { return F_.ring(); }
  int D() const { return F_.D(); }
  const Series2& F() const { return F_; }
  /// The series f = [π]; a polynomial for every built-in law.
  const Series1& frobenius() const { return frobenius_; }
  int frobenius_power() const { return frobenius_power_; }
  /// π = f'(0).
  RingElem pi() const { return frobenius_.coeff(1); }

  /// [a](X) at truncation D(); cached.
  Series1 bracket(const RingElem& a) const;
  /// [π](X) at an arbitrary truncation (needs a polynomial frobenius beyond D).
  Series1 bracket_pi(int D) const;

  /// Snapshot of the cache, keyed by coordinates.
  std::map<std::vector<Coord>, Series1> cached_brackets() const;

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::vector<Coord>, Series1> entries;
  };

  LawKind kind_ = LawKind::LubinTate;
  Series2 F_;
  Series1 frobenius_;
  int frobenius_power_ = 1;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Throws NotLTSeries unless f(0)=0, v(f'(0))=1, f ≡ X^{q^k} mod ω up to index q^k.
void validate_lt_series(const Series1& f, int frobenius_power = 1);

Series1 default_lt_series(const RingPtr& ring, int frobenius_power = 1);
/// (1+X)^p - 1
Series1 gm_series(const RingPtr& ring);

FormalModuleLaw lt_law(const Series1& f, int D, const LawOptions& options = {});
FormalModuleLaw additive_law(const RingPtr& ring, int D);

Series1 lt_bracket(const FormalModuleLaw& law, const RingElem& a);
/// Always runs the successive-approximation solve (no shortcuts for 1 and π).
/// `a` may come from the same tower at a higher precision; it is then used unrounded.
Series1 solve_bracket(const FormalModuleLaw& law, const RingElem& a, const LawOptions& options = {});

struct HeightResult {
  enum class Kind { Finite, LowerBound };
  Kind kind = Kind::Finite;
  int h = 0;
  /// h / f when finite (rank of the Tate module over O).
  std::optional<int> h_r;

  friend bool operator==(const HeightResult&, const HeightResult&) = default;
};

HeightResult height_of(const FormalModuleLaw& law);
/// Weierstrass degree of [p] must be p^{e·h}; returns e·h.
int zp_height_check(const FormalModuleLaw& law);

bool is_endomorphism(const FormalModuleLaw& law, const Series1& g);
bool is_homomorphism(const FormalModuleLaw& from, const FormalModuleLaw& to, const Series1& g);

FracSeries1 formal_log(const FormalModuleLaw& law);
/// Compositional inverse of formal_log, through the integral series L(pY)/p.
FracSeries1 formal_exp(const FormalModuleLaw& law);

bool divisibility_check(const FormalModuleLaw& law);

RingElem random_element(const RingPtr& ring, std::mt19937_64& rng);
/// Random series with zero constant term.
Series1 random_series(const RingPtr& ring, int D, std::mt19937_64& rng);

/// F(F(x,y),z) = F(x,F(y,z)) after substituting one-variable series.
bool associativity_holds(const FormalModuleLaw& law, const Series1& x, const Series1& y, const Series1& z);
/// [a+b] = F([a],[b]) and [ab] = [a]∘[b].
bool bracket_hom_holds(const FormalModuleLaw& law, const RingElem& a, const RingElem& b);
/// L∘[a] = a·L within the tracked floors.
bool log_linear_for(const FormalModuleLaw& law, const FracSeries1& L, const RingElem& a);

}  // namespace pitower
