#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pitower/local_ring.hpp"
#include "pitower/rational.hpp"

namespace pitower {

using Matrix = std::vector<std::uint64_t>;  // row-major h×h

/// Finitely generated subgroup of GL_h(Z_p), generators known mod p^M.
struct MatrixGenSet {
  int h = 1;
  int M = 1;
  std::uint64_t p = 0;
  std::vector<Matrix> gens;
  std::string label;

  /// Shape, range, and invertibility mod p of every generator.
  void validate() const;
};

struct CountPoint {
  int n = 0;
  std::uint64_t order = 0;
  friend bool operator==(const CountPoint&, const CountPoint&) = default;
};

struct CountSeries {
  std::uint64_t p = 0;
  std::vector<CountPoint> points;

  /// |I_n| / |I_1| for each point.
  std::vector<std::uint64_t> kernel_indices() const;
  friend bool operator==(const CountSeries&, const CountSeries&) = default;
};

struct DimFit {
  int d = 0;
  Rational vol;
  int n0 = 1;                        // law holds for every level >= n0 in the series
  std::optional<int> confirmed_at;   // first n with |I_n|/|I_{n-1}| = |I_{n+1}|/|I_n|
  bool stable = false;
  friend bool operator==(const DimFit&, const DimFit&) = default;
};

/// The order A of a local field with GL_{h_r}(A) acting on A^{h_r} ≅ Z_p^h.
struct OrderSpec {
  LocalRingSpec ring;
  int h_r = 1;
  int h() const { return ring.e() * ring.f * h_r; }
};

/// 10^7 unless PITOWER_BUDGET is set.
std::uint64_t enumeration_budget();

std::uint64_t image_order(const MatrixGenSet& g, int n, std::uint64_t budget = enumeration_budget());
CountSeries count_series(const MatrixGenSet& g, int n_max, std::uint64_t budget = enumeration_budget());
DimFit fit_dimension(const CountSeries& cs);

/// |GL_h(Z/p^n)| is divisible by `order`.
bool divides_gl_order(std::uint64_t order, int h, std::uint64_t p, int n);
/// Divisibility in GL_h and along the series; false on the first violation.
bool series_invariants_hold(const CountSeries& cs, int h);

/// Orders of the image in GL_{h_r}(A/ω^n), n = 1..n_max. Generators must be
/// A-linear block matrices in the basis {u^i ω^j}.
CountSeries omega_count_series(const OrderSpec& spec, const MatrixGenSet& g, int n_max,
                               std::uint64_t budget = enumeration_budget());

struct OmegaFit {
  DimFit fit;  // d counted in powers of p
  int d_A = 0;
  int e = 1;
  int f = 1;
  int d = 0;   // Q_p-side dimension
  bool relation_holds = false;
};

/// d_A from the ω-filtration counts; RelationViolated unless e·d_A·f = qp.d.
OmegaFit fit_dimension_over_O(const CountSeries& omega, const OrderSpec& spec, const DimFit& qp);

/// Unit group generators of A mod p^M: Teichmüller generator, 1 + u^i ω^j, and -1 for p = 2.
std::vector<RingElem> unit_generators(const RingPtr& ring);

/// Generators of A^× (h_r = 1) or GL_{h_r}(A) inside GL_h(Z/p^M).
MatrixGenSet embed_order(const OrderSpec& spec, int M);

struct ScalarCheck {
  bool contained = false;
  int k = 0;
};

/// Smallest k with the scalars 1 + ω^k A inside the host closure mod p^n for n <= n_check.
ScalarCheck scalar_subgroup_check(const OrderSpec& spec, const MatrixGenSet& host, int n_check,
                                  std::uint64_t budget = enumeration_budget());

Matrix mat_mul(const Matrix& a, const Matrix& b, int h, std::uint64_t mod);
std::optional<Matrix> mat_inverse(const Matrix& a, int h, std::uint64_t p, std::uint64_t mod);
MatrixGenSet conjugate(const MatrixGenSet& g, const Matrix& P);
Matrix random_invertible(int h, std::uint64_t p, int M, std::mt19937_64& rng);

struct CatalogEntry {
  std::string label;
  OrderSpec spec;
  int n_max = 4;
  std::optional<Rational> expected_vol;
};

std::vector<CatalogEntry> builtin_catalog();

struct CatalogRow {
  CatalogEntry entry;
  int e = 1;
  int f = 1;
  int h = 1;
  CountSeries counts;
  DimFit fit;
  CountSeries omega_counts;
  OmegaFit omega;
  bool invariants_ok = false;
};

CatalogRow run_catalog_entry(const CatalogEntry& entry, std::uint64_t budget = enumeration_budget());

struct CatalogCheck {
  std::string label;
  std::string relation;
  bool pass = false;
  std::string detail;
};

struct CatalogReport {
  std::vector<CatalogRow> rows;
  std::vector<CatalogCheck> checks;

  bool all_pass() const;
  /// CatalogViolation listing every failed check.
  void require() const;
};

CatalogReport dimension_catalog_check(const std::vector<CatalogRow>& rows);

}  // namespace pitower
