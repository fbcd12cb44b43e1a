#pragma once

#include <cstdint>
#include <vector>

#include "pitower/formal_module.hpp"

namespace pitower {

struct NPSegment {
  Rational slope;
  int length = 0;
  friend bool operator==(const NPSegment&, const NPSegment&) = default;
};

/// Lower convex hull of (i, v(a_i)) over the distinguished part of a series,
/// valuations in ω-units.
struct NewtonPolygon {
  std::vector<std::pair<int, int>> vertices;
  std::vector<NPSegment> segments;
};

struct RootValuation {
  Rational v_omega;  // v(ω) = 1
  Rational v_p;      // v(p) = 1
  int multiplicity = 0;
  friend bool operator==(const RootValuation&, const RootValuation&) = default;
};

/// Hull from the first nonzero coefficient to the Weierstrass degree.
NewtonPolygon newton_polygon(const Series1& s);
/// Negated slopes with multiplicities, in both normalizations.
std::vector<RootValuation> root_valuations(const NewtonPolygon& np, int e);

/// [π^n](X) at truncation D.
Series1 iterate_bracket(const FormalModuleLaw& law, int n, int D);
/// [π^n]/[π^{n-1}] computed as (f/X)∘[π^{n-1}].
Series1 primitive_quotient(const FormalModuleLaw& law, int n, int D);

struct TorsionProfile {
  int n = 0;
  std::uint64_t order = 1;  // Weierstrass degree of [π^n]
  std::uint64_t primitive_degree = 0;
  NewtonPolygon polygon;
  std::vector<RootValuation> roots;
  std::uint64_t ram_lower_bound = 1;
};

TorsionProfile torsion_profile(const FormalModuleLaw& law, int n, int D);

struct BoundCheck {
  int d = 0;
  int h = 0;
  int m = 0;
  bool pass = false;
};

/// d <= h·m
BoundCheck generator_bound_check(int d, int h, int m);

struct TowerLevel {
  int n = 0;
  std::uint64_t torsion_order = 0;
  std::uint64_t primitive_count = 0;
  std::uint64_t predicted_degree = 0;  // (q-1) q^{n-1}
  std::uint64_t certified_ram_bound = 1;
  bool bound_divides = false;
  BoundCheck m_check;
};

/// |G_{n,k}| as a degree ratio against |O/π^{n-k}|^m.
struct ShapeCheck {
  int n = 0;
  int k = 0;
  std::uint64_t ratio = 0;
  std::uint64_t expected = 0;
  bool pass = false;
};

struct TowerReport {
  std::uint64_t q = 0;
  int h = 0;
  int e = 1;
  int f = 1;
  int expected_m = 1;
  std::vector<TowerLevel> levels;
  std::vector<ShapeCheck> shape_checks;
  bool ratios_ok = false;

  bool all_pass() const;
};

/// Predicted division-tower degrees for a full-height law; NotFullHeight otherwise.
TowerReport full_height_tower(const FormalModuleLaw& law, int levels, int D);

}  // namespace pitower
