#pragma once

#include <string>

#include <json.hpp>

#include "pitower/formal_module.hpp"
#include "pitower/group_counting.hpp"
#include "pitower/torsion.hpp"

namespace pitower {

using ojson = nlohmann::ordered_json;

/// Parses text, mapping syntax errors to ParseError.
ojson parse_json_text(const std::string& text);
ojson read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

ojson to_json(const LocalRingSpec& spec);
LocalRingSpec ring_spec_from_json(const ojson& j);

/// Coordinates as decimal strings.
ojson to_json(const RingElem& x);
RingElem elem_from_json(const RingPtr& ring, const ojson& j);

ojson to_json(const Series1& s);
Series1 series1_from_json(const RingPtr& ring, const ojson& j);
/// Triangular rows: row i holds the coefficients of X^i Y^j for j = 0..D-i.
ojson to_json(const Series2& s);
Series2 series2_from_json(const RingPtr& ring, const ojson& j);

ojson to_json(const HeightResult& h);
ojson law_to_json(const FormalModuleLaw& law);
FormalModuleLaw law_from_json(const ojson& j);

ojson to_json(const NewtonPolygon& np);
ojson to_json(const TorsionProfile& tp);
ojson to_json(const TowerReport& rep);

ojson to_json(const MatrixGenSet& g);
MatrixGenSet gens_from_json(const ojson& j);
ojson to_json(const CountSeries& cs);
CountSeries counts_from_json(const ojson& j);
std::string counts_csv(const CountSeries& cs);
ojson to_json(const DimFit& fit);
ojson to_json(const OmegaFit& fit);
ojson to_json(const CatalogReport& rep);

}  // namespace pitower
