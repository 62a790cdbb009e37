#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "csn/errors.hpp"
#include "csn/metric.hpp"
#include "csn/moduli.hpp"
#include "csn/polygon.hpp"
#include "csn/splits.hpp"

namespace csn {

// JSON conventions: object keys sorted, rationals rendered exactly as
// "p" / "p/q" strings, taxon blocks as ascending integer arrays. Weights on
// input may be exact strings ("3/7", "0.25", "1e-2") or JSON integers;
// floating-point JSON numbers are rejected since they do not round-trip.

nlohmann::json ordering_json(const CircularOrdering& ord);
CircularOrdering parse_ordering(const nlohmann::json& j);

nlohmann::json split_system_json(const SplitSystem& sys);
SplitSystem parse_split_system(const nlohmann::json& j);

nlohmann::json weighted_system_json(const WeightedSplitSystem& sys);
WeightedSplitSystem parse_weighted_system(const nlohmann::json& j);

nlohmann::json polygon_json(const PolygonRep& p);
PolygonRep parse_polygon(const nlohmann::json& j);

nlohmann::json moduli_point_json(const ModuliPoint& p);
ModuliPoint parse_moduli_point(const nlohmann::json& j);

// Coordinates keyed by split block; zeros omitted.
nlohmann::json embedded_point_json(const EmbeddedPoint& x);
EmbeddedPoint parse_embedded_point(const nlohmann::json& j);

struct LabeledMatrix {
  DissimilarityMatrix matrix;
  std::vector<std::string> labels;  // empty when the input had none
};

// Whitespace-separated text: first token n, then n rows of n entries; a row
// of n+1 tokens starts with a label. Entries are parsed exactly.
LabeledMatrix parse_matrix_text(const std::string& text);
std::string matrix_text(const DissimilarityMatrix& d,
                        const std::vector<std::string>& labels = {});

std::string render_svg(const PolygonRep& p);

nlohmann::json error_json(const Error& e);

}  // namespace csn
