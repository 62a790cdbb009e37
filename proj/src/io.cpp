#include "csn/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "csn/associahedron.hpp"

namespace csn {
namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
  if (!j.is_object())
    fail(ErrKind::malformed_input, std::string("expected an object with \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end())
    fail(ErrKind::malformed_input, std::string("missing field \"") + key + "\"");
  return *it;
}

int need_int(const json& v, const char* what) {
  if (!v.is_number_integer())
    fail(ErrKind::malformed_input, std::string(what) + " must be an integer");
  return v.get<int>();
}

std::vector<int> int_array(const json& v, const char* what) {
  if (!v.is_array())
    fail(ErrKind::malformed_input, std::string(what) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& e : v) out.push_back(need_int(e, what));
  return out;
}

Rat rat_value(const json& v, const char* what) {
  if (v.is_string()) return Rat::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
  if (v.is_number_float())
    fail(ErrKind::malformed_input,
         std::string(what) + " must be exact; quote decimals as strings");
  fail(ErrKind::malformed_input, std::string(what) + " must be a rational");
}

json block_json(const Split& s) { return json(s.block_taxa()); }

Split split_entry(int n, const json& v) {
  if (v.is_array()) return Split::make(n, int_array(v, "split block"));
  return Split::make(n, int_array(need(v, "block"), "split block"));
}

std::vector<int> parse_block_key(const std::string& key) {
  std::vector<int> taxa;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t comma = key.find(',', pos);
    if (comma == std::string::npos) comma = key.size();
    const std::string part = key.substr(pos, comma - pos);
    if (part.empty() || !std::all_of(part.begin(), part.end(),
                                     [](unsigned char c) { return std::isdigit(c); }))
      fail(ErrKind::malformed_input, "bad block key \"" + key + "\"");
    taxa.push_back(std::stoi(part));
    pos = comma + 1;
    if (comma == key.size()) break;
  }
  return taxa;
}

bool plain_integer(const std::string& tok) {
  if (tok.empty()) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

json ordering_json(const CircularOrdering& ord) { return json(ord.seq()); }

CircularOrdering parse_ordering(const json& j) {
  return CircularOrdering::make(int_array(j, "ordering"));
}

json split_system_json(const SplitSystem& sys) {
  json splits = json::array();
  for (const Split& s : sys.splits()) splits.push_back(json{{"block", block_json(s)}});
  return json{{"n", sys.n()}, {"splits", splits}};
}

SplitSystem parse_split_system(const json& j) {
  const int n = need_int(need(j, "n"), "n");
  const json& arr = need(j, "splits");
  if (!arr.is_array()) fail(ErrKind::malformed_input, "\"splits\" must be an array");
  std::vector<Split> splits;
  for (const auto& e : arr) splits.push_back(split_entry(n, e));
  return SplitSystem::make(n, splits);
}

json weighted_system_json(const WeightedSplitSystem& sys) {
  json splits = json::array();
  for (const auto& [s, w] : sys.entries())
    splits.push_back(json{{"block", block_json(s)}, {"weight", w.str()}});
  return json{{"n", sys.n()}, {"splits", splits}};
}

WeightedSplitSystem parse_weighted_system(const json& j) {
  const int n = need_int(need(j, "n"), "n");
  const json& arr = need(j, "splits");
  if (!arr.is_array()) fail(ErrKind::malformed_input, "\"splits\" must be an array");
  std::vector<std::pair<Split, Rat>> entries;
  for (const auto& e : arr)
    entries.push_back({split_entry(n, e), rat_value(need(e, "weight"), "weight")});
  return WeightedSplitSystem::make(n, entries);
}

json polygon_json(const PolygonRep& p) {
  json j{{"ordering", ordering_json(p.ordering())}};
  j["diagonals"] = p.weighted() ? weighted_system_json(p.weighted_system())["splits"]
                                : split_system_json(p.diagonals())["splits"];
  return j;
}

PolygonRep parse_polygon(const json& j) {
  CircularOrdering ord = parse_ordering(need(j, "ordering"));
  const json& arr = need(j, "diagonals");
  if (!arr.is_array()) fail(ErrKind::malformed_input, "\"diagonals\" must be an array");
  bool weighted = false;
  for (const auto& e : arr)
    if (e.is_object() && e.contains("weight")) weighted = true;
  if (weighted) {
    std::vector<std::pair<Split, Rat>> entries;
    for (const auto& e : arr)
      entries.push_back(
          {split_entry(ord.n(), e), rat_value(need(e, "weight"), "weight")});
    return PolygonRep::make(ord, WeightedSplitSystem::make(ord.n(), entries));
  }
  std::vector<Split> splits;
  for (const auto& e : arr) splits.push_back(split_entry(ord.n(), e));
  return PolygonRep::make(ord, SplitSystem::make(ord.n(), splits));
}

json moduli_point_json(const ModuliPoint& p) {
  const CircularOrdering& chamber = p.flag().chamber();
  json faces = json::array();
  for (const auto& face : p.flag().faces()) {
    std::vector<Split> splits;
    for (const Chord& c : face) splits.push_back(chord_split(c, chamber));
    std::sort(splits.begin(), splits.end());
    json blocks = json::array();
    for (const Split& s : splits) blocks.push_back(block_json(s));
    faces.push_back(blocks);
  }
  json coeffs = json::array();
  for (const Rat& a : p.coefficients()) coeffs.push_back(a.str());
  return json{{"coefficients", coeffs},
              {"faces", faces},
              {"n", chamber.n()},
              {"ordering", ordering_json(chamber)}};
}

ModuliPoint parse_moduli_point(const json& j) {
  const int n = need_int(need(j, "n"), "n");
  CircularOrdering chamber = parse_ordering(need(j, "ordering"));
  if (chamber.n() != n) fail(ErrKind::malformed_input, "\"n\" does not match the ordering");
  const json& farr = need(j, "faces");
  if (!farr.is_array()) fail(ErrKind::malformed_input, "\"faces\" must be an array");
  std::vector<std::vector<Chord>> faces;
  for (const auto& fe : farr) {
    if (!fe.is_array()) fail(ErrKind::malformed_input, "each face must be an array of blocks");
    std::vector<Chord> face;
    for (const auto& be : fe)
      face.push_back(
          split_chord(Split::make(n, int_array(be, "face block")), chamber));
    faces.push_back(std::move(face));
  }
  const json& carr = need(j, "coefficients");
  if (!carr.is_array())
    fail(ErrKind::malformed_input, "\"coefficients\" must be an array");
  std::vector<Rat> coeffs;
  for (const auto& ce : carr) coeffs.push_back(rat_value(ce, "coefficient"));
  return ModuliPoint::make(Subflag::make(chamber, std::move(faces)), std::move(coeffs));
}

json embedded_point_json(const EmbeddedPoint& x) {
  const CircularOrdering& chamber = x.chamber();
  const auto& chords = all_chords(chamber.n());
  json coords = json::object();
  for (std::size_t i = 0; i < chords.size(); ++i)
    if (x.coords()[i] != Rat())
      coords[chord_split(chords[i], chamber).key()] = x.coords()[i].str();
  return json{{"coords", coords},
              {"n", chamber.n()},
              {"ordering", ordering_json(chamber)}};
}

EmbeddedPoint parse_embedded_point(const json& j) {
  const int n = need_int(need(j, "n"), "n");
  CircularOrdering chamber = parse_ordering(need(j, "ordering"));
  if (chamber.n() != n) fail(ErrKind::malformed_input, "\"n\" does not match the ordering");
  const json& cobj = need(j, "coords");
  if (!cobj.is_object()) fail(ErrKind::malformed_input, "\"coords\" must be an object");
  const auto& chords = all_chords(n);
  std::vector<Rat> coords(chords.size());
  for (auto it = cobj.begin(); it != cobj.end(); ++it) {
    Split s = Split::make(n, parse_block_key(it.key()));
    Chord c = split_chord(s, chamber);
    auto pos = std::lower_bound(chords.begin(), chords.end(), c);
    coords[static_cast<std::size_t>(pos - chords.begin())] =
        rat_value(it.value(), "coordinate");
  }
  return EmbeddedPoint::make(chamber, std::move(coords));
}

LabeledMatrix parse_matrix_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (tokens.empty()) fail(ErrKind::malformed_input, "empty matrix input");
  if (!plain_integer(tokens[0]))
    fail(ErrKind::malformed_input, "matrix input must start with the taxon count");
  const int n = std::stoi(tokens[0]);
  if (n < 3 || n > kMaskTaxaLimit)
    fail(ErrKind::malformed_input, "taxon count out of range");
  const std::size_t rest = tokens.size() - 1;
  const std::size_t nn = static_cast<std::size_t>(n);
  bool labeled;
  if (rest == nn * nn)
    labeled = false;
  else if (rest == nn * (nn + 1))
    labeled = true;
  else
    fail(ErrKind::malformed_input,
         "expected n rows of n entries, each optionally preceded by a label");
  std::vector<std::string> labels;
  std::vector<std::vector<Rat>> rows;
  std::size_t pos = 1;
  for (int i = 0; i < n; ++i) {
    if (labeled) labels.push_back(tokens[pos++]);
    std::vector<Rat> row;
    for (int k = 0; k < n; ++k) row.push_back(Rat::parse(tokens[pos++]));
    rows.push_back(std::move(row));
  }
  return LabeledMatrix{DissimilarityMatrix::make(n, std::move(rows)),
                       std::move(labels)};
}

std::string matrix_text(const DissimilarityMatrix& d,
                        const std::vector<std::string>& labels) {
  if (!labels.empty() && static_cast<int>(labels.size()) != d.n())
    fail(ErrKind::malformed_input, "need one label per taxon");
  std::ostringstream os;
  os << d.n() << "\n";
  for (int i = 1; i <= d.n(); ++i) {
    if (!labels.empty()) os << labels[static_cast<std::size_t>(i - 1)] << " ";
    for (int j = 1; j <= d.n(); ++j) {
      if (j > 1) os << " ";
      os << d.at(i, j).str();
    }
    os << "\n";
  }
  return os.str();
}

std::string render_svg(const PolygonRep& p) {
  const int n = p.ordering().n();
  const double cx = 200, cy = 200, r = 160;
  const double pi = std::acos(-1.0);
  auto vx = [&](int k) { return cx + r * std::cos(2 * pi * k / n - pi / 2); };
  auto vy = [&](int k) { return cy + r * std::sin(2 * pi * k / n - pi / 2); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
        "viewBox=\"0 0 400 400\">\n";
  os << "  <polygon points=\"";
  for (int k = 0; k < n; ++k) {
    if (k) os << " ";
    os << fmt(vx(k)) << "," << fmt(vy(k));
  }
  os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  for (std::size_t i = 0; i < p.diagonals().size(); ++i) {
    const Split& s = p.diagonals().splits()[i];
    Chord c = split_chord(s, p.ordering());
    os << "  <line x1=\"" << fmt(vx(c.a)) << "\" y1=\"" << fmt(vy(c.a))
       << "\" x2=\"" << fmt(vx(c.b)) << "\" y2=\"" << fmt(vy(c.b))
       << "\" stroke=\"steelblue\" stroke-width=\"1.5\"><title>" << s.key();
    if (p.weighted()) os << " w=" << p.weights()[i].str();
    os << "</title></line>\n";
  }
  for (int k = 0; k < n; ++k) {
    // Taxon labels sit outside the midpoint of the edge that carries them.
    double ang = 2 * pi * (k + 0.5) / n - pi / 2;
    double lx = cx + (r + 18) * std::cos(ang);
    double ly = cy + (r + 18) * std::sin(ang);
    os << "  <text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
       << "\" font-size=\"16\" text-anchor=\"middle\" dominant-baseline=\"middle\">"
       << p.ordering().at(k) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

json error_json(const Error& e) {
  return json{{"error", json{{"kind", err_kind_name(e.kind())}, {"message", e.what()}}}};
}

}  // namespace csn
