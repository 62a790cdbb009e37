#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csn/associahedron.hpp"
#include "csn/errors.hpp"
#include "csn/io.hpp"
#include "csn/metric.hpp"
#include "csn/moduli.hpp"
#include "csn/network_space.hpp"
#include "csn/polygon.hpp"
#include "csn/splits.hpp"

namespace {

using csn::Rat;
using nlohmann::json;

struct Options {
  std::string input = "-";
  int n_max = 9;
  double tol = 1e-9;
  bool exact = false;
  bool decimal = false;
  std::string format;  // per-command default
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) csn::fail(csn::ErrKind::malformed_input, "cannot read \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) csn::fail(csn::ErrKind::malformed_input, "invalid JSON input");
  return j;
}

csn::CircularOrdering ordering_from_arg(const std::string& arg) {
  std::vector<int> seq;
  std::istringstream in(arg);
  std::string part;
  while (std::getline(in, part, ','))
    try {
      seq.push_back(std::stoi(part));
    } catch (const std::exception&) {
      csn::fail(csn::ErrKind::malformed_input, "bad ordering \"" + arg + "\"");
    }
  return csn::CircularOrdering::make(seq);
}

csn::Cmp cmp_for(const Options& opt, const csn::DissimilarityMatrix& d) {
  return opt.exact ? csn::Cmp::exact() : csn::Cmp::with_tolerance(opt.tol, d);
}

std::string rat_out(const Rat& x, const Options& opt) {
  if (!opt.decimal) return x.str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x.to_double());
  return buf;
}

void emit(const json& j, const Options& opt) {
  if (opt.format == "text") {
    // One "key value" line per top-level field, arrays space-separated.
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::cout << it.key() << " ";
      if (it->is_string())
        std::cout << it->get<std::string>();
      else
        std::cout << it->dump();
      std::cout << "\n";
    }
    return;
  }
  std::cout << j.dump(2) << "\n";
}

json witness_json(const csn::FourPointWitness& w) {
  return json{{"taxa", w.taxa},
              {"sums", {w.sums[0].str(), w.sums[1].str(), w.sums[2].str()}}};
}

json witness_json(const csn::KalmansonWitness& w) {
  return json{{"positions", w.positions},
              {"taxa", w.taxa},
              {"inequality", w.inequality},
              {"lhs", w.lhs.str()},
              {"rhs", w.rhs.str()}};
}

int cmd_check_tree_metric(const Options& opt) {
  auto lm = csn::parse_matrix_text(read_input(opt.input));
  auto report = csn::four_point_check(lm.matrix, cmp_for(opt, lm.matrix));
  json out{{"pass", report.pass}};
  if (report.witness) out["witness"] = witness_json(*report.witness);
  emit(out, opt);
  return report.pass ? 0 : 1;
}

int cmd_check_kalmanson(const Options& opt, const std::string& ordering_arg) {
  auto lm = csn::parse_matrix_text(read_input(opt.input));
  const auto cmp = cmp_for(opt, lm.matrix);
  if (!ordering_arg.empty()) {
    auto ord = ordering_from_arg(ordering_arg);
    auto report = csn::kalmanson_check(lm.matrix, ord, cmp);
    json out{{"pass", report.pass}, {"ordering", csn::ordering_json(ord)}};
    if (report.witness) out["witness"] = witness_json(*report.witness);
    emit(out, opt);
    return report.pass ? 0 : 1;
  }
  auto found = csn::find_kalmanson_ordering(lm.matrix, cmp, opt.n_max);
  json out{{"pass", found.has_value()}};
  if (found) out["ordering"] = csn::ordering_json(*found);
  emit(out, opt);
  return found ? 0 : 1;
}

int cmd_fit_network(const Options& opt, const std::string& ordering_arg) {
  auto lm = csn::parse_matrix_text(read_input(opt.input));
  auto ord = ordering_from_arg(ordering_arg);
  auto fit = csn::recover_split_weights(lm.matrix, ord, cmp_for(opt, lm.matrix));
  json out{{"feasible", fit.feasible},
           {"max_residual", rat_out(fit.max_residual, opt)},
           {"system", csn::weighted_system_json(fit.system)}};
  if (!fit.negative.empty()) {
    json neg = json::array();
    for (const auto& [s, w] : fit.negative)
      neg.push_back(json{{"block", s.block_taxa()}, {"weight", rat_out(w, opt)}});
    out["negative"] = neg;
  }
  emit(out, opt);
  return fit.feasible ? 0 : 1;
}

int cmd_network_metric(const Options& opt) {
  auto sys = csn::parse_weighted_system(parse_json_text(read_input(opt.input)));
  auto d = csn::metric_from_network(sys);
  if (opt.format == "json") {
    json rows = json::array();
    for (int i = 1; i <= d.n(); ++i) {
      json row = json::array();
      for (int j = 1; j <= d.n(); ++j) row.push_back(rat_out(d.at(i, j), opt));
      rows.push_back(row);
    }
    emit(json{{"matrix", rows}, {"n", d.n()}}, opt);
    return 0;
  }
  if (opt.decimal) {
    std::cout << d.n() << "\n";
    for (int i = 1; i <= d.n(); ++i) {
      for (int j = 1; j <= d.n(); ++j)
        std::cout << (j > 1 ? " " : "") << rat_out(d.at(i, j), opt);
      std::cout << "\n";
    }
    return 0;
  }
  std::cout << csn::matrix_text(d);
  return 0;
}

int cmd_orderings(const Options& opt) {
  auto sys = csn::parse_split_system(parse_json_text(read_input(opt.input)));
  auto orders = csn::compatible_orderings(sys, opt.n_max);
  json arr = json::array();
  for (const auto& ord : orders) arr.push_back(csn::ordering_json(ord));
  emit(json{{"count", orders.size()}, {"orderings", arr}}, opt);
  return orders.empty() ? 1 : 0;
}

int cmd_twist_path(const Options& opt, const std::string& target_arg) {
  auto rep = csn::parse_polygon(parse_json_text(read_input(opt.input)));
  auto target = ordering_from_arg(target_arg);
  auto result = csn::twist_sequence(rep, target);
  if (std::holds_alternative<csn::IncompatibleOrdering>(result)) {
    emit(json{{"compatible", false}}, opt);
    return 1;
  }
  const auto& path = std::get<csn::TwistPath>(result);
  json moves = json::array();
  for (const auto& mv : path.moves)
    moves.push_back(json{{"axis", mv.axis.block_taxa()},
                         {"side", csn::mask_to_taxa(mv.side)}});
  emit(json{{"compatible", true},
            {"length", path.moves.size()},
            {"moves", moves}},
       opt);
  return 0;
}

int cmd_census(const Options& opt, int n) {
  auto c = csn::census(n, opt.n_max);
  json out{{"chambers", c.chambers},
           {"dim", c.dim},
           {"edges", c.edges},
           {"n", c.n},
           {"vertices", c.vertices}};
  if (c.ridges_formula) out["ridges"] = *c.ridges_formula;
  if (c.enumerated) {
    out["cells_by_dim"] = c.cells_by_dim;
    out["compatible_pairs"] = c.compatible_pairs;
    out["crossing_pairs"] = c.crossing_pairs;
    out["ridges_enumerated"] = c.ridges_enumerated;
    if (!c.ridges_formula) out["ridges"] = c.ridges_enumerated;
  }
  emit(out, opt);
  return 0;
}

int cmd_cells(const Options& opt, int n, int k) {
  auto cells = csn::link_cells(n, k, opt.n_max);
  for (const auto& cell : cells) {
    json blocks = json::array();
    for (const auto& s : cell.splits()) blocks.push_back(s.block_taxa());
    std::cout << json{{"splits", blocks}}.dump() << "\n";
  }
  return 0;
}

int cmd_empty_triangle(const Options& opt, int n) {
  auto w = csn::empty_triangle_witness(n, opt.n_max);
  if (!w) {
    emit(json{{"witness", nullptr}}, opt);
    return 1;
  }
  json blocks = json::array();
  for (const auto& s : *w) blocks.push_back(s.block_taxa());
  emit(json{{"witness", blocks}}, opt);
  return 0;
}

int cmd_embed(const Options& opt) {
  auto p = csn::parse_moduli_point(parse_json_text(read_input(opt.input)));
  std::cout << csn::embedded_point_json(csn::phi_point(p)).dump(2) << "\n";
  return 0;
}

int cmd_decode(const Options& opt) {
  auto x = csn::parse_embedded_point(parse_json_text(read_input(opt.input)));
  auto result = csn::decode(x);
  if (!result.ok) {
    emit(json{{"ok", false}, {"failure", result.failure}}, opt);
    return 1;
  }
  std::cout << csn::moduli_point_json(*result.point).dump(2) << "\n";
  return 0;
}

int cmd_moduli_atlas(const Options& opt, int n) {
  auto atlas = csn::glue_moduli(n, opt.n_max);
  json chs = json::array();
  for (const auto& ord : atlas.chambers) chs.push_back(csn::ordering_json(ord));
  std::cout << json{{"chambers", chs}, {"classes", atlas.classes.size()}, {"n", n}}
                   .dump()
            << "\n";
  for (const auto& cls : atlas.classes) {
    json blocks = json::array();
    for (const auto& s : cls.splits.splits()) blocks.push_back(s.block_taxa());
    std::cout << json{{"dim", cls.dim}, {"members", cls.members}, {"splits", blocks}}
                     .dump()
              << "\n";
  }
  return 0;
}

int cmd_render(const Options& opt) {
  auto rep = csn::parse_polygon(parse_json_text(read_input(opt.input)));
  std::cout << csn::render_svg(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circular split networks: checks, twists, census, embedding"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--n-max", opt.n_max, "Exhaustive-enumeration bound")
      ->check(CLI::Range(4, 12))
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "Comparison tolerance (scaled by max entry)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--exact", opt.exact, "Exact rational comparisons");
  app.add_flag("--decimal", opt.decimal, "Decimal output instead of p/q");
  app.add_option("--format", opt.format, "Output format (json | text | svg)");

  std::string ordering_arg, target_arg;
  int n = 5, k = 0;

  auto add_input = [&](CLI::App* c) {
    c->add_option("input", opt.input, "Input path, - for stdin");
  };

  auto* c_tree = app.add_subcommand("check-tree-metric", "Four-point condition");
  add_input(c_tree);
  auto* c_kal = app.add_subcommand("check-kalmanson", "Kalmanson condition");
  add_input(c_kal);
  c_kal->add_option("--ordering", ordering_arg, "Circular ordering, e.g. 1,2,4,3");
  auto* c_fit = app.add_subcommand("fit-network", "Recover split weights");
  add_input(c_fit);
  c_fit->add_option("--ordering", ordering_arg, "Circular ordering")->required();
  auto* c_met = app.add_subcommand("network-metric", "Metric of a weighted system");
  add_input(c_met);
  auto* c_ord = app.add_subcommand("orderings", "Compatible circular orderings");
  add_input(c_ord);
  auto* c_twp = app.add_subcommand("twist-path", "Twist sequence to a target ordering");
  add_input(c_twp);
  c_twp->add_option("--target", target_arg, "Target ordering")->required();
  auto* c_cen = app.add_subcommand("census", "Cell census of the link complex");
  c_cen->add_option("--n", n, "Taxon count")->required();
  auto* c_cel = app.add_subcommand("cells", "Stream k-cells as JSON lines");
  c_cel->add_option("--n", n, "Taxon count")->required();
  c_cel->add_option("--k", k, "Cell dimension")->required();
  auto* c_emp = app.add_subcommand("empty-triangle", "Non-flag witness");
  c_emp->add_option("--n", n, "Taxon count")->required();
  auto* c_embed = app.add_subcommand("embed", "Embed a moduli point");
  add_input(c_embed);
  auto* c_dec = app.add_subcommand("decode", "Invert the embedding");
  add_input(c_dec);
  auto* c_atlas = app.add_subcommand("moduli-atlas", "Gluing table as JSON lines");
  c_atlas->add_option("--n", n, "Taxon count")->required();
  auto* c_ren = app.add_subcommand("render", "SVG of a polygon representation");
  add_input(c_ren);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_tree->parsed()) return cmd_check_tree_metric(opt);
    if (c_kal->parsed()) return cmd_check_kalmanson(opt, ordering_arg);
    if (c_fit->parsed()) return cmd_fit_network(opt, ordering_arg);
    if (c_met->parsed()) return cmd_network_metric(opt);
    if (c_ord->parsed()) return cmd_orderings(opt);
    if (c_twp->parsed()) return cmd_twist_path(opt, target_arg);
    if (c_cen->parsed()) return cmd_census(opt, n);
    if (c_cel->parsed()) return cmd_cells(opt, n, k);
    if (c_emp->parsed()) return cmd_empty_triangle(opt, n);
    if (c_embed->parsed()) return cmd_embed(opt);
    if (c_dec->parsed()) return cmd_decode(opt);
    if (c_atlas->parsed()) return cmd_moduli_atlas(opt, n);
    if (c_ren->parsed()) return cmd_render(opt);
  } catch (const csn::Error& e) {
    std::cerr << csn::error_json(e).dump() << "\n";
    return e.kind() == csn::ErrKind::capacity ? 3 : 2;
  } catch (const std::overflow_error& e) {
    std::cerr << json{{"error", {{"kind", "capacity"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 2;
  }
  return 2;
}
